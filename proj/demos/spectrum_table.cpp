// Walk the bound ladder of a screened potential: solve each ell until the
// screening cuts the spectrum off, cross-checking every level against the
// finite-difference eigensolver.

#include <cstdio>
#include <cstdlib>

#include <susyell/susyell.hpp>

using namespace susyell;

int main(int argc, char** argv) {
    const double alpha = argc > 1 ? std::atof(argv[1]) : 0.1;
    if (!(alpha > 0.0)) {
        std::fprintf(stderr, "usage: spectrum_table [alpha > 0]\n");
        return 2;
    }
    const constants c;
    const potential_family fam = potential_family::hulthen(alpha, 1.0);
    std::printf("screened potential, alpha = %g (beta = %g)\n\n", alpha, fam.beta(c));
    std::printf("%4s %16s %16s %12s  %s\n", "ell", "energy", "oracle", "abs_diff", "status");
    for (int ell = 0;; ++ell) {
        const radial_grid g = oracle_grid_for(fam, ell, c);
        try {
            const spectral_record rec = solve_state(fam, ell, g, c);
            const verify_report rep = verify_record(rec, g, c);
            std::printf("%4d %16.9f %16.9f %12.3e  %s\n", ell, rec.energy, rep.oracle,
                        rep.abs_diff, rep.pass ? "ok" : "DISAGREES");
        } catch (const no_bound_state&) {
            std::printf("%4d  no bound level; the ladder ends here\n", ell);
            break;
        }
    }
    return 0;
}
