#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <susyell/susyell.hpp>

namespace {

using ojson = nlohmann::ordered_json;
using namespace susyell;

constexpr const char* k_version = "1.0.0";

/// Carries an exit code out of helpers; main translates it.
struct cli_error {
    int code;
    std::string message;
};

[[noreturn]] void fail(int code, const std::string& msg) { throw cli_error{code, msg}; }

struct run_config {
    std::string family = "ho";
    double w = 1.0;
    double e2 = 1.0;
    double alpha = 0.0;
    std::string ell = "0";
    double rmax = 0.0; // 0 = pick the family default box
    int npoints = 0;   // 0 = pick the family default box
    double hbar = 1.0;
    double mass = 1.0;
    std::string format = "json";
    double tol_residual = 1e-8;
    double tol_oracle = 0.0; // 0 = family default
    std::string out;
    std::string config_path;
    bool dev = false;
    double inject_deps_error = 0.0;
};

struct opt_handles {
    CLI::Option* family = nullptr;
    CLI::Option* w = nullptr;
    CLI::Option* e2 = nullptr;
    CLI::Option* alpha = nullptr;
    CLI::Option* ell = nullptr;
    CLI::Option* hbar = nullptr;
    CLI::Option* mass = nullptr;
    CLI::Option* format = nullptr;
    CLI::Option* tol_residual = nullptr;
    CLI::Option* tol_oracle = nullptr;
    CLI::Option* out = nullptr;
};

bool flag_unset(const CLI::Option* o) { return o == nullptr || o->count() == 0; }

int parse_nonneg_int(const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (...) {
        fail(2, "not an integer: '" + s + "'");
    }
    if (used != s.size() || v < 0) fail(2, "ell must be a nonnegative integer, got '" + s + "'");
    return v;
}

/// "A" or "A..B", inclusive.
std::pair<int, int> parse_ell_range(const std::string& s) {
    const auto pos = s.find("..");
    if (pos == std::string::npos) {
        const int v = parse_nonneg_int(s);
        return {v, v};
    }
    const int a = parse_nonneg_int(s.substr(0, pos));
    const int b = parse_nonneg_int(s.substr(pos + 2));
    if (a > b) fail(2, "ell range must be A..B with A <= B, got '" + s + "'");
    return {a, b};
}

void apply_config_file(run_config& cfg, const opt_handles& h) {
    if (cfg.config_path.empty()) return;
    std::ifstream in(cfg.config_path);
    if (!in) fail(2, "cannot open config file: " + cfg.config_path);
    ojson j;
    try {
        j = ojson::parse(in);
    } catch (const std::exception& e) {
        fail(2, std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) fail(2, "config file must hold a JSON object");
    for (const auto& [key, val] : j.items()) {
        try {
            if (key == "family") {
                if (flag_unset(h.family)) cfg.family = val.get<std::string>();
            } else if (key == "w") {
                if (flag_unset(h.w)) cfg.w = val.get<double>();
            } else if (key == "e2") {
                if (flag_unset(h.e2)) cfg.e2 = val.get<double>();
            } else if (key == "alpha") {
                if (flag_unset(h.alpha)) cfg.alpha = val.get<double>();
            } else if (key == "ell") {
                if (flag_unset(h.ell))
                    cfg.ell = val.is_string() ? val.get<std::string>()
                                              : std::to_string(val.get<int>());
            } else if (key == "rmax") {
                if (cfg.rmax == 0.0) cfg.rmax = val.get<double>();
            } else if (key == "npoints") {
                if (cfg.npoints == 0) cfg.npoints = val.get<int>();
            } else if (key == "hbar") {
                if (flag_unset(h.hbar)) cfg.hbar = val.get<double>();
            } else if (key == "mass") {
                if (flag_unset(h.mass)) cfg.mass = val.get<double>();
            } else if (key == "format") {
                if (flag_unset(h.format)) cfg.format = val.get<std::string>();
            } else if (key == "tol_residual") {
                if (flag_unset(h.tol_residual)) cfg.tol_residual = val.get<double>();
            } else if (key == "tol_oracle") {
                if (flag_unset(h.tol_oracle)) cfg.tol_oracle = val.get<double>();
            } else if (key == "out") {
                if (flag_unset(h.out)) cfg.out = val.get<std::string>();
            } else {
                fail(2, "unknown config key: " + key);
            }
        } catch (const nlohmann::json::exception& e) {
            fail(2, "config key '" + key + "': " + e.what());
        }
    }
}

/// SUSYELL_DEFAULT_GRID="rmax:npoints" fills the grid when neither flags nor
/// the config file chose one.
void apply_env_grid(run_config& cfg) {
    if (cfg.rmax != 0.0 || cfg.npoints != 0) return;
    const char* e = std::getenv("SUSYELL_DEFAULT_GRID");
    if (e == nullptr || *e == '\0') return;
    const std::string s(e);
    const auto pos = s.find(':');
    if (pos == std::string::npos) fail(2, "SUSYELL_DEFAULT_GRID must be \"rmax:npoints\"");
    try {
        std::size_t ur = 0, un = 0;
        const double r = std::stod(s.substr(0, pos), &ur);
        const int n = std::stoi(s.substr(pos + 1), &un);
        if (ur != pos || un != s.size() - pos - 1) throw std::invalid_argument(s);
        cfg.rmax = r;
        cfg.npoints = n;
    } catch (const cli_error&) {
        throw;
    } catch (...) {
        fail(2, "SUSYELL_DEFAULT_GRID must be \"rmax:npoints\", got \"" + s + "\"");
    }
}

potential_family make_family(const run_config& cfg) {
    const auto kind = family_from_name(cfg.family);
    if (!kind)
        fail(2, "unknown family '" + cfg.family + "' (expected ho|coulomb|hulthen|greene-aldrich)");
    if ((*kind == family_kind::hulthen || *kind == family_kind::greene_aldrich_effective) &&
        cfg.alpha <= 0.0)
        fail(2, "screened families require --alpha > 0");
    switch (*kind) {
    case family_kind::harmonic_oscillator: return potential_family::harmonic(cfg.w);
    case family_kind::coulomb: return potential_family::coulomb(cfg.e2);
    case family_kind::hulthen: return potential_family::hulthen(cfg.alpha, cfg.e2);
    case family_kind::greene_aldrich_effective:
        return potential_family::greene_aldrich(cfg.alpha, cfg.e2);
    }
    fail(2, "unknown family");
}

/// The solve grid: explicit flags win, otherwise the family default box
/// sized for the largest requested ell.
radial_grid resolve_grid(const run_config& cfg, const potential_family& fam, int ell_hint,
                         const constants& c) {
    const bool rset = cfg.rmax != 0.0, nset = cfg.npoints != 0;
    if (rset != nset) fail(2, "provide both --rmax and --npoints, or neither");
    if (rset) {
        if (!(cfg.rmax > 0.0)) fail(2, "--rmax must be positive");
        if (cfg.npoints < 3) fail(2, "--npoints must be at least 3");
        return {cfg.rmax, cfg.npoints};
    }
    return oracle_grid_for(fam, ell_hint, c);
}

double tol_oracle_effective(const run_config& cfg, const potential_family& fam) {
    return cfg.tol_oracle > 0.0 ? cfg.tol_oracle : tol_oracle_default(fam.kind);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// One solved state plus everything the serializers need.
struct solved_row {
    int ell = 0;
    double eps0 = 0.0;
    double delta_eps = 0.0;
    double energy = 0.0;
    double res5 = 0.0, res6 = 0.0, res7 = 0.0, res_a1 = 0.0;
    bool has_oracle = false;
    double oracle_ev = 0.0;
    double oracle_diff = 0.0;
    bool oracle_pass = false;
    radial_grid grid{1.0, 3};
    spectral_record rec;
};

/// Solve one state and measure all four identity residuals. A nonzero
/// `inject` shifts delta_eps after the fact, modeling a wrong energy
/// correction; every downstream quantity sees the shift.
solved_row solve_row(const potential_family& fam, int ell, const radial_grid& g,
                     const constants& c, double inject) {
    solved_row row;
    row.ell = ell;
    row.grid = g;
    row.rec = solve_state(fam, ell, g, c);
    row.eps0 = row.rec.eps0;
    row.delta_eps = row.rec.delta_eps + inject;
    row.energy = row.eps0 + row.delta_eps;

    const family_ground_solution ground = ground_solution(fam, c);
    const radial_function v0 =
        radial_function::closed_form([fam, c](double r) { return potential_v0(fam, r, c); });
    row.res5 = riccati_residual_eq5(ground.w0, v0, ground.eps0, g, c);
    if (inject == 0.0) {
        row.res6 = row.rec.residual_eq6_max;
        row.res7 = row.rec.residual_eq7_max;
    } else {
        const superpotential dw = barrier_superpotential(fam, ell, c);
        row.res6 = riccati_residual_eq6(ground.w0, dw, fam, ell, row.delta_eps, g, c);
        row.res7 = riccati_residual_eq7(ground.w0, dw, full_potential_fn(fam, ell, c), row.energy,
                                        g, c);
    }
    riccati_problem prob = barrier_problem(fam, ell, c);
    prob.delta_eps = row.delta_eps;
    row.res_a1 = residual_A1(barrier_superpotential(fam, ell, c), prob, g, c);
    return row;
}

ojson params_json(const potential_family& fam) {
    ojson p;
    switch (fam.kind) {
    case family_kind::harmonic_oscillator: p["w"] = fam.w; break;
    case family_kind::coulomb: p["e2"] = fam.e2; break;
    default:
        p["alpha"] = fam.alpha;
        p["e2"] = fam.e2;
        break;
    }
    return p;
}

ojson grid_json(const radial_grid& g) {
    ojson j;
    j["r_max"] = g.r_max();
    j["n_points"] = g.n_points();
    return j;
}

ojson meta_json(const std::string& command, const run_config& cfg, const potential_family& fam,
                const constants& c, const radial_grid& g, std::pair<int, int> ells) {
    ojson m;
    m["tool"] = "susyell";
    m["version"] = k_version;
    m["command"] = command;
    ojson rc;
    rc["family"] = family_name(fam.kind);
    rc["params"] = params_json(fam);
    rc["constants"] = ojson{{"hbar", c.hbar}, {"mass", c.mass}};
    rc["ell"] = ojson::array({ells.first, ells.second});
    rc["grid"] = grid_json(g);
    rc["format"] = cfg.format;
    rc["tol_residual"] = cfg.tol_residual;
    rc["tol_oracle"] = tol_oracle_effective(cfg, fam);
    m["config"] = rc;
    return m;
}

ojson record_json(const potential_family& fam, const constants& c, const solved_row& row) {
    ojson r;
    r["family"] = family_name(fam.kind);
    r["params"] = params_json(fam);
    r["constants"] = ojson{{"hbar", c.hbar}, {"mass", c.mass}};
    r["ell"] = row.ell;
    r["epsilon0"] = row.eps0;
    r["delta_eps"] = row.delta_eps;
    r["energy"] = row.energy;
    r["residuals"] =
        ojson{{"eq5", row.res5}, {"eq6", row.res6}, {"eq7", row.res7}, {"A1", row.res_a1}};
    if (row.has_oracle)
        r["oracle"] = ojson{{"eigenvalue", row.oracle_ev},
                            {"abs_diff", row.oracle_diff},
                            {"pass", row.oracle_pass}};
    else
        r["oracle"] = nullptr;
    r["grid"] = grid_json(row.grid);
    return r;
}

void emit(const run_config& cfg, const std::string& payload) {
    if (cfg.out.empty()) {
        std::fwrite(payload.data(), 1, payload.size(), stdout);
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) fail(2, "cannot open output file: " + cfg.out);
    f << payload;
    f.flush();
    if (!f) fail(2, "failed writing output file: " + cfg.out);
}

void check_format(const run_config& cfg) {
    if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "table")
        fail(2, "unknown format '" + cfg.format + "' (expected json|csv|table)");
}

int cmd_solve(const run_config& cfg) {
    const potential_family fam = make_family(cfg);
    const constants c(cfg.hbar, cfg.mass);
    const auto ells = parse_ell_range(cfg.ell);
    const radial_grid g = resolve_grid(cfg, fam, ells.second, c);

    std::vector<solved_row> rows;
    for (int ell = ells.first; ell <= ells.second; ++ell)
        rows.push_back(solve_row(fam, ell, g, c, 0.0));

    std::string payload;
    if (cfg.format == "json") {
        ojson doc;
        doc["meta"] = meta_json("solve", cfg, fam, c, g, ells);
        doc["records"] = ojson::array();
        for (const auto& row : rows) doc["records"].push_back(record_json(fam, c, row));
        payload = doc.dump(2) + "\n";
    } else if (cfg.format == "csv") {
        payload = "family,ell,epsilon0,delta_eps,energy,residual_eq5,residual_eq6,residual_eq7,"
                  "residual_A1\n";
        for (const auto& row : rows)
            payload += std::string(family_name(fam.kind)) + "," + std::to_string(row.ell) + "," +
                       fmt17(row.eps0) + "," + fmt17(row.delta_eps) + "," + fmt17(row.energy) +
                       "," + fmt17(row.res5) + "," + fmt17(row.res6) + "," + fmt17(row.res7) +
                       "," + fmt17(row.res_a1) + "\n";
    } else {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-14s %4s %14s %14s %14s %10s %10s %10s %10s\n", "family",
                      "ell", "epsilon0", "delta_eps", "energy", "eq5", "eq6", "eq7", "A1");
        payload = buf;
        for (const auto& row : rows) {
            std::snprintf(buf, sizeof buf,
                          "%-14s %4d %14.9f %14.9f %14.9f %10.2e %10.2e %10.2e %10.2e\n",
                          family_name(fam.kind), row.ell, row.eps0, row.delta_eps, row.energy,
                          row.res5, row.res6, row.res7, row.res_a1);
            payload += buf;
        }
    }
    emit(cfg, payload);
    return 0;
}

struct verify_check {
    int ell;
    std::string name;
    double value;
    double bound;
    bool pass;
};

int cmd_verify(const run_config& cfg) {
    const potential_family fam = make_family(cfg);
    const constants c(cfg.hbar, cfg.mass);
    const auto ells = parse_ell_range(cfg.ell);
    const radial_grid g = resolve_grid(cfg, fam, ells.second, c);
    const double tol_o = tol_oracle_effective(cfg, fam);
    const double inject = cfg.dev ? cfg.inject_deps_error : 0.0;

    std::vector<solved_row> rows;
    std::vector<verify_check> checks;
    bool all_pass = true;
    for (int ell = ells.first; ell <= ells.second; ++ell) {
        solved_row row = solve_row(fam, ell, g, c, inject);
        const radial_grid og = oracle_grid_for(fam, ell, c);
        row.has_oracle = true;
        row.oracle_ev = oracle_energy(fam, ell, og, c);
        row.oracle_diff = std::abs(row.energy - row.oracle_ev);
        row.oracle_pass = row.oracle_diff < tol_o;
        const std::pair<const char*, double> residuals[] = {
            {"residual_eq5", row.res5},
            {"residual_eq6", row.res6},
            {"residual_eq7", row.res7},
            {"residual_A1", row.res_a1},
        };
        for (const auto& [name, value] : residuals) {
            const bool ok = value < cfg.tol_residual;
            checks.push_back({ell, name, value, cfg.tol_residual, ok});
            all_pass = all_pass && ok;
        }
        checks.push_back({ell, "oracle_abs_diff", row.oracle_diff, tol_o, row.oracle_pass});
        all_pass = all_pass && row.oracle_pass;
        rows.push_back(std::move(row));
    }

    std::string payload;
    if (cfg.format == "json") {
        ojson doc;
        doc["meta"] = meta_json("verify", cfg, fam, c, g, ells);
        doc["records"] = ojson::array();
        for (const auto& row : rows) doc["records"].push_back(record_json(fam, c, row));
        doc["checks"] = ojson::array();
        for (const auto& ch : checks)
            doc["checks"].push_back(ojson{{"ell", ch.ell},
                                          {"check", ch.name},
                                          {"value", ch.value},
                                          {"bound", ch.bound},
                                          {"pass", ch.pass}});
        doc["all_pass"] = all_pass;
        payload = doc.dump(2) + "\n";
    } else if (cfg.format == "csv") {
        payload = "family,ell,check,value,bound,pass\n";
        for (const auto& ch : checks)
            payload += std::string(family_name(fam.kind)) + "," + std::to_string(ch.ell) + "," +
                       ch.name + "," + fmt17(ch.value) + "," + fmt17(ch.bound) + "," +
                       (ch.pass ? "true" : "false") + "\n";
    } else {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-14s %4s %-16s %12s %10s %s\n", "family", "ell", "check",
                      "value", "bound", "status");
        payload = buf;
        for (const auto& ch : checks) {
            std::snprintf(buf, sizeof buf, "%-14s %4d %-16s %12.4e %10.1e %s\n",
                          family_name(fam.kind), ch.ell, ch.name.c_str(), ch.value, ch.bound,
                          ch.pass ? "pass" : "FAIL");
            payload += buf;
        }
        payload += all_pass ? "all checks passed\n" : "some checks FAILED\n";
    }
    emit(cfg, payload);
    return all_pass ? 0 : 1;
}

/// Taylor coefficients of the exact E(ell) about ell = 0, per unit ell^k.
std::pair<double, double> taylor_reference(const potential_family& fam, const constants& c) {
    switch (fam.kind) {
    case family_kind::harmonic_oscillator: return {c.hbar * fam.w, 0.0};
    case family_kind::coulomb: {
        const double me4h2 = c.mass * fam.e2 * fam.e2 / (c.hbar * c.hbar);
        return {me4h2, -1.5 * me4h2};
    }
    default: {
        const double me4h2 = c.mass * fam.e2 * fam.e2 / (c.hbar * c.hbar);
        const double b = fam.beta(c);
        return {me4h2 * (1.0 - 0.25 * b * b), -0.5 * me4h2 * (3.0 + 0.25 * b * b)};
    }
    }
}

int cmd_perturb(const run_config& cfg) {
    const potential_family fam = make_family(cfg);
    const constants c(cfg.hbar, cfg.mass);
    const radial_grid g = resolve_grid(cfg, fam, 0, c);
    const order_expansion ex = run_expansion(fam, g, c);
    const auto [t1, t2] = taylor_reference(fam, c);
    const double refs[] = {t1, t2};

    std::string payload;
    if (cfg.format == "json") {
        ojson doc;
        doc["meta"] = meta_json("perturb", cfg, fam, c, g, parse_ell_range(cfg.ell));
        doc["orders"] = ojson::array();
        for (std::size_t i = 0; i < ex.orders.size() && i < 2; ++i)
            doc["orders"].push_back(ojson{{"k", ex.orders[i].k},
                                          {"eps", ex.orders[i].eps},
                                          {"taylor_reference", refs[i]},
                                          {"abs_diff", std::abs(ex.orders[i].eps - refs[i])}});
        payload = doc.dump(2) + "\n";
    } else if (cfg.format == "csv") {
        payload = "k,eps,taylor_reference,abs_diff\n";
        for (std::size_t i = 0; i < ex.orders.size() && i < 2; ++i)
            payload += std::to_string(ex.orders[i].k) + "," + fmt17(ex.orders[i].eps) + "," +
                       fmt17(refs[i]) + "," + fmt17(std::abs(ex.orders[i].eps - refs[i])) + "\n";
    } else {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%2s %18s %18s %12s\n", "k", "eps", "taylor", "diff");
        payload = buf;
        for (std::size_t i = 0; i < ex.orders.size() && i < 2; ++i) {
            std::snprintf(buf, sizeof buf, "%2d %18.12f %18.12f %12.4e\n", ex.orders[i].k,
                          ex.orders[i].eps, refs[i], std::abs(ex.orders[i].eps - refs[i]));
            payload += buf;
        }
    }
    emit(cfg, payload);
    return 0;
}

int cmd_oracle(const run_config& cfg) {
    const potential_family fam = make_family(cfg);
    const constants c(cfg.hbar, cfg.mass);
    const auto ells = parse_ell_range(cfg.ell);
    const double tol_o = tol_oracle_effective(cfg, fam);
    const bool explicit_grid = cfg.rmax != 0.0 || cfg.npoints != 0;

    struct oracle_row {
        int ell;
        double closed, ev, diff;
        bool pass;
        radial_grid grid;
    };
    std::vector<oracle_row> rows;
    const double eps0 = ground_solution(fam, c).eps0;
    for (int ell = ells.first; ell <= ells.second; ++ell) {
        const radial_grid og =
            explicit_grid ? resolve_grid(cfg, fam, ell, c) : oracle_grid_for(fam, ell, c);
        const double closed = eps0 + energy_correction(fam, ell, c);
        const double ev = oracle_energy(fam, ell, og, c);
        const double diff = std::abs(closed - ev);
        rows.push_back({ell, closed, ev, diff, diff < tol_o, og});
    }

    std::string payload;
    if (cfg.format == "json") {
        ojson doc;
        doc["meta"] = meta_json("oracle", cfg, fam, c, rows.front().grid, ells);
        doc["records"] = ojson::array();
        for (const auto& row : rows) {
            ojson r;
            r["family"] = family_name(fam.kind);
            r["params"] = params_json(fam);
            r["constants"] = ojson{{"hbar", c.hbar}, {"mass", c.mass}};
            r["ell"] = row.ell;
            r["closed_form"] = row.closed;
            r["oracle"] = ojson{{"eigenvalue", row.ev}, {"abs_diff", row.diff}, {"pass", row.pass}};
            r["grid"] = grid_json(row.grid);
            doc["records"].push_back(std::move(r));
        }
        payload = doc.dump(2) + "\n";
    } else if (cfg.format == "csv") {
        payload = "family,ell,closed_form,eigenvalue,abs_diff,pass\n";
        for (const auto& row : rows)
            payload += std::string(family_name(fam.kind)) + "," + std::to_string(row.ell) + "," +
                       fmt17(row.closed) + "," + fmt17(row.ev) + "," + fmt17(row.diff) + "," +
                       (row.pass ? "true" : "false") + "\n";
    } else {
        char buf[192];
        std::snprintf(buf, sizeof buf, "%-14s %4s %16s %16s %12s %s\n", "family", "ell",
                      "closed_form", "oracle", "abs_diff", "status");
        payload = buf;
        for (const auto& row : rows) {
            std::snprintf(buf, sizeof buf, "%-14s %4d %16.9f %16.9f %12.4e %s\n",
                          family_name(fam.kind), row.ell, row.closed, row.ev, row.diff,
                          row.pass ? "pass" : "FAIL");
            payload += buf;
        }
    }
    emit(cfg, payload);
    return 0;
}

int cmd_dump(const run_config& cfg) {
    const potential_family fam = make_family(cfg);
    const constants c(cfg.hbar, cfg.mass);
    const auto ells = parse_ell_range(cfg.ell);
    if (ells.first != ells.second) fail(2, "dump-wavefunction takes a single --ell");
    const radial_grid g = resolve_grid(cfg, fam, ells.first, c);
    const spectral_record rec = solve_state(fam, ells.first, g, c);

    std::string payload = "r,chi,phi,psi\n";
    const auto& chi = rec.chi.values();
    const auto& phi = rec.phi.values();
    const auto& psi = rec.psi.values();
    for (int i = 0; i < g.n_points(); ++i)
        payload += fmt17(g.r(i)) + "," + fmt17(chi[i]) + "," + fmt17(phi[i]) + "," +
                   fmt17(psi[i]) + "\n";
    emit(cfg, payload);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    run_config cfg;
    CLI::App app{"Bound states of ell != 0 radial problems, factorized from their ell = 0 "
                 "solutions and cross-checked by a finite-difference eigensolver"};
    app.require_subcommand(1);
    app.set_version_flag("--version", k_version);

    std::map<const CLI::App*, opt_handles> handles;
    auto add_common = [&](CLI::App* sub) {
        opt_handles h;
        h.family = sub->add_option("--family", cfg.family,
                                   "Potential family: ho|coulomb|hulthen|greene-aldrich");
        h.w = sub->add_option("--w", cfg.w, "Oscillator frequency (ho)");
        h.e2 = sub->add_option("--e2", cfg.e2, "Coulomb strength (coulomb, screened families)");
        h.alpha = sub->add_option("--alpha", cfg.alpha, "Screening rate (screened families)");
        h.ell = sub->add_option("--ell", cfg.ell, "Angular momentum: A or inclusive range A..B");
        sub->add_option("--rmax", cfg.rmax, "Grid extent (with --npoints; default: family box)");
        sub->add_option("--npoints", cfg.npoints, "Grid node count (with --rmax)");
        h.hbar = sub->add_option("--hbar", cfg.hbar, "Planck constant");
        h.mass = sub->add_option("--mass", cfg.mass, "Particle mass");
        h.format = sub->add_option("--format", cfg.format, "Output format: json|csv|table");
        h.tol_residual =
            sub->add_option("--tol-residual", cfg.tol_residual, "Identity residual bound");
        h.tol_oracle = sub->add_option("--tol-oracle", cfg.tol_oracle,
                                       "Oracle disagreement bound (default: per family)");
        h.out = sub->add_option("--out", cfg.out, "Write output to a file instead of stdout");
        sub->add_option("--config", cfg.config_path, "JSON config file; flags win over it");
        handles[sub] = h;
    };

    CLI::App* s_solve =
        app.add_subcommand("solve", "Solve bound states for each ell and emit records");
    CLI::App* s_verify = app.add_subcommand(
        "verify", "Solve, then check identity residuals and the eigensolver against tolerances");
    CLI::App* s_pert =
        app.add_subcommand("perturb", "Expand the barrier in powers of ell and compare "
                                      "energy coefficients against the exact Taylor series");
    CLI::App* s_oracle = app.add_subcommand(
        "oracle", "Finite-difference eigenvalues next to the closed forms (explicit "
                  "--rmax/--npoints set the oracle grid)");
    CLI::App* s_dump =
        app.add_subcommand("dump-wavefunction", "CSV table r,chi,phi,psi for a single ell");
    for (CLI::App* sub : {s_solve, s_verify, s_pert, s_oracle, s_dump}) add_common(sub);

    CLI::Option* dev = s_verify->add_flag("--dev", cfg.dev, "Enable development-only hooks");
    s_verify
        ->add_option("--inject-deps-error", cfg.inject_deps_error,
                     "Shift delta_eps to exercise the failure path (needs --dev)")
        ->needs(dev);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "susyell: " << e.what() << "\n";
        return 2;
    }

    CLI::App* sub = app.get_subcommands().at(0);
    try {
        apply_config_file(cfg, handles.at(sub));
        apply_env_grid(cfg);
        check_format(cfg);
        const std::string name = sub->get_name();
        if (name == "solve") return cmd_solve(cfg);
        if (name == "verify") return cmd_verify(cfg);
        if (name == "perturb") return cmd_perturb(cfg);
        if (name == "oracle") return cmd_oracle(cfg);
        return cmd_dump(cfg);
    } catch (const cli_error& e) {
        if (!e.message.empty()) std::cerr << "susyell: " << e.message << "\n";
        return e.code;
    } catch (const solver_error& e) {
        std::cerr << "susyell: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "susyell: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "susyell: " << e.what() << "\n";
        return 2;
    }
}
