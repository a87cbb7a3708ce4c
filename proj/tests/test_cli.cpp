#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

#include "susyell/catalog.hpp"

using json = nlohmann::json;
using namespace susyell;

namespace {

std::string binary_path() {
    const char* p = std::getenv("SUSYELL_BIN");
    REQUIRE(p != nullptr);
    return p;
}

struct run_result {
    int exit_code = -1;
    std::string output;
};

/// Run the tool with stderr folded into the captured stream; `env` holds
/// VAR=value assignments prefixed to the command.
run_result run_cli(const std::string& args, const std::string& env = "") {
    const std::string cmd =
        (env.empty() ? std::string() : "env " + env + " ") + binary_path() + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    run_result res;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        res.output.append(buf.data(), got);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

} // namespace

TEST_CASE("solve emits the oscillator ladder", "[cli]") {
    auto res = run_cli("solve --family ho --w 1 --ell 0..3");
    REQUIRE(res.exit_code == 0);
    auto doc = json::parse(res.output);
    REQUIRE(doc["records"].size() == 4);
    for (int ell = 0; ell <= 3; ++ell) {
        const auto& rec = doc["records"][ell];
        CHECK(rec["ell"].get<int>() == ell);
        CHECK(rec["energy"].get<double>() == Catch::Approx(ell + 1.5).margin(1e-12));
        CHECK(rec["oracle"].is_null());
        CHECK(rec["residuals"]["eq7"].get<double>() < 1e-8);
    }
    CHECK(doc["meta"]["config"]["grid"]["n_points"].get<int>() == 4000);
}

TEST_CASE("solve reports the coulomb ground state", "[cli]") {
    auto res = run_cli("solve --family coulomb --ell 0");
    REQUIRE(res.exit_code == 0);
    auto doc = json::parse(res.output);
    CHECK(doc["records"][0]["energy"].get<double>() == Catch::Approx(-0.5).margin(1e-12));
}

TEST_CASE("too strong screening exits with the domain code", "[cli]") {
    auto res = run_cli("solve --family hulthen --alpha 3 --ell 1");
    CHECK(res.exit_code == 3);
    CHECK(res.output.find("susyell:") != std::string::npos);
}

TEST_CASE("scalar fields round-trip bit-exact through JSON", "[cli]") {
    auto res = run_cli("solve --family ho --ell 0..2");
    REQUIRE(res.exit_code == 0);
    auto doc = json::parse(res.output);

    const constants atomic;
    const radial_grid g{20.0, 4000};
    for (int ell = 0; ell <= 2; ++ell) {
        auto rec = solve_state(potential_family::harmonic(1.0), ell, g, atomic);
        const auto& jrec = doc["records"][ell];
        CHECK(jrec["epsilon0"].get<double>() == rec.eps0);
        CHECK(jrec["delta_eps"].get<double>() == rec.delta_eps);
        CHECK(jrec["energy"].get<double>() == rec.energy);
        CHECK(jrec["residuals"]["eq6"].get<double>() == rec.residual_eq6_max);
        CHECK(jrec["residuals"]["eq7"].get<double>() == rec.residual_eq7_max);
    }
}

TEST_CASE("identical configs give identical bytes", "[cli]") {
    auto a = run_cli("solve --family hulthen --alpha 0.1 --ell 0..1");
    auto b = run_cli("solve --family hulthen --alpha 0.1 --ell 0..1");
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    CHECK(a.output == b.output);
}

TEST_CASE("flags win over the config file, which wins over defaults", "[cli]") {
    const std::string path = "cli_test_config.json";
    {
        std::ofstream f(path);
        f << R"({"family":"coulomb","ell":"0..1","format":"csv"})";
    }
    auto res = run_cli("solve --config " + path + " --ell 2");
    std::remove(path.c_str());
    REQUIRE(res.exit_code == 0);
    // csv format from the file, ell from the flag, family from the file.
    REQUIRE(res.output.rfind("family,ell,", 0) == 0);
    CHECK(res.output.find("coulomb,2,") != std::string::npos);
    CHECK(res.output.find("coulomb,0,") == std::string::npos);
}

TEST_CASE("unknown config keys are rejected", "[cli]") {
    const std::string path = "cli_test_config_bad.json";
    {
        std::ofstream f(path);
        f << R"({"familly":"coulomb"})";
    }
    auto res = run_cli("solve --config " + path);
    std::remove(path.c_str());
    CHECK(res.exit_code == 2);
    CHECK(res.output.find("unknown config key") != std::string::npos);
}

TEST_CASE("environment grid fills in when flags and config are silent", "[cli]") {
    auto res = run_cli("solve --family ho --ell 0 --format json", "SUSYELL_DEFAULT_GRID=10:2000");
    REQUIRE(res.exit_code == 0);
    auto doc = json::parse(res.output);
    CHECK(doc["records"][0]["grid"]["r_max"].get<double>() == 10.0);
    CHECK(doc["records"][0]["grid"]["n_points"].get<int>() == 2000);

    auto over = run_cli("solve --family ho --ell 0 --rmax 15 --npoints 3000",
                        "SUSYELL_DEFAULT_GRID=10:2000");
    REQUIRE(over.exit_code == 0);
    auto doc2 = json::parse(over.output);
    CHECK(doc2["records"][0]["grid"]["r_max"].get<double>() == 15.0);

    auto bad = run_cli("solve --family ho", "SUSYELL_DEFAULT_GRID=nonsense");
    CHECK(bad.exit_code == 2);
}

TEST_CASE("verify passes the catalog and fails injected errors", "[cli]") {
    auto ok = run_cli("verify --family ho --ell 0..2");
    REQUIRE(ok.exit_code == 0);
    auto doc = json::parse(ok.output);
    CHECK(doc["all_pass"].get<bool>());
    for (const auto& rec : doc["records"]) {
        CHECK(rec["oracle"]["pass"].get<bool>());
        CHECK(rec["oracle"]["abs_diff"].get<double>() < 5e-6);
    }

    auto bad = run_cli("verify --family ho --ell 1 --dev --inject-deps-error 0.01");
    CHECK(bad.exit_code == 1);
    auto bdoc = json::parse(bad.output);
    CHECK_FALSE(bdoc["all_pass"].get<bool>());
    bool saw_eq6 = false;
    for (const auto& ch : bdoc["checks"]) {
        if (ch["check"] == "residual_eq6") {
            saw_eq6 = true;
            CHECK(ch["value"].get<double>() == Catch::Approx(0.01).epsilon(1e-6));
            CHECK_FALSE(ch["pass"].get<bool>());
        }
    }
    CHECK(saw_eq6);

    auto gated = run_cli("verify --family ho --inject-deps-error 0.01");
    CHECK(gated.exit_code == 2);
}

TEST_CASE("perturb reports the first two energy coefficients", "[cli]") {
    auto res = run_cli("perturb --family coulomb");
    REQUIRE(res.exit_code == 0);
    auto doc = json::parse(res.output);
    REQUIRE(doc["orders"].size() == 2);
    CHECK(doc["orders"][0]["eps"].get<double>() == Catch::Approx(1.0).margin(1e-6));
    CHECK(doc["orders"][1]["eps"].get<double>() == Catch::Approx(-1.5).margin(1e-4));
    CHECK(doc["orders"][1]["taylor_reference"].get<double>() == -1.5);
}

TEST_CASE("oracle command reports eigenvalues on its own grids", "[cli]") {
    auto res = run_cli("oracle --family ho --ell 0..1 --format csv");
    REQUIRE(res.exit_code == 0);
    REQUIRE(res.output.rfind("family,ell,closed_form,", 0) == 0);
    CHECK(res.output.find(",true") != std::string::npos);
    CHECK(res.output.find(",false") == std::string::npos);
}

TEST_CASE("wavefunction dump is a literal product table", "[cli]") {
    auto res = run_cli("dump-wavefunction --family ho --ell 1 --rmax 10 --npoints 50");
    REQUIRE(res.exit_code == 0);
    REQUIRE(res.output.rfind("r,chi,phi,psi\n", 0) == 0);

    int rows = 0;
    std::size_t pos = res.output.find('\n') + 1;
    while (pos < res.output.size()) {
        const auto eol = res.output.find('\n', pos);
        const std::string line = res.output.substr(pos, eol - pos);
        double r = 0, chi = 0, phi = 0, psi = 0;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &r, &chi, &phi, &psi) == 4);
        CHECK(psi == chi * phi);
        ++rows;
        pos = eol + 1;
    }
    CHECK(rows == 50);

    auto range = run_cli("dump-wavefunction --family ho --ell 0..2");
    CHECK(range.exit_code == 2);
}

TEST_CASE("usage mistakes exit with code 2", "[cli]") {
    CHECK(run_cli("solve --family nope").exit_code == 2);
    CHECK(run_cli("solve --family ho --ell 3..1").exit_code == 2);
    CHECK(run_cli("solve --family ho --ell -1").exit_code == 2);
    CHECK(run_cli("solve --family hulthen").exit_code == 2);
    CHECK(run_cli("solve --family ho --rmax 10").exit_code == 2);
    CHECK(run_cli("solve --family ho --format yaml").exit_code == 2);
    CHECK(run_cli("").exit_code == 2);
}
