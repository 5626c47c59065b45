#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "config.hpp"
#include "grid.hpp"
#include "ptqfi/error.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using ptqfi::cli::run_cli;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) v.push_back(l);
    return v;
}

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> v;
    std::istringstream is(line);
    for (std::string f; std::getline(is, f, ',');) v.push_back(f);
    return v;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("ptqfi_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

constexpr const char* kHeader =
    "omega,temperature,epsilon,Omega,qfi_omega_closed,qfi_T_paper,qfi_T_authoritative,qfi_epsilon_closed,"
    "qfi_bures_fd_target,target,rel_discrepancy";

}  // namespace

TEST_CASE("grid parsing") {
    const auto parse_grid = [](const std::string& t) { return ptqfi::cli::parse_grid(t, "eps"); };
    CHECK(parse_grid("0.5") == std::vector<double>{0.5});
    const auto g = parse_grid("0:0.45:0.15");
    REQUIRE(g.size() == 4);
    CHECK(g.back() == doctest::Approx(0.45));
    CHECK_THROWS_AS(parse_grid("1:0:0.1"), ptqfi::DomainError);
    CHECK_THROWS_AS(parse_grid("0:1:0"), ptqfi::DomainError);
    CHECK_THROWS_AS(parse_grid("abc"), ptqfi::DomainError);
    CHECK_THROWS_AS(parse_grid("0:1"), ptqfi::DomainError);
}

TEST_CASE("config parsing") {
    std::istringstream good("# comment\nomega = 3\n\n  eps=0.1 # trailing\n");
    const auto cfg = ptqfi::cli::parse_config(good, "inline");
    CHECK(cfg.at("omega") == "3");
    CHECK(cfg.at("eps") == "0.1");
    std::istringstream bad("omega\n");
    CHECK_THROWS_AS(ptqfi::cli::parse_config(bad, "inline"), ptqfi::DomainError);
}

TEST_CASE("qfi single point: header, precision, dual-route agreement") {
    const Result r = run({"qfi", "--omega", "2", "--temp", "0.1", "--eps", "0.2", "--target", "omega"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 2);
    CHECK(ls[0] == kHeader);
    const auto f = fields(ls[1]);
    REQUIRE(f.size() == 11);
    CHECK(f[9] == "omega");
    // Omega = 2 sqrt(0.84) printed with 17 significant digits (trailing zero dropped).
    CHECK(f[3] == "1.833030277982336");
    CHECK(f[2] == "0.20000000000000001");
    CHECK(std::stod(f[10]) < 1e-5);
    CHECK(r.err.find("# metadata:") != std::string::npos);
}

TEST_CASE("qfi grid with an invalid point routes it to the errors sidecar") {
    const fs::path dir = scratch_dir("sidecar");
    const fs::path out = dir / "qfi.csv";
    const Result r = run({"qfi", "--omega", "2", "--temp", "0.5", "--eps", "0.2:0.6:0.4", "--target", "omega",
                          "--out", out.string()});
    CHECK(r.code == 0);
    const auto rows = lines(slurp(out));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == kHeader);
    const std::string errors = slurp(fs::path(out.string() + ".errors.csv"));
    CHECK(errors.find("0.60000000000000009") != std::string::npos);
    const json meta = json::parse(slurp(fs::path(out.string() + ".meta.json")));
    CHECK(meta["errors"] == 1);
    CHECK(meta.contains("conventions"));
}

TEST_CASE("eps = 0 with the epsilon target gives zero information") {
    const Result r = run({"qfi", "--omega", "2", "--temp", "0.5", "--eps", "0", "--target", "epsilon"});
    REQUIRE(r.code == 0);
    const auto f = fields(lines(r.out).at(1));
    CHECK(std::stod(f[7]) == 0.0);
    CHECK(std::abs(std::stod(f[8])) < 1e-9);
}

TEST_CASE("json output") {
    const Result r = run({"qfi", "--eps", "0.1:0.3:0.1", "--format", "json"});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["data"].size() == 3);
    CHECK(doc["columns"].size() == 11);
    CHECK(doc.contains("conventions"));
    CHECK(doc["error_rows"].empty());
}

TEST_CASE("flags override the config file") {
    const fs::path dir = scratch_dir("config");
    const fs::path cfg = dir / "run.cfg";
    std::ofstream(cfg) << "omega = 3\ntemp = 0.5\neps = 0.1\n";
    const Result a = run({"qfi", "--config", cfg.string()});
    REQUIRE(a.code == 0);
    CHECK(fields(lines(a.out).at(1))[0] == "3");
    const Result b = run({"qfi", "--config", cfg.string(), "--omega", "4"});
    REQUIRE(b.code == 0);
    const auto f = fields(lines(b.out).at(1));
    CHECK(f[0] == "4");
    CHECK(f[1] == "0.5");

    std::ofstream(dir / "bad.cfg") << "omgea = 3\n";
    CHECK(run({"qfi", "--config", (dir / "bad.cfg").string()}).code == 2);
}

TEST_CASE("exit codes") {
    CHECK(run({"qfi", "--eps", "0.7"}).code == 2);
    CHECK(run({"qfi", "--target", "nonsense"}).code == 2);
    CHECK(run({"gain", "--omega", "2"}).code == 2);
    CHECK(run({"nonsense"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"simulate", "--samples", "10"}).code == 2);
    CHECK(run({"fock-verify", "--trunc", "8"}).code == 2);
}

TEST_CASE("gain and energy-cost") {
    const Result g = run({"gain", "--omega", "3", "--temp", "0.1", "--eps", "0.4", "--target", "omega"});
    REQUIRE(g.code == 0);
    CHECK(lines(g.out).at(0) == "omega,temperature,epsilon,target,epsilon_herm,gain_db");
    CHECK(std::stod(fields(lines(g.out).at(1))[5]) > 0.0);

    const Result c = run({"energy-cost", "--omega", "2", "--temp", "0.1", "--eps", "0.2"});
    REQUIRE(c.code == 0);
    const auto f = fields(lines(c.out).at(1));
    CHECK(std::stod(f[6]) > 0.0);
    CHECK(std::stod(f[7]) < 0.0);
    const Result ca = run({"energy-cost", "--omega", "2", "--temp", "0.1", "--eps", "0.2", "--abs-cost"});
    REQUIRE(ca.code == 0);
    CHECK(std::stod(fields(lines(ca.out).at(1))[7]) == -std::stod(f[7]));
}

TEST_CASE("fock-verify") {
    const Result ok = run({"fock-verify"});
    CHECK(ok.code == 0);
    const json report = json::parse(ok.out);
    for (const char* key : {"dim", "interior_dim", "pt_residual", "hermiticity_residual",
                            "quasi_hermiticity_residual", "spectral_errors", "expectation_residual_theta",
                            "expectation_residual_theta_sq", "rho_mapping_residual"}) {
        CHECK(report["report"].contains(key));
    }
    CHECK(report["report"]["interior_dim"] == 32);
    CHECK(report["passed"] == true);

    // Negative control: a shifted Dyson coefficient must not hermitize.
    const Result bad = run({"fock-verify", "--lambda", "-1.5"});
    CHECK(bad.code == 3);
    CHECK(json::parse(bad.out)["passed"] == false);
}

TEST_CASE("simulate is byte-identical across runs") {
    const std::vector<std::string> args{"simulate", "--samples", "2000", "--replicas", "50", "--seed", "7"};
    const Result a = run(args);
    const Result b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const json doc = json::parse(a.out);
    for (const char* key : {"target", "true_value", "Q", "R", "seed", "estimates", "empirical_variance",
                            "crb_quantum", "cfi_classical"}) {
        CHECK(doc.contains(key));
    }
    CHECK(doc["estimates"].size() == 50);
    CHECK(run({"simulate", "--samples", "2000", "--replicas", "50", "--seed", "8"}).out != a.out);
}

TEST_CASE("figures writes every data file") {
    const fs::path dir = scratch_dir("figures");
    const Result r = run({"figures", "--out", dir.string()});
    REQUIRE(r.code == 0);
    for (const char* name : {"fig1a.csv", "fig1b.csv", "fig1b_vs_temperature.csv", "fig2a.csv", "fig2b.csv",
                             "fig3a.csv", "fig3b.csv", "fig3_fixed_omega.csv", "errors.csv", "meta.json"}) {
        CHECK(fs::exists(dir / name));
    }
    CHECK(lines(slurp(dir / "fig3a.csv")).size() > 1000);
}
