#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "fracdnl/artifacts.hpp"
#include "fracdnl/errors.hpp"
#include "fracdnl/io.hpp"

using namespace fracdnl;
namespace fs = std::filesystem;

namespace {

const std::string kConfig =
    "# desk-scale stefan run\n"
    "[problem]\n"
    "preset = stefan\n"
    "theta = 0.5\n"
    "[solver]\n"
    "n = 6\n"
    "M = 8\n"
    "[study]\n"
    "kind = eps\n"
    "halvings = 2\n"
    "start = 0.1\n"
    "[output]\n"
    "dir = /tmp/fracdnl_cli_out\n";

int run_cli(const std::string& args) {
    const char* bin = std::getenv("FRACDNL_BIN");
    REQUIRE(bin != nullptr);
    const int rc = std::system((std::string(bin) + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
}

std::string write_tmp(const std::string& name, const std::string& body) {
    const std::string path = "/tmp/" + name;
    write_file_atomic(path, body);
    return path;
}

}  // namespace

TEST_CASE("format_g17 round-trips doubles") {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456.789, -0.0}) {
        CHECK(std::stod(format_g17(x)) == x);
    }
}

TEST_CASE("fnv1a is stable") {
    CHECK(fnv1a_hash("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a_hash("a") != fnv1a_hash("b"));
}

TEST_CASE("config round trip is the identity") {
    const RunConfig cfg = parse_config(kConfig);
    CHECK(cfg.preset == "stefan");
    CHECK(cfg.alpha == "stefan");
    CHECK(cfg.solver.n == 6);
    CHECK(cfg.out_dir == "/tmp/fracdnl_cli_out");
    const std::string canon = serialize_config(cfg);
    const RunConfig again = parse_config(canon);
    CHECK(serialize_config(again) == canon);
}

TEST_CASE("unknown keys and sections are rejected with line numbers") {
    try {
        parse_config("[problem]\npreset = stefan\nbogus = 1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line == 3);
    }
    CHECK_THROWS_AS(parse_config("[nope]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[solver]\nn = 1.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("loose = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[problem]\npreset = mystery\n"), ConfigError);
}

TEST_CASE("preset overrides apply regardless of key order") {
    const RunConfig cfg = parse_config("[problem]\nalpha = identity\npreset = stefan\n");
    CHECK(cfg.alpha == "identity");  // explicit key beats the preset default
}

TEST_CASE("atomic write replaces content") {
    const std::string path = "/tmp/fracdnl_atomic_test.txt";
    write_file_atomic(path, "one\n");
    write_file_atomic(path, "two\n");
    CHECK(read_file(path) == "two\n");
    fs::remove(path);
}

TEST_CASE("cli: presets and validate") {
    CHECK(run_cli("presets") == 0);
    const std::string cfg = write_tmp("fracdnl_cli_cfg.ini", kConfig);
    CHECK(run_cli("validate --config " + cfg) == 0);
}

TEST_CASE("cli: solve determinism and artifacts") {
    const std::string cfg = write_tmp("fracdnl_cli_cfg.ini", kConfig);
    fs::remove_all("/tmp/fracdnl_cli_out");
    REQUIRE(run_cli("solve --config " + cfg) == 0);
    const std::string traj1 = read_file("/tmp/fracdnl_cli_out/trajectory.csv");
    const std::string man1 = read_file("/tmp/fracdnl_cli_out/manifest.json");
    REQUIRE(run_cli("solve --config " + cfg) == 0);
    CHECK(read_file("/tmp/fracdnl_cli_out/trajectory.csv") == traj1);
    CHECK(read_file("/tmp/fracdnl_cli_out/manifest.json") == man1);
    CHECK(man1.find("c_V") != std::string::npos);
    CHECK(man1.find("config_hash") != std::string::npos);
    CHECK(traj1.find("m,t,z1") == 0);
}

TEST_CASE("cli: emit plot data") {
    const std::string cfg = write_tmp("fracdnl_cli_cfg.ini", kConfig);
    REQUIRE(run_cli("solve --config " + cfg + " --emit-plot-data") == 0);
    const std::string energy = read_file("/tmp/fracdnl_cli_out/energy.csv");
    CHECK(energy.find("step,t,term,value") == 0);
    CHECK(energy.find("psi") != std::string::npos);
}

TEST_CASE("cli: study table") {
    const std::string cfg = write_tmp("fracdnl_cli_cfg.ini", kConfig);
    REQUIRE(run_cli("study --config " + cfg) == 0);
    const std::string csv = read_file("/tmp/fracdnl_cli_out/study_eps.csv");
    CHECK(csv.find("kind,param,diff_l2") == 0);
}

TEST_CASE("cli: exit-code contract") {
    // validation failure -> 1
    const std::string bad = write_tmp("fracdnl_bad_cfg.ini",
                                      "[problem]\npreset = stefan\nbogus = 1\n");
    CHECK(run_cli("validate --config " + bad) == 1);
    // io failure -> 3
    CHECK(run_cli("solve --config /tmp/definitely_missing.ini") == 3);
}
