#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "test_support.hpp"

using namespace alphaode;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
};

// Runs the installed binary with stdout captured; stderr is left alone so
// failures stay visible in the test log.
CliResult run_cli(const std::string& args) {
    static int counter = 0;
    std::string path = "cli_out_" + std::to_string(counter++) + ".tmp";
    std::string cmd = std::string(ALPHAODE_CLI_PATH) + " " + args + " > " + path;
    int raw = std::system(cmd.c_str());
    CliResult r;
    r.code = (raw == -1) ? -1 : WEXITSTATUS(raw);
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    r.out = ss.str();
    std::remove(path.c_str());
    return r;
}

ParsedCsv parse(const std::string& text) {
    std::istringstream is(text);
    return parse_csv(is);
}

}  // namespace

TEST_CASE("solve accepts a system in prefix notation") {
    CliResult r = run_cli(
        "solve --sys \"(pow y1 2)\" --y0 1 --x0 0 --xend 0.5 --h 0.5 --method alpha --order 24");
    REQUIRE(r.code == 0);
    ParsedCsv csv = parse(r.out);
    REQUIRE(csv.rows.size() == 2);
    CHECK(csv.header[0] == "x");
    CHECK(csv.rows[1][0] == 0.5);
    CHECK(std::abs(csv.rows[1][1] - 2.0) < 1e-7);  // 1/(1-x) at 0.5, order 24
}

TEST_CASE("solve runs fixtures with every method") {
    for (const std::string m : {"alpha", "taylor", "heun", "rk4"}) {
        CliResult r = run_cli("solve --fixture example1 --xend 1 --h 0.1 --method " + m);
        REQUIRE(r.code == 0);
        ParsedCsv csv = parse(r.out);
        REQUIRE(csv.rows.size() == 11);
        // exact/abserr columns come from the fixture oracle
        CHECK(csv.header.back() == "abserr1");
        double final_y = csv.rows.back()[1];
        double tol = (m == "heun") ? 1e-2 : 1e-4;
        CHECK(std::abs(final_y - std::exp(1.0)) < tol);
    }
}

TEST_CASE("solve emits JSON when asked") {
    CliResult r = run_cli("solve --fixture example2 --xend 0.5 --h 0.1 --format json");
    REQUIRE(r.code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["problem"] == "example2");
    CHECK(j["data"].size() == 6);
}

TEST_CASE("solve output is deterministic") {
    const std::string args = "solve --fixture example5 --xend 1 --h 0.1 --order 8";
    CliResult a = run_cli(args);
    CliResult b = run_cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("parameter overrides reach the system") {
    CliResult r = run_cli(
        "solve --sys \"(mul a y1)\" --y0 1 --xend 1 --h 0.1 --param a=0 --method rk4");
    REQUIRE(r.code == 0);
    ParsedCsv csv = parse(r.out);
    CHECK(csv.rows.back()[1] == 1.0);  // a = 0 freezes the state
}

TEST_CASE("exit codes distinguish failure modes") {
    // divergent series at a step far outside the convergence disc
    CHECK(run_cli("solve --fixture example2 --xend 1.2 --h 1.2").code == 4);
    // domain error from the right-hand side
    CHECK(run_cli("solve --sys \"(log x)\" --y0 1 --x0 -2 --xend -1 --h 0.5 --method rk4").code == 3);
    // usage errors
    CHECK(run_cli("solve --xend 1 --h 0.1").code == 2);
    CHECK(run_cli("solve --fixture nosuch --xend 1 --h 0.1").code == 2);
    CHECK(run_cli("frobnicate").code == 2);
    CHECK(run_cli("solve --fixture example1 --xend 1 --h 0.3").code == 2);
    CHECK(run_cli("--help").code == 0);
}

TEST_CASE("table 1 reproduces the published run") {
    CliResult r = run_cli("table 1");
    REQUIRE(r.code == 0);
    ParsedCsv csv = parse(r.out);
    REQUIRE(csv.rows.size() == 10);
    auto col = [&](const std::string& name) {
        for (std::size_t i = 0; i < csv.header.size(); ++i)
            if (csv.header[i] == name) return i;
        FAIL("missing column " + name);
        return std::size_t{0};
    };
    std::size_t dev_present = col("dev_present"), dev_exact = col("dev_exact");
    for (const auto& row : csv.rows) {
        CHECK(row[dev_present] < 1e-11);
        CHECK(row[dev_exact] < 1e-12);
    }
}

TEST_CASE("table 2 identifies the damping parameter and matches the run") {
    CliResult r = run_cli("table 2 2>/dev/null");
    REQUIRE(r.code == 0);
    ParsedCsv csv = parse(r.out);
    REQUIRE(csv.rows.size() == 10);
    // dev_present is the last-but-one column, dev_rk4 the last
    for (const auto& row : csv.rows) {
        CHECK(row[row.size() - 2] < 5e-6);
        CHECK(row[row.size() - 1] < 5e-6);
    }
}

TEST_CASE("convergence sweeps shrink the error") {
    CliResult r = run_cli("convergence --fixture example1 --xend 1 --h 0.1 --order 8");
    REQUIRE(r.code == 0);
    ParsedCsv csv = parse(r.out);
    REQUIRE(!csv.rows.empty());
    // order sweep (kind 0): error at order 12 should undercut order 2 by far
    double err2 = -1.0, err12 = -1.0, h_big = -1.0, h_small = -1.0;
    for (const auto& row : csv.rows) {
        if (row[0] == 0.0 && row[1] == 2.0) err2 = row[2];
        if (row[0] == 0.0 && row[1] == 12.0) err12 = row[2];
        if (row[0] == 1.0 && row[1] == 0.5) h_big = row[2];
        if (row[0] == 1.0 && row[1] == 0.025) h_small = row[2];
    }
    REQUIRE(err2 > 0.0);
    REQUIRE(err12 >= 0.0);
    CHECK(err12 < 1e-6 * err2);
    REQUIRE(h_big > 0.0);
    CHECK(h_small < h_big);
}

TEST_CASE("compare aligns methods on one grid") {
    CliResult r = run_cli("compare --fixture example4 --xend 1 --h 0.1");
    REQUIRE(r.code == 0);
    ParsedCsv csv = parse(r.out);
    REQUIRE(csv.rows.size() == 11);
    // header: x, alpha_y1, alpha_y2, heun_y1, heun_y2, rk4_y1, rk4_y2, devs
    REQUIRE(csv.header.size() == 9);
    CHECK(csv.header[1] == "alpha_y1");
    CHECK(csv.header.back() == "dev_rk4_vs_alpha");
    for (const auto& row : csv.rows) {
        CHECK(row[7] < 0.05);   // heun vs alpha
        CHECK(row[8] < 1e-4);   // rk4 vs alpha
    }
}
