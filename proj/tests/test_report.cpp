#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "test_support.hpp"

using namespace alphaode;

namespace {

RunReport sample_report() {
    Fixture f = make_example2();
    SolverConfig cfg;
    cfg.order = 10;
    cfg.step = 0.1;
    Trajectory tr = integrate(f.system, f.initial, 0.5, cfg);

    RunReport rep;
    rep.problem = f.name;
    rep.method = "alpha";
    rep.order = cfg.order;
    rep.h = cfg.step;
    rep.eps_den = cfg.denominator_tolerance;
    rep.dimension = 1;
    rep.has_exact = true;
    for (std::size_t i = 0; i < tr.states.size(); ++i) {
        ReportRow row;
        row.x = tr.states[i].x;
        row.y = tr.states[i].y;
        if (i == 0) {
            row.alpha = {std::numeric_limits<double>::quiet_NaN()};
            row.fallback = {0};
        } else {
            row.alpha = tr.diagnostics[i - 1].alpha;
            row.fallback.assign(tr.diagnostics[i - 1].fallback.begin(),
                                tr.diagnostics[i - 1].fallback.end());
            row.tail = tr.diagnostics[i - 1].tail.max_tail();
        }
        row.exact = f.exact(row.x);
        row.abs_err = {std::abs(row.y[0] - row.exact[0])};
        rep.max_abs_err = std::max(rep.max_abs_err, row.abs_err[0]);
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

}  // namespace

TEST_CASE("CSV output round-trips bit-exactly") {
    RunReport rep = sample_report();
    std::ostringstream os;
    write_csv(rep, os);

    std::istringstream is(os.str());
    ParsedCsv back = parse_csv(is);
    REQUIRE(back.header.size() == 1 + 3 * rep.dimension + 1 + 2 * rep.dimension);
    CHECK(back.header[0] == "x");
    CHECK(back.header[1] == "y1");
    CHECK(back.header[2] == "alpha1");
    REQUIRE(back.rows.size() == rep.rows.size());
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const ReportRow& r = rep.rows[i];
        const std::vector<double>& p = back.rows[i];
        CHECK(p[0] == r.x);
        CHECK(p[1] == r.y[0]);
        if (std::isnan(r.alpha[0]))
            CHECK(std::isnan(p[2]));
        else
            CHECK(p[2] == r.alpha[0]);
        CHECK(p[3] == static_cast<double>(r.fallback[0]));
        CHECK(p[5] == r.exact[0]);
        CHECK(p[6] == r.abs_err[0]);
    }
}

TEST_CASE("CSV writing is deterministic") {
    RunReport rep = sample_report();
    std::ostringstream a, b;
    write_csv(rep, a);
    write_csv(rep, b);
    CHECK(a.str() == b.str());
}

TEST_CASE("JSON summaries expose the run configuration") {
    RunReport rep = sample_report();
    nlohmann::json j = summary_json(rep);
    CHECK(j["problem"] == "example2");
    CHECK(j["method"] == "alpha");
    CHECK(j["config"]["order"] == 10);
    CHECK(j["config"]["h"] == 0.1);
    CHECK(j["rows"] == rep.rows.size());
    CHECK(j.contains("max_abs_err"));

    nlohmann::json full = full_json(rep);
    REQUIRE(full["data"].size() == rep.rows.size());
    CHECK(full["data"][1]["y"][0] == rep.rows[1].y[0]);
    CHECK(full["data"][1].contains("alpha"));
    CHECK(full["data"][1].contains("exact"));
}

TEST_CASE("parse_csv rejects empty input") {
    std::istringstream empty("");
    CHECK_THROWS_AS(parse_csv(empty), MalformedExpression);
}
