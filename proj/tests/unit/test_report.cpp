#include <doctest.h>

#include "bmc/report.hpp"

#include <cmath>
#include <limits>

using namespace bmc;

TEST_CASE("comparators") {
    auto st = [](Comparator c, std::vector<double> o, std::vector<double> e, double tol) {
        return make_check("x", "AC-0", "", c, std::move(o), std::move(e), tol).status;
    };
    CHECK(st(Comparator::abs_diff, {1.0, 1.04}, {1.0}, 0.05) == Status::pass);
    CHECK(st(Comparator::abs_diff, {1.0, 1.06}, {1.0}, 0.05) == Status::fail);
    CHECK(st(Comparator::abs_diff, {1.0, 2.0}, {1.0, 2.0}, 0.0) == Status::pass);
    CHECK(st(Comparator::rel_diff, {0.48}, {0.460517}, 0.05) == Status::pass);
    CHECK(st(Comparator::rel_diff, {0.49}, {0.460517}, 0.05) == Status::fail);
    CHECK(st(Comparator::at_most, {0.04, 0.05}, {0.05}, 0.0) == Status::pass);
    CHECK(st(Comparator::at_most, {0.051}, {0.05}, 0.0) == Status::fail);
    CHECK(st(Comparator::at_least, {0.002}, {0.001}, 0.0) == Status::pass);
    CHECK(st(Comparator::in_range, {0.8, 1.25}, {0.8, 1.25}, 0.0) == Status::pass);
    CHECK(st(Comparator::in_range, {1.26}, {0.8, 1.25}, 0.0) == Status::fail);
    CHECK(st(Comparator::strictly_decreasing, {3, 2, 1}, {}, 0.0) == Status::pass);
    CHECK(st(Comparator::strictly_decreasing, {3, 3, 1}, {}, 0.0) == Status::fail);
    CHECK(st(Comparator::strictly_increasing, {1, 2, 3}, {}, 0.0) == Status::pass);
    CHECK(st(Comparator::non_increasing, {3, 3, 1}, {}, 0.0) == Status::pass);
    CHECK(st(Comparator::non_increasing, {1, 1.05}, {}, 0.1) == Status::pass);
    CHECK(st(Comparator::abs_diff, {std::nan("")}, {1.0}, 10.0) == Status::fail);
    CHECK(st(Comparator::at_most, {}, {1.0}, 0.0) == Status::fail);
}

TEST_CASE("out-of-regime failures are flagged, passes stay passes") {
    auto r = make_check("x", "AC-0", "", Comparator::abs_diff, {1.0}, {1.0}, 0.0, "", true);
    CHECK(r.status == Status::pass);
    r = make_check("x", "AC-0", "", Comparator::abs_diff, {2.0}, {1.0}, 0.0, "", true);
    CHECK(r.status == Status::regime_flagged);
    r = make_check("x", "AC-0", "", Comparator::abs_diff, {2.0}, {1.0}, 0.0, "", false);
    CHECK(r.status == Status::fail);
}

TEST_CASE("json round trip re-evaluates to the same status") {
    const double inf = std::numeric_limits<double>::infinity();
    for (auto c : {Comparator::abs_diff, Comparator::rel_diff, Comparator::at_most, Comparator::at_least,
                   Comparator::in_range, Comparator::strictly_decreasing, Comparator::strictly_increasing,
                   Comparator::non_increasing}) {
        CHECK(comparator_from_string(to_string(c)) == c);
        const auto r = make_check("AC-1/x", "AC-1", "claim", c, {0.5, 0.25, inf}, {0.0, 1.0}, 0.1, "n");
        auto j = report_to_json(r, false);
        CHECK_FALSE(j.contains("runtime_s"));
        const auto back = report_from_json(j);
        CHECK(back.status == r.status);
        CHECK(evaluate(back) == r.status);
        CHECK(std::isinf(back.observed[2]));
        CHECK(report_to_json(back, false) == j);
    }
    CHECK_THROWS(comparator_from_string("sideways"));
}

TEST_CASE("convergence ladder") {
    const auto c = convergence_ladder("k", "AC-0", "", [](double) { return 1.0; }, {1, 2, 3}, 1.0,
                                      Trend::non_increasing);
    REQUIRE(c.size() == 1);
    CHECK(c[0].status == Status::pass);
    CHECK(c[0].check_id == "k/trend");
    const auto d = convergence_ladder("k", "AC-0", "", [](double t) { return 1.0 + 1.0 / t; }, {10, 20, 40}, 1.0,
                                      Trend::strictly_decreasing, 0.0, 0.05);
    REQUIRE(d.size() == 2);
    CHECK(d[0].status == Status::pass);
    CHECK(d[1].check_id == "k/limit");
    CHECK(d[1].status == Status::pass);
    const auto e = convergence_ladder("k", "AC-0", "", [](double t) { return 1.0 - t; }, {1, 2, 3}, 1.0,
                                      Trend::strictly_decreasing);
    CHECK(e[0].status == Status::fail);
    CHECK_THROWS(convergence_ladder("k", "AC-0", "", [](double) { return 1.0; }, {1, 2}, 1.0,
                                    Trend::non_increasing));
}
