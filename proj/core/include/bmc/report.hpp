#pragma once

#include <nlohmann/json.hpp>

#include <functional>
#include <string>
#include <vector>

namespace bmc {

enum class Status { pass, fail, regime_flagged };

// How observed is compared with expected. in_range reads expected as {lo, hi};
// the trend comparators look at observed only.
enum class Comparator {
    abs_diff,             // |o - e| <= tol
    rel_diff,             // |o - e| <= tol |e|
    at_most,              // o <= e + tol
    at_least,             // o >= e - tol
    in_range,             // lo <= o <= hi
    strictly_decreasing,  // o[k+1] < o[k]
    strictly_increasing,  // o[k+1] > o[k]
    non_increasing,       // o[k+1] <= o[k] + tol
};

struct CheckReport {
    std::string check_id;   // "AC-4/first-moment"
    std::string criterion;  // "AC-4"; empty for diagnostics
    std::string anchor;     // claim being checked
    Comparator comparator = Comparator::abs_diff;
    std::vector<double> observed;
    std::vector<double> expected;
    double tolerance = 0.0;
    bool outside_regime = false;
    Status status = Status::fail;
    double runtime_s = 0.0;
    std::string note;
};

// Pure function of the recorded numbers.
Status evaluate(const CheckReport& r);

CheckReport make_check(std::string id, std::string criterion, std::string anchor, Comparator cmp,
                       std::vector<double> observed, std::vector<double> expected, double tolerance,
                       std::string note = {}, bool outside_regime = false);

const char* to_string(Status s);
const char* to_string(Comparator c);
Comparator comparator_from_string(const std::string& s);

nlohmann::json report_to_json(const CheckReport& r, bool include_runtime);
CheckReport report_from_json(const nlohmann::json& j);

enum class Trend { strictly_decreasing, non_increasing };

// Runs estimator over the ladder and checks |value - limit| follows the trend.
// With a limit tolerance, also checks the last rung. Throws on fewer than 3 rungs.
std::vector<CheckReport> convergence_ladder(const std::string& id, const std::string& criterion,
                                            const std::string& anchor,
                                            const std::function<double(double)>& estimator,
                                            const std::vector<double>& ladder, double limit, Trend trend,
                                            double trend_tol = 0.0, double limit_tol = -1.0);

} // namespace bmc
