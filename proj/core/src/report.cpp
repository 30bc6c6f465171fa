#include "bmc/report.hpp"

#include "bmc/error.hpp"

#include <cmath>
#include <stdexcept>

namespace bmc {

namespace {

constexpr std::pair<Comparator, const char*> kComparators[] = {
    {Comparator::abs_diff, "abs_diff"},
    {Comparator::rel_diff, "rel_diff"},
    {Comparator::at_most, "at_most"},
    {Comparator::at_least, "at_least"},
    {Comparator::in_range, "in_range"},
    {Comparator::strictly_decreasing, "strictly_decreasing"},
    {Comparator::strictly_increasing, "strictly_increasing"},
    {Comparator::non_increasing, "non_increasing"},
};

bool holds(const CheckReport& r) {
    const auto& o = r.observed;
    const auto& e = r.expected;
    if (o.empty()) return false;
    for (double v : o)
        if (!std::isfinite(v)) return false;
    const double tol = r.tolerance;
    auto pairwise = [&](auto pred) {
        if (e.size() != 1 && e.size() != o.size()) return false;
        for (std::size_t k = 0; k < o.size(); ++k)
            if (!pred(o[k], e[e.size() == 1 ? 0 : k])) return false;
        return true;
    };
    switch (r.comparator) {
    case Comparator::abs_diff:
        return pairwise([&](double a, double b) { return std::abs(a - b) <= tol; });
    case Comparator::rel_diff:
        return pairwise([&](double a, double b) { return std::abs(a - b) <= tol * std::abs(b); });
    case Comparator::at_most:
        return pairwise([&](double a, double b) { return a <= b + tol; });
    case Comparator::at_least:
        return pairwise([&](double a, double b) { return a >= b - tol; });
    case Comparator::in_range:
        if (e.size() != 2) return false;
        for (double v : o)
            if (!(v >= e[0] && v <= e[1])) return false;
        return true;
    case Comparator::strictly_decreasing:
    case Comparator::strictly_increasing:
    case Comparator::non_increasing:
        if (o.size() < 2) return false;
        for (std::size_t k = 1; k < o.size(); ++k) {
            const bool ok = r.comparator == Comparator::strictly_decreasing   ? o[k] < o[k - 1]
                            : r.comparator == Comparator::strictly_increasing ? o[k] > o[k - 1]
                                                                              : o[k] <= o[k - 1] + tol;
            if (!ok) return false;
        }
        return true;
    }
    return false;
}

} // namespace

Status evaluate(const CheckReport& r) {
    if (holds(r)) return Status::pass;
    return r.outside_regime ? Status::regime_flagged : Status::fail;
}

CheckReport make_check(std::string id, std::string criterion, std::string anchor, Comparator cmp,
                       std::vector<double> observed, std::vector<double> expected, double tolerance,
                       std::string note, bool outside_regime) {
    CheckReport r;
    r.check_id = std::move(id);
    r.criterion = std::move(criterion);
    r.anchor = std::move(anchor);
    r.comparator = cmp;
    r.observed = std::move(observed);
    r.expected = std::move(expected);
    r.tolerance = tolerance;
    r.outside_regime = outside_regime;
    r.note = std::move(note);
    r.status = evaluate(r);
    return r;
}

const char* to_string(Status s) {
    switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::regime_flagged: return "regime-flagged";
    }
    return "fail";
}

const char* to_string(Comparator c) {
    for (const auto& [k, name] : kComparators)
        if (k == c) return name;
    return "abs_diff";
}

Comparator comparator_from_string(const std::string& s) {
    for (const auto& [k, name] : kComparators)
        if (s == name) return k;
    throw DomainError("unknown comparator: " + s);
}

namespace {

// JSON has no inf/nan; keep them readable and round-trippable.
nlohmann::json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double from_number(const nlohmann::json& j) {
    if (j.is_number()) return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "nan") return std::nan("");
    return s == "inf" ? HUGE_VAL : -HUGE_VAL;
}

} // namespace

nlohmann::json report_to_json(const CheckReport& r, bool include_runtime) {
    nlohmann::json obs = nlohmann::json::array(), exp = nlohmann::json::array();
    for (double v : r.observed) obs.push_back(number(v));
    for (double v : r.expected) exp.push_back(number(v));
    nlohmann::json j{{"check_id", r.check_id},
                     {"criterion", r.criterion},
                     {"anchor", r.anchor},
                     {"comparator", to_string(r.comparator)},
                     {"observed", obs},
                     {"expected", exp},
                     {"tolerance", number(r.tolerance)},
                     {"outside_regime", r.outside_regime},
                     {"status", to_string(r.status)},
                     {"note", r.note}};
    if (include_runtime) j["runtime_s"] = r.runtime_s;
    return j;
}

CheckReport report_from_json(const nlohmann::json& j) {
    CheckReport r;
    r.check_id = j.at("check_id").get<std::string>();
    r.criterion = j.value("criterion", "");
    r.anchor = j.value("anchor", "");
    r.comparator = comparator_from_string(j.at("comparator").get<std::string>());
    for (const auto& v : j.at("observed")) r.observed.push_back(from_number(v));
    for (const auto& v : j.at("expected")) r.expected.push_back(from_number(v));
    r.tolerance = from_number(j.at("tolerance"));
    r.outside_regime = j.value("outside_regime", false);
    r.note = j.value("note", "");
    r.runtime_s = j.value("runtime_s", 0.0);
    const auto st = j.at("status").get<std::string>();
    r.status = st == "pass" ? Status::pass : st == "regime-flagged" ? Status::regime_flagged : Status::fail;
    return r;
}

std::vector<CheckReport> convergence_ladder(const std::string& id, const std::string& criterion,
                                            const std::string& anchor,
                                            const std::function<double(double)>& estimator,
                                            const std::vector<double>& ladder, double limit, Trend trend,
                                            double trend_tol, double limit_tol) {
    if (ladder.size() < 3) throw DomainError("convergence_ladder: needs at least 3 rungs");
    std::vector<double> values, gaps;
    for (double x : ladder) {
        values.push_back(estimator(x));
        gaps.push_back(std::abs(values.back() - limit));
    }
    std::string note = "values:";
    for (double v : values) note += " " + std::to_string(v);
    std::vector<CheckReport> out;
    out.push_back(make_check(id + "/trend", criterion, anchor,
                             trend == Trend::strictly_decreasing ? Comparator::strictly_decreasing
                                                                 : Comparator::non_increasing,
                             gaps, {}, trend_tol, note));
    if (limit_tol >= 0.0)
        out.push_back(make_check(id + "/limit", criterion, anchor, Comparator::abs_diff, {values.back()}, {limit},
                                 limit_tol, note));
    return out;
}

} // namespace bmc
