#include <doctest.h>

#include "bmc/config.hpp"
#include "bmc/error.hpp"
#include "bmc/suite.hpp"

#include <filesystem>
#include <fstream>

using namespace bmc;

TEST_CASE("suite map") {
    CHECK(suite_criteria("none").empty());
    CHECK(suite_criteria("all").size() == 12);
    CHECK(suite_criteria("walk") == std::vector<std::string>{"AC-1", "AC-2", "AC-3"});
    CHECK(suite_criteria("AC-7") == std::vector<std::string>{"AC-7"});
    for (const auto& s : {"bessel", "chaos", "figure", "determinism"}) CHECK_FALSE(suite_criteria(s).empty());
    CHECK_THROWS_AS(suite_criteria("AC-13"), DomainError);
    CHECK_THROWS_AS(suite_criteria("everything"), DomainError);
}

TEST_CASE("empty suite passes") {
    SuiteConfig c;
    c.suite = "none";
    const auto r = run_acceptance_suite(c);
    CHECK(r.criteria.empty());
    CHECK(r.passed());
}

TEST_CASE("small bessel criteria are deterministic") {
    SuiteConfig c;
    c.suite = "AC-6";
    c.ac5.chi_draws = 20000;
    c.ac5.martingale_draws = 20000;
    c.ac11.draws = 5000;
    for (const auto& id : {"AC-5", "AC-6", "AC-10", "AC-11"}) {
        c.suite = id;
        const auto a = suite_json(run_acceptance_suite(c), false).dump();
        c.workers = 3;
        const auto b = suite_json(run_acceptance_suite(c), false).dump();
        c.workers = 0;
        CHECK(a == b);
    }
    c.suite = "AC-6";
    const auto r = run_acceptance_suite(c);
    CHECK(r.passed());
    const auto j = suite_json(r, true);
    CHECK(j.at("criteria")[0].contains("runtime_s"));
    CHECK_FALSE(suite_json(r, false).at("criteria")[0].contains("runtime_s"));
    for (const auto& ch : j.at("checks")) CHECK(evaluate(report_from_json(ch)) == report_from_json(ch).status);
    CHECK(suite_markdown(r).find("AC-6/b-shift") != std::string::npos);
    CHECK(criterion_line(r.criteria[0], r.checks).rfind("AC-6 PASS", 0) == 0);
}

TEST_CASE("budget overrun fails a criterion") {
    CriterionResult c{"AC-10", Status::pass, 2.0, 1.0};
    CHECK_FALSE(c.passed());
    c.runtime_s = 0.5;
    CHECK(c.passed());
}

TEST_CASE("suite config round trip and partial override") {
    SuiteConfig c;
    c.ac1.replicas = 123;
    c.ac8.eps_p = {3, 4};
    nlohmann::json j = c;
    CHECK(nlohmann::json(j.get<SuiteConfig>()) == j);
    const auto p = nlohmann::json{{"ac4", {{"replicas", 77}}}}.get<SuiteConfig>();
    CHECK(p.ac4.replicas == 77);
    CHECK(p.ac4.gamma == 0.5);
    CHECK(p.ac1.replicas == 10000);
}

TEST_CASE("run config") {
    RunConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.gammas.size() == 4);
    nlohmann::json j = c;
    CHECK(nlohmann::json(j.get<RunConfig>()) == j);
    CHECK(j.get<RunConfig>().domain == c.domain);

    set_json_path(j, "verify.ac1.replicas", 50);
    set_json_path(j, "lattice.mesh", 0.005);
    const auto d = j.get<RunConfig>();
    CHECK(d.verify.ac1.replicas == 50);
    CHECK(d.lattice.mesh == 0.005);
    CHECK_THROWS_AS(set_json_path(j, "seed.x", 1), DomainError);

    auto bad = c;
    bad.gammas = {2.5};
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = c;
    bad.eps = {0.004};
    CHECK_THROWS_AS(bad.validate(), SubResolution);
    bad = c;
    bad.suite = "nope";
    CHECK_THROWS_AS(bad.validate(), DomainError);

    c.seed = 7;
    c.workers = 2;
    c.suite = "bessel";
    const auto s = c.suite_config();
    CHECK(s.seed == 7);
    CHECK(s.workers == 2);
    CHECK(s.suite == "bessel");

    const auto path = std::filesystem::temp_directory_path() / "bmc_run_config.json";
    std::ofstream(path) << nlohmann::json{{"seed", 99}, {"gammas", {0.5}}}.dump();
    const auto l = load_run_config(path);
    CHECK(l.seed == 99);
    CHECK(l.gammas == std::vector<double>{0.5});
    CHECK(l.lattice.mesh == c.lattice.mesh);
}
