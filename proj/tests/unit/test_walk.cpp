#include <doctest.h>

#include "bmc/error.hpp"
#include "bmc/geometry.hpp"
#include "bmc/occf.hpp"
#include "bmc/stats.hpp"
#include "bmc/walk.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <numeric>

using namespace bmc;

namespace {

bool on_kill_layer(const Lattice& lat, GridIndex g) {
    return g.valid() && !lat.live(lat.index(g.i, g.j));
}

} // namespace

TEST_CASE("single interior site exits in one step") {
    const double h = 0.01;
    const auto d = DomainSpec::rectangle({0, 0}, 2 * h, 2 * h, {h, h});
    const Lattice lat(d, {h});
    CHECK(lat.nx() == 3);
    CHECK(lat.live_count() == 1);
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto f = run_killed_walk(d, {h}, {s, 0});
        CHECK(f.step_count == 1);
        CHECK(f.total() == 2);
        CHECK(on_kill_layer(lat, f.exit_site));
    }
}

TEST_CASE("401x401 square lattice") {
    const double h = 1.0 / 400;
    const auto d = DomainSpec::rectangle({0, 0}, 1, 1, {0.5, 0.5});
    const Lattice lat(d, {h});
    CHECK(lat.nx() == 401);
    CHECK(lat.ny() == 401);
    CHECK(lat.live_count() == 399u * 399u);
    CHECK(lat.start_index() == lat.index(200, 200));
    Walker w(lat);
    const auto& f = w.run({1, 0});
    CHECK_FALSE(f.truncated);
    CHECK(f.total() == f.step_count + 1);
    const auto e = f.exit_site;
    CHECK((e.i == 0 || e.j == 0 || e.i == 400 || e.j == 400));
}

TEST_CASE("disc rasterisation is symmetric and centre-inclusive") {
    const auto d = DomainSpec::disc({0.25, -0.5}, 1.0, {0.25, -0.5});
    const Lattice lat(d, {1.0 / 20});
    CHECK(lat.nx() == 43);
    // (20, 0) offset sits exactly on the circle and is killed; (19, 6) is inside.
    const int c = 21;
    CHECK_FALSE(lat.live(lat.index(c + 20, c)));
    CHECK(lat.live(lat.index(c + 19, c + 6)));
    for (int j = 0; j < lat.ny(); ++j)
        for (int i = 0; i < lat.nx(); ++i) {
            const bool v = lat.live(lat.index(i, j));
            REQUIRE(v == lat.live(lat.index(lat.nx() - 1 - i, j)));
            REQUIRE(v == lat.live(lat.index(j, i)));
            if (i == 0 || j == 0 || i == lat.nx() - 1 || j == lat.ny() - 1) REQUIRE_FALSE(v);
        }
}

TEST_CASE("occupation conservation and kill-site exit") {
    const auto disc = DomainSpec::disc({0, 0}, 1.0, {0.3, -0.4});
    const auto rect = DomainSpec::rectangle({-1, 0}, 2.0, 0.5, {0.7, 0.1});
    for (const auto& d : {disc, rect}) {
        const Lattice lat(d, {1.0 / 40});
        Walker w(lat);
        for (std::uint64_t r = 0; r < 300; ++r) {
            const auto& f = w.run({77, r});
            REQUIRE(f.total() == f.step_count + 1);
            REQUIRE(on_kill_layer(lat, f.exit_site));
            REQUIRE(f.counts[lat.start_index()] >= 1);
            std::size_t distinct = 0;
            for (auto c : f.counts) distinct += c > 0;
            REQUIRE(distinct == f.visited.size());
        }
    }
}

TEST_CASE("determinism and walker reuse") {
    const auto d = DomainSpec::disc({0, 0}, 1.0, {0, 0});
    const LatticeConfig cfg{1.0 / 60};
    const auto a = run_killed_walk(d, cfg, {5, 3});
    const auto b = run_killed_walk(d, cfg, {5, 3});
    CHECK(a.counts == b.counts);
    CHECK(a.exit_site == b.exit_site);
    CHECK(a.step_count == b.step_count);
    const auto c = run_killed_walk(d, cfg, {5, 4});
    CHECK(a.counts != c.counts);

    const Lattice lat(d, cfg);
    Walker w(lat);
    w.run({5, 99});
    const auto& again = w.run({5, 3});
    CHECK(again.counts == a.counts);
    CHECK(again.step_count == a.step_count);
}

TEST_CASE("truncation is flagged") {
    const auto d = DomainSpec::disc({0, 0}, 1.0, {0, 0});
    LatticeConfig cfg{1.0 / 200};
    cfg.max_steps = 10;
    const auto f = run_killed_walk(d, cfg, {1, 1});
    CHECK(f.truncated);
    CHECK(f.step_count == 10);
    CHECK(f.total() == 11);
    CHECK_FALSE(f.exit_site.valid());
}

TEST_CASE("mean exit time matches the Brownian value") {
    // E[tau] = (rho^2 - |x0|^2)/2 with one step worth h^2/2 of Brownian time.
    const double h = 1.0 / 100;
    const auto d = DomainSpec::disc({0, 0}, 1.0, {0, 0});
    const Lattice lat(d, {h});
    const auto r = run_ensemble(
        lat, {4000, 21, 0}, [&](const OccupationField& f, std::size_t, unsigned) { return double(f.step_count); },
        0.0, [](double acc, double v) { return acc + v; });
    const double mean_tau = r.value / 4000 * h * h / 2;
    CHECK(mean_tau == doctest::Approx(0.5).epsilon(0.05));
    CHECK(r.truncated == 0);
}

TEST_CASE("ensemble results do not depend on the worker count") {
    const auto d = DomainSpec::disc({0, 0}, 1.0, {0.2, 0.1});
    const Lattice lat(d, {1.0 / 50});
    auto map = [&](const OccupationField& f, std::size_t, unsigned) {
        return local_time_estimate(f, {{0, 0}, 0.2}, lat.config()).value;
    };
    const auto one = map_replicas(lat, {64, 8, 1}, map);
    const auto four = map_replicas(lat, {64, 8, 4}, map);
    CHECK(one.values == four.values);
    const auto single = run_killed_walk(d, lat.config(), {8, 0});
    CHECK(one.values[0] == local_time_estimate(single, {{0, 0}, 0.2}, lat.config()).value);
}

TEST_CASE("local time estimator arithmetic") {
    const double h = 0.01;
    const auto d = DomainSpec::disc({0, 0}, 1.0, {0.5, 0});
    const Lattice lat(d, {h});
    Walker w(lat);
    OccupationField f = w.run({1, 0});
    std::fill(f.counts.begin(), f.counts.end(), 0u);
    f.exit_site = {};
    const CircleSpec circ{{0, 0}, 0.3};
    CHECK(local_time_estimate(f, circ, {h}).value == 0.0);
    CHECK(local_time_estimate(f, circ, {h}).shell_sites > 0);
    // one shell site at distance exactly 0.3 carrying count 7
    const auto g = lat.nearest({0.3, 0});
    f.counts[f.index(g.i, g.j)] = 7;
    CHECK(local_time_estimate(f, circ, {h}).value == doctest::Approx(h * 7 / 4.0).epsilon(1e-14));
    // circle leaving the domain follows the zero convention
    CHECK(local_time_estimate(f, {{0.8, 0}, 0.3}, {h}).value == 0.0);
    // window of half a lattice spacing can contain no site at all
    LatticeConfig narrow{h};
    narrow.window = h / 2;
    CHECK(local_time_estimate(f, {{0.0025, 0.0025}, 0.02}, narrow).value >= 0.0);
}

TEST_CASE("local time profile") {
    const double h = 1.0 / 100;
    const auto d = DomainSpec::disc({0, 0}, 1.0, {0.05, 0});
    const auto f = run_killed_walk(d, {h}, {3, 0});
    const std::vector<double> radii{std::exp(-1.0), std::exp(-2.0)};
    const auto p = local_time_profile(f, {0, 0}, radii, {h});
    REQUIRE(p.values.size() == 2);
    CHECK(p.values[0] == local_time_estimate(f, {{0, 0}, radii[0]}, {h}).value);
    CHECK(p.values[1] == local_time_estimate(f, {{0, 0}, radii[1]}, {h}).value);
    const auto q = local_time_profile(f, {0.5, 0}, {0.6, 0.2}, {h});
    CHECK(q.values[0] == 0.0);
    CHECK_THROWS_AS(local_time_profile(f, {0, 0}, {0.015, 0.012}, {h}), SubResolution);
    CHECK_THROWS_AS(local_time_profile(f, {0, 0}, {0.1, 0.2}, {h}), DomainError);
}

TEST_CASE("exit samples") {
    const double h = 1.0 / 100;
    const auto d = DomainSpec::disc({0, 0}, 1.0, {0.1, 0});
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto e = conditional_exit_sample(d, {{0, 0}, 0.1}, {s, 0}, {h});
        CHECK(e.hit);
        CHECK(e.local_time > 0.0);
        CHECK(norm(e.exit_point) >= 1.0 - 1e-12);
    }
    CHECK_THROWS_AS(conditional_exit_sample(d, {{0.5, 0}, 0.6}, {1, 0}, {h}), DomainError);
}

TEST_CASE("OCCF round trip") {
    const auto d = DomainSpec::rectangle({0, 0}, 1, 1, {0.5, 0.5});
    const auto f = run_killed_walk(d, {1.0 / 40}, {9, 2});
    const auto path = std::filesystem::temp_directory_path() / "bmc_test_walk.occf";
    write_occf(path, f);
    CHECK(std::filesystem::file_size(path) == 16 + 4 * 41 * 41);
    const auto g = read_occf(path);
    CHECK(g.nx == 41);
    CHECK(g.ny == 41);
    CHECK(g.counts == f.counts);
    const auto j = occf_sidecar(f, {1.0 / 40});
    CHECK(j["step_count"].get<std::uint64_t>() == f.step_count);
    CHECK(j["seed"]["replica_index"].get<int>() == 2);
    std::filesystem::remove(path);
}

TEST_CASE("ring mean tracks the lattice shell count") {
    // The estimator normalises by the annulus area 4 pi eps w; the actual number of
    // shell sites differs from it by the lattice-point error, and so does the mean.
    const double h = 1.0 / 100, eps = 0.1;
    const auto d = DomainSpec::disc({0, 0}, 1.0, {eps, 0});
    const Lattice lat(d, {h});
    auto r = map_replicas(lat, {20000, 77, 0}, [&](const OccupationField& f, std::size_t, unsigned) {
        return local_time_estimate(f, {{0, 0}, eps}, {h});
    });
    std::vector<double> v;
    for (const auto& e : r.values) v.push_back(e.value);
    const auto m = mc_mean(v);
    const double shell_ratio = r.values[0].shell_sites * h / (4 * std::numbers::pi * eps);
    CHECK(shell_ratio == doctest::Approx(0.987).epsilon(2e-3));
    const double corrected = expected_local_time_ring(eps, 1.0) * shell_ratio;
    CHECK(std::abs(m.mean - corrected) < 4 * m.std_error);
}

TEST_CASE("exit octants are equiprobable from the centre of a disc") {
    const auto d = DomainSpec::disc({0, 0}, 1.0, {0, 0});
    const Lattice lat(d, {1.0 / 50});
    const auto s = lat.cell(lat.start_index());
    auto r = map_replicas(lat, {20000, 5, 0}, [&](const OccupationField& f, std::size_t rep, unsigned) {
        const int di = f.exit_site.i - s.i, dj = f.exit_site.j - s.j;
        double th = std::atan2(static_cast<double>(dj), static_cast<double>(di));
        if (th < 0) th += 2 * std::numbers::pi;
        int k = static_cast<int>(std::floor(th / (std::numbers::pi / 4))) % 8;
        if ((di == 0 || dj == 0 || std::abs(di) == std::abs(dj)) && rep % 2) k = (k + 7) % 8;
        return k;
    });
    std::vector<double> obs(8, 0.0), exp(8, 20000 / 8.0);
    for (int k : r.values) obs[k] += 1;
    CHECK(chi_square(obs, exp).p_value > 0.001);
}
