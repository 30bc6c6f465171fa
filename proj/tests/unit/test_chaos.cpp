#include <doctest.h>

#include "bmc/chaos.hpp"
#include "bmc/error.hpp"
#include "bmc/heatmap.hpp"
#include "bmc/local_time_field.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace bmc;

namespace {

const double kE3 = std::exp(-3.0);

struct Fixture {
    DomainSpec disc = DomainSpec::disc({0, 0}, 1.0, {0, 0});
    LatticeConfig cfg{1.0 / 100};
    OccupationField field = run_killed_walk(disc, cfg, {5, 0});
    LocalTimeField lt = compute_local_time_field(field, kE3, cfg);
    std::vector<std::uint8_t> whole = region_mask(field, WholeDomain{}, cfg);
};

} // namespace

TEST_CASE("normalisations") {
    CHECK(mu_normalization(0.5, std::exp(-4.0)) == doctest::Approx(2.0 * std::exp(-0.5)).epsilon(1e-14));
    CHECK(nu_normalization(0.8, std::exp(-4.0)) == doctest::Approx(4.0 * std::exp(1.28)).epsilon(1e-14));
    CHECK(mu_normalization(1.0, 0.1) == doctest::Approx(0.4798530).epsilon(1e-6));
}

TEST_CASE("scale ladder") {
    const ScaleLadder l{1.0, 3, 5};
    const auto v = l.values();
    REQUIRE(v.size() == 3);
    CHECK(v[0] == doctest::Approx(std::exp(-3.0)));
    CHECK(v[2] == doctest::Approx(std::exp(-5.0)));
    CHECK_NOTHROW(l.validate(1.0 / 400));
    CHECK_THROWS_AS(l.validate(1.0 / 100), SubResolution);
    CHECK_THROWS_AS((ScaleLadder{1.0, 5, 3}.validate(1e-3)), DomainError);
}

TEST_CASE("stencil field reproduces the per-circle estimator") {
    Fixture f;
    double worst = 0.0;
    for (int j = 0; j < f.field.ny; j += 2)
        for (int i = 0; i < f.field.nx; i += 2) {
            const double a = f.lt.values[f.field.index(i, j)];
            const double b = local_time_estimate(f.field, {f.field.site(i, j), kE3}, f.cfg).value;
            worst = std::max(worst, std::abs(a - b));
        }
    CHECK(worst < 1e-14);
    CHECK_THROWS_AS(compute_local_time_field(f.field, 0.015, f.cfg), SubResolution);
}

TEST_CASE("constant field masses") {
    Fixture f;
    const double g = 0.8, v = 1.7;
    LocalTimeField flat = f.lt;
    std::fill(flat.values.begin(), flat.values.end(), v * v * kE3);
    const double n = static_cast<double>(std::count(f.whole.begin(), f.whole.end(), 1));
    const double h2 = 1e-4;
    const auto mu = build_mu(flat, f.whole, g);
    CHECK(mu.mass == doctest::Approx(std::sqrt(3.0) * std::exp(-3.0 * 0.32) * h2 * n * std::exp(g * v)).epsilon(1e-12));
    CHECK(mu.region_cells == static_cast<std::size_t>(n));
    // cut = b + 3 gamma = 2.4 + b
    CHECK(build_nu(flat, f.whole, g, -0.8) == doctest::Approx(3.0 * std::exp(0.96) * h2 * n).epsilon(1e-12));
    CHECK(build_nu(flat, f.whole, g, -0.6) == 0.0);
}

TEST_CASE("occupation and local-time overloads agree") {
    Fixture f;
    const auto a = build_mu(f.field, 0.8, kE3, WholeDomain{}, f.cfg);
    const auto b = build_mu(f.lt, f.whole, 0.8);
    CHECK(a.mass == b.mass);
    CHECK(build_nu(f.field, 0.8, kE3, WholeDomain{}, 0.3, f.cfg) == build_nu(f.lt, f.whole, 0.8, 0.3));
}

TEST_CASE("sparse samples reproduce dense masses") {
    Fixture f;
    const Region ann = Annulus{{0, 0}, 0.2, 0.8};
    const Lattice lat(f.disc, f.cfg);
    const ScaleSampler sampler(lat, kE3, ann);
    auto scratch = sampler.make_scratch();
    const auto mask = region_mask(f.field, ann, f.cfg);
    for (std::uint64_t r = 0; r < 5; ++r) {
        const auto fld = run_killed_walk(f.disc, f.cfg, {17, r});
        const auto s = sampler.sample(fld, scratch);
        const auto lt = compute_local_time_field(fld, kE3, f.cfg);
        CHECK(s.n_cells == static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1)));
        for (double g : {0.3, 0.8, 1.5}) {
            CHECK(mu_mass(s, g, kE3, 0.01) == doctest::Approx(build_mu(lt, mask, g).mass).epsilon(1e-12));
            for (double b : {-5.0, 0.0, 0.5})
                CHECK(nu_mass(s, g, kE3, 0.01, b) == doctest::Approx(build_nu(lt, mask, g, b)).epsilon(1e-12));
            CHECK(thick_area(s, g, kE3, 0.01) == doctest::Approx(thick_points(lt, mask, g).area).epsilon(1e-12));
        }
    }
}

TEST_CASE("nu is non-increasing in b and thick sets nest") {
    Fixture f;
    double prev = INFINITY;
    for (double b = -6.0; b <= 3.0; b += 0.25) {
        const double v = build_nu(f.lt, f.whole, 0.8, b);
        CHECK(v <= prev);
        prev = v;
    }
    auto outer = thick_points(f.lt, f.whole, 0.0);
    CHECK(outer.area == doctest::Approx(1e-4 * std::count(f.whole.begin(), f.whole.end(), 1)));
    for (double g = 0.2; g < 2.0; g += 0.2) {
        const auto inner = thick_points(f.lt, f.whole, g);
        for (std::size_t k = 0; k < inner.mask.size(); ++k)
            if (inner.mask[k]) REQUIRE(outer.mask[k]);
        CHECK(inner.area <= outer.area);
        outer = inner;
    }
}

TEST_CASE("gamma range") {
    Fixture f;
    CHECK_THROWS_AS(build_mu(f.lt, f.whole, 2.0), DomainError);
    CHECK_THROWS_AS(build_mu(f.lt, f.whole, 0.0), DomainError);
    CHECK_THROWS_AS(build_nu(f.lt, f.whole, -0.5, 0.0), DomainError);
}

TEST_CASE("synthetic profile and consistency ratios") {
    // gamma = 1, eps = e^{-3}: cut at b is 3 + b
    ThicknessSample s{10, {2.0, 3.2, 3.6, 4.5}};
    const double eps = kE3, h = 0.1;
    const double nn = 3.0 * std::exp(1.5) * h * h;
    CHECK(nu_mass(s, 1.0, eps, h, 0.0) == doctest::Approx(3 * nn));
    CHECK(nu_mass(s, 1.0, eps, h, 0.5) == doctest::Approx(2 * nn));
    CHECK(nu_mass(s, 1.0, eps, h, -3.5) == doctest::Approx(10 * nn));
    const auto p = nu_exponential_profile({s, ThicknessSample{10, {}}}, 1.0, eps, h, {0.0, 0.5});
    CHECK(p.used == 1);
    CHECK(p.dropped == 1);
    CHECK(p.ratio[0] == doctest::Approx(1.0));
    CHECK(p.ratio[1] == doctest::Approx(std::exp(0.5) * 2.0 / 3.0));
    const auto mn = mu_nu_consistency({s}, 1.0, eps, h);
    const double mu = std::sqrt(3.0) * std::exp(-1.5) * h * h *
                      (6 + std::exp(2.0) + std::exp(3.2) + std::exp(3.6) + std::exp(4.5));
    CHECK(mn.numerator == doctest::Approx(mu / std::sqrt(2 * std::numbers::pi)));
    CHECK(mn.denominator == doctest::Approx(3 * nn));
    CHECK(mn.ratio == doctest::Approx(mn.numerator / mn.denominator));
    // thick: v^2/9 >= 1 for v >= 3
    CHECK(thick_area(s, 1.0, eps, h) == doctest::Approx(3 * h * h));
    const auto ta = thick_area_consistency({s}, 1.0, eps, h);
    CHECK(ta.numerator == doctest::Approx(3.0 * std::exp(1.5) * 3 * h * h));
}

TEST_CASE("good event filtering") {
    Fixture f;
    const GoodEventParams p{1.2, std::exp(-2.0), 2.0};
    const auto ge = good_event_mask(f.field, 0.8, kE3, p, f.cfg);
    REQUIRE(ge.ladder.size() == 2);
    CHECK(ge.ladder[0] == doctest::Approx(std::exp(-2.0)));
    CHECK(ge.ladder[1] == doctest::Approx(kE3));
    for (std::size_t k = 0; k < ge.g.size(); ++k) {
        if (ge.g_prime[k]) REQUIRE(ge.g[k]);
        if (ge.g[k]) {
            const auto x = f.field.site(static_cast<int>(k % f.field.nx), static_cast<int>(k / f.field.nx));
            REQUIRE(norm(x) > p.eps0);
            REQUIRE(1.0 - norm(x) > p.eps0);
        }
    }
    for (double b : {-1.0, 0.0, 0.5})
        CHECK(build_nu_filtered(f.lt, f.whole, ge.g, 0.8, b) <= build_nu(f.lt, f.whole, 0.8, b));
    CHECK(build_mu_filtered(f.lt, f.whole, ge.g, 0.8) <= build_mu(f.lt, f.whole, 0.8).mass);
    std::vector<std::uint8_t> all(f.whole.size(), 1);
    CHECK(build_mu_filtered(f.lt, f.whole, all, 0.8) == doctest::Approx(build_mu(f.lt, f.whole, 0.8).mass));
    CHECK_THROWS_AS(good_event_mask(f.field, 0.8, kE3, {0.7, std::exp(-2.0), 2.0}, f.cfg), DomainError);
}

TEST_CASE("mass concentrates as gamma grows") {
    const auto sq = DomainSpec::rectangle({0, 0}, 1, 1, {0.5, 0.5});
    const LatticeConfig cfg{1.0 / 200};
    const auto fld = run_killed_walk(sq, cfg, {42, 0});
    const auto lt = compute_local_time_field(fld, std::exp(-3.0), cfg);
    const auto reg = region_mask(fld, WholeDomain{}, cfg);
    double prev = 0.0;
    for (double g : {0.3, 0.8, 1.3, 1.8}) {
        const double t = top_mass_fraction(build_mu(lt, reg, g), 0.01);
        CHECK(t > prev);
        prev = t;
    }
}

TEST_CASE("heatmap rendering and outputs") {
    Fixture f;
    const auto cf = build_mu(f.lt, f.whole, 0.8);
    const auto a = render_heatmap(cf), b = render_heatmap(cf);
    CHECK(a.width == f.field.nx);
    CHECK(a.height == f.field.ny);
    CHECK(a.rgb.size() == 3u * a.width * a.height);
    CHECK(a.rgb == b.rgb);
    CHECK(a.log_lo <= a.log_hi);
    const auto over = render_heatmap(cf, &f.field);
    CHECK(over.rgb != a.rgb);

    const auto dir = std::filesystem::temp_directory_path() / "bmc_test_chaos";
    std::filesystem::create_directories(dir);
    write_ppm(a, dir / "h.ppm");
    std::ifstream in(dir / "h.ppm", std::ios::binary);
    std::string magic;
    int w = 0, h = 0, mx = 0;
    in >> magic >> w >> h >> mx;
    CHECK(magic == "P6");
    CHECK(w == a.width);
    CHECK(mx == 255);
    write_chaos_csv(cf, dir / "h.csv");
    std::ifstream csv(dir / "h.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "gamma,eps,cell_i,cell_j,x,y,weight");
    const auto side = heatmap_sidecar(cf, a);
    CHECK(side.at("gamma").get<double>() == 0.8);

    ChaosField empty = cf;
    std::fill(empty.in_region.begin(), empty.in_region.end(), 0);
    std::fill(empty.weights.begin(), empty.weights.end(), 0.0);
    empty.region_cells = 0;
    empty.mass = 0.0;
    const auto e = render_heatmap(empty);
    CHECK(e.empty_region);
    CHECK(e.width == 1);
}

TEST_CASE("per-walk records give the same ensemble ratios") {
    const double eps = kE3, h = 0.1;
    const std::vector<ThicknessSample> s{{10, {2.0, 3.2, 3.6, 4.5}}, {10, {}}, {7, {3.1, 5.0}}};
    const std::vector<double> grid{0.0, 0.5, 1.0};
    std::vector<WalkMasses> m;
    for (const auto& x : s) m.push_back(walk_masses(x, 1.0, eps, h, grid));
    const auto a = nu_exponential_profile(s, 1.0, eps, h, grid), b = nu_exponential_profile(m, 1.0, grid);
    CHECK(a.ratio == b.ratio);
    CHECK(a.dropped == b.dropped);
    CHECK(mu_nu_consistency(s, 1.0, eps, h).ratio == mu_nu_consistency(m, 1.0).ratio);
    CHECK(thick_area_consistency(s, 1.0, eps, h).ratio == thick_area_consistency(m, 1.0).ratio);
    CHECK_THROWS_AS(nu_exponential_profile(m, 1.0, {0.0}), DomainError);
}
