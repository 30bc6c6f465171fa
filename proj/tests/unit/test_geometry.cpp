#include <doctest.h>

#include "bmc/error.hpp"
#include "bmc/geometry.hpp"
#include "bmc/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace bmc;

namespace {

const double kPi = std::numbers::pi;
const DomainSpec unit = DomainSpec::disc({0, 0}, 1.0, {0, 0});

// Frozen with 30-digit mpmath quadrature of sqrt(2 pi) g (1-r^2)^(g^2/2) (-log r) over the region.
constexpr double kFullDiscGamma1 = 3.36089406627784;
constexpr double kAnnulusGammaHalf = 1.43264934796911;
// Integral of R^{0.32} G over 0.2 < |x| < 0.8 (no sqrt(2 pi) gamma prefactor).
constexpr double kAnnulusGamma08Bare = 1.07707062512230;

} // namespace

TEST_CASE("green_disc closed-form values") {
    CHECK(green_disc(unit, {0, 0}, {0.5, 0}) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(green_disc(unit, {0, 0}, {1, 0}) == doctest::Approx(0.0));
    const auto big = DomainSpec::disc({0, 0}, 2.0, {0, 0});
    CHECK(green_disc(big, {1, 0}, {0, 1}) == doctest::Approx(0.376885901188190).epsilon(1e-13));
    CHECK_THROWS_AS(green_disc(unit, {0.2, 0.1}, {0.2, 0.1}), DomainError);
    CHECK_THROWS_AS(green_disc(unit, {1.1, 0}, {0.2, 0.1}), DomainError);
    const auto rect = DomainSpec::rectangle({0, 0}, 1, 1, {0.5, 0.5});
    CHECK_THROWS_AS(green_disc(rect, {0.2, 0.2}, {0.5, 0.5}), UnsupportedDomain);
}

TEST_CASE("green_disc is symmetric") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    const auto d = DomainSpec::disc({0.3, -0.2}, 1.3, {0.3, -0.2});
    int n = 0;
    while (n < 2000) {
        Point2 y{u(rng), u(rng)}, z{u(rng), u(rng)};
        if (!d.contains(y) || !d.contains(z)) continue;
        ++n;
        const double a = green_disc(d, y, z), b = green_disc(d, z, y);
        REQUIRE(std::abs(a - b) <= 1e-12 * std::max(1.0, a));
        REQUIRE(a >= 0.0);
    }
}

TEST_CASE("green asymptotic recovers the conformal radius") {
    const auto d = DomainSpec::disc({0.1, 0.2}, 2.0, {0.1, 0.2});
    for (Point2 x : {Point2{0.5, 0.2}, Point2{0.9, -0.4}, Point2{-1.2, 0.8}}) {
        const double logR = std::log(conformal_radius(d, x));
        double prev = 1e300;
        for (double delta : {1e-3, 1e-4, 1e-5}) {
            const double g = green_disc(d, x, x + Point2{delta * 0.6, delta * 0.8});
            const double res = std::abs(g + std::log(delta) - logR);
            CHECK(res < prev);
            prev = res;
        }
        CHECK(prev < 1e-4);
    }
}

TEST_CASE("conformal radius") {
    CHECK(conformal_radius(unit, {0, 0}) == doctest::Approx(1.0));
    CHECK(conformal_radius(unit, {0.6, 0}) == doctest::Approx(0.64));
    CHECK(conformal_radius(DomainSpec::disc({0, 0}, 2.0, {0, 0}), {0, 0}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(conformal_radius(unit, {1, 0}), DomainError);
    const auto rect = DomainSpec::rectangle({0, 0}, 1, 1, {0.5, 0.5});
    CHECK_THROWS_AS(conformal_radius(rect, {0.5, 0.5}), UnsupportedDomain);
}

TEST_CASE("concentric hitting probability") {
    CHECK(hit_prob_concentric(0.5, 0.1, 1.0) == doctest::Approx(0.301029995663981).epsilon(1e-13));
    CHECK(hit_prob_concentric(0.1, 0.1, 1.0) == doctest::Approx(1.0));
    CHECK(hit_prob_concentric(1.0, 0.1, 1.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(hit_prob_concentric(0.05, 0.1, 1.0), DomainError);
    CHECK_THROWS_AS(hit_prob_concentric(1.5, 0.1, 1.0), DomainError);

    double prev = 2.0;
    for (double r = 0.11; r < 1.0; r += 0.05) {
        const double p = hit_prob_concentric(r, 0.1, 1.0);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        CHECK(p < prev);
        prev = p;
    }
    prev = -1.0;
    for (double e = 0.01; e < 0.5; e += 0.03) {
        const double p = hit_prob_concentric(0.5, e, 1.0);
        CHECK(p > prev);
        prev = p;
    }
}

TEST_CASE("general hitting probability") {
    const auto a = hit_prob_general(unit, {0.5, 0}, {{0, 0}, 0.01});
    CHECK(a.value == doctest::Approx(std::log(2.0) / std::log(100.0)).epsilon(1e-13));
    CHECK_FALSE(a.outside_regime);
    const auto on = hit_prob_general(unit, {0.01, 0}, {{0, 0}, 0.01});
    CHECK(on.value == doctest::Approx(1.0));
    CHECK(on.outside_regime);
    // target radius equal to the conformal radius of the centre
    CHECK_THROWS_AS(hit_prob_general(DomainSpec::disc({0, 0}, 1.0, {0.9, 0}), {0.95, 0}, {{0.9, 0}, 0.09}),
                    DomainError);
}

TEST_CASE("two-circle bounds") {
    auto b = two_circle_bounds({0.3, 0.3, 0.0, 0.0, 0.4, 0.7});
    CHECK(b.lower == doctest::Approx(0.4));
    CHECK(b.upper == doctest::Approx(0.4));
    b = two_circle_bounds({0.3, 0.3, 0.3, 0.3, 0.2, 0.2});
    CHECK(b.lower == doctest::Approx(0.14 / 0.91).epsilon(1e-12));
    CHECK(b.upper == doctest::Approx(0.153846).epsilon(1e-5));
    CHECK_THROWS_AS(two_circle_bounds({1, 1, 1, 1, 0.2, 0.2}), DomainError);

    // Inputs generated from a consistent first-hit model always bracket the truth.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 5000; ++k) {
        const double alpha = u(rng) * 0.5, q = u(rng) * 0.5;  // first hits of A, of B
        double ab[2] = {u(rng), u(rng)}, ba[2] = {u(rng), u(rng)};
        std::sort(ab, ab + 2);
        std::sort(ba, ba + 2);
        if (ab[1] > 0.95 || ba[1] > 0.95) continue;
        const double pab = ab[0] + u(rng) * (ab[1] - ab[0]);
        const double pba = ba[0] + u(rng) * (ba[1] - ba[0]);
        const TwoCircleInputs in{ab[0], ab[1], ba[0], ba[1], alpha + q * pba, q + alpha * pab};
        if (in.z_to_a > 1.0 || in.z_to_b > 1.0) continue;
        const auto bb = two_circle_bounds(in);
        REQUIRE(bb.lower <= alpha + 1e-12);
        REQUIRE(alpha <= bb.upper + 1e-12);
    }
}

TEST_CASE("poisson kernel") {
    const CircleSpec c{{0.2, -0.1}, 1.7};
    CHECK(poisson_kernel_circle({{0, 0}, 1.0}, {0.5, 0}, {1, 0}) == doctest::Approx(3.0 / (2 * kPi)).epsilon(1e-14));
    CHECK(poisson_kernel_circle(c, c.center, {0.2 + 1.7, -0.1}) == doctest::Approx(1.0 / (2 * kPi * 1.7)));
    CHECK_THROWS_AS(poisson_kernel_circle({{0, 0}, 1.0}, {1.2, 0}, {1, 0}), DomainError);
    for (Point2 y : {Point2{0.2, -0.1}, Point2{1.0, 0.5}, Point2{-1.1, 0.3}}) {
        auto f = [&](double th) {
            const Point2 xi{0.2 + 1.7 * std::cos(th), -0.1 + 1.7 * std::sin(th)};
            const double k = poisson_kernel_circle(c, y, xi);
            REQUIRE(k >= 0.0);
            return k * 1.7;
        };
        const auto r = integrate(f, 0.0, 2 * kPi, {}, {1e-14, 20});
        CHECK(std::abs(r.value - 1.0) <= 1e-10);
    }
}

TEST_CASE("expected local times") {
    CHECK(expected_local_time_ring(0.1, 1.0) == doctest::Approx(0.460517018598809).epsilon(1e-13));
    CHECK(expected_local_time_ring(0.01, 1.0) == doctest::Approx(0.0921034037197618).epsilon(1e-13));
    CHECK_THROWS_AS(expected_local_time_ring(1.0, 1.0), DomainError);
    CHECK(expected_local_time_domain(unit, {0, 0}, 0.1).value == doctest::Approx(0.460517018598809));
    CHECK(expected_local_time_domain(unit, {0.6, 0}, 0.05).value ==
          doctest::Approx(0.254944517092557).epsilon(1e-12));
    // R(x,D) >= d(x, boundary) > eps for a disc, so the sign boundary is never reached.
    const auto edge = expected_local_time_domain(unit, {0.95, 0.0}, 0.0499);
    CHECK_FALSE(edge.outside_regime);
    CHECK(edge.value > 0.0);
    CHECK_THROWS_AS(expected_local_time_domain(unit, {0.95, 0}, 0.06), DomainError);
}

TEST_CASE("first moment density") {
    CHECK(first_moment_density(unit, 1.0, {0.5, 0}) == doctest::Approx(1.50468650834011).epsilon(1e-13));
    CHECK(first_moment_density(unit, 1.0, {1.0, 0}) == 0.0);
    CHECK_THROWS_AS(first_moment_density(unit, 1.0, {0, 0}), DomainError);
    const double a = first_moment_density(unit, 1e-3, {0.3, 0.4});
    const double b = first_moment_density(unit, 2e-3, {0.3, 0.4});
    CHECK(b / a == doctest::Approx(2.0).epsilon(1e-5));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 1000; ++k) {
        Point2 x{u(rng), u(rng)};
        if (norm(x) >= 1.0 || norm(x) == 0.0) continue;
        REQUIRE(first_moment_density(unit, 1.3, x) >= 0.0);
    }
    CHECK(first_moment_density(unit, 1.0, {0.999999999, 0}) < 1e-8);
}

TEST_CASE("first moment integral against frozen constants") {
    const auto full = first_moment_integral(unit, 1.0, WholeDomain{});
    CHECK(full.value == doctest::Approx(kFullDiscGamma1).epsilon(1e-9));
    const auto ann = first_moment_integral(unit, 0.5, Annulus{{0, 0}, 0.2, 0.8});
    CHECK(ann.value == doctest::Approx(kAnnulusGammaHalf).epsilon(1e-9));
    const auto ann8 = first_moment_integral(unit, 0.8, Annulus{{0, 0}, 0.2, 0.8});
    CHECK(ann8.value / (std::sqrt(2 * kPi) * 0.8) == doctest::Approx(kAnnulusGamma08Bare).epsilon(1e-9));
    CHECK(first_moment_integral(unit, 1.0, Annulus{{0, 0}, 0.5, 0.5}).value == 0.0);
    CHECK(first_moment_integral(unit, 1.0, Box{{0, 0}, 0.0, 1.0}).value == 0.0);
}

TEST_CASE("first moment integral agrees with a cartesian route") {
    // Off-centre start; box containing the start point; annulus centred away from it.
    const auto d = DomainSpec::disc({0, 0}, 1.0, {0.3, 0.2});
    const QuadratureOptions opt{1e-10, 12};
    auto column = [&](double x, double y0, double y1) {
        auto fy = [&](double y) {
            const Point2 p{x, y};
            if (p == d.start) return 0.0;
            return first_moment_density(d, 1.0, p);
        };
        return integrate(fy, y0, y1, {d.start.y}, opt).value;
    };
    auto chord = [](double r, double x) { return std::sqrt(std::max(0.0, r * r - x * x)); };

    const Box box{{-0.2, -0.3}, 0.8, 0.7};
    auto fbox = [&](double x) { return column(x, -0.3, 0.4); };
    const double ref = integrate(fbox, -0.2, 0.6, {d.start.x}, opt).value;
    CHECK(first_moment_integral(d, 1.0, box).value == doctest::Approx(ref).epsilon(1e-7));

    const Annulus ann{{0, 0}, 0.4, 0.7};
    auto fann = [&](double x) {
        const double ho = chord(0.7, x), hi = chord(0.4, x);
        if (hi == 0.0) return column(x, -ho, ho);
        return column(x, -ho, -hi) + column(x, hi, ho);
    };
    const double ref_a = integrate(fann, -0.7, 0.7, {-0.4, 0.4, d.start.x}, opt).value;
    CHECK(first_moment_integral(d, 1.0, ann).value == doctest::Approx(ref_a).epsilon(1e-7));
}

TEST_CASE("conformal covariance of the first-moment density") {
    CHECK(conformal_covariance_check(DiscAutomorphism::identity(), 1.0, {0.5, 0.1}) == doctest::Approx(0.0));
    CHECK(conformal_covariance_check(DiscAutomorphism::rotation(0.7), 1.0, {0.5, 0.1}) <= 1e-12);
    CHECK(conformal_covariance_check(DiscAutomorphism::moving_origin_to({0.3, 0}), 1.0, {0.5, 0.1}) <= 1e-9);
    const auto phi = DiscAutomorphism::moving_origin_to({0.3, 0});
    CHECK(std::abs(phi({0, 0}) - std::complex<double>(0.3, 0)) < 1e-15);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-0.9, 0.9), th(0, 2 * kPi), g(0.1, 1.9);
    for (int k = 0; k < 500; ++k) {
        DiscAutomorphism m{th(rng), {u(rng) * 0.7, u(rng) * 0.7}};
        Point2 x{u(rng), u(rng)};
        if (norm(x) >= 0.95) continue;
        const auto w0 = m({0, 0});
        if (std::abs(std::complex<double>(x.x, x.y) - w0) < 1e-3) continue;
        REQUIRE(conformal_covariance_check(m, g(rng), x) <= 1e-9);
    }
}

TEST_CASE("domain validation") {
    CHECK_THROWS_AS(DomainSpec::disc({0, 0}, 1.0, {1.0, 0}), DomainError);
    CHECK_THROWS_AS(DomainSpec::disc({0, 0}, -1.0, {0, 0}), DomainError);
    CHECK_THROWS_AS(DomainSpec::rectangle({0, 0}, 1.0, 1.0, {0, 0.5}), DomainError);
    const auto r = DomainSpec::rectangle({0, 0}, 2.0, 1.0, {0.5, 0.5});
    CHECK(r.area() == doctest::Approx(2.0));
    CHECK(circle_inside(r, {{1.0, 0.5}, 0.4}));
    CHECK_FALSE(circle_inside(r, {{1.0, 0.5}, 0.5}));
}
