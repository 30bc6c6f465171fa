#include "bmc/geometry.hpp"

#include "bmc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace bmc {

namespace {

constexpr double kPi = std::numbers::pi;

bool finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

std::complex<double> cplx(Point2 p) { return {p.x, p.y}; }

// |p - c| <= rho up to rounding.
bool in_closed_disc(const Disc& d, Point2 p) {
    return distance(p, d.center) <= d.radius * (1.0 + 1e-12);
}

struct Interval {
    double lo, hi;
};

// Parameters s with |o + s u - c| < r, intersected with s >= 0. Empty if the ray misses.
std::optional<Interval> ray_in_circle(Point2 o, Point2 u, Point2 c, double r) {
    const Point2 q = o - c;
    const double beta = u.x * q.x + u.y * q.y;
    const double disc = beta * beta - (q.x * q.x + q.y * q.y - r * r);
    if (disc <= 0.0) return std::nullopt;
    const double root = std::sqrt(disc);
    Interval iv{-beta - root, -beta + root};
    iv.lo = std::max(iv.lo, 0.0);
    if (iv.hi <= iv.lo) return std::nullopt;
    return iv;
}

std::vector<Interval> ray_in_region(const Region& region, Point2 o, Point2 u) {
    std::vector<Interval> out;
    if (std::holds_alternative<WholeDomain>(region)) {
        out.push_back({0.0, std::numeric_limits<double>::infinity()});
    } else if (const auto* a = std::get_if<Annulus>(&region)) {
        const auto outer = ray_in_circle(o, u, a->center, a->outer);
        if (!outer) return out;
        const auto inner = a->inner > 0.0 ? ray_in_circle(o, u, a->center, a->inner) : std::nullopt;
        if (!inner) {
            out.push_back(*outer);
        } else {
            if (inner->lo > outer->lo) out.push_back({outer->lo, inner->lo});
            if (outer->hi > inner->hi) out.push_back({inner->hi, outer->hi});
        }
    } else {
        const auto& b = std::get<Box>(region);
        double lo = 0.0, hi = std::numeric_limits<double>::infinity();
        const double orig[2] = {o.x, o.y};
        const double dir[2] = {u.x, u.y};
        const double bmin[2] = {b.lower_left.x, b.lower_left.y};
        const double bmax[2] = {b.lower_left.x + b.width, b.lower_left.y + b.height};
        for (int k = 0; k < 2; ++k) {
            if (std::abs(dir[k]) < 1e-300) {
                if (orig[k] <= bmin[k] || orig[k] >= bmax[k]) return out;
                continue;
            }
            double t1 = (bmin[k] - orig[k]) / dir[k];
            double t2 = (bmax[k] - orig[k]) / dir[k];
            if (t1 > t2) std::swap(t1, t2);
            lo = std::max(lo, t1);
            hi = std::min(hi, t2);
        }
        if (hi > lo) out.push_back({lo, hi});
    }
    return out;
}

// Angles (seen from o) where the ray set changes topology.
std::vector<double> region_break_angles(const Region& region, Point2 o) {
    std::vector<double> br;
    auto add = [&](double ang) {
        ang = std::fmod(ang, 2.0 * kPi);
        if (ang < 0) ang += 2.0 * kPi;
        br.push_back(ang);
    };
    auto tangents = [&](Point2 c, double r) {
        const Point2 q = c - o;
        const double d = norm(q);
        if (r <= 0.0 || d <= r) return;
        const double base = std::atan2(q.y, q.x);
        const double half = std::asin(r / d);
        add(base - half);
        add(base + half);
    };
    if (const auto* a = std::get_if<Annulus>(&region)) {
        tangents(a->center, a->inner);
        tangents(a->center, a->outer);
    } else if (const auto* b = std::get_if<Box>(&region)) {
        const Point2 c[4] = {b->lower_left,
                             {b->lower_left.x + b->width, b->lower_left.y},
                             {b->lower_left.x, b->lower_left.y + b->height},
                             {b->lower_left.x + b->width, b->lower_left.y + b->height}};
        for (const auto& p : c) add(std::atan2(p.y - o.y, p.x - o.x));
    }
    return br;
}

} // namespace

double norm(Point2 p) { return std::hypot(p.x, p.y); }
double distance(Point2 a, Point2 b) { return norm(a - b); }

DomainSpec DomainSpec::disc(Point2 center, double radius, Point2 start) {
    DomainSpec d{Disc{center, radius}, start};
    d.validate();
    return d;
}

DomainSpec DomainSpec::rectangle(Point2 lower_left, double width, double height, Point2 start) {
    DomainSpec d{Rectangle{lower_left, width, height}, start};
    d.validate();
    return d;
}

const Disc& DomainSpec::as_disc() const {
    if (const auto* d = std::get_if<Disc>(&kind)) return *d;
    throw UnsupportedDomain("analytic formulas are only available for disc domains");
}

double DomainSpec::boundary_distance(Point2 p) const {
    if (const auto* d = std::get_if<Disc>(&kind)) return d->radius - distance(p, d->center);
    const auto& r = std::get<Rectangle>(kind);
    return std::min({p.x - r.lower_left.x, r.lower_left.x + r.width - p.x,
                     p.y - r.lower_left.y, r.lower_left.y + r.height - p.y});
}

bool DomainSpec::contains(Point2 p) const { return boundary_distance(p) > 0.0; }

double DomainSpec::area() const {
    if (const auto* d = std::get_if<Disc>(&kind)) return kPi * d->radius * d->radius;
    const auto& r = std::get<Rectangle>(kind);
    return r.width * r.height;
}

void DomainSpec::validate() const {
    if (!finite(start)) throw DomainError("start point must be finite");
    if (const auto* d = std::get_if<Disc>(&kind)) {
        if (!finite(d->center) || !(d->radius > 0.0) || !std::isfinite(d->radius))
            throw DomainError("disc radius must be positive and finite");
    } else {
        const auto& r = std::get<Rectangle>(kind);
        if (!finite(r.lower_left) || !(r.width > 0.0) || !(r.height > 0.0) ||
            !std::isfinite(r.width) || !std::isfinite(r.height))
            throw DomainError("rectangle width and height must be positive and finite");
    }
    if (!contains(start)) throw DomainError("start point must lie strictly inside the domain");
}

bool circle_inside(const DomainSpec& d, const CircleSpec& c) {
    return c.radius > 0.0 && d.boundary_distance(c.center) > c.radius;
}

bool region_contains(const Region& r, Point2 p) {
    if (std::holds_alternative<WholeDomain>(r)) return true;
    if (const auto* a = std::get_if<Annulus>(&r)) {
        const double d = distance(p, a->center);
        return d > a->inner && d < a->outer;
    }
    const auto& b = std::get<Box>(r);
    return p.x > b.lower_left.x && p.x < b.lower_left.x + b.width && p.y > b.lower_left.y &&
           p.y < b.lower_left.y + b.height;
}

bool region_is_empty(const Region& r) {
    if (const auto* a = std::get_if<Annulus>(&r)) return !(a->outer > a->inner) || a->outer <= 0.0;
    if (const auto* b = std::get_if<Box>(&r)) return !(b->width > 0.0) || !(b->height > 0.0);
    return false;
}

double green_disc(const DomainSpec& d, Point2 y, Point2 z) {
    const Disc& disc = d.as_disc();
    if (!in_closed_disc(disc, y) || !in_closed_disc(disc, z))
        throw DomainError("green_disc: points must lie in the closed disc");
    if (y == z) throw DomainError("green_disc: y = z is the Green singularity");
    const double rho = disc.radius;
    const auto yc = cplx(y - disc.center);
    const auto zc = cplx(z - disc.center);
    const double num = std::abs(rho * rho - std::conj(yc) * zc);
    const double den = rho * std::abs(yc - zc);
    return std::max(0.0, std::log(num / den));
}

double conformal_radius(const DomainSpec& d, Point2 x) {
    const Disc& disc = d.as_disc();
    const double r = distance(x, disc.center);
    if (!(r < disc.radius)) throw DomainError("conformal_radius: x must be strictly interior");
    return (disc.radius * disc.radius - r * r) / disc.radius;
}

double hit_prob_concentric(double dist, double eps, double rho) {
    if (!(eps > 0.0) || !(eps < rho) || !(dist >= eps) || !(dist <= rho))
        throw DomainError("hit_prob_concentric: need 0 < eps <= |y-x| <= rho and eps < rho");
    return std::log(dist / rho) / std::log(eps / rho);
}

Approximation hit_prob_general(const DomainSpec& d, Point2 y, const CircleSpec& target) {
    const Disc& disc = d.as_disc();
    if (!circle_inside(d, target))
        throw DomainError("hit_prob_general: target circle must lie strictly inside the domain");
    if (!in_closed_disc(disc, y)) throw DomainError("hit_prob_general: y outside the domain");
    const double dy = distance(y, target.center);
    if (dy < target.radius * (1.0 - 1e-12))
        throw DomainError("hit_prob_general: y must lie outside the target disc");
    const double denom = std::log(conformal_radius(d, target.center) / target.radius);
    if (!(denom > 0.0))
        throw DomainError("hit_prob_general: target radius reaches the conformal radius");
    Approximation out;
    out.outside_regime = target.radius > 0.1 * d.boundary_distance(target.center);
    if (dy <= target.radius) {
        out.value = 1.0;
        out.outside_regime = true;
        return out;
    }
    const double v = green_disc(d, target.center, y) / denom;
    out.value = std::clamp(v, 0.0, 1.0);
    if (v != out.value) out.outside_regime = true;
    return out;
}

Bounds two_circle_bounds(const TwoCircleInputs& p) {
    const double all[] = {p.a_to_b_lo, p.a_to_b_hi, p.b_to_a_lo, p.b_to_a_hi, p.z_to_a, p.z_to_b};
    for (double v : all)
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError("two_circle_bounds: inputs must be probabilities");
    if (p.a_to_b_lo > p.a_to_b_hi || p.b_to_a_lo > p.b_to_a_hi)
        throw DomainError("two_circle_bounds: need p- <= p+");
    const double den_lo = 1.0 - p.b_to_a_hi * p.a_to_b_lo;
    const double den_hi = 1.0 - p.b_to_a_lo * p.a_to_b_hi;
    if (!(den_lo > 0.0) || !(den_hi > 0.0)) throw DomainError("two_circle_bounds: denominator <= 0");
    return {(p.z_to_a - p.b_to_a_hi * p.z_to_b) / den_lo, (p.z_to_a - p.b_to_a_lo * p.z_to_b) / den_hi};
}

double poisson_kernel_circle(const CircleSpec& c, Point2 y, Point2 xi) {
    if (!(c.radius > 0.0)) throw DomainError("poisson_kernel_circle: radius must be positive");
    const double R = c.radius;
    const double dy = distance(y, c.center);
    if (!(dy < R)) throw DomainError("poisson_kernel_circle: y must lie strictly inside the circle");
    if (std::abs(distance(xi, c.center) - R) > 1e-9 * R)
        throw DomainError("poisson_kernel_circle: xi must lie on the circle");
    const double d2 = std::pow(distance(y, xi), 2);
    return (R * R - dy * dy) / (2.0 * kPi * R * d2);
}

double expected_local_time_ring(double eps, double r) {
    if (!(eps > 0.0) || !(eps < r)) throw DomainError("expected_local_time_ring: need 0 < eps < r");
    return 2.0 * eps * std::log(r / eps);
}

Approximation expected_local_time_domain(const DomainSpec& d, Point2 x, double eps) {
    d.as_disc();
    if (!circle_inside(d, {x, eps}))
        throw DomainError("expected_local_time_domain: circle must lie strictly inside the domain");
    const double v = 2.0 * eps * (std::log(1.0 / eps) + std::log(conformal_radius(d, x)));
    if (v <= 0.0) return {0.0, true};
    return {v, false};
}

double first_moment_density(const DomainSpec& d, double gamma, Point2 x) {
    const Disc& disc = d.as_disc();
    if (!(gamma > 0.0 && gamma < 2.0)) throw DomainError("first_moment_density: gamma must be in (0,2)");
    if (!in_closed_disc(disc, x)) throw DomainError("first_moment_density: x outside the domain");
    if (x == d.start) throw DomainError("first_moment_density: x = x0 is the Green singularity");
    if (distance(x, disc.center) >= disc.radius) return 0.0;
    const double R = conformal_radius(d, x);
    return std::sqrt(2.0 * kPi) * gamma * std::pow(R, gamma * gamma / 2.0) * green_disc(d, d.start, x);
}

QuadratureResult first_moment_integral(const DomainSpec& d, double gamma, const Region& region,
                                       double abs_tol) {
    const Disc& disc = d.as_disc();
    if (!(gamma > 0.0 && gamma < 2.0)) throw DomainError("first_moment_integral: gamma must be in (0,2)");
    if (region_is_empty(region)) return {};
    const Point2 o = d.start;
    const QuadratureOptions inner_opt{1e-13, 20};
    const QuadratureOptions outer_opt{1e-12, 20};
    double inner_err = 0.0;

    auto radial = [&](double phi) {
        const Point2 u{std::cos(phi), std::sin(phi)};
        const auto dom = ray_in_circle(o, u, disc.center, disc.radius);
        if (!dom) return 0.0;
        double total = 0.0;
        for (auto iv : ray_in_region(region, o, u)) {
            iv.lo = std::max(iv.lo, dom->lo);
            iv.hi = std::min(iv.hi, dom->hi);
            if (!(iv.hi > iv.lo)) continue;
            auto f = [&](double s) {
                if (s <= 0.0) return 0.0;
                const Point2 x = o + s * u;
                if (distance(x, disc.center) >= disc.radius) return 0.0;
                return s * first_moment_density(d, gamma, x);
            };
            const auto r = integrate(f, iv.lo, iv.hi, {}, inner_opt);
            total += r.value;
            inner_err = std::max(inner_err, r.error);
        }
        return total;
    };

    auto r = integrate(radial, 0.0, 2.0 * kPi, region_break_angles(region, o), outer_opt);
    r.error += 2.0 * kPi * inner_err;
    if (!(r.error <= std::max(abs_tol, 1e-9 * std::abs(r.value))))
        throw NumericalError("first_moment_integral: quadrature did not reach tolerance (error " +
                             std::to_string(r.error) + ")");
    return r;
}

std::complex<double> DiscAutomorphism::operator()(std::complex<double> z) const {
    return std::polar(1.0, theta) * (z - a) / (1.0 - std::conj(a) * z);
}

std::complex<double> DiscAutomorphism::inverse(std::complex<double> w) const {
    const auto v = std::polar(1.0, -theta) * w;
    return (v + a) / (1.0 + std::conj(a) * v);
}

std::complex<double> DiscAutomorphism::derivative(std::complex<double> z) const {
    const auto den = 1.0 - std::conj(a) * z;
    return std::polar(1.0, theta) * (1.0 - std::norm(a)) / (den * den);
}

double conformal_covariance_check(const DiscAutomorphism& phi, double gamma, Point2 x) {
    if (!(std::abs(phi.a) < 1.0)) throw DomainError("conformal_covariance_check: |a| must be < 1");
    const auto w0 = phi(std::complex<double>(0.0, 0.0));
    const DomainSpec src = DomainSpec::disc({0.0, 0.0}, 1.0, {0.0, 0.0});
    const DomainSpec dst = DomainSpec::disc({0.0, 0.0}, 1.0, {w0.real(), w0.imag()});
    const auto yc = phi.inverse({x.x, x.y});
    const Point2 y{yc.real(), yc.imag()};
    const double dphi = std::abs(phi.derivative(yc));
    // Push-forward of E[mu^D] against the |phi'|-weighted image measure E[mu^{D'}].
    const double lhs = first_moment_density(src, gamma, y) / (dphi * dphi);
    const double rhs = std::pow(dphi, -(2.0 + gamma * gamma / 2.0)) * first_moment_density(dst, gamma, x);
    return std::abs(lhs - rhs) / lhs;
}

} // namespace bmc
