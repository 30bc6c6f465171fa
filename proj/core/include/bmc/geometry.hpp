#pragma once

#include "bmc/quadrature.hpp"

#include <complex>
#include <optional>
#include <variant>

namespace bmc {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
double norm(Point2 p);
double distance(Point2 a, Point2 b);

struct Disc {
    Point2 center;
    double radius = 1.0;

    friend bool operator==(const Disc&, const Disc&) = default;
};

struct Rectangle {
    Point2 lower_left;
    double width = 1.0;
    double height = 1.0;

    friend bool operator==(const Rectangle&, const Rectangle&) = default;
};

struct DomainSpec {
    std::variant<Disc, Rectangle> kind;
    Point2 start;

    static DomainSpec disc(Point2 center, double radius, Point2 start);
    static DomainSpec rectangle(Point2 lower_left, double width, double height, Point2 start);

    bool is_disc() const { return std::holds_alternative<Disc>(kind); }
    // Throws UnsupportedDomain for rectangles.
    const Disc& as_disc() const;

    bool contains(Point2 p) const;              // open domain
    double boundary_distance(Point2 p) const;   // d(p, boundary), negative outside
    double area() const;
    void validate() const;

    friend bool operator==(const DomainSpec&, const DomainSpec&) = default;
};

struct CircleSpec {
    Point2 center;
    double radius = 0.0;
};

// True iff the closed circle lies in the open domain.
bool circle_inside(const DomainSpec& d, const CircleSpec& c);

struct WholeDomain {
    friend bool operator==(const WholeDomain&, const WholeDomain&) = default;
};
struct Annulus {
    Point2 center;
    double inner = 0.0;
    double outer = 0.0;
    friend bool operator==(const Annulus&, const Annulus&) = default;
};
struct Box {
    Point2 lower_left;
    double width = 0.0;
    double height = 0.0;
    friend bool operator==(const Box&, const Box&) = default;
};
// Integration / measurement region, always intersected with the domain.
using Region = std::variant<WholeDomain, Annulus, Box>;

bool region_contains(const Region& r, Point2 p);
bool region_is_empty(const Region& r);

// Value plus a flag raised when the leading-order formula is used outside
// the regime where its error term is small.
struct Approximation {
    double value = 0.0;
    bool outside_regime = false;
};

double green_disc(const DomainSpec& d, Point2 y, Point2 z);
double conformal_radius(const DomainSpec& d, Point2 x);

// log(dist/rho) / log(eps/rho) for a disc of radius rho centred on the target.
double hit_prob_concentric(double dist, double eps, double rho);
Approximation hit_prob_general(const DomainSpec& d, Point2 y, const CircleSpec& target);

struct TwoCircleInputs {
    double a_to_b_lo, a_to_b_hi;   // P(hit B before tau) from points of circle A
    double b_to_a_lo, b_to_a_hi;
    double z_to_a, z_to_b;         // from the start point z
};
struct Bounds {
    double lower = 0.0;
    double upper = 0.0;
};
// Sandwich for P_z[hit A before tau and before B].
Bounds two_circle_bounds(const TwoCircleInputs& p);

double poisson_kernel_circle(const CircleSpec& c, Point2 y, Point2 xi);

double expected_local_time_ring(double eps, double r);
Approximation expected_local_time_domain(const DomainSpec& d, Point2 x, double eps);

double first_moment_density(const DomainSpec& d, double gamma, Point2 x);

QuadratureResult first_moment_integral(const DomainSpec& d, double gamma, const Region& region,
                                       double abs_tol = 1e-8);

// phi(z) = e^{i theta} (z - a) / (1 - conj(a) z), an automorphism of the unit disc.
struct DiscAutomorphism {
    double theta = 0.0;
    std::complex<double> a{0.0, 0.0};

    std::complex<double> operator()(std::complex<double> z) const;
    std::complex<double> inverse(std::complex<double> w) const;
    std::complex<double> derivative(std::complex<double> z) const;

    static DiscAutomorphism identity() { return {}; }
    static DiscAutomorphism rotation(double theta) { return {theta, {0.0, 0.0}}; }
    // Maps 0 to p.
    static DiscAutomorphism moving_origin_to(Point2 p) { return {0.0, {-p.x, -p.y}}; }
};

// Relative residual of the first-moment density covariance under phi
// (start at the origin of the unit disc, mapped start phi(0)) at x in phi's image.
double conformal_covariance_check(const DiscAutomorphism& phi, double gamma, Point2 x);

} // namespace bmc
