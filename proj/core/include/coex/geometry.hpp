#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace coex {

enum class Rat { dsrc, wifi, cv2x };

std::string to_string(Rat rat);

namespace geometry {

struct SystemSpace {
    double side_length_m = 0.0;
};

struct Point {
    double x_m = 0.0;
    double y_m = 0.0;
    Rat rat = Rat::dsrc;
};

struct NodeSet {
    std::vector<Point> points;
    SystemSpace space;
};

struct Radii {
    double r_cs_m = 500.0;
    double r_tx_m = 500.0;
};

// l ~ p1 a^2 + p2 a + p3, fitted for discs of radius r_m.
struct QuadraticFit {
    double p1 = 0.0;
    double p2 = 0.0;
    double p3 = 0.0;
    double mean_abs_error = 0.0;
    double r_m = 0.0;

    double inverse(double a) const { return (p1 * a + p2) * a + p3; }
    double inverse_slope(double a) const { return 2.0 * p1 * a + p2; }
};

void validate(const SystemSpace& space);
void validate(const Radii& radii);

double disc_area(double r);

// Converts "nodes per disc of radius r" into nodes per square metre.
double per_disc_to_per_m2(double nodes_per_disc, double r);
double per_m2_to_per_disc(double intensity_per_m2, double r);

NodeSet sample_ppp(const SystemSpace& space, double intensity_per_m2, Rat rat, std::uint64_t seed);

// Distance from a corner-anchored node to a uniform point of the square.
double distance_pdf(double l, const SystemSpace& space);
double distance_cdf(double l, const SystemSpace& space);

// Lens area of two discs of radius r at separation l; throws std::domain_error for l > 2r.
double collision_area(double l, double r);
double collision_area(double l, const Radii& radii);

// Least-squares inverse map of collision_area. n_samples = 0 selects a 1 m step
// on [0, sqrt(2) r); otherwise n_samples points evenly spaced on the same range.
QuadraticFit fit_inverse_area(double radius_m, std::size_t n_samples = 0);

double area_pdf(double a, const QuadraticFit& fit, const SystemSpace& space);
// P(l <= g^-1(a)) with l distributed over the r x r square; decreasing in a.
double area_cdf(double a, const QuadraticFit& fit);

double rgb(double a, const Radii& radii);

// Plain-text table, one row per fit: r p1 p2 p3 eps.
void write_fit_table(std::ostream& os, const std::vector<QuadraticFit>& fits);
std::vector<QuadraticFit> read_fit_table(std::istream& is);

}  // namespace geometry
}  // namespace coex
