#include "coex/geometry.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "coex/numeric.hpp"

namespace coex {

std::string to_string(Rat rat) {
    switch (rat) {
        case Rat::dsrc: return "dsrc";
        case Rat::wifi: return "wifi";
        case Rat::cv2x: return "cv2x";
    }
    return "?";
}

namespace geometry {

using std::numbers::pi;

void validate(const SystemSpace& space) {
    if (!(space.side_length_m > 0.0) || !std::isfinite(space.side_length_m))
        throw std::invalid_argument("side_length_m must be positive");
}

void validate(const Radii& radii) {
    if (!(radii.r_cs_m > 0.0) || !(radii.r_tx_m > 0.0))
        throw std::invalid_argument("r_cs_m and r_tx_m must be positive");
}

double disc_area(double r) { return pi * r * r; }

double per_disc_to_per_m2(double nodes_per_disc, double r) { return nodes_per_disc / disc_area(r); }

double per_m2_to_per_disc(double intensity_per_m2, double r) { return intensity_per_m2 * disc_area(r); }

NodeSet sample_ppp(const SystemSpace& space, double intensity_per_m2, Rat rat, std::uint64_t seed) {
    validate(space);
    if (!(intensity_per_m2 >= 0.0)) throw std::invalid_argument("intensity must be nonnegative");
    NodeSet out;
    out.space = space;
    const double mean = intensity_per_m2 * space.side_length_m * space.side_length_m;
    if (mean == 0.0) return out;
    std::mt19937_64 rng(seed);
    std::poisson_distribution<long> count(mean);
    std::uniform_real_distribution<double> coord(0.0, space.side_length_m);
    const long n = count(rng);
    out.points.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        const double x = coord(rng);
        const double y = coord(rng);
        out.points.push_back({x, y, rat});
    }
    return out;
}

double distance_pdf(double l, const SystemSpace& space) {
    const double d = space.side_length_m;
    if (l <= 0.0 || l >= std::sqrt(2.0) * d) return 0.0;
    if (l < d) return pi * l / (2.0 * d * d);
    return l / (d * d) * (pi / 2.0 - 2.0 * std::acos(d / l));
}

double distance_cdf(double l, const SystemSpace& space) {
    const double d = space.side_length_m;
    if (l <= 0.0) return 0.0;
    if (l >= std::sqrt(2.0) * d) return 1.0;
    if (l <= d) return pi * l * l / (4.0 * d * d);
    const double s = std::sqrt(l * l - d * d);
    const double f = s / d + l * l / (d * d) * (pi / 4.0 - std::acos(d / l));
    return std::min(1.0, f);
}

double collision_area(double l, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    if (l < 0.0) throw std::domain_error("negative separation");
    if (l > 2.0 * r) throw std::domain_error("separation exceeds 2r, discs are disjoint");
    const double h = std::sqrt(std::max(0.0, 4.0 * r * r - l * l));
    return 2.0 * r * r * std::acos(l / (2.0 * r)) - 0.5 * l * h;
}

double collision_area(double l, const Radii& radii) { return collision_area(l, radii.r_cs_m); }

QuadraticFit fit_inverse_area(double radius_m, std::size_t n_samples) {
    if (!(radius_m > 0.0)) throw std::invalid_argument("radius must be positive");
    const double l_max = std::sqrt(2.0) * radius_m;
    std::size_t n;
    double step;
    if (n_samples == 0) {
        step = 1.0;
        n = static_cast<std::size_t>(std::ceil(l_max));
    } else {
        if (n_samples < 100) throw std::invalid_argument("n_samples must be at least 100");
        n = n_samples;
        step = l_max / static_cast<double>(n);
    }
    const double a_scale = disc_area(radius_m);
    const double a_min = collision_area(std::min(l_max, (n - 1) * step), radius_m);
    if (n < 3 || !((a_scale - a_min) / a_scale > 1e-9))
        throw std::invalid_argument("degenerate fitting grid for radius " + numeric::format_double(radius_m));

    // fit in normalised variables u = a / (pi r^2), v = l / r
    Eigen::MatrixXd x(n, 3);
    Eigen::VectorXd y(n);
    std::vector<double> ls(n), as(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double l = static_cast<double>(i) * step;
        const double a = collision_area(l, radius_m);
        ls[i] = l;
        as[i] = a;
        const double u = a / a_scale;
        x(i, 0) = u * u;
        x(i, 1) = u;
        x(i, 2) = 1.0;
        y(i) = l / radius_m;
    }
    const Eigen::Vector3d c = x.colPivHouseholderQr().solve(y);
    QuadraticFit fit;
    fit.r_m = radius_m;
    fit.p1 = c(0) * radius_m / (a_scale * a_scale);
    fit.p2 = c(1) * radius_m / a_scale;
    fit.p3 = c(2) * radius_m;

    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lh = fit.inverse(as[i]);
        if (lh == 0.0) continue;
        sum += std::abs(ls[i] - lh) / std::abs(lh);
        ++used;
    }
    fit.mean_abs_error = used ? sum / static_cast<double>(used) : 0.0;
    return fit;
}

double area_pdf(double a, const QuadraticFit& fit, const SystemSpace& space) {
    if (a < 0.0 || a > disc_area(fit.r_m)) return 0.0;
    return distance_pdf(fit.inverse(a), space) * std::abs(fit.inverse_slope(a));
}

double area_cdf(double a, const QuadraticFit& fit) {
    const double l = fit.inverse(a);
    return distance_cdf(l, SystemSpace{fit.r_m});
}

double rgb(double a, const Radii& radii) { return a / disc_area(radii.r_tx_m); }

void write_fit_table(std::ostream& os, const std::vector<QuadraticFit>& fits) {
    os << "# r p1 p2 p3 eps\n";
    for (const auto& f : fits) {
        os << numeric::format_double(f.r_m) << ' ' << numeric::format_double(f.p1) << ' '
           << numeric::format_double(f.p2) << ' ' << numeric::format_double(f.p3) << ' '
           << numeric::format_double(f.mean_abs_error) << '\n';
    }
}

std::vector<QuadraticFit> read_fit_table(std::istream& is) {
    std::vector<QuadraticFit> out;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ss(line);
        QuadraticFit f;
        if (!(ss >> f.r_m >> f.p1 >> f.p2 >> f.p3 >> f.mean_abs_error))
            throw std::runtime_error("fit table line " + std::to_string(lineno) + ": expected 5 numbers");
        out.push_back(f);
    }
    return out;
}

}  // namespace geometry
}  // namespace coex
