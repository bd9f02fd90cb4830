#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coex {

// Raised when a numerical procedure fails to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace numeric {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    double l1_norm = 0.0;
    unsigned levels = 0;
};

// Adaptive Gauss-Kronrod (7/15 point) on [a, b]. Throws ConvergenceError if the
// error estimate stays above rel_tol * max(|value|, abs_floor).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-6, double abs_floor = 1e-14,
                           unsigned max_depth = 30);

double normal_cdf(double x, double mean, double sd);

// Kolmogorov-Smirnov distance between the sample and a continuous cdf.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

// KS distance for integer-valued samples against a cdf evaluated at integers.
double ks_statistic_discrete(std::vector<long> samples, const std::function<double(long)>& cdf);

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace numeric
}  // namespace coex
