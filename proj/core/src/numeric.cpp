#include "coex/numeric.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <queue>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace coex::numeric {

namespace {

struct Piece {
    double a, b, value, error;
    unsigned depth;
    bool operator<(const Piece& o) const { return error < o.error; }
};

Piece gk15(const std::function<double(double)>& f, double a, double b, unsigned depth) {
    using K = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G = boost::math::quadrature::gauss<double, 7>;
    const auto& x = K::abscissa();
    const auto& wk = K::weights();
    const auto& wg = G::weights();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double f0 = f(c);
    double k = wk[0] * f0, g = wg[0] * f0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double s = f(c - h * x[i]) + f(c + h * x[i]);
        k += wk[i] * s;
        if (i % 2 == 0) g += wg[i / 2] * s;
    }
    return {a, b, k * h, std::abs((k - g) * h), depth};
}

}  // namespace

// Globally adaptive: always bisect the piece with the largest error estimate.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol, double abs_floor, unsigned max_depth) {
    QuadratureResult r;
    if (a == b) return r;
    std::priority_queue<Piece> heap;
    heap.push(gk15(f, a, b, 0));
    double value = heap.top().value, error = heap.top().error;
    const std::size_t max_pieces = 4096;
    while (error > rel_tol * std::max(std::abs(value), abs_floor) && heap.size() < max_pieces) {
        const Piece p = heap.top();
        if (p.depth >= max_depth) break;
        heap.pop();
        const double m = 0.5 * (p.a + p.b);
        const Piece l = gk15(f, p.a, m, p.depth + 1), u = gk15(f, m, p.b, p.depth + 1);
        value += l.value + u.value - p.value;
        error += l.error + u.error - p.error;
        r.levels = std::max(r.levels, p.depth + 1);
        heap.push(l);
        heap.push(u);
    }
    // re-sum to drop the drift of the running totals
    value = 0.0;
    error = 0.0;
    for (; !heap.empty(); heap.pop()) {
        value += heap.top().value;
        error += heap.top().error;
        r.l1_norm += std::abs(heap.top().value);
    }
    r.value = value;
    r.error_estimate = error;
    const double scale = std::max(std::abs(r.value), abs_floor);
    if (!std::isfinite(r.value) || r.error_estimate > rel_tol * scale) {
        throw ConvergenceError("quadrature on [" + format_double(a) + ", " + format_double(b) +
                               "] did not converge: value " + format_double(r.value) +
                               ", error estimate " + format_double(r.error_estimate));
    }
    return r;
}

double normal_cdf(double x, double mean, double sd) {
    return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) return 1.0;
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

double ks_statistic_discrete(std::vector<long> samples, const std::function<double(long)>& cdf) {
    if (samples.empty()) return 1.0;
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    std::size_t i = 0;
    long k = samples.front() - 1;
    // compare step functions at every integer in the sample range
    d = std::abs(cdf(k));
    for (k = samples.front(); k <= samples.back(); ++k) {
        while (i < samples.size() && samples[i] <= k) ++i;
        d = std::max(d, std::abs(i / n - cdf(k)));
    }
    return std::max(d, std::abs(1.0 - cdf(samples.back())));
}

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(splitmix64(base) ^ (stream * 0xd1342543de82ef95ULL + 1));
}

}  // namespace coex::numeric
