#include "coex/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "coex/numeric.hpp"

namespace coex::temporal {

void validate(const MacParams& mac) {
    if (mac.cw < 1) throw std::invalid_argument("cw must be at least 1");
    if (mac.l_bcn < 1) throw std::invalid_argument("l_bcn must be at least 1");
    if (mac.L_bcn <= mac.l_bcn) throw std::invalid_argument("l_bcn must be smaller than L_bcn");
    if (!(mac.slot_us > 0.0)) throw std::invalid_argument("slot_us must be positive");
}

CompetitorDistribution CompetitorDistribution::normal(double mean, double sd_span) {
    if (!(mean >= 0.0)) throw std::invalid_argument("competitor mean must be nonnegative");
    if (mean == 0.0) return point(0);
    const double sd = std::sqrt(mean);
    CompetitorDistribution d;
    d.mean = mean;
    d.lo = std::max(0L, static_cast<long>(std::floor(mean - sd_span * sd)));
    d.truncation_max = static_cast<long>(std::ceil(mean + sd_span * sd));
    double total = 0.0;
    for (long n = d.lo; n <= d.truncation_max; ++n) {
        const double p = numeric::normal_cdf(n + 0.5, mean, sd) - numeric::normal_cdf(n - 0.5, mean, sd);
        d.pmf.push_back(p);
        total += p;
    }
    for (auto& p : d.pmf) p /= total;
    return d;
}

CompetitorDistribution CompetitorDistribution::point(long n) {
    CompetitorDistribution d;
    d.mean = static_cast<double>(n);
    d.lo = n;
    d.truncation_max = n;
    d.pmf = {1.0};
    return d;
}

double CompetitorDistribution::probability(long n) const {
    if (n < lo || n > truncation_max) return 0.0;
    return pmf[static_cast<std::size_t>(n - lo)];
}

long busy_budget(const MacParams& mac, int k, long n) {
    if (!mac.expiration) return n;
    return std::min<long>(n, static_cast<long>(mac.L_bcn) - mac.l_bcn - k);
}

namespace {

double step_prob(double p_b, const MacParams& mac, int k, long n) {
    const long m = busy_budget(mac, k, n);
    if (m < 0) return 0.0;
    return 1.0 - std::pow(p_b, static_cast<double>(m) + 1.0);
}

}  // namespace

std::vector<std::vector<double>> transition_matrix(double p_b, const MacParams& mac, long n) {
    validate(mac);
    const int cw = mac.cw;
    const double u = 1.0 / cw;
    std::vector<std::vector<double>> t(cw, std::vector<double>(cw, u));
    for (int k = 1; k < cw; ++k) {
        const double q = step_prob(p_b, mac, k, n);
        for (int j = 0; j < cw; ++j) t[k][j] = (1.0 - q) * u;
        t[k][k - 1] += q;
    }
    return t;
}

double transmit_prob_tau(double p_b, const MacParams& mac, long n) {
    if (p_b < 0.0 || p_b > 1.0) throw std::invalid_argument("p_b outside [0, 1]");
    if (p_b >= 1.0) return 0.0;
    if (mac.cw == 1) return 1.0;
    // u_k = expected visits to states k..cw-1 per visit to k, walking down the chain
    double u = 1.0;
    double sum = 1.0;
    for (int k = mac.cw - 2; k >= 0; --k) {
        u = 1.0 + step_prob(p_b, mac, k + 1, n) * u;
        sum += u;
    }
    return u / sum;
}

double mean_tau(double p_b, const MacParams& mac, const CompetitorDistribution& dist) {
    const long saturate = static_cast<long>(mac.L_bcn) - mac.l_bcn - 1;
    double cached = -1.0;
    return dist.expect([&](long n) {
        if (mac.expiration && n >= saturate) {
            if (cached < 0.0) cached = transmit_prob_tau(p_b, mac, n);
            return cached;
        }
        return transmit_prob_tau(p_b, mac, n);
    });
}

double busy_residual(double p_b, const CompetitorDistribution& dist, const MacParams& mac) {
    const long saturate = static_cast<long>(mac.L_bcn) - mac.l_bcn - 1;
    double cached = -1.0;
    const double idle = dist.expect([&](long n) {
        double tau;
        if (mac.expiration && n >= saturate) {
            if (cached < 0.0) cached = transmit_prob_tau(p_b, mac, n);
            tau = cached;
        } else {
            tau = transmit_prob_tau(p_b, mac, n);
        }
        return std::pow(1.0 - tau, static_cast<double>(n));
    });
    return p_b - (1.0 - idle);
}

FixedPointSolution solve_busy_prob(const CompetitorDistribution& dist, const MacParams& mac,
                                   const SolverOptions& opts) {
    validate(mac);
    if (!(opts.grid_step > 0.0 && opts.grid_step <= 0.5)) throw std::invalid_argument("grid_step outside (0, 0.5]");
    const long last = std::lround(1.0 / opts.grid_step);
    FixedPointSolution sol;
    sol.grid_step = opts.grid_step;
    auto at = [&](long i) { return std::min(1.0, static_cast<double>(i) * opts.grid_step); };
    auto eval = [&](long i) {
        ++sol.evaluations;
        return busy_residual(at(i), dist, mac);
    };

    long best = 0;
    double best_r = std::numeric_limits<double>::infinity();
    auto consider = [&](long i, double r) {
        if (std::abs(r) < best_r || (std::abs(r) == best_r && i < best)) {
            best_r = std::abs(r);
            best = i;
        }
    };
    if (opts.exhaustive) {
        for (long i = 0; i <= last; ++i) consider(i, eval(i));
    } else {
        // the residual is increasing in p_b, so the grid minimiser brackets the sign change
        const double r0 = eval(0);
        if (r0 >= 0.0) {
            consider(0, r0);
        } else {
            long lo = 0, hi = last;
            double r_lo = r0, r_hi = eval(last);
            while (hi - lo > 1) {
                const long mid = lo + (hi - lo) / 2;
                const double r = eval(mid);
                if (r >= 0.0) {
                    hi = mid;
                    r_hi = r;
                } else {
                    lo = mid;
                    r_lo = r;
                }
            }
            consider(lo, r_lo);
            consider(hi, r_hi);
        }
    }
    sol.p_b = at(best);
    sol.residual = best_r;
    sol.tau = mean_tau(sol.p_b, mac, dist);
    if (!(sol.residual <= opts.max_residual)) {
        throw ConvergenceError("busy probability fixed point not found: best residual " +
                               numeric::format_double(sol.residual) + " at p_b = " + numeric::format_double(sol.p_b));
    }
    return sol;
}

namespace {

// cdf[k] = P(at most k busy slots before the b-th idle slot), k = 0..kmax
std::vector<double> negbin_cdf(int b, double p_b, long kmax) {
    std::vector<double> cdf(static_cast<std::size_t>(kmax + 1), 0.0);
    if (p_b <= 0.0) {
        std::fill(cdf.begin(), cdf.end(), 1.0);
        return cdf;
    }
    if (p_b >= 1.0) return cdf;
    const double lp = std::log(p_b);
    double logpmf = b * std::log1p(-p_b);
    double acc = 0.0;
    for (long k = 0; k <= kmax; ++k) {
        if (k > 0) logpmf += std::log((b + k - 1.0) / static_cast<double>(k)) + lp;
        acc += std::exp(logpmf);
        cdf[static_cast<std::size_t>(k)] = std::min(1.0, acc);
    }
    return cdf;
}

double log_choose(double n, double k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double start_prob_sigma(const CompetitorDistribution& dist, const MacParams& mac, double p_b) {
    const long span = static_cast<long>(mac.L_bcn) - mac.l_bcn;
    const double lp = std::log(p_b);
    const double lq = std::log1p(-p_b);
    double total = 0.0;
    for (int b = 0; b < mac.cw; ++b) {
        total += dist.expect([&](long n) {
            double s = 0.0;
            for (long k = 0;; ++k) {
                const long m = mac.expiration ? std::min(n, span - k) : n;
                if (k > m) break;
                if (b == 0 && k > 0) break;
                const double log_sigma = log_choose(static_cast<double>(m), static_cast<double>(k)) +
                                         (k ? k * lp : 0.0) + (m - k ? (m - k) * lq : 0.0);
                const double log_term = (b == 0 ? 0.0 : log_choose(b + k - 1.0, static_cast<double>(k))) +
                                        (k ? k * lp : 0.0) + (b ? b * lq : 0.0);
                s += std::exp(log_term - log_sigma);
            }
            return s;
        });
    }
    return std::clamp(total / mac.cw, 0.0, 1.0);
}

}  // namespace

double start_prob(const CompetitorDistribution& dist, const MacParams& mac, double p_b, StartForm form) {
    validate(mac);
    if (p_b < 0.0 || p_b > 1.0) throw std::invalid_argument("p_b outside [0, 1]");
    if (form == StartForm::printed_sigma && p_b > 0.0 && p_b < 1.0) return start_prob_sigma(dist, mac, p_b);

    const long span = static_cast<long>(mac.L_bcn) - mac.l_bcn;
    double total = 0.0;
    for (int b = 0; b < mac.cw; ++b) {
        const long cap = mac.expiration ? span - b : std::numeric_limits<long>::max();
        if (cap < 0) continue;
        if (b == 0) {
            total += 1.0;
            continue;
        }
        const long kmax = std::min(dist.truncation_max, cap);
        const auto cdf = negbin_cdf(b, p_b, kmax);
        total += dist.expect([&](long n) { return cdf[static_cast<std::size_t>(std::min(n, kmax))]; });
    }
    return std::clamp(total / mac.cw, 0.0, 1.0);
}

double sync_prob(double intensity_per_m2, const geometry::Radii& radii, const CompetitorDistribution& dist,
                 const MacParams& mac, double p_start, double tau) {
    validate(mac);
    const double a_cs = geometry::disc_area(radii.r_cs_m);
    const double someone = -std::expm1(-intensity_per_m2 * a_cs);
    const double other_starts = 1.0 - dist.expect([&](long n) { return std::pow(1.0 - p_start, static_cast<double>(n)); });
    return std::clamp(someone * other_starts * tau, 0.0, 1.0);
}

double hn_prob(double intensity_per_m2, const geometry::Radii& radii, const CompetitorDistribution& dist,
               const MacParams& mac, double p_start) {
    validate(mac);
    const double a_cs = geometry::disc_area(radii.r_cs_m);
    const double someone = -std::expm1(-3.0 * intensity_per_m2 * a_cs);
    const double big_l = mac.L_bcn;
    const double free_slots = mac.L_bcn - mac.l_bcn;
    const double ratio = free_slots / big_l;
    const double clear = (free_slots + 1.0) / big_l * dist.expect([&](long n) { return std::pow(ratio, static_cast<double>(n)); });
    return std::clamp(someone * (1.0 - clear) * p_start, 0.0, 1.0);
}

}  // namespace coex::temporal
