#pragma once

#include <cstddef>
#include <vector>

#include "coex/geometry.hpp"

namespace coex::temporal {

struct MacParams {
    int cw = 15;
    int L_bcn = 1500;
    int l_bcn = 2;
    double slot_us = 66.7;
    // false: a backoff never expires inside the period (used for the Wi-Fi chain)
    bool expiration = true;
};

void validate(const MacParams& mac);

// Normal(mean, mean) discretised on integers, truncated to [lo, truncation_max] and renormalised.
struct CompetitorDistribution {
    double mean = 0.0;
    long lo = 0;
    long truncation_max = 0;
    std::vector<double> pmf;  // pmf[i] = P[n = lo + i]

    static CompetitorDistribution normal(double mean, double sd_span = 6.0);
    static CompetitorDistribution point(long n);

    double probability(long n) const;
    template <class F>
    double expect(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < pmf.size(); ++i) s += pmf[i] * f(lo + static_cast<long>(i));
        return s;
    }
};

// Number of busy slots a counter at state k may absorb before the beacon expires.
long busy_budget(const MacParams& mac, int k, long n);

// Row-stochastic CW x CW backoff chain. Row 0 redraws uniformly; row k steps to k-1
// with q_k = 1 - p_b^(M_k + 1) and otherwise expires and redraws uniformly.
std::vector<std::vector<double>> transition_matrix(double p_b, const MacParams& mac, long n);

// Stationary mass of state 0 of transition_matrix, in closed form. p_b = 1 gives 0.
double transmit_prob_tau(double p_b, const MacParams& mac, long n);
double mean_tau(double p_b, const MacParams& mac, const CompetitorDistribution& dist);

struct FixedPointSolution {
    double p_b = 0.0;
    double tau = 0.0;
    double residual = 0.0;
    double grid_step = 1e-5;
    std::size_t evaluations = 0;
};

struct SolverOptions {
    double grid_step = 1e-5;
    double max_residual = 1e-3;
    // scan every grid point instead of bisecting on the grid index
    bool exhaustive = false;
};

// p_b - (1 - E[(1 - tau(p_b, n))^n])
double busy_residual(double p_b, const CompetitorDistribution& dist, const MacParams& mac);

FixedPointSolution solve_busy_prob(const CompetitorDistribution& dist, const MacParams& mac,
                                   const SolverOptions& opts = {});

enum class StartForm { negative_binomial, printed_sigma };

double start_prob(const CompetitorDistribution& dist, const MacParams& mac, double p_b,
                  StartForm form = StartForm::negative_binomial);

double sync_prob(double intensity_per_m2, const geometry::Radii& radii, const CompetitorDistribution& dist,
                 const MacParams& mac, double p_start, double tau);

double hn_prob(double intensity_per_m2, const geometry::Radii& radii, const CompetitorDistribution& dist,
               const MacParams& mac, double p_start);

}  // namespace coex::temporal
