#pragma once

#include <string>
#include <vector>

#include "coex/geometry.hpp"
#include "coex/interference.hpp"
#include "coex/temporal.hpp"

namespace coex::metrics {

struct MetricsReport {
    double pdr = 0.0;
    double stpdr_avg = 0.0;
    double p_start = 0.0;
    double p_sync = 0.0;
    double p_hn = 0.0;
    double rgb_sync_mean = 0.0;
    double rgb_hn_mean = 0.0;
    double p_b = 0.0;
    double p_b_dsrc = 0.0;
    double residual = 0.0;
    double tau = 0.0;
    interference::CoexScenario scenario;
};

struct EvalOptions {
    temporal::SolverOptions solver;
    temporal::StartForm start_form = temporal::StartForm::negative_binomial;
    // subtract the hidden-node integral with the opposite sign, as in one printed variant
    bool printed_hn_sign = false;
    // replace both mean RGB values by 1
    bool force_rgb_one = false;
    double quad_rel_tol = 1e-6;
};

double pdr(double p_start, double p_sync, double p_hn);
double stpdr_instant(double p_start, double p_sync, double p_hn, double a_sync, double a_hn,
                     const geometry::Radii& radii);

struct RgbMeans {
    double sync = 0.0;
    double hn = 0.0;
};

// (1 / pi r_tx^2) * integral of a f_A(a) over the SYNC range [A(r_tx), A(0)] and
// the HN range [A(2 r_tx), A(r_tx)].
RgbMeans rgb_means(const geometry::Radii& radii, const geometry::QuadraticFit& fit, double rel_tol = 1e-6);

double stpdr_average(const interference::CoexScenario& s, const geometry::QuadraticFit& fit,
                     const EvalOptions& opts = {});

MetricsReport evaluate(const interference::CoexScenario& s, const geometry::QuadraticFit& fit,
                       const EvalOptions& opts = {});

struct SweepPoint {
    std::string interference;
    double lambda_per_disc = 0.0;
    interference::CoexScenario scenario;
};

struct SweepRow {
    SweepPoint point;
    MetricsReport report;
    bool ok = true;
    std::string error;
};

enum class SweepAxis { intensity, cw, interference_set };

std::vector<SweepRow> sweep(const std::vector<SweepPoint>& points, const geometry::QuadraticFit& fit,
                            const EvalOptions& opts = {});

// Varies one axis of a template scenario. For intensity the values are DSRC nodes per
// carrier-sense disc; for cw they are contention windows; for interference_set they index
// into interferer_sets.
std::vector<SweepRow> sweep(const interference::CoexScenario& tmpl, SweepAxis axis, const std::vector<double>& values,
                            const geometry::QuadraticFit& fit, const EvalOptions& opts = {},
                            const std::vector<std::vector<interference::RatProfile>>& interferer_sets = {});

}  // namespace coex::metrics
