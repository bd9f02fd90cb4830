#include "coex/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "coex/numeric.hpp"

namespace coex::metrics {

double pdr(double p_start, double p_sync, double p_hn) {
    for (double p : {p_start, p_sync, p_hn})
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("probability outside [0, 1]");
    if (p_sync + p_hn > 1.0) throw std::domain_error("p_sync + p_hn exceeds 1");
    return p_start * (1.0 - p_sync - p_hn);
}

double stpdr_instant(double p_start, double p_sync, double p_hn, double a_sync, double a_hn,
                     const geometry::Radii& radii) {
    return p_start * (1.0 - p_sync * geometry::rgb(a_sync, radii) - p_hn * geometry::rgb(a_hn, radii));
}

RgbMeans rgb_means(const geometry::Radii& radii, const geometry::QuadraticFit& fit, double rel_tol) {
    const double r = radii.r_cs_m;
    auto area = [&](double l) { return geometry::collision_area(std::min(l, 2.0 * r), r); };
    const geometry::SystemSpace unit{fit.r_m};
    auto weighted = [&](double a) { return a * geometry::area_pdf(a, fit, unit); };
    const double a0 = area(0.0);
    const double a1 = area(radii.r_tx_m);
    const double a2 = area(2.0 * radii.r_tx_m);
    const double denom = geometry::disc_area(radii.r_tx_m);
    RgbMeans m;
    m.sync = numeric::integrate(weighted, a1, a0, rel_tol, 1e-9 * denom).value / denom;
    m.hn = numeric::integrate(weighted, a2, a1, rel_tol, 1e-9 * denom).value / denom;
    return m;
}

namespace {

double combine(double p_start, double p_sync, double p_hn, const RgbMeans& g, const EvalOptions& opts) {
    const double rs = opts.force_rgb_one ? 1.0 : g.sync;
    const double rh = opts.force_rgb_one ? 1.0 : g.hn;
    const double hn_term = opts.printed_hn_sign ? -p_hn * rh : p_hn * rh;
    return p_start * (1.0 - p_sync * rs - hn_term);
}

}  // namespace

MetricsReport evaluate(const interference::CoexScenario& s, const geometry::QuadraticFit& fit, const EvalOptions& opts) {
    MetricsReport rep;
    rep.scenario = s;
    const auto busy = interference::solve_coexistence(s, opts.solver);
    const auto dist = interference::effective_competitor_distribution(s);
    rep.p_b_dsrc = busy.dsrc.p_b;
    rep.p_b = busy.p_b;
    rep.residual = busy.dsrc.residual;
    rep.tau = busy.dsrc.tau;
    rep.p_start = temporal::start_prob(dist, s.mac, rep.p_b, opts.start_form);
    rep.p_sync = temporal::sync_prob(s.dsrc.intensity_per_m2, s.radii, dist, s.mac, rep.p_start, rep.tau);
    const double hn_intensity = s.hn_over_total ? interference::total_intensity(s) : s.dsrc.intensity_per_m2;
    rep.p_hn = temporal::hn_prob(hn_intensity, s.radii, dist, s.mac, rep.p_start);
    rep.pdr = pdr(rep.p_start, rep.p_sync, rep.p_hn);
    const auto g = rgb_means(s.radii, fit, opts.quad_rel_tol);
    rep.rgb_sync_mean = g.sync;
    rep.rgb_hn_mean = g.hn;
    rep.stpdr_avg = combine(rep.p_start, rep.p_sync, rep.p_hn, g, opts);
    return rep;
}

double stpdr_average(const interference::CoexScenario& s, const geometry::QuadraticFit& fit, const EvalOptions& opts) {
    return evaluate(s, fit, opts).stpdr_avg;
}

std::vector<SweepRow> sweep(const std::vector<SweepPoint>& points, const geometry::QuadraticFit& fit,
                            const EvalOptions& opts) {
    std::vector<SweepRow> rows;
    rows.reserve(points.size());
    for (const auto& p : points) {
        SweepRow row;
        row.point = p;
        try {
            row.report = evaluate(p.scenario, fit, opts);
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
            row.report.scenario = p.scenario;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SweepRow> sweep(const interference::CoexScenario& tmpl, SweepAxis axis, const std::vector<double>& values,
                            const geometry::QuadraticFit& fit, const EvalOptions& opts,
                            const std::vector<std::vector<interference::RatProfile>>& interferer_sets) {
    std::vector<SweepPoint> points;
    for (double v : values) {
        SweepPoint p;
        p.scenario = tmpl;
        switch (axis) {
            case SweepAxis::intensity:
                p.scenario.dsrc.intensity_per_m2 = geometry::per_disc_to_per_m2(v, tmpl.radii.r_cs_m);
                break;
            case SweepAxis::cw:
                p.scenario.mac.cw = static_cast<int>(v);
                break;
            case SweepAxis::interference_set: {
                const auto i = static_cast<std::size_t>(v);
                if (i >= interferer_sets.size()) throw std::out_of_range("interference set index out of range");
                p.scenario.interferers = interferer_sets[i];
                break;
            }
        }
        p.lambda_per_disc = geometry::per_m2_to_per_disc(p.scenario.dsrc.intensity_per_m2, tmpl.radii.r_cs_m);
        for (const auto& r : p.scenario.interferers) p.interference += (p.interference.empty() ? "" : "+") + to_string(r.rat);
        if (p.interference.empty()) p.interference = "none";
        points.push_back(std::move(p));
    }
    return sweep(points, fit, opts);
}

}  // namespace coex::metrics
