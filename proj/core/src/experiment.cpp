#include "coex/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <boost/algorithm/string.hpp>

#include "coex/numeric.hpp"

namespace coex::experiment {

namespace fs = std::filesystem;

double intensity_per_m2(double value, IntensityUnit unit, double r_cs) {
    return unit == IntensityUnit::per_disc ? geometry::per_disc_to_per_m2(value, r_cs) : value;
}

namespace {

double lambda_label(const ScenarioConfig& c, double value) {
    return c.dsrc_unit == IntensityUnit::per_disc ? value : geometry::per_m2_to_per_disc(value, c.radii.r_cs_m);
}

}  // namespace

interference::CoexScenario make_scenario(const ScenarioConfig& c, double dsrc_intensity, int cw,
                                         const std::string& interference_set) {
    interference::CoexScenario s;
    s.space = {c.side_m};
    s.radii = c.radii;
    s.hn_over_total = c.hn_over_total;
    s.mac.cw = cw;
    s.mac.L_bcn = c.L_bcn;
    s.mac.l_bcn = c.l_bcn;
    s.mac.slot_us = c.slot_us;
    s.dsrc = interference::dsrc_profile(intensity_per_m2(dsrc_intensity, c.dsrc_unit, c.radii.r_cs_m));
    if (interference_set != "none") {
        std::vector<std::string> parts;
        boost::split(parts, interference_set, boost::is_any_of("+"));
        for (const auto& p : parts) {
            if (p == "wifi") {
                auto w = interference::wifi_profile(intensity_per_m2(c.wifi.intensity, c.wifi.unit, c.radii.r_cs_m));
                w.slot_us = c.wifi.slot_us;
                w.bandwidth_mhz = c.wifi.bandwidth_mhz;
                w.cw = c.wifi.cw;
                w.activity_override = c.wifi.activity;
                s.interferers.push_back(w);
            } else if (p == "cv2x") {
                auto v = interference::cv2x_profile(intensity_per_m2(c.cv2x.intensity, c.cv2x.unit, c.radii.r_cs_m),
                                                    c.cv2x.busy_prob.value_or(0.0));
                v.slot_us = c.cv2x.slot_us;
                v.bandwidth_mhz = c.cv2x.bandwidth_mhz;
                s.interferers.push_back(v);
            }
        }
    }
    return s;
}

std::vector<metrics::SweepPoint> sweep_points(const ScenarioConfig& c) {
    std::vector<metrics::SweepPoint> pts;
    for (const auto& set : c.interference)
        for (double lam : c.dsrc_intensity)
            for (int cw : c.cw) {
                metrics::SweepPoint p;
                p.interference = set;
                p.lambda_per_disc = lambda_label(c, lam);
                p.scenario = make_scenario(c, lam, cw, set);
                pts.push_back(std::move(p));
            }
    return pts;
}

std::vector<McRow> run_montecarlo(const ScenarioConfig& c) {
    std::vector<McRow> rows;
    const auto& sets = c.mc_interference.empty() ? c.interference : c.mc_interference;
    const auto& lams = c.mc_intensity.empty() ? c.dsrc_intensity : c.mc_intensity;
    const auto& cws = c.mc_cw.empty() ? c.cw : c.mc_cw;
    montecarlo::SimOptions opts;
    opts.desync = c.mc_desync;
    std::uint64_t index = 0;
    for (const auto& set : sets)
        for (double lam : lams)
            for (int cw : cws) {
                McRow row;
                row.interference = set;
                row.lambda_per_disc = lambda_label(c, lam);
                row.cw = cw;
                row.seed = numeric::derive_seed(c.mc_seed, index++);
                try {
                    row.summary = montecarlo::run_batch(make_scenario(c, lam, cw, set), c.mc_trials, row.seed, opts);
                } catch (const std::exception& e) {
                    row.ok = false;
                    row.error = e.what();
                    row.summary.n_trials = c.mc_trials;
                }
                rows.push_back(std::move(row));
            }
    return rows;
}

RunResult run(const ScenarioConfig& c, const std::string& base_dir) {
    RunResult res;
    fs::path dir(c.output_dir);
    if (dir.is_relative()) dir = fs::path(base_dir) / dir;
    fs::create_directories(dir);
    auto open = [&](const std::string& suffix) {
        const auto path = dir / (c.output_prefix + suffix);
        res.written.push_back(path.string());
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + path.string());
        return os;
    };

    metrics::EvalOptions eval;
    eval.solver.grid_step = c.grid_step;
    geometry::QuadraticFit fit = geometry::fit_inverse_area(c.radii.r_cs_m);
    const auto rows = metrics::sweep(sweep_points(c), fit, eval);
    res.analytical_rows = rows.size();
    for (const auto& r : rows) res.failed_points += !r.ok;
    std::string analytical_text;
    {
        std::ostringstream ss;
        write_analytical_csv(ss, rows);
        analytical_text = ss.str();
        auto os = open("_analytical.csv");
        os << analytical_text;
    }

    if (c.mc_enabled) {
        const auto mc = run_montecarlo(c);
        for (const auto& r : mc) res.failed_points += !r.ok;
        std::ostringstream ss;
        write_montecarlo_csv(ss, mc);
        {
            auto os = open("_montecarlo.csv");
            os << ss.str();
        }
        std::istringstream a(analytical_text), m(ss.str());
        auto os = open("_compare.csv");
        write_compare_csv(os, compare(a, m));
    }

    if (c.fit_enabled) {
        std::vector<geometry::QuadraticFit> fits;
        for (double r : c.fit_radii) fits.push_back(geometry::fit_inverse_area(r, c.fit_samples));
        auto os = open("_fit.txt");
        geometry::write_fit_table(os, fits);
    }
    return res;
}

}  // namespace coex::experiment
