#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coex/geometry.hpp"
#include "coex/interference.hpp"
#include "coex/metrics.hpp"
#include "coex/montecarlo.hpp"

namespace coex::experiment {

inline constexpr int kCsvSchemaVersion = 1;

enum class IntensityUnit { per_disc, per_m2 };

struct RatConfig {
    bool present = false;
    IntensityUnit unit = IntensityUnit::per_disc;
    double intensity = 0.0;
    double slot_us = 0.0;
    double bandwidth_mhz = 20.0;
    int cw = 15;
    std::optional<double> busy_prob;
    std::optional<double> activity;
};

struct ScenarioConfig {
    std::string source;
    double side_m = 2000.0;
    geometry::Radii radii;
    bool hn_over_total = true;
    std::vector<int> cw{15};
    int L_bcn = 1500;
    int l_bcn = 2;
    double slot_us = 66.7;
    IntensityUnit dsrc_unit = IntensityUnit::per_disc;
    std::vector<double> dsrc_intensity;
    RatConfig wifi;
    RatConfig cv2x;
    std::vector<std::string> interference{"none"};
    double grid_step = 1e-5;

    bool mc_enabled = false;
    long mc_trials = 1000;
    std::uint64_t mc_seed = 1;
    bool mc_desync = false;
    std::vector<double> mc_intensity;  // empty: every dsrc intensity
    std::vector<int> mc_cw;            // empty: every cw
    std::vector<std::string> mc_interference;

    bool fit_enabled = false;
    std::vector<double> fit_radii;
    std::size_t fit_samples = 0;

    std::string output_dir = ".";
    std::string output_prefix = "coex";
};

struct Diagnostic {
    std::string field;
    int line = 0;
    std::string message;
};

std::string to_string(const Diagnostic& d);

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string source, std::vector<Diagnostic> diags);
    const std::vector<Diagnostic>& diagnostics() const { return diags_; }

private:
    std::vector<Diagnostic> diags_;
};

// Parses and validates; throws ConfigError listing every problem found.
ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(std::istream& is, const std::string& source = "<input>");
// Semantic checks only; empty when valid.
std::vector<Diagnostic> validate_file(const std::string& path);

double intensity_per_m2(double value, IntensityUnit unit, double r_cs);

interference::CoexScenario make_scenario(const ScenarioConfig& c, double dsrc_intensity, int cw,
                                         const std::string& interference_set);

std::vector<metrics::SweepPoint> sweep_points(const ScenarioConfig& c);

struct McRow {
    std::string interference;
    double lambda_per_disc = 0.0;
    int cw = 0;
    std::uint64_t seed = 0;
    montecarlo::BatchSummary summary;
    bool ok = true;
    std::string error;
};

std::vector<McRow> run_montecarlo(const ScenarioConfig& c);

void write_analytical_csv(std::ostream& os, const std::vector<metrics::SweepRow>& rows);
void write_montecarlo_csv(std::ostream& os, const std::vector<McRow>& rows);

struct CompareRow {
    std::string interference;
    std::string lambda_per_disc;
    std::string cw;
    std::string quantity;
    double analytical = 0.0;
    double empirical = 0.0;
    double std_error = 0.0;
    double delta = 0.0;
    double tolerance = 0.0;
    bool within = false;
};

// Joins rows on (interference, lambda_per_disc, cw) and compares p_start, p_sync, p_hn,
// pdr and stpdr; tolerance = max(0.03, 3 * stderr).
std::vector<CompareRow> compare(std::istream& analytical_csv, std::istream& mc_csv);
void write_compare_csv(std::ostream& os, const std::vector<CompareRow>& rows);

struct RunResult {
    std::vector<std::string> written;
    std::size_t analytical_rows = 0;
    std::size_t failed_points = 0;
};

// Output directory: the config's output.dir, resolved against base_dir when relative.
RunResult run(const ScenarioConfig& c, const std::string& base_dir);

}  // namespace coex::experiment
