#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "coex/experiment.hpp"
#include "coex/geometry.hpp"
#include "coex/numeric.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kModelError = 2;

std::string output_base() {
    const char* env = std::getenv("COEX_OUT_DIR");
    return env && *env ? env : ".";
}

int cmd_run(const std::string& path) {
    using namespace coex::experiment;
    ScenarioConfig cfg;
    try {
        cfg = load_config(path);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kConfigError;
    }
    try {
        const auto res = run(cfg, output_base());
        for (const auto& f : res.written) std::cout << "wrote " << f << '\n';
        if (res.failed_points) {
            std::cerr << res.failed_points << " point(s) failed, see status column\n";
            return kModelError;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kModelError;
    }
    return kOk;
}

int cmd_validate(const std::string& path) {
    const auto diags = coex::experiment::validate_file(path);
    for (const auto& d : diags) std::cerr << path << ": " << coex::experiment::to_string(d) << '\n';
    return diags.empty() ? kOk : kConfigError;
}

int cmd_fit(double radius, bool all, std::size_t samples) {
    std::vector<coex::geometry::QuadraticFit> fits;
    try {
        if (all) {
            for (int r = 100; r <= 2000; r += 100) fits.push_back(coex::geometry::fit_inverse_area(r, samples));
        } else {
            fits.push_back(coex::geometry::fit_inverse_area(radius, samples));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kModelError;
    }
    coex::geometry::write_fit_table(std::cout, fits);
    return kOk;
}

int cmd_compare(const std::string& a, const std::string& m, const std::string& out) {
    std::ifstream fa(a), fm(m);
    if (!fa || !fm) {
        std::cerr << "error: cannot open " << (!fa ? a : m) << '\n';
        return kConfigError;
    }
    try {
        const auto rows = coex::experiment::compare(fa, fm);
        if (out.empty()) {
            coex::experiment::write_compare_csv(std::cout, rows);
        } else {
            std::ofstream os(out, std::ios::binary);
            coex::experiment::write_compare_csv(os, rows);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Broadcast reliability under multi-RAT co-channel interference"};
    app.require_subcommand(1);

    std::string cfg;
    auto* run = app.add_subcommand("run", "evaluate a scenario file and write CSV tables");
    run->add_option("config", cfg, "scenario file")->required();

    auto* validate = app.add_subcommand("validate", "check a scenario file without side effects");
    validate->add_option("config", cfg, "scenario file")->required();

    double radius = 500.0;
    bool all = false;
    std::size_t samples = 0;
    auto* fit = app.add_subcommand("fit", "fit the inverse collision-area map");
    auto* radius_opt = fit->add_option("--radius", radius, "disc radius in metres");
    auto* all_opt = fit->add_flag("--all", all, "fit every radius from 100 m to 2000 m in 100 m steps");
    fit->add_option("--samples", samples, "grid size (0 selects a 1 m step)");
    radius_opt->excludes(all_opt);

    std::string analytical, mc, out;
    auto* cmp = app.add_subcommand("compare", "compare analytical and Monte Carlo CSV files");
    cmp->add_option("analytical", analytical)->required();
    cmp->add_option("montecarlo", mc)->required();
    cmp->add_option("-o,--output", out, "write to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kConfigError;
    }
    if (*run) return cmd_run(cfg);
    if (*validate) return cmd_validate(cfg);
    if (*fit) return cmd_fit(radius, all, samples);
    if (*cmp) return cmd_compare(analytical, mc, out);
    return kConfigError;
}
