#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "coex/experiment.hpp"

namespace coex::experiment {

namespace pt = boost::property_tree;

std::string to_string(const Diagnostic& d) {
    std::string s;
    if (d.line > 0) s += "line " + std::to_string(d.line) + ": ";
    s += d.field + ": " + d.message;
    return s;
}

namespace {

std::string join_diags(const std::string& source, const std::vector<Diagnostic>& diags) {
    std::string s = source + ": invalid configuration";
    for (const auto& d : diags) s += "\n  " + to_string(d);
    return s;
}

// "section.key" -> line number, from a plain scan of the text
std::map<std::string, int> index_lines(const std::string& text) {
    std::map<std::string, int> out;
    std::istringstream is(text);
    std::string line, section;
    int n = 0;
    while (std::getline(is, line)) {
        ++n;
        boost::trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[' && line.back() == ']') {
            section = boost::trim_copy(line.substr(1, line.size() - 2));
            out.emplace(section, n);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const auto key = boost::trim_copy(line.substr(0, eq));
        out.emplace(section.empty() ? key : section + "." + key, n);
    }
    return out;
}

class Reader {
public:
    Reader(const pt::ptree& tree, std::map<std::string, int> lines) : tree_(tree), lines_(std::move(lines)) {}

    std::vector<Diagnostic> diags;

    bool has(const std::string& path) const { return static_cast<bool>(tree_.get_optional<std::string>(path)); }
    bool has_section(const std::string& name) const { return static_cast<bool>(tree_.get_child_optional(name)); }

    void error(const std::string& field, const std::string& msg) { diags.push_back({field, line(field), msg}); }

    int line(const std::string& field) const {
        auto it = lines_.find(field);
        if (it != lines_.end()) return it->second;
        const auto dot = field.find('.');
        if (dot != std::string::npos) {
            it = lines_.find(field.substr(0, dot));
            if (it != lines_.end()) return it->second;
        }
        return 0;
    }

    std::string text(const std::string& path, const std::string& fallback) const {
        auto v = tree_.get_optional<std::string>(path);
        return v ? boost::trim_copy(*v) : fallback;
    }

    std::vector<std::string> list(const std::string& path) const {
        std::vector<std::string> out;
        auto v = tree_.get_optional<std::string>(path);
        if (!v) return out;
        std::vector<std::string> parts;
        boost::split(parts, *v, boost::is_any_of(","));
        for (auto& p : parts) {
            boost::trim(p);
            if (!p.empty()) out.push_back(p);
        }
        return out;
    }

    bool number(const std::string& field, const std::string& s, double& out) {
        try {
            std::size_t pos = 0;
            out = std::stod(s, &pos);
            if (pos != s.size() || !std::isfinite(out)) throw std::invalid_argument(s);
            return true;
        } catch (const std::exception&) {
            error(field, "expected a number, got '" + s + "'");
            return false;
        }
    }

    double real(const std::string& path, double fallback) {
        if (!has(path)) return fallback;
        double v = fallback;
        number(path, text(path, ""), v);
        return v;
    }

    long integer(const std::string& path, long fallback) {
        if (!has(path)) return fallback;
        double v = 0.0;
        if (!number(path, text(path, ""), v)) return fallback;
        if (v != std::floor(v)) {
            error(path, "expected an integer");
            return fallback;
        }
        return static_cast<long>(v);
    }

    std::vector<double> reals(const std::string& path) {
        std::vector<double> out;
        for (const auto& s : list(path)) {
            double v = 0.0;
            if (number(path, s, v)) out.push_back(v);
        }
        return out;
    }

    bool boolean(const std::string& path, bool fallback) {
        if (!has(path)) return fallback;
        const auto s = boost::to_lower_copy(text(path, ""));
        if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
        if (s == "false" || s == "no" || s == "off" || s == "0") return false;
        error(path, "expected true or false, got '" + s + "'");
        return fallback;
    }

    IntensityUnit unit(const std::string& path) {
        if (!has(path)) {
            error(path, "intensity unit must be stated explicitly (per_disc or per_m2)");
            return IntensityUnit::per_disc;
        }
        const auto s = text(path, "");
        if (s == "per_disc") return IntensityUnit::per_disc;
        if (s == "per_m2") return IntensityUnit::per_m2;
        error(path, "unknown intensity unit '" + s + "' (per_disc or per_m2)");
        return IntensityUnit::per_disc;
    }

    void check_keys(const std::map<std::string, std::set<std::string>>& known) {
        for (const auto& [section, child] : tree_) {
            if (child.empty()) {
                error(section, "key outside any section");
                continue;
            }
            auto it = known.find(section);
            if (it == known.end()) {
                error(section, "unknown section");
                continue;
            }
            for (const auto& kv : child)
                if (!it->second.count(kv.first)) error(section + "." + kv.first, "unknown key");
        }
    }

private:
    const pt::ptree& tree_;
    std::map<std::string, int> lines_;
};

RatConfig read_rat(Reader& r, const std::string& name, double slot_us) {
    RatConfig c;
    c.present = r.has_section(name);
    if (!c.present) return c;
    c.unit = r.unit(name + ".intensity_unit");
    c.intensity = r.real(name + ".intensity", 0.0);
    c.slot_us = r.real(name + ".slot_us", slot_us);
    c.bandwidth_mhz = r.real(name + ".bandwidth_mhz", 20.0);
    c.cw = static_cast<int>(r.integer(name + ".cw", 15));
    if (r.has(name + ".busy_prob")) c.busy_prob = r.real(name + ".busy_prob", 0.0);
    if (r.has(name + ".activity")) c.activity = r.real(name + ".activity", 0.0);
    return c;
}

void semantic_checks(Reader& r, const ScenarioConfig& c) {
    auto prob = [&](const std::string& f, double v) {
        if (v < 0.0 || v > 1.0) r.error(f, "probability must lie in [0, 1]");
    };
    if (!(c.side_m > 0.0)) r.error("scenario.side_m", "must be positive");
    if (!(c.radii.r_cs_m > 0.0)) r.error("scenario.r_cs_m", "must be positive");
    if (!(c.radii.r_tx_m > 0.0)) r.error("scenario.r_tx_m", "must be positive");
    if (c.cw.empty()) r.error("mac.cw", "at least one contention window is required");
    for (int w : c.cw)
        if (w < 1) r.error("mac.cw", "contention windows must be at least 1");
    if (c.l_bcn < 1) r.error("mac.l_bcn", "must be at least 1");
    if (c.l_bcn >= c.L_bcn) r.error("mac.l_bcn", "mac.l_bcn must be smaller than mac.L_bcn");
    if (!(c.slot_us > 0.0)) r.error("mac.slot_us", "must be positive");
    if (c.dsrc_intensity.empty()) r.error("dsrc.intensity", "at least one intensity is required");
    for (double v : c.dsrc_intensity)
        if (v < 0.0) r.error("dsrc.intensity", "intensities must be nonnegative");
    if (!(c.grid_step > 0.0 && c.grid_step <= 0.5)) r.error("solver.grid_step", "must lie in (0, 0.5]");

    auto check_rat = [&](const std::string& name, const RatConfig& rc) {
        if (!rc.present) return;
        if (rc.intensity < 0.0) r.error(name + ".intensity", "must be nonnegative");
        if (!(rc.slot_us > 0.0)) r.error(name + ".slot_us", "must be positive");
        if (!(rc.bandwidth_mhz > 0.0)) r.error(name + ".bandwidth_mhz", "must be positive");
        if (rc.activity) prob(name + ".activity", *rc.activity);
    };
    check_rat("wifi", c.wifi);
    check_rat("cv2x", c.cv2x);
    if (c.wifi.busy_prob) r.error("wifi.busy_prob", "busy_prob is only valid for cv2x (use wifi.activity)");
    if (c.cv2x.activity) r.error("cv2x.activity", "activity is only valid for wifi (use cv2x.busy_prob)");
    if (c.cv2x.present) {
        if (!c.cv2x.busy_prob) r.error("cv2x.busy_prob", "required for cv2x");
        else prob("cv2x.busy_prob", *c.cv2x.busy_prob);
    }

    auto check_sets = [&](const std::string& field, const std::vector<std::string>& sets) {
        for (const auto& s : sets) {
            if (s == "none") continue;
            std::vector<std::string> parts;
            boost::split(parts, s, boost::is_any_of("+"));
            for (const auto& p : parts) {
                if (p == "wifi" && !c.wifi.present) r.error(field, "interference set '" + s + "' needs a [wifi] section");
                else if (p == "cv2x" && !c.cv2x.present) r.error(field, "interference set '" + s + "' needs a [cv2x] section");
                else if (p != "wifi" && p != "cv2x") r.error(field, "unknown interferer '" + p + "'");
            }
        }
    };
    if (c.interference.empty()) r.error("sweep.interference", "at least one interference set is required");
    check_sets("sweep.interference", c.interference);

    if (c.mc_enabled) {
        if (c.side_m < 4.0 * c.radii.r_cs_m)
            r.error("scenario.side_m", "Monte Carlo needs scenario.side_m >= 4 * scenario.r_cs_m (" +
                                           std::to_string(4.0 * c.radii.r_cs_m) + ")");
        if (c.mc_trials < 100) r.error("montecarlo.trials", "must be at least 100");
        for (double v : c.mc_intensity)
            if (std::find(c.dsrc_intensity.begin(), c.dsrc_intensity.end(), v) == c.dsrc_intensity.end())
                r.error("montecarlo.intensity", "value not in dsrc.intensity");
        for (int w : c.mc_cw)
            if (std::find(c.cw.begin(), c.cw.end(), w) == c.cw.end()) r.error("montecarlo.cw", "value not in mac.cw");
        for (const auto& s : c.mc_interference)
            if (std::find(c.interference.begin(), c.interference.end(), s) == c.interference.end())
                r.error("montecarlo.interference", "set '" + s + "' not in sweep.interference");
    }
    if (c.fit_enabled) {
        if (c.fit_radii.empty()) r.error("fit.radii", "at least one radius is required");
        for (double v : c.fit_radii)
            if (!(v > 0.0)) r.error("fit.radii", "radii must be positive");
        if (c.fit_samples != 0 && c.fit_samples < 100) r.error("fit.samples", "must be 0 (1 m grid) or at least 100");
    }
}

ScenarioConfig parse_text(const std::string& text, const std::string& source) {
    pt::ptree tree;
    try {
        std::istringstream is(text);
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(source, {{"syntax", static_cast<int>(e.line()), e.message()}});
    }
    Reader r(tree, index_lines(text));
    r.check_keys({
        {"scenario", {"side_m", "r_cs_m", "r_tx_m", "hn_population"}},
        {"mac", {"cw", "L_bcn", "l_bcn", "slot_us"}},
        {"dsrc", {"intensity_unit", "intensity"}},
        {"wifi", {"intensity_unit", "intensity", "slot_us", "bandwidth_mhz", "cw", "activity", "busy_prob"}},
        {"cv2x", {"intensity_unit", "intensity", "slot_us", "bandwidth_mhz", "busy_prob", "activity"}},
        {"sweep", {"interference"}},
        {"solver", {"grid_step"}},
        {"montecarlo", {"enabled", "trials", "seed", "desync", "intensity", "cw", "interference"}},
        {"fit", {"enabled", "radii", "samples"}},
        {"output", {"dir", "prefix"}},
    });

    ScenarioConfig c;
    c.source = source;
    c.side_m = r.real("scenario.side_m", c.side_m);
    c.radii.r_cs_m = r.real("scenario.r_cs_m", c.radii.r_cs_m);
    c.radii.r_tx_m = r.real("scenario.r_tx_m", c.radii.r_tx_m);
    const auto hn = r.text("scenario.hn_population", "total");
    if (hn == "total") c.hn_over_total = true;
    else if (hn == "dsrc") c.hn_over_total = false;
    else r.error("scenario.hn_population", "expected total or dsrc");

    if (r.has("mac.cw")) {
        c.cw.clear();
        for (double v : r.reals("mac.cw")) {
            if (v != std::floor(v)) r.error("mac.cw", "contention windows must be integers");
            c.cw.push_back(static_cast<int>(v));
        }
    }
    c.L_bcn = static_cast<int>(r.integer("mac.L_bcn", c.L_bcn));
    c.l_bcn = static_cast<int>(r.integer("mac.l_bcn", c.l_bcn));
    c.slot_us = r.real("mac.slot_us", c.slot_us);

    if (!r.has_section("dsrc")) r.error("dsrc", "section is required");
    else c.dsrc_unit = r.unit("dsrc.intensity_unit");
    c.dsrc_intensity = r.reals("dsrc.intensity");
    c.wifi = read_rat(r, "wifi", 9.0);
    c.cv2x = read_rat(r, "cv2x", 1000.0);
    if (r.has("sweep.interference")) c.interference = r.list("sweep.interference");
    c.grid_step = r.real("solver.grid_step", c.grid_step);

    c.mc_enabled = r.boolean("montecarlo.enabled", false);
    c.mc_trials = r.integer("montecarlo.trials", c.mc_trials);
    const long seed = r.integer("montecarlo.seed", 1);
    if (seed < 0) r.error("montecarlo.seed", "must be nonnegative");
    c.mc_seed = static_cast<std::uint64_t>(std::max(0L, seed));
    c.mc_desync = r.boolean("montecarlo.desync", false);
    c.mc_intensity = r.reals("montecarlo.intensity");
    for (double v : r.reals("montecarlo.cw")) c.mc_cw.push_back(static_cast<int>(v));
    c.mc_interference = r.list("montecarlo.interference");

    c.fit_enabled = r.boolean("fit.enabled", false);
    c.fit_radii = r.reals("fit.radii");
    c.fit_samples = static_cast<std::size_t>(std::max(0L, r.integer("fit.samples", 0)));

    c.output_dir = r.text("output.dir", c.output_dir);
    c.output_prefix = r.text("output.prefix", c.output_prefix);

    semantic_checks(r, c);
    if (!r.diags.empty()) throw ConfigError(source, r.diags);
    return c;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, {{"file", 0, "cannot open"}});
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

ConfigError::ConfigError(std::string source, std::vector<Diagnostic> diags)
    : std::runtime_error(join_diags(source, diags)), diags_(std::move(diags)) {}

ScenarioConfig parse_config(std::istream& is, const std::string& source) {
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_text(ss.str(), source);
}

ScenarioConfig load_config(const std::string& path) { return parse_text(slurp(path), path); }

std::vector<Diagnostic> validate_file(const std::string& path) {
    try {
        load_config(path);
    } catch (const ConfigError& e) {
        return e.diagnostics();
    }
    return {};
}

}  // namespace coex::experiment
