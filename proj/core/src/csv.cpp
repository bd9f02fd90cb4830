#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "coex/experiment.hpp"
#include "coex/numeric.hpp"

namespace coex::experiment {

namespace {

using numeric::format_double;

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch == '\n' ? ' ' : ch;
    }
    return q + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (in_quotes) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                in_quotes = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            in_quotes = true;
        } else if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int col(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        throw std::runtime_error("csv column '" + name + "' missing");
    }
};

Table read_table(std::istream& is) {
    Table t;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty csv input");
    t.header = split_csv(line);
    while (std::getline(is, line))
        if (!line.empty()) t.rows.push_back(split_csv(line));
    return t;
}

}  // namespace

void write_analytical_csv(std::ostream& os, const std::vector<metrics::SweepRow>& rows) {
    os << "schema_version,interference,lambda_per_disc,cw,L_bcn,l_bcn,p_b,p_b_dsrc,residual,tau,"
          "p_start,p_sync,p_hn,pdr,stpdr_avg,rgb_sync_mean,rgb_hn_mean,status\n";
    for (const auto& row : rows) {
        const auto& s = row.point.scenario;
        os << kCsvSchemaVersion << ',' << quote(row.point.interference) << ',' << format_double(row.point.lambda_per_disc)
           << ',' << s.mac.cw << ',' << s.mac.L_bcn << ',' << s.mac.l_bcn;
        if (row.ok) {
            const auto& r = row.report;
            for (double v : {r.p_b, r.p_b_dsrc, r.residual, r.tau, r.p_start, r.p_sync, r.p_hn, r.pdr, r.stpdr_avg,
                             r.rgb_sync_mean, r.rgb_hn_mean})
                os << ',' << format_double(v);
            os << ",ok\n";
        } else {
            for (int i = 0; i < 11; ++i) os << ',';
            os << ',' << quote("error: " + row.error) << '\n';
        }
    }
}

void write_montecarlo_csv(std::ostream& os, const std::vector<McRow>& rows) {
    os << "schema_version,interference,lambda_per_disc,cw,n_trials,seed,p_start,p_start_se,p_sync,p_sync_se,"
          "p_hn,p_hn_se,pdr,pdr_se,stpdr,stpdr_se,status\n";
    for (const auto& row : rows) {
        os << kCsvSchemaVersion << ',' << quote(row.interference) << ',' << format_double(row.lambda_per_disc) << ','
           << row.cw << ',' << row.summary.n_trials << ',' << row.seed;
        if (row.ok) {
            const auto& b = row.summary;
            for (const auto* e : {&b.p_start, &b.p_sync, &b.p_hn, &b.pdr, &b.stpdr})
                os << ',' << format_double(e->mean) << ',' << format_double(e->std_error);
            os << ",ok\n";
        } else {
            for (int i = 0; i < 10; ++i) os << ',';
            os << ',' << quote("error: " + row.error) << '\n';
        }
    }
}

std::vector<CompareRow> compare(std::istream& analytical_csv, std::istream& mc_csv) {
    const auto a = read_table(analytical_csv);
    const auto m = read_table(mc_csv);
    using Key = std::tuple<std::string, std::string, std::string>;
    std::map<Key, const std::vector<std::string>*> analytic;
    const int ai = a.col("interference"), al = a.col("lambda_per_disc"), ac = a.col("cw"), as = a.col("status");
    for (const auto& r : a.rows)
        if (r.size() == a.header.size() && r[static_cast<std::size_t>(as)] == "ok")
            analytic[{r[static_cast<std::size_t>(ai)], r[static_cast<std::size_t>(al)], r[static_cast<std::size_t>(ac)]}] = &r;

    const std::vector<std::pair<std::string, std::string>> quantities{
        {"p_start", "p_start"}, {"p_sync", "p_sync"}, {"p_hn", "p_hn"}, {"pdr", "pdr"}, {"stpdr", "stpdr_avg"}};
    std::vector<CompareRow> out;
    const int mi = m.col("interference"), ml = m.col("lambda_per_disc"), mc = m.col("cw"), ms = m.col("status");
    for (const auto& r : m.rows) {
        if (r.size() != m.header.size() || r[static_cast<std::size_t>(ms)] != "ok") continue;
        const Key key{r[static_cast<std::size_t>(mi)], r[static_cast<std::size_t>(ml)], r[static_cast<std::size_t>(mc)]};
        auto it = analytic.find(key);
        if (it == analytic.end()) continue;
        for (const auto& [mq, aq] : quantities) {
            CompareRow c;
            std::tie(c.interference, c.lambda_per_disc, c.cw) = key;
            c.quantity = mq;
            c.analytical = std::stod((*it->second)[static_cast<std::size_t>(a.col(aq))]);
            c.empirical = std::stod(r[static_cast<std::size_t>(m.col(mq))]);
            c.std_error = std::stod(r[static_cast<std::size_t>(m.col(mq + "_se"))]);
            c.delta = c.analytical - c.empirical;
            c.tolerance = std::max(0.03, 3.0 * c.std_error);
            c.within = std::abs(c.delta) < c.tolerance;
            out.push_back(c);
        }
    }
    return out;
}

void write_compare_csv(std::ostream& os, const std::vector<CompareRow>& rows) {
    os << "schema_version,interference,lambda_per_disc,cw,quantity,analytical,empirical,std_error,delta,tolerance,within\n";
    for (const auto& r : rows) {
        os << kCsvSchemaVersion << ',' << quote(r.interference) << ',' << r.lambda_per_disc << ',' << r.cw << ','
           << r.quantity << ',' << format_double(r.analytical) << ',' << format_double(r.empirical) << ','
           << format_double(r.std_error) << ',' << format_double(r.delta) << ',' << format_double(r.tolerance) << ','
           << (r.within ? "true" : "false") << '\n';
    }
}

}  // namespace coex::experiment
