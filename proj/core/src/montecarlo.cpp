#include "coex/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

#include "coex/geometry.hpp"
#include "coex/numeric.hpp"

namespace coex::montecarlo {

namespace {

enum Stream : std::uint64_t { nodes = 1, backoff = 2, phases = 3, wifi_trace = 4, cv2x_trace = 5 };

// Uniform grid of cell lists over the square for radius queries.
class CellGrid {
public:
    CellGrid(const std::vector<geometry::Point>& pts, double side, double cell)
        : pts_(pts), cell_(cell), n_(std::max(1, static_cast<int>(std::ceil(side / cell)))) {
        start_.assign(static_cast<std::size_t>(n_ * n_) + 1, 0);
        std::vector<int> owner(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            owner[i] = index(pts[i].x_m, pts[i].y_m);
            ++start_[static_cast<std::size_t>(owner[i]) + 1];
        }
        for (std::size_t c = 1; c < start_.size(); ++c) start_[c] += start_[c - 1];
        items_.resize(pts.size());
        std::vector<int> fill(start_.begin(), start_.end() - 1);
        for (std::size_t i = 0; i < pts.size(); ++i) items_[static_cast<std::size_t>(fill[owner[i]]++)] = static_cast<int>(i);
    }

    template <class F>
    void for_each_within(double x, double y, double r, F&& f) const {
        const double r2 = r * r;
        const int cx0 = clamp_cell((x - r) / cell_), cx1 = clamp_cell((x + r) / cell_);
        const int cy0 = clamp_cell((y - r) / cell_), cy1 = clamp_cell((y + r) / cell_);
        for (int cy = cy0; cy <= cy1; ++cy)
            for (int cx = cx0; cx <= cx1; ++cx) {
                const int c = cy * n_ + cx;
                for (int k = start_[c]; k < start_[c + 1]; ++k) {
                    const int j = items_[static_cast<std::size_t>(k)];
                    const double dx = pts_[j].x_m - x, dy = pts_[j].y_m - y;
                    const double d2 = dx * dx + dy * dy;
                    if (d2 <= r2) f(j, d2);
                }
            }
    }

private:
    int clamp_cell(double v) const { return std::clamp(static_cast<int>(std::floor(v)), 0, n_ - 1); }
    int index(double x, double y) const { return clamp_cell(y / cell_) * n_ + clamp_cell(x / cell_); }

    const std::vector<geometry::Point>& pts_;
    double cell_;
    int n_;
    std::vector<int> start_;
    std::vector<int> items_;
};

struct Tx {
    int node;
    long start;
};

}  // namespace

long wifi_first_corrupted_dsrc_slot(double start_us, double duration_us, double dsrc_slot_us) {
    const long k = static_cast<long>(std::ceil(start_us / dsrc_slot_us - 1e-12));
    const double boundary = k * dsrc_slot_us;
    if (boundary >= start_us + duration_us) return -1;
    return k + 1;
}

InterfererTrace interferer_process(const interference::RatProfile& profile, const temporal::MacParams& mac,
                                   std::uint64_t seed, long n_slots, double wifi_activity) {
    InterfererTrace tr;
    tr.active.assign(static_cast<std::size_t>(n_slots), 0);
    tr.corrupted.assign(static_cast<std::size_t>(n_slots), 0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double ds = mac.slot_us;
    if (profile.rat == Rat::cv2x) {
        const double busy = profile.busy_prob_override.value_or(0.0);
        const auto conflict = interference::cv2x_rb_conflict(10.0, 180.0, 12.0, profile.bandwidth_mhz, profile.slot_us, ds);
        const long n_sub = static_cast<long>(std::ceil(n_slots * ds / profile.slot_us)) + 1;
        std::vector<std::uint8_t> sub(static_cast<std::size_t>(n_sub));
        for (auto& s : sub) s = u01(rng) < busy;
        for (long i = 0; i < n_slots; ++i) {
            const long a = static_cast<long>(std::floor(i * ds / profile.slot_us));
            const long b = static_cast<long>(std::floor(((i + 1) * ds - 1e-9) / profile.slot_us));
            bool on = false;
            for (long k = a; k <= b && k < n_sub; ++k) on = on || sub[static_cast<std::size_t>(k)];
            tr.active[static_cast<std::size_t>(i)] = on;
            tr.corrupted[static_cast<std::size_t>(i)] = on && u01(rng) < conflict.spectral_overlap;
        }
    } else if (profile.rat == Rat::wifi) {
        // one-slot frames on a phase-shifted grid; a frame corrupts the DSRC slot whose start
        // boundary it covers, with the per-slot rate scaled by the sub-slot overlap
        const double ws = profile.slot_us;
        const double hit = std::clamp(wifi_activity, 0.0, 1.0) * std::min(1.0, ws / ds);
        const double phase = u01(rng) * ws;
        const long n_w = static_cast<long>(std::ceil(n_slots * ds / ws)) + 2;
        std::vector<std::uint8_t> busy(static_cast<std::size_t>(n_w));
        for (auto& b : busy) b = u01(rng) < hit;
        for (long i = 0; i < n_slots; ++i) {
            const double t = i * ds;
            const long w = static_cast<long>(std::floor((t - phase) / ws)) + 1;
            const bool on = w >= 0 && w < n_w && busy[static_cast<std::size_t>(w)];
            tr.active[static_cast<std::size_t>(i)] = on;
            tr.corrupted[static_cast<std::size_t>(i)] = on;
        }
    }
    return tr;
}

Prepared prepare(const interference::CoexScenario& s) {
    interference::validate(s);
    if (s.space.side_length_m < 4.0 * s.radii.r_cs_m)
        throw std::invalid_argument("Monte Carlo requires side_length_m >= 4 * r_cs_m");
    Prepared p;
    p.scenario = s;
    for (const auto& r : s.interferers)
        if (r.rat == Rat::wifi) p.wifi_activity = interference::wifi_busy_prob(r, s);
    return p;
}

TrialOutcome run_trial(const interference::CoexScenario& s, std::uint64_t seed, const SimOptions& opts) {
    return run_trial(prepare(s), seed, opts);
}

TrialOutcome run_trial(const Prepared& prep, std::uint64_t seed, const SimOptions& opts) {
    const auto& s = prep.scenario;
    const auto& mac = s.mac;
    const double side = s.space.side_length_m;
    const double rcs = s.radii.r_cs_m;
    const long L = mac.L_bcn;
    const long l = mac.l_bcn;

    auto field = geometry::sample_ppp(s.space, s.dsrc.intensity_per_m2, Rat::dsrc, numeric::derive_seed(seed, nodes));
    std::vector<geometry::Point> pts;
    pts.reserve(field.points.size() + 1);
    pts.push_back({side / 2.0, side / 2.0, Rat::dsrc});
    pts.insert(pts.end(), field.points.begin(), field.points.end());
    const int n = static_cast<int>(pts.size());
    const CellGrid grid(pts, side, rcs / 2.0);

    const long t0 = opts.desync ? -L : 0;
    const long horizon = L - t0;
    std::vector<std::uint8_t> corrupted(static_cast<std::size_t>(horizon), 0);
    for (const auto& r : s.interferers) {
        const auto tr = interferer_process(r, mac, numeric::derive_seed(seed, r.rat == Rat::wifi ? wifi_trace : cv2x_trace),
                                           horizon, prep.wifi_activity);
        for (long i = 0; i < horizon; ++i) corrupted[static_cast<std::size_t>(i)] |= tr.corrupted[static_cast<std::size_t>(i)];
    }
    auto is_corrupted = [&](long t) { return corrupted[static_cast<std::size_t>(t - t0)] != 0; };

    std::mt19937_64 rng(numeric::derive_seed(seed, backoff));
    std::uniform_int_distribution<int> draw(0, mac.cw - 1);
    std::mt19937_64 prng(numeric::derive_seed(seed, phases));
    std::uniform_int_distribution<long> phase_draw(0, L - 1);

    // generation slots per node: aligned periods all generate at 0
    std::vector<long> phase(static_cast<std::size_t>(n), 0);
    if (opts.desync)
        for (int i = 1; i < n; ++i) phase[static_cast<std::size_t>(i)] = phase_draw(prng);

    std::vector<int> counter(static_cast<std::size_t>(n), 0);
    std::vector<long> deadline(static_cast<std::size_t>(n), std::numeric_limits<long>::min());
    std::vector<std::uint8_t> pending(static_cast<std::size_t>(n), 0);
    std::vector<int> busy(static_cast<std::size_t>(n), 0);
    std::vector<int> active;
    active.reserve(static_cast<std::size_t>(n));
    std::vector<Tx> txs;

    // busy-count changes scheduled by slot, ring-indexed
    std::vector<std::vector<std::pair<int, int>>> ring(static_cast<std::size_t>(l + 1));
    auto ring_at = [&](long t) -> std::vector<std::pair<int, int>>& {
        return ring[static_cast<std::size_t>(((t % (l + 1)) + (l + 1)) % (l + 1))];
    };

    // generation events: (slot, node); vT generates the tagged beacon at slot 0
    std::vector<std::pair<long, int>> gens;
    for (int i = 0; i < n; ++i) {
        const long ph = phase[static_cast<std::size_t>(i)];
        if (opts.desync) gens.emplace_back(ph - L, i);
        gens.emplace_back(ph, i);
    }
    std::sort(gens.begin(), gens.end());
    std::size_t next_gen = 0;

    TrialOutcome out;
    long vt_start = -1;
    long stop = L - 1;
    std::vector<int> starters;
    for (long t = t0; t <= stop; ++t) {
        for (auto [node, delta] : ring_at(t)) busy[static_cast<std::size_t>(node)] += delta;
        ring_at(t).clear();

        while (next_gen < gens.size() && gens[next_gen].first == t) {
            const int i = gens[next_gen++].second;
            if (!pending[static_cast<std::size_t>(i)]) active.push_back(i);
            pending[static_cast<std::size_t>(i)] = 1;
            counter[static_cast<std::size_t>(i)] = draw(rng);
            deadline[static_cast<std::size_t>(i)] = t + L - l;
            if (opts.event_log) *opts.event_log << t << " gen " << i << " backoff " << counter[static_cast<std::size_t>(i)] << '\n';
        }

        const bool jam = is_corrupted(t);
        starters.clear();
        std::size_t keep = 0;
        for (std::size_t a = 0; a < active.size(); ++a) {
            const int i = active[a];
            const auto ui = static_cast<std::size_t>(i);
            if (!pending[ui]) continue;
            if (t > deadline[ui]) {
                pending[ui] = 0;
                if (opts.event_log) *opts.event_log << t << " exp " << i << '\n';
                continue;
            }
            const bool idle = busy[ui] == 0 && !jam;
            if (idle) {
                if (counter[ui] == 0) {
                    starters.push_back(i);
                    pending[ui] = 0;
                    continue;
                }
                --counter[ui];
            }
            active[keep++] = i;
        }
        active.resize(keep);

        for (int j : starters) {
            txs.push_back({j, t});
            if (opts.event_log) *opts.event_log << t << " tx " << j << '\n';
            if (j == 0 && t >= 0) {
                vt_start = t;
                stop = std::min<long>(L - 1, t + l - 1);
            }
            if (l > 1) {
                const auto& pj = pts[static_cast<std::size_t>(j)];
                grid.for_each_within(pj.x_m, pj.y_m, rcs, [&](int i, double) {
                    if (i == j) return;
                    ring_at(t + 1).emplace_back(i, 1);
                    ring_at(t + l).emplace_back(i, -1);
                });
            }
        }
        if (vt_start < 0 && t >= 0 && !pending[0] && t > deadline[0]) break;
    }

    const auto& vt = pts[0];
    grid.for_each_within(vt.x_m, vt.y_m, rcs, [&](int i, double) { out.n_cs += (i != 0); });
    if (vt_start < 0) return out;

    out.transmitted = true;
    out.expired = false;
    out.start_slot = vt_start;
    for (long t = vt_start; t < vt_start + l && t < L; ++t) out.interfered = out.interfered || is_corrupted(t);

    std::vector<std::pair<int, double>> colliders;
    for (const auto& tx : txs) {
        if (tx.node == 0) continue;
        if (tx.start > vt_start + l - 1 || tx.start + l - 1 < vt_start) continue;
        const auto& pj = pts[static_cast<std::size_t>(tx.node)];
        const double d = std::hypot(pj.x_m - vt.x_m, pj.y_m - vt.y_m);
        if (d <= rcs) {
            out.sync_collided = true;
            colliders.emplace_back(tx.node, d);
        } else if (d <= 2.0 * rcs) {
            out.hn_collided = true;
            colliders.emplace_back(tx.node, d);
        }
    }

    grid.for_each_within(vt.x_m, vt.y_m, s.radii.r_tx_m, [&](int i, double) {
        if (i == 0) return;
        ++out.receivers_total;
        if (out.interfered) return;
        const auto& pi = pts[static_cast<std::size_t>(i)];
        for (const auto& [c, d] : colliders) {
            const auto& pc = pts[static_cast<std::size_t>(c)];
            if (std::hypot(pi.x_m - pc.x_m, pi.y_m - pc.y_m) <= rcs) return;
        }
        ++out.receivers_ok;
    });

    if (colliders.size() == 1) {
        out.affected_area_m2 = geometry::collision_area(colliders[0].second, rcs);
    } else if (colliders.size() > 1) {
        double lens = 0.0;
        for (const auto& c : colliders) lens = std::max(lens, geometry::collision_area(c.second, rcs));
        const double by_receivers = out.receivers_total > 0 && !out.interfered
            ? (1.0 - static_cast<double>(out.receivers_ok) / out.receivers_total) * geometry::disc_area(s.radii.r_tx_m)
            : 0.0;
        out.affected_area_m2 = std::min(geometry::disc_area(rcs), std::max(lens, by_receivers));
    }
    return out;
}

SimEstimate mean_estimate(const std::vector<double>& values) {
    SimEstimate e;
    e.n_trials = static_cast<long>(values.size());
    if (values.empty()) return e;
    double sum = 0.0;
    for (double v : values) sum += v;
    e.mean = sum / values.size();
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - e.mean) * (v - e.mean);
        e.std_error = std::sqrt(ss / (values.size() - 1) / values.size());
    }
    return e;
}

namespace {

// running mean / variance over indicator-like values
struct Acc {
    double sum = 0.0, sum2 = 0.0;
    long n = 0;
    void add(double v) {
        sum += v;
        sum2 += v * v;
        ++n;
    }
    SimEstimate get() const {
        SimEstimate e;
        e.n_trials = n;
        if (n == 0) return e;
        e.mean = sum / n;
        if (n > 1) {
            const double var = std::max(0.0, (sum2 - n * e.mean * e.mean) / (n - 1));
            e.std_error = std::sqrt(var / n);
        }
        return e;
    }
};

}  // namespace

BatchSummary run_batch(const interference::CoexScenario& s, long n_trials, std::uint64_t seed, const SimOptions& opts) {
    const auto prep = prepare(s);
    Acc start, sync, hn, jam, pdr, st;
    for (long k = 0; k < n_trials; ++k) {
        const auto o = run_trial(prep, numeric::derive_seed(seed, static_cast<std::uint64_t>(k)), opts);
        start.add(o.transmitted);
        sync.add(o.transmitted && o.sync_collided);
        hn.add(o.transmitted && o.hn_collided);
        jam.add(o.transmitted && o.interfered);
        pdr.add(o.delivered());
        if (o.receivers_total > 0)
            st.add(o.transmitted ? static_cast<double>(o.receivers_ok) / o.receivers_total : 0.0);
    }
    BatchSummary b;
    b.n_trials = n_trials;
    b.p_start = start.get();
    b.p_sync = sync.get();
    b.p_hn = hn.get();
    b.p_interfered = jam.get();
    b.pdr = pdr.get();
    b.stpdr = st.get();
    return b;
}

EstimateResult estimate(const interference::CoexScenario& s, Quantity q, long n_trials, std::uint64_t seed,
                        const SimOptions& opts) {
    if (n_trials < 100) throw std::invalid_argument("n_trials must be at least 100");
    EstimateResult r;
    std::mt19937_64 rng(seed);
    switch (q) {
        case Quantity::n_cs_hist: {
            const double c = s.space.side_length_m / 2.0;
            const double r2 = s.radii.r_cs_m * s.radii.r_cs_m;
            for (long k = 0; k < n_trials; ++k) {
                const auto f = geometry::sample_ppp(s.space, s.dsrc.intensity_per_m2, Rat::dsrc,
                                                    numeric::derive_seed(seed, static_cast<std::uint64_t>(k)));
                long cnt = 0;
                for (const auto& p : f.points) cnt += (p.x_m - c) * (p.x_m - c) + (p.y_m - c) * (p.y_m - c) <= r2;
                r.distribution.push_back(static_cast<double>(cnt));
            }
            break;
        }
        case Quantity::l_cdf:
        case Quantity::a_cdf: {
            const double d = q == Quantity::l_cdf ? s.space.side_length_m : s.radii.r_cs_m;
            std::uniform_real_distribution<double> u(0.0, d);
            for (long k = 0; k < n_trials; ++k) {
                const double x = u(rng), y = u(rng);
                const double l = std::hypot(x, y);
                r.distribution.push_back(q == Quantity::l_cdf ? l : geometry::collision_area(l, s.radii.r_cs_m));
            }
            break;
        }
        default: {
            const auto b = run_batch(s, n_trials, seed, opts);
            switch (q) {
                case Quantity::p_start: r.estimate = b.p_start; break;
                case Quantity::p_sync: r.estimate = b.p_sync; break;
                case Quantity::p_hn: r.estimate = b.p_hn; break;
                case Quantity::pdr: r.estimate = b.pdr; break;
                default: r.estimate = b.stpdr; break;
            }
            return r;
        }
    }
    r.estimate = mean_estimate(r.distribution);
    std::sort(r.distribution.begin(), r.distribution.end());
    return r;
}

}  // namespace coex::montecarlo
