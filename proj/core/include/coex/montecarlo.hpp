#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "coex/interference.hpp"

namespace coex::montecarlo {

struct SimOptions {
    // each node's beaconing period starts at an independent uniform phase
    bool desync = false;
    // one line per slot event when set
    std::ostream* event_log = nullptr;
};

struct TrialOutcome {
    bool transmitted = false;
    bool expired = true;
    bool sync_collided = false;
    bool hn_collided = false;
    bool interfered = false;
    double affected_area_m2 = 0.0;
    long receivers_total = 0;
    long receivers_ok = 0;
    long start_slot = -1;
    long n_cs = 0;

    bool delivered() const { return transmitted && !sync_collided && !hn_collided && !interfered; }
};

struct SimEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long n_trials = 0;
};

struct InterfererTrace {
    std::vector<std::uint8_t> active;     // DSRC slot overlapped by interferer activity
    std::vector<std::uint8_t> corrupted;  // DSRC slot lost to the interferer
};

// Per-DSRC-slot trace over n_slots slots. For Wi-Fi, activity is the probability that a
// DSRC slot is hit by a Wi-Fi frame before the sub-slot overlap is applied.
InterfererTrace interferer_process(const interference::RatProfile& profile, const temporal::MacParams& mac,
                                   std::uint64_t seed, long n_slots, double wifi_activity = 1.0);

// 1-based index of the first DSRC slot (slot 1 starts at t = 0) whose start boundary lies
// inside a Wi-Fi transmission occupying [start_us, start_us + duration_us).
long wifi_first_corrupted_dsrc_slot(double start_us, double duration_us, double dsrc_slot_us);

// Precomputed per-scenario state shared by trials.
struct Prepared {
    interference::CoexScenario scenario;
    double wifi_activity = 0.0;
};
Prepared prepare(const interference::CoexScenario& s);

TrialOutcome run_trial(const Prepared& p, std::uint64_t seed, const SimOptions& opts = {});
TrialOutcome run_trial(const interference::CoexScenario& s, std::uint64_t seed, const SimOptions& opts = {});

struct BatchSummary {
    SimEstimate p_start;
    SimEstimate p_sync;
    SimEstimate p_hn;
    SimEstimate p_interfered;
    SimEstimate pdr;
    SimEstimate stpdr;
    long n_trials = 0;
};

BatchSummary run_batch(const interference::CoexScenario& s, long n_trials, std::uint64_t seed,
                       const SimOptions& opts = {});

enum class Quantity { p_start, p_sync, p_hn, pdr, stpdr, n_cs_hist, l_cdf, a_cdf };

struct EstimateResult {
    SimEstimate estimate;
    // sorted samples for the distribution quantities, empty otherwise
    std::vector<double> distribution;
};

EstimateResult estimate(const interference::CoexScenario& s, Quantity q, long n_trials, std::uint64_t seed,
                        const SimOptions& opts = {});

SimEstimate mean_estimate(const std::vector<double>& values);

}  // namespace coex::montecarlo
