#pragma once

#include <optional>
#include <vector>

#include "coex/geometry.hpp"
#include "coex/temporal.hpp"

namespace coex::interference {

struct RatProfile {
    Rat rat = Rat::dsrc;
    double intensity_per_m2 = 0.0;
    double slot_us = 66.7;
    double bandwidth_mhz = 10.0;
    // C-V2X subframe busy probability (required for CV2X, absent otherwise)
    std::optional<double> busy_prob_override;
    // Wi-Fi only: contention window of its own backoff chain, and an optional
    // activity value replacing the chain's busy probability
    int cw = 15;
    std::optional<double> activity_override;
};

RatProfile dsrc_profile(double intensity_per_m2);
RatProfile wifi_profile(double intensity_per_m2);
RatProfile cv2x_profile(double intensity_per_m2, double busy_prob);

struct CoexScenario {
    RatProfile dsrc;
    std::vector<RatProfile> interferers;
    geometry::Radii radii;
    geometry::SystemSpace space{2000.0};
    temporal::MacParams mac;
    // hidden-node void probability over all RATs (true) or DSRC only
    bool hn_over_total = true;
};

void validate(const CoexScenario& s);
bool has(const CoexScenario& s, Rat rat);

double total_intensity(const CoexScenario& s);
double compose_busy_prob(double p_b_dsrc, double p_b_cv2x, double p_b_wifi);

struct WifiConflict {
    int interferer_slot_index = 0;
    double slots_per_dsrc_slot = 0.0;
    bool full_frequency_overlap = true;
};
WifiConflict wifi_slot_conflict(double dsrc_slot_us, double wifi_slot_us, double wifi_bandwidth_mhz = 20.0,
                                double cch_bandwidth_mhz = 10.0);

struct Cv2xConflict {
    double rbs_in_cch = 0.0;
    double colliding_nodes = 0.0;
    double slots_interfered_per_subframe = 0.0;
    double spectral_overlap = 0.0;
};
Cv2xConflict cv2x_rb_conflict(double cch_bandwidth_mhz = 10.0, double rb_khz = 180.0, double rbs_per_vehicle = 12.0,
                              double cv2x_bandwidth_mhz = 20.0, double subframe_us = 1000.0,
                              double dsrc_slot_us = 66.7);

temporal::CompetitorDistribution effective_competitor_distribution(const CoexScenario& s);

// Wi-Fi busy probability from its own backoff chain (no expiration, Wi-Fi slot length).
double wifi_busy_prob(const RatProfile& wifi, const CoexScenario& s, const temporal::SolverOptions& opts = {});
// Per-DSRC-slot busy contributions added by the min-sum rule.
double wifi_busy_contribution(const RatProfile& wifi, const CoexScenario& s, const temporal::SolverOptions& opts = {});
double cv2x_busy_contribution(const RatProfile& cv2x, const CoexScenario& s);

struct CoexBusy {
    temporal::FixedPointSolution dsrc;
    double wifi = 0.0;
    double cv2x = 0.0;
    double p_b = 0.0;
};

CoexBusy solve_coexistence(const CoexScenario& s, const temporal::SolverOptions& opts = {});

}  // namespace coex::interference
