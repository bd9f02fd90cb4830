#include "coex/interference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coex::interference {

RatProfile dsrc_profile(double intensity_per_m2) {
    RatProfile p;
    p.rat = Rat::dsrc;
    p.intensity_per_m2 = intensity_per_m2;
    return p;
}

RatProfile wifi_profile(double intensity_per_m2) {
    RatProfile p;
    p.rat = Rat::wifi;
    p.intensity_per_m2 = intensity_per_m2;
    p.slot_us = 9.0;
    p.bandwidth_mhz = 20.0;
    return p;
}

RatProfile cv2x_profile(double intensity_per_m2, double busy_prob) {
    RatProfile p;
    p.rat = Rat::cv2x;
    p.intensity_per_m2 = intensity_per_m2;
    p.slot_us = 1000.0;
    p.bandwidth_mhz = 20.0;
    p.busy_prob_override = busy_prob;
    return p;
}

void validate(const CoexScenario& s) {
    geometry::validate(s.space);
    geometry::validate(s.radii);
    temporal::validate(s.mac);
    if (s.dsrc.rat != Rat::dsrc) throw std::invalid_argument("dsrc profile must carry the DSRC tag");
    auto check = [](const RatProfile& p) {
        if (!(p.intensity_per_m2 >= 0.0)) throw std::invalid_argument(to_string(p.rat) + ": negative intensity");
        if (!(p.slot_us > 0.0)) throw std::invalid_argument(to_string(p.rat) + ": slot_us must be positive");
        if (p.busy_prob_override && p.rat != Rat::cv2x)
            throw std::invalid_argument(to_string(p.rat) + ": busy_prob_override is only valid for cv2x");
        if (p.rat == Rat::cv2x) {
            if (!p.busy_prob_override) throw std::invalid_argument("cv2x: busy_prob_override is required");
            if (*p.busy_prob_override < 0.0 || *p.busy_prob_override > 1.0)
                throw std::invalid_argument("cv2x: busy_prob_override outside [0, 1]");
        }
        if (p.activity_override && (*p.activity_override < 0.0 || *p.activity_override > 1.0))
            throw std::invalid_argument(to_string(p.rat) + ": activity outside [0, 1]");
    };
    check(s.dsrc);
    for (const auto& p : s.interferers) {
        if (p.rat == Rat::dsrc) throw std::invalid_argument("interferers must be wifi or cv2x");
        check(p);
    }
}

bool has(const CoexScenario& s, Rat rat) {
    return std::any_of(s.interferers.begin(), s.interferers.end(), [&](const RatProfile& p) { return p.rat == rat; });
}

double total_intensity(const CoexScenario& s) {
    double t = s.dsrc.intensity_per_m2;
    for (const auto& p : s.interferers) t += p.intensity_per_m2;
    return t;
}

double compose_busy_prob(double p_b_dsrc, double p_b_cv2x, double p_b_wifi) {
    for (double p : {p_b_dsrc, p_b_cv2x, p_b_wifi})
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("busy probability outside [0, 1]");
    return std::min(p_b_dsrc + p_b_cv2x + p_b_wifi, 1.0);
}

WifiConflict wifi_slot_conflict(double dsrc_slot_us, double wifi_slot_us, double wifi_bandwidth_mhz,
                                double cch_bandwidth_mhz) {
    if (!(dsrc_slot_us > 0.0) || !(wifi_slot_us > 0.0)) throw std::invalid_argument("slot lengths must be positive");
    WifiConflict c;
    c.interferer_slot_index = static_cast<int>(std::ceil(dsrc_slot_us / wifi_slot_us - 1e-12));
    c.slots_per_dsrc_slot = dsrc_slot_us / wifi_slot_us;
    c.full_frequency_overlap = wifi_bandwidth_mhz >= cch_bandwidth_mhz;
    return c;
}

Cv2xConflict cv2x_rb_conflict(double cch_bandwidth_mhz, double rb_khz, double rbs_per_vehicle,
                              double cv2x_bandwidth_mhz, double subframe_us, double dsrc_slot_us) {
    if (!(rb_khz > 0.0) || !(rbs_per_vehicle > 0.0) || !(cv2x_bandwidth_mhz > 0.0))
        throw std::invalid_argument("resource block parameters must be positive");
    Cv2xConflict c;
    c.rbs_in_cch = cch_bandwidth_mhz * 1e3 / rb_khz;
    c.colliding_nodes = c.rbs_in_cch / rbs_per_vehicle;
    // LTE numerology: 5 usable RBs per MHz of channel
    const double rbs_total = 5.0 * cv2x_bandwidth_mhz;
    c.spectral_overlap = std::min(1.0, c.rbs_in_cch / rbs_total);
    c.slots_interfered_per_subframe = subframe_us / dsrc_slot_us * c.spectral_overlap;
    return c;
}

temporal::CompetitorDistribution effective_competitor_distribution(const CoexScenario& s) {
    return temporal::CompetitorDistribution::normal(total_intensity(s) * geometry::disc_area(s.radii.r_cs_m));
}

double wifi_busy_prob(const RatProfile& wifi, const CoexScenario& s, const temporal::SolverOptions& opts) {
    if (wifi.activity_override) return *wifi.activity_override;
    temporal::MacParams mac;
    mac.cw = wifi.cw;
    mac.slot_us = wifi.slot_us;
    mac.L_bcn = static_cast<int>(std::lround(s.mac.L_bcn * s.mac.slot_us / wifi.slot_us));
    mac.l_bcn = 1;
    mac.expiration = false;
    const auto dist = temporal::CompetitorDistribution::normal(wifi.intensity_per_m2 * geometry::disc_area(s.radii.r_cs_m));
    return temporal::solve_busy_prob(dist, mac, opts).p_b;
}

double wifi_busy_contribution(const RatProfile& wifi, const CoexScenario& s, const temporal::SolverOptions& opts) {
    const auto c = wifi_slot_conflict(s.mac.slot_us, wifi.slot_us, wifi.bandwidth_mhz);
    const double time_overlap = std::min(1.0, wifi.slot_us / s.mac.slot_us);
    return (c.full_frequency_overlap ? 1.0 : 0.0) * time_overlap * wifi_busy_prob(wifi, s, opts);
}

double cv2x_busy_contribution(const RatProfile& cv2x, const CoexScenario& s) {
    const auto c = cv2x_rb_conflict(10.0, 180.0, 12.0, cv2x.bandwidth_mhz, cv2x.slot_us, s.mac.slot_us);
    return c.spectral_overlap * cv2x.busy_prob_override.value_or(0.0);
}

CoexBusy solve_coexistence(const CoexScenario& s, const temporal::SolverOptions& opts) {
    validate(s);
    CoexBusy out;
    out.dsrc = temporal::solve_busy_prob(effective_competitor_distribution(s), s.mac, opts);
    for (const auto& p : s.interferers) {
        if (p.rat == Rat::wifi) out.wifi = std::min(1.0, out.wifi + wifi_busy_contribution(p, s, opts));
        if (p.rat == Rat::cv2x) out.cv2x = std::min(1.0, out.cv2x + cv2x_busy_contribution(p, s));
    }
    out.p_b = compose_busy_prob(out.dsrc.p_b, out.cv2x, out.wifi);
    return out;
}

}  // namespace coex::interference
