#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "coex/metrics.hpp"
#include "coex/montecarlo.hpp"
#include "coex/numeric.hpp"

using namespace coex;
using namespace coex::montecarlo;

namespace {

interference::CoexScenario base(double per_disc, int cw) {
    interference::CoexScenario s;
    s.dsrc = interference::dsrc_profile(geometry::per_disc_to_per_m2(per_disc, 500.0));
    s.mac.cw = cw;
    return s;
}

}  // namespace

TEST_CASE("lone node delivers to nobody") {
    auto s = base(0.0, 15);
    for (std::uint64_t k = 0; k < 20; ++k) {
        auto t = run_trial(s, k);
        CHECK(t.transmitted);
        CHECK_FALSE(t.expired);
        CHECK_FALSE(t.sync_collided);
        CHECK_FALSE(t.hn_collided);
        CHECK(t.receivers_total == 0);
        CHECK(t.receivers_ok == 0);
        CHECK(t.n_cs == 0);
    }
}

TEST_CASE("zero backoff window forces synchronised starts") {
    auto s = base(13.0, 1);
    for (std::uint64_t k = 0; k < 30; ++k) {
        auto t = run_trial(s, k);
        CHECK(t.transmitted);
        CHECK(t.start_slot == 0);
        if (t.n_cs > 0) CHECK(t.sync_collided);
    }
}

TEST_CASE("trial invariants and reproducibility") {
    auto s = base(13.0, 15);
    const auto prep = prepare(s);
    const double max_area = std::numbers::pi * 500.0 * 500.0;
    for (std::uint64_t k = 0; k < 50; ++k) {
        auto a = run_trial(prep, k);
        auto b = run_trial(prep, k);
        CHECK(a.transmitted == b.transmitted);
        CHECK(a.start_slot == b.start_slot);
        CHECK(a.receivers_ok == b.receivers_ok);
        CHECK(a.hn_collided == b.hn_collided);
        CHECK(a.expired == !a.transmitted);
        CHECK(a.receivers_ok <= a.receivers_total);
        CHECK(a.affected_area_m2 >= 0.0);
        CHECK(a.affected_area_m2 <= max_area + 1e-6);
        if (a.transmitted) {
            CHECK(a.start_slot >= 0);
            CHECK(a.start_slot <= s.mac.L_bcn - s.mac.l_bcn);
        }
    }
}

TEST_CASE("precondition on the system size") {
    auto s = base(13.0, 15);
    s.space.side_length_m = 1000.0;
    CHECK_THROWS(prepare(s));
    CHECK_THROWS(estimate(base(13.0, 15), Quantity::pdr, 10, 1));
}

TEST_CASE("event log") {
    std::ostringstream log;
    SimOptions o;
    o.event_log = &log;
    run_trial(base(3.0, 15), 4, o);
    CHECK_FALSE(log.str().empty());
}

TEST_CASE("interferer traces") {
    temporal::MacParams mac;
    auto off = interferer_process(interference::cv2x_profile(1e-6, 0.0), mac, 3, 1500);
    CHECK(std::count(off.active.begin(), off.active.end(), 1) == 0);
    auto on = interferer_process(interference::cv2x_profile(1e-6, 1.0), mac, 3, 1500);
    CHECK(std::count(on.active.begin(), on.active.end(), 1) == 1500);
    for (std::size_t i = 0; i < on.corrupted.size(); ++i) CHECK(on.corrupted[i] <= on.active[i]);

    auto idle = interferer_process(interference::wifi_profile(1e-6), mac, 3, 1500, 0.0);
    CHECK(std::count(idle.active.begin(), idle.active.end(), 1) == 0);
}

TEST_CASE("wifi frame starting inside the first DSRC slot corrupts the second") {
    const double ds = 66.7;
    const auto c = interference::wifi_slot_conflict(ds, 9.0);
    for (double start = 0.5; start < ds; start += 4.0) {
        CAPTURE(start);
        CHECK(wifi_first_corrupted_dsrc_slot(start, c.interferer_slot_index * 9.0 + ds, ds) == 2);
    }
    CHECK(wifi_first_corrupted_dsrc_slot(0.0, 9.0, ds) == 1);
    // a single short frame strictly inside a slot never covers a boundary
    CHECK(wifi_first_corrupted_dsrc_slot(10.0, 9.0, ds) == -1);
}

TEST_CASE("batch estimates are consistent") {
    auto s = base(13.0, 15);
    auto b = run_batch(s, 400, 77);
    CHECK(b.n_trials == 400);
    CHECK(b.pdr.mean <= b.p_start.mean);
    CHECK(b.stpdr.mean >= b.pdr.mean - 1e-12);
    for (const auto* e : {&b.p_start, &b.p_sync, &b.p_hn, &b.pdr, &b.stpdr}) {
        CHECK(e->mean >= 0.0);
        CHECK(e->mean <= 1.0);
        CHECK(e->std_error >= 0.0);
    }
    auto again = run_batch(s, 400, 77);
    CHECK(again.pdr.mean == b.pdr.mean);
    CHECK(again.stpdr.mean == b.stpdr.mean);
}

TEST_CASE("mean estimate") {
    auto e = mean_estimate({1.0, 0.0, 1.0, 0.0});
    CHECK(e.mean == 0.5);
    CHECK(e.n_trials == 4);
    CHECK(e.std_error == doctest::Approx(std::sqrt(1.0 / 3.0) / 2.0));
}

TEST_CASE("distribution estimators") {
    auto s = base(13.0, 15);
    auto l = estimate(s, Quantity::l_cdf, 20000, 5);
    REQUIRE(l.distribution.size() == 20000);
    CHECK(std::is_sorted(l.distribution.begin(), l.distribution.end()));
    CHECK(numeric::ks_statistic(l.distribution, [&](double x) { return geometry::distance_cdf(x, s.space); }) < 0.02);

    auto a = estimate(s, Quantity::a_cdf, 20000, 6);
    const auto fit = geometry::fit_inverse_area(500.0);
    // area_cdf(a) = P(L <= g^-1(a)) = P(A >= a)
    const double ks = numeric::ks_statistic(a.distribution, [&](double x) { return 1.0 - geometry::area_cdf(x, fit); });
    CHECK(ks < 0.05);

    auto n = estimate(base(300.0, 15), Quantity::n_cs_hist, 500, 9);
    CHECK(n.estimate.mean == doctest::Approx(300.0).epsilon(0.02));
}

TEST_CASE("interference lowers empirical delivery") {
    auto s = base(13.0, 15);
    auto with = s;
    with.interferers = {interference::cv2x_profile(geometry::per_disc_to_per_m2(300.0, 500.0), 0.5)};
    auto clean = run_batch(s, 300, 21);
    auto noisy = run_batch(with, 300, 21);
    CHECK(noisy.pdr.mean <= clean.pdr.mean + 3.0 * (clean.pdr.std_error + noisy.pdr.std_error));
}
