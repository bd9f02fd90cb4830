#include <doctest.h>

#include "coex/geometry.hpp"
#include "coex/interference.hpp"

using namespace coex;
using namespace coex::interference;

namespace {
double per_disc(double v) { return geometry::per_disc_to_per_m2(v, 500.0); }
}

TEST_CASE("total intensity adds") {
    CoexScenario s;
    s.dsrc = dsrc_profile(per_disc(13.0));
    CHECK(total_intensity(s) == doctest::Approx(per_disc(13.0)));
    s.interferers = {wifi_profile(2e-6), cv2x_profile(3e-6, 0.5)};
    CHECK(total_intensity(s) == doctest::Approx(per_disc(13.0) + 5e-6));
    CoexScenario empty;
    CHECK(total_intensity(empty) == 0.0);
}

TEST_CASE("min-sum composition") {
    CHECK(compose_busy_prob(0.2, 0.0, 0.0) == doctest::Approx(0.2));
    CHECK(compose_busy_prob(0.5, 0.4, 0.3) == 1.0);
    CHECK(compose_busy_prob(0.0, 0.0, 0.0) == 0.0);
    CHECK(compose_busy_prob(0.1, 0.2, 0.3) == doctest::Approx(0.6));
    CHECK_THROWS(compose_busy_prob(1.2, 0.0, 0.0));
}

TEST_CASE("wifi slot conflict") {
    CHECK(wifi_slot_conflict(66.7, 9.0).interferer_slot_index == 8);
    CHECK(wifi_slot_conflict(9.0, 9.0).interferer_slot_index == 1);
    CHECK(wifi_slot_conflict(66.7, 9.0).slots_per_dsrc_slot == doctest::Approx(66.7 / 9.0));
    CHECK(wifi_slot_conflict(66.7, 9.0, 20.0).full_frequency_overlap);
    CHECK_FALSE(wifi_slot_conflict(66.7, 9.0, 5.0).full_frequency_overlap);
    CHECK_THROWS(wifi_slot_conflict(0.0, 9.0));
}

TEST_CASE("cv2x resource-block conflict") {
    auto c = cv2x_rb_conflict();
    CHECK(c.rbs_in_cch == doctest::Approx(55.56).epsilon(1e-3));
    CHECK(c.colliding_nodes == doctest::Approx(4.63).epsilon(1e-3));
    CHECK(c.slots_interfered_per_subframe == doctest::Approx(8.33).epsilon(1e-3));
    CHECK(cv2x_rb_conflict(20.0).rbs_in_cch == doctest::Approx(111.1).epsilon(1e-3));
    CHECK(cv2x_rb_conflict(10.0, 180.0, 10000.0 / 180.0).colliding_nodes == doctest::Approx(1.0));
}

TEST_CASE("effective competitor distribution") {
    CoexScenario s;
    s.dsrc = dsrc_profile(per_disc(13.0));
    CHECK(effective_competitor_distribution(s).mean == doctest::Approx(13.0));
    s.interferers = {wifi_profile(per_disc(5.0))};
    CHECK(effective_competitor_distribution(s).mean == doctest::Approx(18.0));
    CoexScenario z;
    CHECK(effective_competitor_distribution(z).mean == 0.0);
}

TEST_CASE("scenario validation") {
    CoexScenario s;
    s.dsrc = dsrc_profile(1e-5);
    CHECK_NOTHROW(validate(s));
    auto c = cv2x_profile(1e-5, 0.5);
    c.busy_prob_override.reset();
    s.interferers = {c};
    CHECK_THROWS(validate(s));
    s.interferers = {cv2x_profile(1e-5, 1.5)};
    CHECK_THROWS(validate(s));
    s.interferers = {dsrc_profile(1e-5)};
    CHECK_THROWS(validate(s));
    auto w = wifi_profile(1e-5);
    w.busy_prob_override = 0.3;
    s.interferers = {w};
    CHECK_THROWS(validate(s));
    s.interferers = {wifi_profile(-1.0)};
    CHECK_THROWS(validate(s));
}

TEST_CASE("interferer contributions") {
    CoexScenario s;
    s.dsrc = dsrc_profile(per_disc(13.0));
    auto c = cv2x_profile(per_disc(300.0), 0.5);
    CHECK(cv2x_busy_contribution(c, s) == doctest::Approx(0.5 * 0.5556).epsilon(1e-3));
    CHECK(cv2x_busy_contribution(cv2x_profile(1e-6, 0.0), s) == 0.0);

    auto w = wifi_profile(per_disc(500.0));
    w.activity_override = 0.6;
    CHECK(wifi_busy_prob(w, s) == 0.6);
    CHECK(wifi_busy_contribution(w, s) == doctest::Approx(0.6 * 9.0 / 66.7));

    auto chain = wifi_profile(per_disc(500.0));
    const double pw = wifi_busy_prob(chain, s);
    CHECK(pw > 0.0);
    CHECK(pw < 1.0);

    s.interferers = {c, w};
    auto busy = solve_coexistence(s);
    CHECK(busy.cv2x == doctest::Approx(cv2x_busy_contribution(c, s)));
    CHECK(busy.wifi == doctest::Approx(wifi_busy_contribution(w, s)));
    CHECK(busy.p_b == doctest::Approx(std::min(1.0, busy.dsrc.p_b + busy.cv2x + busy.wifi)));
    CHECK(has(s, Rat::wifi));
    CHECK(has(s, Rat::cv2x));
    CHECK_FALSE(has(CoexScenario{}, Rat::wifi));
}
