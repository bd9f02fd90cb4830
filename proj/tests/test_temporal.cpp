#include <doctest.h>

#include <cmath>

#include "coex/numeric.hpp"
#include "coex/temporal.hpp"
#include "markov_oracle.hpp"

using namespace coex;
using namespace coex::temporal;

TEST_CASE("mac validation") {
    MacParams m;
    CHECK_NOTHROW(validate(m));
    m.l_bcn = m.L_bcn;
    CHECK_THROWS(validate(m));
    m = {};
    m.cw = 0;
    CHECK_THROWS(validate(m));
}

TEST_CASE("competitor distribution") {
    auto d = CompetitorDistribution::normal(300.0);
    double total = 0.0, mean = 0.0;
    for (long n = d.lo; n <= d.truncation_max; ++n) {
        total += d.probability(n);
        mean += n * d.probability(n);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mean == doctest::Approx(300.0).epsilon(1e-6));
    CHECK(d.probability(d.lo - 1) == 0.0);
    CHECK(d.expect([](long) { return 1.0; }) == doctest::Approx(1.0));

    auto z = CompetitorDistribution::normal(0.0);
    CHECK(z.probability(0) == 1.0);
    auto p = CompetitorDistribution::point(7);
    CHECK(p.expect([](long n) { return double(n); }) == 7.0);
    CHECK_THROWS(CompetitorDistribution::normal(-1.0));
}

TEST_CASE("tau closed-form edge values") {
    MacParams m;
    CHECK(transmit_prob_tau(0.0, m, 10) == doctest::Approx(2.0 / 16.0));
    m.cw = 1;
    CHECK(transmit_prob_tau(0.0, m, 10) == 1.0);
    CHECK(transmit_prob_tau(0.3, m, 10) == 1.0);
    m.cw = 15;
    CHECK(transmit_prob_tau(1.0, m, 10) == 0.0);
    CHECK_THROWS(transmit_prob_tau(1.5, m, 10));
}

TEST_CASE("tau matches stationary distribution oracle") {
    struct Case {
        double p_b;
        int cw;
        long n;
        double expect;
    };
    // eigenvector oracle with L = 1500, l = 2
    const Case cases[] = {
        {0.5, 15, 3, 0.1088585811818614},
        {0.8, 8, 2, 0.14138894901292043},
        {0.2, 63, 1000000, 0.03125},
        {0.5, 15, 1000000, 0.125},
    };
    for (const auto& c : cases) {
        MacParams m;
        m.cw = c.cw;
        CAPTURE(c.cw);
        CAPTURE(c.p_b);
        CHECK(transmit_prob_tau(c.p_b, m, c.n) == doctest::Approx(c.expect).epsilon(1e-12));
    }

    // 50-state chain, large n
    MacParams m;
    m.cw = 50;
    const double brute = oracle::stationary(oracle::backoff_chain(0.5, 50, m.L_bcn, m.l_bcn, 100000))(0);
    CHECK(std::abs(transmit_prob_tau(0.5, m, 100000) - brute) < 1e-10);

    // expiration binds when L is short
    MacParams tight;
    tight.cw = 12;
    tight.L_bcn = 10;
    tight.l_bcn = 2;
    for (double pb : {0.1, 0.6, 0.95}) {
        const double b = oracle::stationary(oracle::backoff_chain(pb, 12, 10, 2, 40))(0);
        CHECK(std::abs(transmit_prob_tau(pb, tight, 40) - b) < 1e-10);
    }
}

TEST_CASE("transition matrix shape") {
    MacParams m;
    m.cw = 8;
    auto t = transition_matrix(0.4, m, 5);
    REQUIRE(t.size() == 8);
    for (const auto& row : t) {
        double s = 0.0;
        for (double v : row) {
            CHECK(v >= 0.0);
            s += v;
        }
        CHECK(std::abs(s - 1.0) < 1e-12);
    }
    CHECK(t[0][5] == doctest::Approx(1.0 / 8.0));
    CHECK(t[3][2] == doctest::Approx(1.0 - std::pow(0.4, 6.0) + std::pow(0.4, 6.0) / 8.0));
    CHECK(busy_budget(m, 3, 5) == 5);
    CHECK(busy_budget(m, 3, 5000) == 1500 - 2 - 3);
    m.expiration = false;
    CHECK(busy_budget(m, 3, 5000) == 5000);
}

TEST_CASE("busy probability fixed point") {
    MacParams m;
    auto none = solve_busy_prob(CompetitorDistribution::normal(0.0), m);
    CHECK(none.p_b == 0.0);
    CHECK(none.residual == 0.0);

    auto d13 = CompetitorDistribution::normal(13.0);
    auto s15 = solve_busy_prob(d13, m);
    MacParams m255;
    m255.cw = 255;
    auto s255 = solve_busy_prob(d13, m255);
    CHECK(s15.p_b > s255.p_b);
    CHECK(s15.residual <= 1e-4);
    CHECK(s15.tau == doctest::Approx(mean_tau(s15.p_b, m, d13)));
}

TEST_CASE("fixed point matches independent bisection") {
    MacParams m;
    auto d5 = CompetitorDistribution::normal(5.0);
    // plain bisection on the continuous residual, written without the library solver
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double idle = d5.expect([&](long n) {
            const double t = oracle::stationary(oracle::backoff_chain(mid, m.cw, m.L_bcn, m.l_bcn, n))(0);
            return std::pow(1.0 - t, double(n));
        });
        if (mid - (1.0 - idle) >= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    auto s = solve_busy_prob(d5, m);
    CHECK(std::abs(s.p_b - 0.5 * (lo + hi)) <= 2.0 * s.grid_step);
}

TEST_CASE("exhaustive and bisection solvers agree") {
    MacParams m;
    m.cw = 63;
    auto d = CompetitorDistribution::normal(35.0);
    SolverOptions ex;
    ex.grid_step = 1e-3;
    ex.exhaustive = true;
    SolverOptions bi = ex;
    bi.exhaustive = false;
    auto a = solve_busy_prob(d, m, ex);
    auto b = solve_busy_prob(d, m, bi);
    CHECK(a.p_b == b.p_b);
    CHECK(b.evaluations < a.evaluations);
}

TEST_CASE("solver reports failure") {
    MacParams m;
    SolverOptions coarse;
    coarse.grid_step = 0.5;
    coarse.max_residual = 1e-9;
    CHECK_THROWS_AS(solve_busy_prob(CompetitorDistribution::normal(13.0), m, coarse), ConvergenceError);
    SolverOptions bad;
    bad.grid_step = 0.0;
    CHECK_THROWS(solve_busy_prob(CompetitorDistribution::normal(13.0), m, bad));
}

TEST_CASE("start probability") {
    MacParams m;
    CHECK(start_prob(CompetitorDistribution::normal(13.0), m, 0.0) == doctest::Approx(1.0));
    CHECK(start_prob(CompetitorDistribution::normal(13.0), m, 0.0, StartForm::printed_sigma) == doctest::Approx(1.0));

    // negative-binomial oracle (scipy) for deterministic competitor counts
    MacParams a;
    a.cw = 4;
    a.L_bcn = 20;
    a.l_bcn = 2;
    CHECK(start_prob(CompetitorDistribution::point(5), a, 0.3) == doctest::Approx(0.9960469975).epsilon(1e-9));
    MacParams b;
    b.cw = 8;
    b.L_bcn = 12;
    b.l_bcn = 2;
    CHECK(start_prob(CompetitorDistribution::point(2), b, 0.6) == doctest::Approx(0.372067264).epsilon(1e-8));

    // p_b = 1: only the zero backoff starts
    CHECK(start_prob(CompetitorDistribution::point(3), m, 1.0) == doctest::Approx(1.0 / 15.0));
    CHECK_THROWS(start_prob(CompetitorDistribution::point(3), m, -0.1));
}

TEST_CASE("sync and hidden-node probabilities") {
    geometry::Radii r;
    MacParams m;
    auto d = CompetitorDistribution::normal(13.0);
    const double lam = geometry::per_disc_to_per_m2(13.0, 500.0);
    CHECK(sync_prob(0.0, r, d, m, 0.6, 0.1) == 0.0);
    CHECK(sync_prob(lam, r, d, m, 0.6, 0.0) == 0.0);
    CHECK(hn_prob(0.0, r, d, m, 0.6) == 0.0);

    // deterministic zero competitors leaves a single term
    auto z = CompetitorDistribution::point(0);
    const double expect = -std::expm1(-3.0 * 13.0) * (1.0 - (1500.0 - 2.0 + 1.0) / 1500.0) * 0.7;
    CHECK(hn_prob(lam, r, z, m, 0.7) == doctest::Approx(expect).epsilon(1e-12));

    const double ps = sync_prob(lam, r, d, m, 0.6, 0.1);
    CHECK(ps > 0.0);
    CHECK(ps <= 0.1);
}
