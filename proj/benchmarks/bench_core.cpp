#include <benchmark/benchmark.h>

#include "coex/metrics.hpp"
#include "coex/montecarlo.hpp"

using namespace coex;

namespace {

interference::CoexScenario scenario(double per_disc, int cw) {
    interference::CoexScenario s;
    s.dsrc = interference::dsrc_profile(geometry::per_disc_to_per_m2(per_disc, 500.0));
    s.mac.cw = cw;
    return s;
}

void BM_Tau(benchmark::State& st) {
    temporal::MacParams m;
    m.cw = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(temporal::transmit_prob_tau(0.5, m, 40));
}
BENCHMARK(BM_Tau)->Arg(15)->Arg(1023);

void BM_SolveBusy(benchmark::State& st) {
    temporal::MacParams m;
    m.cw = static_cast<int>(st.range(1));
    const auto d = temporal::CompetitorDistribution::normal(static_cast<double>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(temporal::solve_busy_prob(d, m).p_b);
}
BENCHMARK(BM_SolveBusy)->Args({13, 15})->Args({641, 1023})->Unit(benchmark::kMillisecond);

void BM_StartProb(benchmark::State& st) {
    temporal::MacParams m;
    m.cw = static_cast<int>(st.range(0));
    const auto d = temporal::CompetitorDistribution::normal(641.0);
    for (auto _ : st) benchmark::DoNotOptimize(temporal::start_prob(d, m, 0.9));
}
BENCHMARK(BM_StartProb)->Arg(15)->Arg(1023)->Unit(benchmark::kMillisecond);

void BM_Fit(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(geometry::fit_inverse_area(static_cast<double>(st.range(0))).p1);
}
BENCHMARK(BM_Fit)->Arg(100)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& st) {
    const auto fit = geometry::fit_inverse_area(500.0);
    const auto s = scenario(13.0, 15);
    for (auto _ : st) benchmark::DoNotOptimize(metrics::evaluate(s, fit).pdr);
}
BENCHMARK(BM_Evaluate)->Unit(benchmark::kMillisecond);

void BM_Trial(benchmark::State& st) {
    const auto p = montecarlo::prepare(scenario(static_cast<double>(st.range(0)), 15));
    std::uint64_t seed = 0;
    for (auto _ : st) benchmark::DoNotOptimize(montecarlo::run_trial(p, seed++).receivers_ok);
}
BENCHMARK(BM_Trial)->Arg(13)->Arg(641)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
