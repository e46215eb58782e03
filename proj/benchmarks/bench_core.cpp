#include <benchmark/benchmark.h>

#include "gyrocopter/angles.hpp"
#include "gyrocopter/crlb.hpp"
#include "gyrocopter/measurement.hpp"
#include "gyrocopter/mission.hpp"
#include "gyrocopter/particle_filter.hpp"

using namespace gyro;

static void BM_DifferentialUpdate(benchmark::State& state) {
    const auto pattern = GainPattern::h_antenna();
    const DifferentialLikelihood lik(2, 2.0);
    Rng rng(1);
    const auto belief = initialize(Bounds{0, 0, 1000, 1000}, static_cast<int>(state.range(0)), rng);
    const UavState u0(Vec3(100, 100, 60), 0.0), u1(Vec3(110, 100, 60), deg2rad(40));
    DifferentialMeasurement meas{predicted_deltas(Vec2(400, 600), {u0, u1}, pattern), {u0, u1}};
    for (auto _ : state) {
        auto out = update(belief, meas, pattern, lik, rng);
        benchmark::DoNotOptimize(out.weights.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DifferentialUpdate)->Arg(1000)->Arg(3000)->Arg(10000);

static void BM_Predict(benchmark::State& state) {
    Rng rng(2);
    auto belief = initialize(Bounds{0, 0, 1000, 1000}, 3000, rng);
    for (auto _ : state) {
        belief = predict(std::move(belief), TransitionModel{}, rng);
        benchmark::DoNotOptimize(belief.particles.data());
    }
}
BENCHMARK(BM_Predict);

static void BM_CrlbTrace(benchmark::State& state) {
    CrlbScenario s;
    s.self_rotation = deg2rad(40);
    s.steps = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(crlb_det_trace(s));
}
BENCHMARK(BM_CrlbTrace)->Arg(1000)->Arg(10000);

static void BM_CrlbSweep(benchmark::State& state) {
    CrlbScenario s;
    std::vector<double> angles;
    for (int a = 0; a <= 360; a += 5) angles.push_back(a);
    for (auto _ : state) benchmark::DoNotOptimize(sweep_rotation(s, angles, 10000));
}
BENCHMARK(BM_CrlbSweep)->Unit(benchmark::kMillisecond);

static void BM_TerrainLoss(benchmark::State& state) {
    const auto config = default_scenario();
    const EnvironmentModel env = config.environment();
    Rng rng(3);
    for (auto _ : state) {
        const Vec3 tx(rng.uniform(0, 1000), rng.uniform(0, 1000), 1);
        const Vec3 rx(rng.uniform(0, 1000), rng.uniform(0, 1000), 60);
        benchmark::DoNotOptimize(terrain_loss(env, tx, rx));
    }
}
BENCHMARK(BM_TerrainLoss);

static void BM_GyroMission(benchmark::State& state) {
    const auto config = default_scenario();
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(run_mission(config, seed++).total_time);
}
BENCHMARK(BM_GyroMission)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
