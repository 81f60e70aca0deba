#include <benchmark/benchmark.h>

#include "drover/dynamics.hpp"
#include "drover/feedback.hpp"
#include "drover/integrator.hpp"
#include "drover/model.hpp"

namespace {

using namespace drover;

void bm_derivatives(benchmark::State& state) {
    Scenario sc = default_scenario();
    SystemState s = sc.initial;
    for (auto _ : state) {
        StateDerivative d = derivatives(s, sc.params, Kappa::plus);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(bm_derivatives);

void bm_rk4_step(benchmark::State& state) {
    Scenario sc = default_scenario();
    StepperConfig stepper;
    SystemState s = sc.initial;
    for (auto _ : state) {
        SystemState next = step(s, sc.params, Kappa::plus, stepper.dt, Method::fixed_rk4,
                                stepper.separation_floor);
        benchmark::DoNotOptimize(next);
    }
}
BENCHMARK(bm_rk4_step);

void bm_pursuit_simulation(benchmark::State& state) {
    Scenario sc = default_scenario(20.0);
    StepperConfig stepper;
    stepper.dt = 1e-3;
    ControlSchedule off = ControlSchedule::constant(Kappa::off, sc.t0);
    SimulateOptions opts;
    opts.record_samples = false;
    for (auto _ : state) {
        Trajectory traj = simulate(sc, off, stepper, opts);
        benchmark::DoNotOptimize(traj);
    }
}
BENCHMARK(bm_pursuit_simulation)->Unit(benchmark::kMillisecond);

void bm_feedback_run(benchmark::State& state) {
    Scenario sc = default_scenario(63.0);
    StepperConfig stepper;
    stepper.dt = 1e-2;
    stepper.record_stride = 10;
    FeedbackConfig fb;
    for (auto _ : state) {
        FeedbackRunResult res = run_feedback(sc, fb, stepper);
        benchmark::DoNotOptimize(res);
    }
}
BENCHMARK(bm_feedback_run)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
