// Microbenchmarks for the hot paths: link discretization, per-tick impedance
// stepping, gait planning, whole-scenario simulation, and metrics extraction.

#include <sstream>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>
#include <nlohmann/json.hpp>

#include "swarmgear/analysis.hpp"
#include "swarmgear/gait.hpp"
#include "swarmgear/impedance.hpp"
#include "swarmgear/scenario.hpp"
#include "swarmgear/simulation.hpp"

using namespace swarmgear;

namespace {

scenario::ScenarioConfig line_config(double duration) {
  nlohmann::ordered_json document = nlohmann::ordered_json::object();
  scenario::apply_override(document, "sim.path.shape=line");
  scenario::apply_override(document, "sim.path.length=1");
  scenario::apply_override(document, "sim.path.speed=0.1");
  scenario::apply_override(document, "sim.duration=" + std::to_string(duration));
  return scenario::parse_config(document);
}

void BM_Discretize(benchmark::State& state) {
  const impedance::ImpedanceParams params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(impedance::discretize(params, 0.025));
  }
}
BENCHMARK(BM_Discretize);

void BM_ImpedanceStep(benchmark::State& state) {
  const impedance::ImpedanceParams params;
  const impedance::DiscreteImpedance disc = impedance::discretize(params, 0.025);
  impedance::LinkState link{0.1, 0.0};
  for (auto _ : state) {
    link = impedance::step(disc, link, 1.0);
    benchmark::DoNotOptimize(link);
  }
}
BENCHMARK(BM_ImpedanceStep);

void BM_SweepingGaitPlan(benchmark::State& state) {
  const kinematics::LegGeometry geom;
  gait::GaitParams params;
  params.gait_type = gait::GaitType::type1;
  params.steps = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gait::type1_plan(geom, params));
  }
}
BENCHMARK(BM_SweepingGaitPlan)->Arg(1)->Arg(8);

void BM_ShiftingGaitPlan(benchmark::State& state) {
  const kinematics::LegGeometry geom;
  gait::GaitParams params;
  params.gait_type = gait::GaitType::type2;
  params.step_length = 0.19;
  params.steps = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gait::type2_plan(geom, params));
  }
}
BENCHMARK(BM_ShiftingGaitPlan)->Arg(1)->Arg(6);

void BM_ScenarioSimulation(benchmark::State& state) {
  const scenario::ScenarioConfig config = line_config(static_cast<double>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim::run_simulation(config, 0));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(config.sim.duration / config.sim.dt + 1));
}
BENCHMARK(BM_ScenarioSimulation)->Arg(1)->Arg(14);

void BM_MetricsExtraction(benchmark::State& state) {
  const sim::TrajectoryLog log = sim::run_simulation(line_config(14.0), 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(analysis::log_metrics_json(log));
  }
}
BENCHMARK(BM_MetricsExtraction);

void BM_TrajectorySerialization(benchmark::State& state) {
  const sim::TrajectoryLog log = sim::run_simulation(line_config(14.0), 0);
  for (auto _ : state) {
    std::ostringstream out;
    sim::write_trajectory_csv(out, log);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_TrajectorySerialization);

}  // namespace

BENCHMARK_MAIN();
