// Serial reference vs OpenMP kernel for the three parallel loops.
// Run with OMP_NUM_THREADS set to compare thread counts.

#include <benchmark/benchmark.h>

#include <cmath>
#include <string>
#include <vector>

#include "pcf/amp/builders.hpp"
#include "pcf/amp/design.hpp"
#include "pcf/mc/campaign.hpp"
#include "pcf/mna/solver.hpp"
#include "pcf/response/sweep.hpp"

using namespace pcf;

namespace {

// RC ladder driven by a voltage source; `stages` nodes plus the input.
mna::Circuit ladder(int stages) {
  mna::Circuit c;
  auto prev = c.add_node("in");
  c.add_voltage_source("V1", prev, mna::kGround, 1.0);
  for (int i = 0; i < stages; ++i) {
    const auto n = c.add_node("n" + std::to_string(i));
    c.add_resistor("R" + std::to_string(i), prev, n, 1e3 * (1 + i % 7));
    c.add_capacitor("C" + std::to_string(i), n, mna::kGround, 1e-12 * (1 + i % 5));
    prev = n;
  }
  return c;
}

std::vector<double> omegas(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = 2 * M_PI * std::pow(10.0, 9.0 * i / (n - 1));
  return w;
}

template <bool Parallel>
void BM_transfer(benchmark::State& state) {
  const mna::AcSolver solver(ladder(static_cast<int>(state.range(0))));
  const auto out = *solver.circuit().find_node("n" + std::to_string(state.range(0) - 1));
  const auto w = omegas(1000);
  for (auto _ : state) {
    auto h = Parallel ? solver.transfer("V1", out, mna::kGround, w)
                      : solver.transfer_serial("V1", out, mna::kGround, w);
    benchmark::DoNotOptimize(h.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(w.size()));
}

template <bool Parallel>
void BM_monte_carlo(benchmark::State& state) {
  const auto config = mc::make_config(amp::reference_design(), static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    auto r = Parallel ? mc::run_campaign(config) : mc::run_campaign_serial(config);
    benchmark::DoNotOptimize(r.runs.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_cl_sweep(benchmark::State& state) {
  const auto d = amp::reference_design();
  std::vector<double> loads;
  for (int i = 1; i <= state.range(0); ++i) loads.push_back(i * 1e-12);
  for (auto _ : state) {
    auto rows = Parallel ? response::cl_sweep(d, loads) : response::cl_sweep_serial(d, loads);
    benchmark::DoNotOptimize(rows.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_transfer<false>)->Name("transfer/serial")->Arg(8)->Arg(64);
BENCHMARK(BM_transfer<true>)->Name("transfer/omp")->Arg(8)->Arg(64);
BENCHMARK(BM_monte_carlo<false>)->Name("mc/serial")->Arg(1000);
BENCHMARK(BM_monte_carlo<true>)->Name("mc/omp")->Arg(1000);
BENCHMARK(BM_cl_sweep<false>)->Name("cl_sweep/serial")->Arg(100);
BENCHMARK(BM_cl_sweep<true>)->Name("cl_sweep/omp")->Arg(100);

BENCHMARK_MAIN();
