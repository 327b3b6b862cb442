#include <benchmark/benchmark.h>

#include "blochguide/pipeline.hpp"

using namespace blochguide;

namespace {

GridSpec bench_spec(int n) {
  GridSpec s;
  s.R = 14;
  s.L = 3;
  s.K = 14;
  s.n1 = n;
  s.n2 = n;
  return s;
}

struct Prepared {
  GridSpec spec;
  Grid grid;
  std::vector<double> a;
  CellProblem cell;
  RadiationBasis plus;
  RadiationBasis minus;
  IncomingSource source;

  explicit Prepared(int n)
      : spec(bench_spec(n)),
        grid(spec),
        a(sample_coefficient(Medium{Material::constant(1.0), Material::constant(1.0), std::nullopt, 0}, grid)),
        cell(cell_grid_for(spec), Material::constant(1.0)) {
    SelectionOptions opt;
    opt.j1_mesh = 41;
    opt.n_bands = 4;
    opt.j2_rows = 1;
    opt.target_j2 = 3.0 / spec.K;
    plus = build_basis(select_indices(cell, 1.85, Side::plus, spec.K, opt), cell, grid,
                       box_matrices(grid, a, Side::plus));
    minus = build_basis(select_indices(cell, 1.85, Side::minus, spec.K, opt), cell, grid,
                        box_matrices(grid, a, Side::minus));
    IncomingWave w;
    w.j_in = incoming_wave_vector(1.85, 3, spec.K, spec.eps);
    source = incoming_source(w, grid, a);
  }
};

void BM_CellSolve(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  CellProblem cell(CellGrid{1.0, m, m - 1}, hole_crystal());
  for (auto _ : state) benchmark::DoNotOptimize(cell.solve({0.21, 0.35}, 12));
  state.SetLabel(std::to_string(m * (m - 1)) + " cell nodes");
}
BENCHMARK(BM_CellSolve)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_SelectRow(benchmark::State& state) {
  CellProblem cell(CellGrid{1.0, 10, 9}, hole_crystal());
  SelectionOptions opt;
  opt.j1_mesh = static_cast<int>(state.range(0));
  opt.j2_rows = 1;
  opt.target_j2 = 3.0 / 14;
  for (auto _ : state) benchmark::DoNotOptimize(select_indices(cell, 1.85, Side::plus, 14, opt));
}
BENCHMARK(BM_SelectRow)->Arg(51)->Arg(201)->Unit(benchmark::kMillisecond);

void BM_Assemble(benchmark::State& state) {
  Prepared p(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble(p.grid, p.a, 1.85, 1e-4, p.plus, p.minus, p.source.load));
  state.SetLabel(std::to_string(p.grid.num_nodes()) + " nodes");
}
BENCHMARK(BM_Assemble)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  Prepared p(static_cast<int>(state.range(0)));
  const auto sys = assemble(p.grid, p.a, 1.85, 1e-4, p.plus, p.minus, p.source.load);
  for (auto _ : state) benchmark::DoNotOptimize(solve_system(sys));
  state.SetLabel(std::to_string(sys.size()) + " unknowns");
}
BENCHMARK(BM_Solve)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
