#include "blochguide/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>

#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "blochguide/errors.hpp"

namespace blochguide {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw ConfigError("cannot write " + (dir / name).string());
  return out;
}

void write_json(const std::filesystem::path& dir, const std::string& name, const json& j) {
  auto out = open_output(dir, name);
  out << j.dump(2) << '\n';
}

void write_timings(const std::filesystem::path& dir, const RunConfig& config, const Timings& t) {
  json j = json::object();
  for (const auto& [stage, s] : t.entries) j[stage] = s;
  j["total"] = t.total();
  write_json(dir, config.outputs.timings, j);
}

std::string g17(double v) { return fmt::format("{:.17g}", v); }

void write_mode_rows(std::ofstream& out, const std::vector<BandSample>& rows) {
  out << "side,j1,j2,m,mu,P,vg1,vg2\n";
  for (const auto& r : rows) {
    out << side_name(r.side) << ',' << g17(r.j[0]) << ',' << g17(r.j[1]) << ',' << r.m << ',' << g17(r.mu) << ','
        << g17(r.P) << ',' << g17(r.vg[0]) << ',' << g17(r.vg[1]) << '\n';
  }
}

std::vector<BandSample> as_rows(const IndexSet& set) {
  std::vector<BandSample> rows;
  rows.reserve(set.size());
  for (const auto& e : set.entries) rows.push_back({set.side, e.j, e.m, e.mu, e.P, e.vg});
  return rows;
}

json vec_json(const Vec2& v) { return json::array({v[0], v[1]}); }

json rt_json(const RTReport& rt) {
  return {{"R_ref", rt.R_ref},           {"T_ref", rt.T_ref},       {"alpha_refl", rt.alpha_refl},
          {"alpha_out", rt.alpha_out},   {"lambda_refl", rt.lambda_refl}, {"lambda_out", rt.lambda_out},
          {"j_out", vec_json(rt.j_out)}, {"snell_ratio", rt.snell_ratio}, {"err_R", rt.err_R},
          {"err_T", rt.err_T}};
}

json selection_json(const IndexSet& set, const RadiationBasis& basis) {
  return {{"side", side_name(set.side)},
          {"selected", set.size()},
          {"kept", basis.size()},
          {"dropped", basis.dropped},
          {"c0", set.c0},
          {"level_tol", set.level_tol}};
}

Medium homogenized_medium(const RunConfig& config, double a_star) {
  Medium m;
  m.left = config.medium.left;
  m.right = Material::constant(a_star);
  return m;
}

}  // namespace

double Timings::total() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.second;
  return s;
}

Vec2 resolve_incoming(const RunConfig& config) {
  const auto& src = config.source;
  const auto& g = config.geometry;
  if (src.kind != SourceConfig::Kind::incoming) throw ConfigError("source: an incoming wave is required");
  if (!(config.medium.left.is_constant() && config.medium.left.value == 1.0)) {
    throw ConfigError("source: an incoming wave needs a = 1 on the left");
  }
  if (!src.j_in) return incoming_wave_vector(config.omega, src.q, g.K, g.eps);
  const Vec2 j = *src.j_in;
  if (!incoming_admissible(config.omega, j)) {
    throw ConfigError(fmt::format("source: j_in = ({}, {}) is not admissible, |j_in|^2 - omega^2 = {:.3e}", j[0],
                                  j[1], j[0] * j[0] + j[1] * j[1] - config.omega * config.omega));
  }
  const double row = g.eps * j[1] * g.K / (2.0 * std::numbers::pi);
  if (std::abs(row - std::round(row)) > 1e-9) {
    throw ConfigError(fmt::format("source: j_in2 = {} is not eps*K-periodic", j[1]));
  }
  return j;
}

Scatterer::Scatterer(const RunConfig& config, const Medium& medium)
    : config_(config),
      grid_(config.geometry),
      a_(sample_coefficient(medium, grid_, config.sampling)),
      cell_plus_(cell_grid_for(config.geometry), medium.for_side(Side::plus), config.sampling),
      cell_minus_(cell_grid_for(config.geometry), medium.for_side(Side::minus), config.sampling) {
  config_.validate();
  medium.validate();
  const auto& g = config_.geometry;

  auto t0 = Clock::now();
  SelectionOptions opt = config_.selection;
  Eigen::VectorXcd nodal_load = Eigen::VectorXcd::Zero(grid_.num_nodes());
  if (config_.source.kind == SourceConfig::Kind::incoming) {
    j_in_ = resolve_incoming(config_);
    opt.target_j2 = g.eps * (*j_in_)[1] / (2.0 * std::numbers::pi);
  } else {
    opt.target_j2 = 0.0;
  }
  set_plus_ = select_indices(cell_plus_, config_.omega, Side::plus, g.K, opt);
  set_minus_ = select_indices(cell_minus_, config_.omega, Side::minus, g.K, opt);
  timings_.add("selection", seconds_since(t0));
  for (const IndexSet* s : {&set_plus_, &set_minus_}) {
    if (s->empty()) spdlog::warn("no outgoing Bloch modes on side {} at omega = {}", side_name(s->side), config_.omega);
  }

  t0 = Clock::now();
  plus_ = build_basis(set_plus_, cell_plus_, grid_, box_matrices(grid_, a_, Side::plus), config_.orthonormalize);
  minus_ = build_basis(set_minus_, cell_minus_, grid_, box_matrices(grid_, a_, Side::minus), config_.orthonormalize);
  timings_.add("basis", seconds_since(t0));

  t0 = Clock::now();
  if (j_in_) {
    IncomingWave wave;
    wave.j_in = *j_in_;
    wave.amplitude = config_.source.amplitude;
    wave.d = config_.source.d;
    wave.step_scale = config_.source.step_scale;
    auto src = incoming_source(wave, grid_, a_);
    nodal_load = std::move(src.load);
    offset_ = std::move(src.offset);
    has_offset_ = true;
  } else if (config_.source.kind == SourceConfig::Kind::gaussian) {
    GaussianSource gs;
    gs.amplitude = config_.source.g_amplitude;
    gs.decay = config_.source.decay;
    gs.center = config_.source.center;
    nodal_load = gaussian_load(gs, grid_);
  }
  system_ = assemble(grid_, a_, config_.omega, config_.delta, plus_, minus_, nodal_load);
  timings_.add("assembly", seconds_since(t0));
  spdlog::info("system: {} hats, {} + modes, {} - modes", system_.n_hat, system_.n_plus, system_.n_minus);
}

SolutionField Scatterer::solve(double delta) {
  if (!(delta >= 0.0)) throw ConfigError("delta must be >= 0");
  EnrichedSystem sys = system_;
  sys.delta = delta;
  const auto t0 = Clock::now();
  auto sol = solve_system(sys);
  timings_.add(fmt::format("solve(delta={})", delta), seconds_since(t0));
  spdlog::info("delta = {}: residual {:.2e}, rcond {:.2e}", delta, sol.residual, sol.rcond);
  return sol;
}

Eigen::VectorXcd Scatterer::field(const SolutionField& sol) const {
  return reconstruct(sol, grid_, plus_, minus_, has_offset_ ? &offset_ : nullptr);
}

HomogenizedResult homogenize(const RunConfig& config) {
  if (config.a_star) return {*config.a_star, *config.a_star, 0.0};
  CellProblem cell(cell_grid_for(config.geometry), config.crystal, config.sampling);
  return homogenized_a(cell, config.homogenization_dj);
}

BandRun run_band(const RunConfig& config, const std::filesystem::path& out_dir) {
  config.validate();
  const auto& g = config.geometry;
  BandRun run;
  const auto cg = cell_grid_for(g);
  CellProblem plus(cg, config.medium.for_side(Side::plus), config.sampling);
  CellProblem minus(cg, config.medium.for_side(Side::minus), config.sampling);
  run.bands = sample_bands(minus, Side::minus, config.band_mesh, config.band_count);
  auto right = sample_bands(plus, Side::plus, config.band_mesh, config.band_count);
  run.bands.insert(run.bands.end(), right.begin(), right.end());

  SelectionOptions opt = config.selection;
  opt.target_j2 = config.source.kind == SourceConfig::Kind::incoming
                      ? g.eps * resolve_incoming(config)[1] / (2.0 * std::numbers::pi)
                      : 0.0;
  run.plus = select_indices(plus, config.omega, Side::plus, g.K, opt);
  run.minus = select_indices(minus, config.omega, Side::minus, g.K, opt);

  if (!out_dir.empty()) {
    auto bands = open_output(out_dir, config.outputs.bands);
    write_mode_rows(bands, run.bands);
    auto selected = open_output(out_dir, config.outputs.selected);
    auto rows = as_rows(run.minus);
    auto right_rows = as_rows(run.plus);
    rows.insert(rows.end(), right_rows.begin(), right_rows.end());
    write_mode_rows(selected, rows);
  }
  return run;
}

SolveRun run_solve(const RunConfig& config, const std::filesystem::path& out_dir) {
  Scatterer sc(config, config.medium);
  SolveRun run;
  run.solution = sc.solve(config.delta);
  run.field = sc.field(run.solution);
  run.n_hat = sc.system().n_hat;
  const double j2 = sc.j_in() ? (*sc.j_in())[1] : 0.0;
  run.diagnostics = refraction_diagnostics(sc.basis(Side::plus), sc.basis(Side::minus), run.solution, j2);
  if (config.source.kind == SourceConfig::Kind::gaussian) {
    run.focusing = focusing_metric(run.field, sc.grid(), config.source.center[1]);
  }
  run.timings = sc.timings();

  if (!out_dir.empty()) {
    if (config.outputs.write_field) {
      auto out = open_output(out_dir, config.outputs.field);
      out << "x1,x2,re_u,im_u,abs_u\n";
      for (const auto& r : sample_field(run.field, sc.grid())) {
        out << g17(r.x1) << ',' << g17(r.x2) << ',' << g17(r.re) << ',' << g17(r.im) << ',' << g17(r.abs) << '\n';
      }
    }
    json modes = json::array();
    for (Side s : {Side::minus, Side::plus}) {
      const auto& basis = sc.basis(s);
      const Eigen::VectorXcd& alpha = s == Side::plus ? run.solution.alpha_plus : run.solution.alpha_minus;
      const Eigen::VectorXcd raw = raw_coefficients(basis, alpha);
      for (int i = 0; i < basis.size(); ++i) {
        const auto& e = basis.modes[i];
        modes.push_back({{"side", side_name(s)},
                         {"j", vec_json(e.j)},
                         {"m", e.m},
                         {"mu", e.mu},
                         {"P", e.P},
                         {"vg", vec_json(e.vg)},
                         {"alpha", json::array({alpha[i].real(), alpha[i].imag()})},
                         {"raw_alpha", json::array({raw[i].real(), raw[i].imag()})},
                         {"raw_abs", std::abs(raw[i])}});
      }
    }
    json report = {{"omega", config.omega},
                   {"delta", config.delta},
                   {"n_hat", run.n_hat},
                   {"n_plus", sc.basis(Side::plus).size()},
                   {"n_minus", sc.basis(Side::minus).size()},
                   {"residual", run.solution.residual},
                   {"rcond", run.solution.rcond},
                   {"schur_rcond", run.solution.schur_rcond},
                   {"j_in", sc.j_in() ? vec_json(*sc.j_in()) : json(nullptr)},
                   {"selection",
                    json::array({selection_json(sc.index_set(Side::minus), sc.basis(Side::minus)),
                                 selection_json(sc.index_set(Side::plus), sc.basis(Side::plus))})},
                   {"modes", modes},
                   {"negative_refraction", run.diagnostics.negative_refraction}};
    if (run.focusing) {
      report["focusing"] = {{"peak_in_strip", run.focusing->peak_in_strip},
                            {"mean_off_strip", run.focusing->mean_off_strip},
                            {"ratio", run.focusing->ratio}};
    }
    write_json(out_dir, config.outputs.report, report);
    write_timings(out_dir, config, run.timings);
  }
  return run;
}

ValidateRun run_validate(const RunConfig& config, const std::filesystem::path& out_dir) {
  config.validate();
  resolve_incoming(config);
  ValidateRun run;
  auto t0 = Clock::now();
  run.homogenized = homogenize(config);
  run.a_star = run.homogenized.a_star;
  run.a_star_from_config = config.a_star.has_value();
  const double t_hom = seconds_since(t0);

  Scatterer sc(config, homogenized_medium(config, run.a_star));
  run.j_in = *sc.j_in();
  run.reference = snell_fresnel(run.j_in, run.a_star);
  const auto sol = sc.solve(config.delta);
  run.residual = sol.residual;
  run.rt = extract_rt(sol, sc.basis(Side::plus), sc.basis(Side::minus), cell_grid_for(config.geometry), run.j_in,
                      run.a_star);
  run.timings.add("homogenization", t_hom);
  for (const auto& e : sc.timings().entries) run.timings.entries.push_back(e);

  if (!out_dir.empty()) {
    json report = {{"omega", config.omega},
                   {"delta", config.delta},
                   {"a_star", run.a_star},
                   {"a_star_half_step", run.homogenized.a_star_half},
                   {"a_star_rel_diff", run.homogenized.rel_diff},
                   {"a_star_from_config", run.a_star_from_config},
                   {"j_in", vec_json(run.j_in)},
                   {"reference",
                    {{"j_out", vec_json(run.reference.j_out)},
                     {"R", run.reference.R},
                     {"T", run.reference.T},
                     {"evanescent", run.reference.evanescent}}},
                   {"rt", rt_json(run.rt)},
                   {"residual", run.residual}};
    write_json(out_dir, config.outputs.report, report);
    write_timings(out_dir, config, run.timings);
  }
  return run;
}

SweepRun run_sweep(const RunConfig& config, const std::filesystem::path& out_dir) {
  config.validate();
  resolve_incoming(config);
  SweepRun run;
  auto t0 = Clock::now();
  run.a_star = homogenize(config).a_star;
  run.timings.add("homogenization", seconds_since(t0));

  Scatterer sc(config, homogenized_medium(config, run.a_star));
  const Vec2 j_in = *sc.j_in();
  const auto cg = cell_grid_for(config.geometry);
  for (double delta : config.sweep_deltas) {
    const auto sol = sc.solve(delta);
    run.rows.push_back(
        {delta, extract_rt(sol, sc.basis(Side::plus), sc.basis(Side::minus), cg, j_in, run.a_star), sol.residual});
  }
  for (const auto& e : sc.timings().entries) run.timings.entries.push_back(e);

  if (!out_dir.empty()) {
    auto out = open_output(out_dir, config.outputs.sweep);
    out << "delta,err_R,err_T\n";
    for (const auto& r : run.rows) out << g17(r.delta) << ',' << g17(r.rt.err_R) << ',' << g17(r.rt.err_T) << '\n';
    write_timings(out_dir, config, run.timings);
  }
  return run;
}

}  // namespace blochguide
