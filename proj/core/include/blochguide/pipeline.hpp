#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blochguide/analysis.hpp"
#include "blochguide/assembly.hpp"
#include "blochguide/band_select.hpp"
#include "blochguide/cell_eigen.hpp"
#include "blochguide/config.hpp"
#include "blochguide/enrichment.hpp"
#include "blochguide/solve.hpp"

namespace blochguide {

struct Timings {
  std::vector<std::pair<std::string, double>> entries;  // stage, seconds

  void add(std::string stage, double seconds) { entries.emplace_back(std::move(stage), seconds); }
  double total() const;
};

// Incoming wave vector of an incoming source: the explicit j_in when given (must be admissible and
// lie on a Q'_K row), else the Q'_K row q.
Vec2 resolve_incoming(const RunConfig& config);

// Everything of a scattering run that does not depend on δ: grid, coefficient, selected
// index sets, radiation bases, nodal operators and load.
class Scatterer {
 public:
  Scatterer(const RunConfig& config, const Medium& medium);

  const RunConfig& config() const { return config_; }
  const Grid& grid() const { return grid_; }
  const std::vector<double>& coefficient() const { return a_; }
  const CellProblem& cell(Side s) const { return s == Side::plus ? cell_plus_ : cell_minus_; }
  const IndexSet& index_set(Side s) const { return s == Side::plus ? set_plus_ : set_minus_; }
  const RadiationBasis& basis(Side s) const { return s == Side::plus ? plus_ : minus_; }
  const EnrichedSystem& system() const { return system_; }
  const std::optional<Vec2>& j_in() const { return j_in_; }
  const Timings& timings() const { return timings_; }

  SolutionField solve(double delta);
  // Nodal field with the incoming add-back.
  Eigen::VectorXcd field(const SolutionField& sol) const;

 private:
  RunConfig config_;
  Grid grid_;
  std::vector<double> a_;
  CellProblem cell_plus_;
  CellProblem cell_minus_;
  IndexSet set_plus_;
  IndexSet set_minus_;
  RadiationBasis plus_;
  RadiationBasis minus_;
  std::optional<Vec2> j_in_;
  Eigen::VectorXcd offset_;
  bool has_offset_ = false;
  EnrichedSystem system_;
  Timings timings_;
};

struct BandRun {
  std::vector<BandSample> bands;
  IndexSet plus;
  IndexSet minus;
};

struct SolveRun {
  SolutionField solution;
  Eigen::VectorXcd field;
  RefractionDiagnostics diagnostics;
  std::optional<FocusingMetric> focusing;
  int n_hat = 0;
  Timings timings;
};

struct ValidateRun {
  HomogenizedResult homogenized;
  double a_star = 0.0;
  bool a_star_from_config = false;
  Vec2 j_in{0.0, 0.0};
  FresnelReference reference;
  RTReport rt;
  double residual = 0.0;
  Timings timings;
};

struct SweepRow {
  double delta = 0.0;
  RTReport rt;
  double residual = 0.0;
};

struct SweepRun {
  double a_star = 0.0;
  std::vector<SweepRow> rows;
  Timings timings;
};

// Each run writes its files into out_dir when it is non-empty.
BandRun run_band(const RunConfig& config, const std::filesystem::path& out_dir = {});
SolveRun run_solve(const RunConfig& config, const std::filesystem::path& out_dir = {});
ValidateRun run_validate(const RunConfig& config, const std::filesystem::path& out_dir = {});
SweepRun run_sweep(const RunConfig& config, const std::filesystem::path& out_dir = {});

// a* of config.crystal, or the configured override.
HomogenizedResult homogenize(const RunConfig& config);

}  // namespace blochguide
