#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "blochguide/band_select.hpp"
#include "blochguide/grid.hpp"
#include "blochguide/medium.hpp"

namespace blochguide {

struct SourceConfig {
  enum class Kind { none, incoming, gaussian };
  Kind kind = Kind::incoming;

  // incoming: either an explicit wave vector or the Q'_K row q (j₂ = 2πq/(εK))
  std::optional<Vec2> j_in;
  int q = 1;
  std::complex<double> amplitude{1.0, 0.0};
  double d = 1.0;
  double step_scale = 0.5;

  // gaussian
  double g_amplitude = 2.0;
  double decay = 3.0;
  Vec2 center{-3.5, 0.0};
};

struct OutputConfig {
  std::string field = "field.csv";
  std::string report = "report.json";
  std::string timings = "timings.json";
  std::string bands = "bands.csv";
  std::string selected = "selected.csv";
  std::string sweep = "sweep.csv";
  bool write_field = true;
};

struct RunConfig {
  GridSpec geometry;
  Medium medium;
  CoefficientSampling sampling = CoefficientSampling::grid_node;
  double omega = 0.2 * 3.14159265358979323846;
  double delta = 1e-4;
  SourceConfig source;
  SelectionOptions selection = [] {
    SelectionOptions s;
    s.j2_rows = 1;
    return s;
  }();
  bool orthonormalize = true;

  // validate / sweep: right medium replaced by the homogenized constant
  Material crystal = hole_crystal();
  std::optional<double> a_star;
  double homogenization_dj = 1e-3;
  std::vector<double> sweep_deltas{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};

  int band_mesh = 21;
  int band_count = 3;

  OutputConfig outputs;

  // Throws ConfigError on any violated invariant.
  void validate() const;
};

RunConfig parse_config(const std::string& json_text);
std::string serialize_config(const RunConfig& config);
RunConfig load_config(const std::filesystem::path& path);

const char* sampling_name(CoefficientSampling s);

}  // namespace blochguide
