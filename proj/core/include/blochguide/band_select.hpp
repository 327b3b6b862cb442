#pragma once

#include <optional>
#include <vector>

#include "blochguide/cell_eigen.hpp"

namespace blochguide {

// Vertical Bloch wave numbers compatible with εK-periodicity, ascending.
std::vector<double> q_prime(int K);

// Index of the Q'_K row closest to j2 (periodic distance).
int nearest_q_row(double j2, int K);

struct IndexEntry {
  Vec2 j{0.0, 0.0};
  int m = 0;
  double mu = 0.0;
  double P = 0.0;
  Vec2 vg{0.0, 0.0};
  bool degenerate = false;
  BlochMode mode;
};

struct IndexSet {
  Side side = Side::plus;
  double omega = 0.0;
  double c0 = 0.0;
  double level_tol = 0.0;
  std::vector<IndexEntry> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
};

struct SelectionOptions {
  int j1_mesh = 201;
  int n_bands = 12;
  double level_tol_rel = 1e-6;          // |μ − ω²| ≤ level_tol_rel·ω²
  double c0_rel = 1e-8;                  // c0 = c0_rel · max |P| over candidates
  std::optional<double> c0;              // absolute threshold, overrides c0_rel
  int j2_rows = 0;                       // 0: every row of Q'_K
  double target_j2 = 0.0;                // rows nearest to this value when j2_rows > 0
  int max_modes = 0;                     // 0: no cap
  int max_iterations = 40;
  double dj = 1e-3;                      // group-velocity step

  void validate() const;
};

// Outgoing Bloch modes at frequency ω: + keeps P > c0, − keeps P < −c0.
IndexSet select_indices(const CellProblem& cell, double omega, Side side, int K,
                        const SelectionOptions& opt = {});

// True iff | |j_in|² − ω² | < 1e-6 ω² (left medium a = 1).
bool incoming_admissible(double omega, const Vec2& j_in);

// Physical incoming wave vector on Q'_K row q: j₂ = 2πq/(εK), j₁ = √(ω² − j₂²) > 0.
Vec2 incoming_wave_vector(double omega, int q, int K, double eps);

}  // namespace blochguide
