#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "blochguide/grid.hpp"
#include "blochguide/medium.hpp"

namespace blochguide {

using Vec2 = std::array<double, 2>;

// Doubly periodic m1 × m2 right-triangle mesh of the cell Y_ε = [0,ε)².
struct CellGrid {
  double eps = 1.0;
  int m1 = 20;
  int m2 = 19;

  int num_nodes() const { return m1 * m2; }
  int num_elements() const { return 2 * m1 * m2; }
  double h1() const { return eps / m1; }
  double h2() const { return eps / m2; }
  int node(int i, int k) const { return ((i % m1 + m1) % m1) * m2 + ((k % m2 + m2) % m2); }
};

inline CellGrid cell_grid_for(const GridSpec& spec) { return {spec.eps, spec.n1, spec.n2}; }

// Eigenpair of the shifted cell operator. psi holds the periodic factor Ψ at the cell nodes,
// scaled so the Bloch wave Ψ e^{2πi j·x/ε} has unit cell mean of |U|².
struct BlochMode {
  Side side = Side::plus;
  Vec2 j{0.0, 0.0};
  int m = 0;
  double mu = 0.0;
  Eigen::VectorXcd psi;
};

struct GroupVelocity {
  Vec2 vg{0.0, 0.0};
  bool degenerate = false;
};

// Band-structure kernel on one cell with element-wise constant coefficient.
// The shifted operator is discretized on quasi-periodic P1 functions: the Bloch wave U itself is
// interpolated, so the box extension of an eigenvector is an exact discrete Bloch wave.
class CellProblem {
 public:
  CellProblem(const CellGrid& grid, std::vector<double> a_local);
  CellProblem(const CellGrid& grid, const Material& material,
              CoefficientSampling mode = CoefficientSampling::grid_node);

  const CellGrid& grid() const { return grid_; }
  const std::vector<double>& coefficients() const { return a_; }

  // (K_j, M_j): K_j represents −(∇+2πij/ε)·a(∇+2πij/ε), both Hermitian.
  std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> assemble_shifted(const Vec2& j) const;

  std::vector<BlochMode> solve(const Vec2& j, int n_bands, Side side = Side::plus) const;
  Eigen::VectorXd eigenvalues(const Vec2& j, int n_bands) const;

  // Nodal value of the Bloch wave at cell-grid point (i, k), with i, k unwrapped.
  std::complex<double> wave_value(const BlochMode& mode, int i, int k) const;

  double poynting(const BlochMode& mode) const;
  // Physical group velocity ∂ω/∂k = (ε/2π) ∂√μ_m/∂j by central differences with step dj.
  GroupVelocity group_velocity(const Vec2& j, int m, int n_bands, double dj = 1e-3) const;
  // ∫_Y |U|² for the interpolated Bloch wave.
  double cell_norm2(const BlochMode& mode) const;

 private:
  CellGrid grid_;
  std::vector<double> a_;
  std::array<LocalMatrices, 2> unit_;  // a = 1 element matrices per triangle type
};

struct BandSample {
  Side side = Side::plus;
  Vec2 j{0.0, 0.0};
  int m = 0;
  double mu = 0.0;
  double P = 0.0;
  Vec2 vg{0.0, 0.0};
};

// Bands on an n × n mesh of (−½,½]², group velocities by periodic differences on the mesh.
std::vector<BandSample> sample_bands(const CellProblem& cell, Side side, int n, int n_bands);

}  // namespace blochguide
