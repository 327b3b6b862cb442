#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "blochguide/band_select.hpp"
#include "blochguide/grid.hpp"

namespace blochguide {

using SparseReal = Eigen::SparseMatrix<double>;

// Unweighted P1 operators on one closed radiation box, box-local node numbering
// (node − grid.box_offset(side)).
struct BoxMatrices {
  Side side = Side::plus;
  SparseReal mass;  // ∫_W φ_k φ_l
  SparseReal flux;  // ∫_W a φ_k ∂₁φ_l
};

BoxMatrices box_matrices(const Grid& grid, const std::vector<double>& a_elem, Side side);

// Box-local nodal values of the Bloch wave of `mode`, in coordinates with the lower-left box
// corner at the origin. Throws ConfigError when the cell grid does not match the global grid.
Eigen::VectorXcd extend_to_box(const BlochMode& mode, const CellProblem& cell, const Grid& grid, Side side);

// Global nodal vector (zero outside the closed box) from box-local values.
Eigen::VectorXcd box_to_global(const Eigen::VectorXcd& box_values, const Grid& grid, Side side);

struct GramSchmidt {
  Eigen::MatrixXcd q;        // mass-orthonormal columns
  Eigen::MatrixXcd r;        // upper triangular, kept columns of the input = q · r
  std::vector<int> kept;     // input columns that survived
  std::vector<int> dropped;
};

// Modified Gram-Schmidt in the mass inner product with one re-orthogonalization pass.
// Columns whose norm after projection falls below drop_tol of their original norm are dropped.
GramSchmidt orthonormalize(const Eigen::MatrixXcd& columns, const SparseReal& mass, double drop_tol = 1e-8);

struct RadiationBasis {
  Side side = Side::plus;
  std::vector<IndexEntry> modes;  // kept modes, one per raw column
  Eigen::MatrixXcd raw;           // N_W × N_Bl cell-normalized Bloch waves
  Eigen::MatrixXcd kappa;         // N_W × N_Bl basis actually used in the system
  Eigen::MatrixXcd r;             // raw = kappa · r (identity when not orthonormalized)
  bool orthonormalized = false;
  std::vector<int> dropped;       // indices into the originating IndexSet

  int size() const { return static_cast<int>(kappa.cols()); }
};

RadiationBasis build_basis(const IndexSet& set, const CellProblem& cell, const Grid& grid,
                           const BoxMatrices& box, bool orthonormalize_columns = true);

struct Expansion {
  Eigen::VectorXcd alpha;
  double residual = 0.0;  // L²(W) norm of the part outside the span
};

// Mass-weighted least-squares projection of box-local values onto span(basis.kappa).
Expansion expand(const Eigen::VectorXcd& field, const RadiationBasis& basis, const SparseReal& mass);

// Coefficients with respect to the raw (cell-normalized) Bloch waves: raw α = r⁻¹ α.
Eigen::VectorXcd raw_coefficients(const RadiationBasis& basis, const Eigen::VectorXcd& alpha);

struct PlancherelSides {
  double lhs = 0.0;  // ‖field‖²_{L²(W)}
  double rhs = 0.0;  // ε² L K Σ |α|²
};

// Expands field in the cell-normalized columns (least squares) and returns both Plancherel sides.
PlancherelSides plancherel_check(const Eigen::VectorXcd& field, const Eigen::MatrixXcd& modes,
                                 const SparseReal& mass, const GridSpec& spec);

// b(u, v) = ⨍_W ū a ∂₁v on box-local values.
std::complex<double> flux_form(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v,
                               const BoxMatrices& box, const GridSpec& spec);

}  // namespace blochguide
