#pragma once

#include <vector>

#include <Eigen/Dense>

#include "blochguide/assembly.hpp"

namespace blochguide {

struct SolutionField {
  Eigen::VectorXcd coords;       // V_h coordinates [hats | α⁺ | α⁻]
  Eigen::VectorXcd alpha_plus;
  Eigen::VectorXcd alpha_minus;
  double residual = 0.0;         // ‖G U − F‖ / ‖F‖
  double rcond = 0.0;            // sparse hat block estimate
  double schur_rcond = 0.0;      // dense Bloch corner after elimination
};

// Direct solve of G U = F: sparse LU of the hat block, Schur complement on the Bloch corner.
// Throws NumericalError when the relative residual stays above 1e-8.
SolutionField solve_system(const EnrichedSystem& sys);
Eigen::VectorXcd solve_arrowhead(const Arrowhead& G, const Eigen::VectorXcd& F, double* rcond = nullptr,
                                 double* schur_rcond = nullptr);

// Nodal values of u on all N_h nodes: hats, κα in the boxes, plus the incoming add-back.
Eigen::VectorXcd reconstruct(const SolutionField& sol, const Grid& grid, const RadiationBasis& plus,
                             const RadiationBasis& minus, const Eigen::VectorXcd* offset = nullptr);

struct FieldRow {
  double x1 = 0.0;
  double x2 = 0.0;
  double re = 0.0;
  double im = 0.0;
  double abs = 0.0;
};

// One row per grid node in node order.
std::vector<FieldRow> sample_field(const Eigen::VectorXcd& nodal, const Grid& grid);

}  // namespace blochguide
