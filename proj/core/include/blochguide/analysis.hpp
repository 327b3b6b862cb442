#pragma once

#include <vector>

#include "blochguide/solve.hpp"

namespace blochguide {

struct HomogenizedResult {
  double a_star = 0.0;
  double a_star_half = 0.0;  // same stencil with dj/2
  double rel_diff = 0.0;
};

// a* = ½(ε/2π)² ∂²μ₀/∂j₁² at j = 0 by central differences; the dj/2 value must agree within 1e-3.
HomogenizedResult homogenized_a(const CellProblem& cell, double dj = 1e-3);

struct FresnelReference {
  Vec2 j_out{0.0, 0.0};
  double R = 0.0;
  double T = 0.0;
  bool evanescent = false;
};

// Plane-wave interface a = 1 | a*: j_out₂ = j_in₂, |j_out| = |j_in|/√a*, Fresnel R and T = 1 + R.
FresnelReference snell_fresnel(const Vec2& j_in, double a_star);

// Physical wave vector 2π(j + n)/ε of a Bloch mode, n the dominant Fourier harmonic of Ψ.
Vec2 unfolded_wave_vector(const BlochMode& mode, const CellGrid& grid, int max_harmonic = 3);

// Index of the strictly largest |α|; ties within 1e-12 go to smaller |j₁|, then smaller m.
int dominant_index(const Eigen::VectorXcd& alpha, const std::vector<IndexEntry>& modes);

struct RTReport {
  double R_ref = 0.0;
  double T_ref = 0.0;
  double alpha_refl = 0.0;  // |α| of the dominant − mode, cell-mean normalized
  double alpha_out = 0.0;
  int lambda_refl = -1;
  int lambda_out = -1;
  Vec2 j_out{0.0, 0.0};
  double snell_ratio = 0.0;  // |j_in| / |j_out|
  double err_R = 0.0;
  double err_T = 0.0;
};

// Coefficients are taken with respect to the cell-normalized (pre-Gram) Bloch waves.
RTReport extract_rt(const SolutionField& sol, const RadiationBasis& plus, const RadiationBasis& minus,
                    const CellGrid& cell_grid, const Vec2& j_in, double a_star);

struct ModeDiagnostic {
  Side side = Side::plus;
  Vec2 j{0.0, 0.0};
  int m = 0;
  double P = 0.0;
  Vec2 vg{0.0, 0.0};
  double coefficient = 0.0;  // |raw α|
};

struct RefractionDiagnostics {
  std::vector<ModeDiagnostic> modes;
  bool negative_refraction = false;
};

// Joins the bases with |α|. Negative refraction: every transmission mode with |α| ≥ ½ max |α|
// has vg₂ < 0 while the incoming j₂ > 0.
RefractionDiagnostics refraction_diagnostics(const RadiationBasis& plus, const RadiationBasis& minus,
                                             const SolutionField& sol, double j_in2);

struct FocusingMetric {
  double peak_in_strip = 0.0;
  double mean_off_strip = 0.0;
  double ratio = 0.0;
};

// |u| on nodes with x₁ ∈ (0, x1_max]: peak within the periodic strip |x₂ − center| < half_width
// against the mean outside it.
FocusingMetric focusing_metric(const Eigen::VectorXcd& nodal, const Grid& grid, double center,
                               double half_width = 5.0, double x1_max = 10.0);

// ∫_{x₁ = ±εR} [a ∂₁u] Ū dx₂ for a box-local Bloch wave U: jump of the discrete normal flux of u
// across the interface between Ω_R and the box, tested with U.
cplx weak_flux_jump(const Eigen::VectorXcd& nodal, const Grid& grid, const std::vector<double>& a_elem,
                    const Eigen::VectorXcd& box_wave, Side side);

}  // namespace blochguide
