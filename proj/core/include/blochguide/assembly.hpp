#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "blochguide/enrichment.hpp"
#include "blochguide/grid.hpp"

namespace blochguide {

using cplx = std::complex<double>;
using SparseComplex = Eigen::SparseMatrix<cplx>;

// Cut-off ϑ: 1 on |x₁| ≤ εR, 0 on |x₁| ≥ ε(R+L), linear in between.
double theta_cutoff(double x1, const GridSpec& spec);

// Smooth step θ used to turn an incoming plane wave e^{i j_in·x} into a source:
// θ = 1 for x₁ < −εR, θ = s(1 − tanh(d(x₁ + εR/2))) on [−εR, 0), θ = 0 for x₁ ≥ 0.
struct IncomingWave {
  Vec2 j_in{0.0, 0.0};
  cplx amplitude{1.0, 0.0};
  double d = 1.0;
  double step_scale = 0.5;

  double theta(double x1, const GridSpec& spec) const;
  double theta_d1(double x1, const GridSpec& spec) const;
  double theta_d2(double x1, const GridSpec& spec) const;
  cplx value(double x1, double x2) const;  // amplitude · e^{i j_in·x}
};

struct GaussianSource {
  double amplitude = 2.0;
  double decay = 3.0;
  Vec2 center{-3.5, 0.0};

  // Sum over the vertical periodic images of amplitude·e^{−decay|x − center|²}.
  double value(double x1, double x2, double height) const;
};

struct IncomingSource {
  Eigen::VectorXcd load;    // nodal load ∫ f̃ φ_k on all N_h nodes
  Eigen::VectorXcd offset;  // u_in·θ at all nodes, added back after the solve
};

// Throws ConfigError when a is not constant on [−εR, 0] or θ(0) ≥ 1e-5.
IncomingSource incoming_source(const IncomingWave& wave, const Grid& grid, const std::vector<double>& a_elem);

// Nodal load ∫ f φ_k on all N_h nodes (7-point degree-5 triangle rule).
Eigen::VectorXcd gaussian_load(const GaussianSource& src, const Grid& grid);

// Operator in V_h coordinates [hats (N₀) | α⁺ | α⁻] with sparse hat block and dense borders
// restricted to the hat rows that touch a radiation box.
struct Arrowhead {
  int n_hat = 0;
  int n_bloch = 0;
  SparseComplex hat;
  std::vector<int> border_rows;
  Eigen::MatrixXcd upper;   // border_rows × n_bloch
  Eigen::MatrixXcd lower;   // n_bloch × border_rows
  Eigen::MatrixXcd corner;  // n_bloch × n_bloch

  int size() const { return n_hat + n_bloch; }
  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
  Eigen::MatrixXcd dense() const;  // for small test systems only
  // this + s·other; both must share border_rows
  Arrowhead axpy(cplx s, const Arrowhead& other) const;
};

struct NodalOperators {
  SparseReal stiffness;   // ∫ aϑ ∇φ_k·∇φ_l
  SparseReal flux_sign;   // (1/εL)(∫_{W⁺} − ∫_{W⁻}) a φ_k ∂₁φ_l
  SparseReal mass_in;     // ∫_{Ω_R} φ_k φ_l
  SparseReal mass_out;    // ∫_{W⁺ ∪ W⁻} ϑ φ_k φ_l
};

NodalOperators assemble_nodal(const Grid& grid, const std::vector<double>& a_elem);

struct EnrichedSystem {
  double omega = 0.0;
  double delta = 0.0;
  int n_hat = 0;
  int n_plus = 0;
  int n_minus = 0;
  Arrowhead A;
  Arrowhead B;
  Arrowhead M_in;
  Arrowhead M_out;
  Eigen::VectorXcd load;

  int size() const { return n_hat + n_plus + n_minus; }
  // G = A − B − ω²(M_out + (1 + iδ) M_in)
  Arrowhead matrix() const;
};

// Restriction of a nodal operator to V_h coordinates.
Arrowhead restrict_to_space(const SparseReal& op, const Grid& grid, const RadiationBasis& plus,
                            const RadiationBasis& minus, const std::vector<int>& border_rows);

// Hat rows whose support touches a closed radiation box.
std::vector<int> border_rows(const Grid& grid);

// Projection of a nodal load vector onto V_h coordinates.
Eigen::VectorXcd restrict_load(const Eigen::VectorXcd& nodal, const Grid& grid, const RadiationBasis& plus,
                               const RadiationBasis& minus);

// Nodal values on all N_h nodes of a V_h coordinate vector.
Eigen::VectorXcd prolongate(const Eigen::VectorXcd& coords, const Grid& grid, const RadiationBasis& plus,
                            const RadiationBasis& minus);

EnrichedSystem assemble(const Grid& grid, const std::vector<double>& a_elem, double omega, double delta,
                        const RadiationBasis& plus, const RadiationBasis& minus,
                        const Eigen::VectorXcd& nodal_load);

// β(u, v), conjugate-linear in u, linear in v: conj(vᴴ G u).
cplx beta_form(const EnrichedSystem& sys, const Eigen::VectorXcd& u, const Eigen::VectorXcd& v);

}  // namespace blochguide
