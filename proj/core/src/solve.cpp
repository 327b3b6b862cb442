#include "blochguide/solve.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "blochguide/errors.hpp"
#include "blochguide/sparse_lu.hpp"

namespace blochguide {

namespace {

constexpr double kResidualTol = 1e-8;

Eigen::VectorXcd schur_solve(const Arrowhead& G, const SparseLU& lu, const Eigen::MatrixXcd& X,
                             const Eigen::PartialPivLU<Eigen::MatrixXcd>* schur, const Eigen::VectorXcd& F) {
  const int n0 = G.n_hat;
  const int nb = G.n_bloch;
  Eigen::VectorXcd y = lu.solve(Eigen::VectorXcd(F.head(n0)));
  Eigen::VectorXcd out(G.size());
  if (nb == 0) {
    out = y;
    return out;
  }
  Eigen::VectorXcd yr(static_cast<Eigen::Index>(G.border_rows.size()));
  for (std::size_t i = 0; i < G.border_rows.size(); ++i) yr[static_cast<Eigen::Index>(i)] = y[G.border_rows[i]];
  const Eigen::VectorXcd z = schur->solve(Eigen::VectorXcd(F.tail(nb) - G.lower * yr));
  out.head(n0) = y - X * z;
  out.tail(nb) = z;
  return out;
}

}  // namespace

Eigen::VectorXcd solve_arrowhead(const Arrowhead& G, const Eigen::VectorXcd& F, double* rcond, double* schur_rcond) {
  if (F.size() != G.size()) throw ConfigError("solve: load size mismatch");
  const double fnorm = F.norm();
  if (fnorm == 0.0) {
    if (rcond) *rcond = 0.0;
    if (schur_rcond) *schur_rcond = 0.0;
    return Eigen::VectorXcd::Zero(G.size());
  }
  const SparseLU lu(G.hat);
  if (rcond) *rcond = lu.rcond();
  const int nb = G.n_bloch;
  Eigen::MatrixXcd X;
  std::unique_ptr<Eigen::PartialPivLU<Eigen::MatrixXcd>> schur;
  if (nb > 0) {
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(G.n_hat, nb);
    for (std::size_t i = 0; i < G.border_rows.size(); ++i) U.row(G.border_rows[i]) = G.upper.row(static_cast<Eigen::Index>(i));
    X = lu.solve(U);
    Eigen::MatrixXcd Xr(static_cast<Eigen::Index>(G.border_rows.size()), nb);
    for (std::size_t i = 0; i < G.border_rows.size(); ++i) Xr.row(static_cast<Eigen::Index>(i)) = X.row(G.border_rows[i]);
    const Eigen::MatrixXcd S = G.corner - G.lower * Xr;
    schur = std::make_unique<Eigen::PartialPivLU<Eigen::MatrixXcd>>(S);
    const double rc = schur->rcond();
    if (schur_rcond) *schur_rcond = rc;
    if (!(rc > 1e-14)) {
      throw NumericalError("solve: Bloch Schur complement is singular (rcond " + std::to_string(rc) + ")");
    }
  }
  Eigen::VectorXcd u = schur_solve(G, lu, X, schur.get(), F);
  Eigen::VectorXcd r = F - G.apply(u);
  if (r.norm() > kResidualTol * fnorm) {
    u += schur_solve(G, lu, X, schur.get(), r);
    r = F - G.apply(u);
  }
  const double rel = r.norm() / fnorm;
  if (!(rel < kResidualTol)) {
    throw NumericalError("solve: relative residual " + std::to_string(rel) + " above 1e-8 (hat block rcond " +
                         std::to_string(lu.rcond()) + ")");
  }
  return u;
}

SolutionField solve_system(const EnrichedSystem& sys) {
  SolutionField out;
  const Arrowhead G = sys.matrix();
  out.coords = solve_arrowhead(G, sys.load, &out.rcond, &out.schur_rcond);
  const double fnorm = sys.load.norm();
  out.residual = fnorm > 0.0 ? (sys.load - G.apply(out.coords)).norm() / fnorm : 0.0;
  out.alpha_plus = out.coords.segment(sys.n_hat, sys.n_plus);
  out.alpha_minus = out.coords.tail(sys.n_minus);
  return out;
}

Eigen::VectorXcd reconstruct(const SolutionField& sol, const Grid& grid, const RadiationBasis& plus,
                             const RadiationBasis& minus, const Eigen::VectorXcd* offset) {
  Eigen::VectorXcd u = prolongate(sol.coords, grid, plus, minus);
  if (offset) {
    if (offset->size() != u.size()) throw ConfigError("reconstruct: offset size mismatch");
    u += *offset;
  }
  return u;
}

std::vector<FieldRow> sample_field(const Eigen::VectorXcd& nodal, const Grid& grid) {
  if (nodal.size() != grid.num_nodes()) throw ConfigError("sample_field: nodal size mismatch");
  std::vector<FieldRow> rows(static_cast<std::size_t>(grid.num_nodes()));
  for (int k = 0; k < grid.num_nodes(); ++k) {
    const auto x = grid.coords(k);
    rows[k] = {x[0], x[1], nodal[k].real(), nodal[k].imag(), std::abs(nodal[k])};
  }
  return rows;
}

}  // namespace blochguide
