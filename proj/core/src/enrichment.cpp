#include "blochguide/enrichment.hpp"

#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

#include "blochguide/errors.hpp"

namespace blochguide {

namespace {

using cd = std::complex<double>;

Region region_of(Side s) { return s == Side::plus ? Region::box_plus : Region::box_minus; }

cd inner(const Eigen::VectorXcd& x, const SparseReal& mass, const Eigen::VectorXcd& y) {
  return x.dot(mass * y);  // x^H M y
}

}  // namespace

BoxMatrices box_matrices(const Grid& grid, const std::vector<double>& a_elem, Side side) {
  if (a_elem.size() != grid.elements().size()) throw ConfigError("box matrices: coefficient size mismatch");
  const int nw = grid.num_box();
  const int offset = grid.box_offset(side);
  const Region region = region_of(side);
  const auto& spec = grid.spec();
  std::vector<Eigen::Triplet<double>> tm;
  std::vector<Eigen::Triplet<double>> tf;
  const auto& elems = grid.elements();
  for (std::size_t e = 0; e < elems.size(); ++e) {
    const auto& el = elems[e];
    if (el.region != region) continue;
    const auto lm = element_matrices(el.type, spec.h1(), spec.h2(), 1.0);
    for (int p = 0; p < 3; ++p) {
      for (int q = 0; q < 3; ++q) {
        const int r = el.nodes[p] - offset;
        const int c = el.nodes[q] - offset;
        tm.emplace_back(r, c, lm.mass(p, q));
        tf.emplace_back(r, c, a_elem[e] * lm.flux(p, q));
      }
    }
  }
  BoxMatrices out;
  out.side = side;
  out.mass.resize(nw, nw);
  out.flux.resize(nw, nw);
  out.mass.setFromTriplets(tm.begin(), tm.end());
  out.flux.setFromTriplets(tf.begin(), tf.end());
  return out;
}

Eigen::VectorXcd extend_to_box(const BlochMode& mode, const CellProblem& cell, const Grid& grid, Side side) {
  const auto& spec = grid.spec();
  const auto& cg = cell.grid();
  if (cg.m1 != spec.n1 || cg.m2 != spec.n2 || cg.eps != spec.eps) {
    throw ConfigError("extend_to_box: cell grid " + std::to_string(cg.m1) + "x" + std::to_string(cg.m2) +
                      " does not match global cell subdivision " + std::to_string(spec.n1) + "x" +
                      std::to_string(spec.n2));
  }
  if (mode.psi.size() != cg.num_nodes()) throw ConfigError("extend_to_box: mode size mismatch");
  const int offset = grid.box_offset(side);
  const int first = grid.box_first_column(side);
  Eigen::VectorXcd out(grid.num_box());
  for (int c = 0; c < grid.box_columns(); ++c) {
    for (int iy = 0; iy < grid.num_rows(); ++iy) {
      out[grid.node(first + c, iy) - offset] = cell.wave_value(mode, c, iy);
    }
  }
  return out;
}

Eigen::VectorXcd box_to_global(const Eigen::VectorXcd& box_values, const Grid& grid, Side side) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(grid.num_nodes());
  out.segment(grid.box_offset(side), grid.num_box()) = box_values;
  return out;
}

GramSchmidt orthonormalize(const Eigen::MatrixXcd& columns, const SparseReal& mass, double drop_tol) {
  const Eigen::Index n = columns.cols();
  GramSchmidt out;
  out.q.resize(columns.rows(), 0);
  std::vector<Eigen::VectorXcd> qs;
  std::vector<Eigen::VectorXcd> rs;  // column c of r, length = kept count at insertion
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::VectorXcd v = columns.col(c);
    const double norm0 = std::sqrt(std::max(inner(v, mass, v).real(), 0.0));
    Eigen::VectorXcd coeff = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(qs.size()));
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < qs.size(); ++k) {
        const cd h = inner(qs[k], mass, v);
        v -= h * qs[k];
        coeff[static_cast<Eigen::Index>(k)] += h;
      }
    }
    const double norm = std::sqrt(std::max(inner(v, mass, v).real(), 0.0));
    if (!(norm0 > 0.0) || norm < drop_tol * norm0) {
      out.dropped.push_back(static_cast<int>(c));
      continue;
    }
    Eigen::VectorXcd rc(static_cast<Eigen::Index>(qs.size()) + 1);
    rc.head(coeff.size()) = coeff;
    rc[coeff.size()] = norm;
    qs.push_back(v / norm);
    rs.push_back(std::move(rc));
    out.kept.push_back(static_cast<int>(c));
  }
  const auto k = static_cast<Eigen::Index>(qs.size());
  out.q.resize(columns.rows(), k);
  out.r = Eigen::MatrixXcd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    out.q.col(i) = qs[i];
    out.r.col(i).head(rs[i].size()) = rs[i];
  }
  return out;
}

RadiationBasis build_basis(const IndexSet& set, const CellProblem& cell, const Grid& grid,
                           const BoxMatrices& box, bool orthonormalize_columns) {
  RadiationBasis out;
  out.side = set.side;
  const auto n = static_cast<Eigen::Index>(set.size());
  Eigen::MatrixXcd raw(grid.num_box(), n);
  for (Eigen::Index c = 0; c < n; ++c) raw.col(c) = extend_to_box(set.entries[c].mode, cell, grid, set.side);
  if (n == 0) {
    out.raw = raw;
    out.kappa = raw;
    out.r.resize(0, 0);
    return out;
  }
  if (!orthonormalize_columns) {
    out.modes = set.entries;
    out.raw = raw;
    out.kappa = raw;
    out.r = Eigen::MatrixXcd::Identity(n, n);
    return out;
  }
  auto gs = orthonormalize(raw, box.mass);
  if (gs.kept.empty()) throw NumericalError("orthonormalize: every Bloch column was dropped");
  if (!gs.dropped.empty()) {
    spdlog::warn("orthonormalize: dropped {} near-dependent Bloch column(s) on side {}", gs.dropped.size(),
                 side_name(set.side));
  }
  out.orthonormalized = true;
  out.dropped = gs.dropped;
  out.raw.resize(grid.num_box(), static_cast<Eigen::Index>(gs.kept.size()));
  for (std::size_t i = 0; i < gs.kept.size(); ++i) {
    out.modes.push_back(set.entries[gs.kept[i]]);
    out.raw.col(static_cast<Eigen::Index>(i)) = raw.col(gs.kept[i]);
  }
  out.kappa = std::move(gs.q);
  out.r = std::move(gs.r);
  return out;
}

Expansion expand(const Eigen::VectorXcd& field, const RadiationBasis& basis, const SparseReal& mass) {
  Expansion out;
  if (basis.size() == 0) {
    out.alpha.resize(0);
    out.residual = std::sqrt(std::max(inner(field, mass, field).real(), 0.0));
    return out;
  }
  const Eigen::MatrixXcd mk = mass * basis.kappa;
  const Eigen::MatrixXcd gram = basis.kappa.adjoint() * mk;
  out.alpha = gram.ldlt().solve(mk.adjoint() * field);
  const Eigen::VectorXcd rest = field - basis.kappa * out.alpha;
  out.residual = std::sqrt(std::max(inner(rest, mass, rest).real(), 0.0));
  return out;
}

Eigen::VectorXcd raw_coefficients(const RadiationBasis& basis, const Eigen::VectorXcd& alpha) {
  if (basis.r.rows() == 0) return alpha;
  return basis.r.triangularView<Eigen::Upper>().solve(alpha);
}

PlancherelSides plancherel_check(const Eigen::VectorXcd& field, const Eigen::MatrixXcd& modes,
                                 const SparseReal& mass, const GridSpec& spec) {
  PlancherelSides out;
  out.lhs = inner(field, mass, field).real();
  if (modes.cols() == 0 || out.lhs == 0.0) return out;
  const Eigen::MatrixXcd mk = mass * modes;
  const Eigen::MatrixXcd gram = modes.adjoint() * mk;
  const Eigen::VectorXcd alpha = gram.ldlt().solve(mk.adjoint() * field);
  out.rhs = spec.eps * spec.eps * spec.L * spec.K * alpha.squaredNorm();
  return out;
}

std::complex<double> flux_form(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v, const BoxMatrices& box,
                               const GridSpec& spec) {
  return u.dot(box.flux * v) / (spec.eps * spec.eps * spec.L * spec.K);
}

}  // namespace blochguide
