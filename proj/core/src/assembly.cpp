#include "blochguide/assembly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "blochguide/errors.hpp"

namespace blochguide {

namespace {

// 7-point degree-5 rule on a triangle: barycentric coordinates and weights (sum 1).
struct QuadPoint {
  std::array<double, 3> l;
  double w;
};

const std::array<QuadPoint, 7>& quadrature7() {
  static const std::array<QuadPoint, 7> q = [] {
    const double a1 = 0.059715871789770, b1 = 0.470142064105115, w1 = 0.132394152788506;
    const double a2 = 0.797426985353087, b2 = 0.101286507323456, w2 = 0.125939180544827;
    return std::array<QuadPoint, 7>{{
        {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 0.225},
        {{a1, b1, b1}, w1},
        {{b1, a1, b1}, w1},
        {{b1, b1, a1}, w1},
        {{a2, b2, b2}, w2},
        {{b2, a2, b2}, w2},
        {{b2, b2, a2}, w2},
    }};
  }();
  return q;
}

std::array<std::array<double, 2>, 3> element_points(const Grid& grid, const Element& e) {
  const auto off = vertex_offsets(e.type);
  std::array<std::array<double, 2>, 3> p{};
  for (int v = 0; v < 3; ++v) p[v] = {grid.x1(e.ix + off[v][0]), grid.x2(e.iy + off[v][1])};
  return p;
}

template <typename F>
void integrate_load(const Grid& grid, const Element& e, F&& f, Eigen::VectorXcd& load) {
  const auto p = element_points(grid, e);
  const double area = 0.5 * grid.spec().h1() * grid.spec().h2();
  for (const auto& q : quadrature7()) {
    const double x1 = q.l[0] * p[0][0] + q.l[1] * p[1][0] + q.l[2] * p[2][0];
    const double x2 = q.l[0] * p[0][1] + q.l[1] * p[1][1] + q.l[2] * p[2][1];
    const cplx fv = f(x1, x2) * (q.w * area);
    for (int v = 0; v < 3; ++v) load[e.nodes[v]] += fv * q.l[v];
  }
}

double sech2(double z) {
  const double c = std::cosh(z);
  return std::isfinite(c) ? 1.0 / (c * c) : 0.0;
}

}  // namespace

double theta_cutoff(double x1, const GridSpec& spec) {
  const double ax = std::abs(x1);
  const double inner = spec.eps * spec.R;
  const double outer = spec.eps * (spec.R + spec.L);
  if (ax <= inner) return 1.0;
  if (ax >= outer) return 0.0;
  return (outer - ax) / (outer - inner);
}

double IncomingWave::theta(double x1, const GridSpec& spec) const {
  const double er = spec.eps * spec.R;
  if (x1 < -er) return 1.0;
  if (x1 >= 0.0) return 0.0;
  return step_scale * (1.0 - std::tanh(d * (x1 + 0.5 * er)));
}

double IncomingWave::theta_d1(double x1, const GridSpec& spec) const {
  const double er = spec.eps * spec.R;
  if (x1 < -er || x1 >= 0.0) return 0.0;
  return -step_scale * d * sech2(d * (x1 + 0.5 * er));
}

double IncomingWave::theta_d2(double x1, const GridSpec& spec) const {
  const double er = spec.eps * spec.R;
  if (x1 < -er || x1 >= 0.0) return 0.0;
  const double z = d * (x1 + 0.5 * er);
  return 2.0 * step_scale * d * d * sech2(z) * std::tanh(z);
}

cplx IncomingWave::value(double x1, double x2) const {
  return amplitude * std::polar(1.0, j_in[0] * x1 + j_in[1] * x2);
}

double GaussianSource::value(double x1, double x2, double height) const {
  double s = 0.0;
  const double dx1 = x1 - center[0];
  for (int image = -2; image <= 2; ++image) {
    const double dx2 = x2 - center[1] + image * height;
    s += std::exp(-decay * (dx1 * dx1 + dx2 * dx2));
  }
  return amplitude * s;
}

IncomingSource incoming_source(const IncomingWave& wave, const Grid& grid, const std::vector<double>& a_elem) {
  const auto& spec = grid.spec();
  if (a_elem.size() != grid.elements().size()) throw ConfigError("incoming source: coefficient size mismatch");
  if (!(wave.d > 0.0)) throw ConfigError("incoming source: d must be positive");
  const double theta0 = wave.step_scale * (1.0 - std::tanh(wave.d * 0.5 * spec.eps * spec.R));
  if (!(theta0 < 1e-5)) {
    throw ConfigError("incoming source: theta(0) = " + std::to_string(theta0) + " is not below 1e-5; increase d");
  }
  const int col_lo = spec.L * spec.n1;
  const int col_hi = (spec.R + spec.L) * spec.n1;
  IncomingSource out;
  out.load = Eigen::VectorXcd::Zero(grid.num_nodes());
  out.offset = Eigen::VectorXcd::Zero(grid.num_nodes());
  const auto& elems = grid.elements();
  double a_ref = 0.0;
  bool have_ref = false;
  for (std::size_t e = 0; e < elems.size(); ++e) {
    const auto& el = elems[e];
    if (el.ix < col_lo || el.ix >= col_hi) continue;
    if (!have_ref) {
      a_ref = a_elem[e];
      have_ref = true;
    } else if (std::abs(a_elem[e] - a_ref) > 1e-14 * std::abs(a_ref)) {
      throw ConfigError("incoming source: coefficient must be constant on [-eps R, 0]");
    }
    if (wave.amplitude == cplx(0.0)) continue;
    integrate_load(grid, el, [&](double x1, double x2) {
      const cplx factor(wave.theta_d2(x1, spec), 2.0 * wave.j_in[0] * wave.theta_d1(x1, spec));
      return a_ref * factor * wave.value(x1, x2);
    }, out.load);
  }
  if (wave.amplitude != cplx(0.0)) {
    for (int k = 0; k < grid.num_nodes(); ++k) {
      const auto x = grid.coords(k);
      const double th = wave.theta(x[0], spec);
      if (th != 0.0) out.offset[k] = th * wave.value(x[0], x[1]);
    }
  }
  return out;
}

Eigen::VectorXcd gaussian_load(const GaussianSource& src, const Grid& grid) {
  Eigen::VectorXcd load = Eigen::VectorXcd::Zero(grid.num_nodes());
  const double height = grid.spec().height();
  for (const auto& el : grid.elements()) {
    integrate_load(grid, el, [&](double x1, double x2) { return cplx(src.value(x1, x2, height), 0.0); }, load);
  }
  return load;
}

Eigen::VectorXcd Arrowhead::apply(const Eigen::VectorXcd& x) const {
  Eigen::VectorXcd y(size());
  y.head(n_hat) = hat * x.head(n_hat);
  if (n_bloch > 0) {
    const Eigen::VectorXcd xb = x.tail(n_bloch);
    Eigen::VectorXcd xr(static_cast<Eigen::Index>(border_rows.size()));
    for (std::size_t i = 0; i < border_rows.size(); ++i) xr[static_cast<Eigen::Index>(i)] = x[border_rows[i]];
    const Eigen::VectorXcd up = upper * xb;
    for (std::size_t i = 0; i < border_rows.size(); ++i) y[border_rows[i]] += up[static_cast<Eigen::Index>(i)];
    y.tail(n_bloch) = lower * xr + corner * xb;
  }
  return y;
}

Eigen::MatrixXcd Arrowhead::dense() const {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(size(), size());
  d.topLeftCorner(n_hat, n_hat) = Eigen::MatrixXcd(hat);
  for (std::size_t i = 0; i < border_rows.size(); ++i) {
    const auto r = border_rows[i];
    d.row(r).tail(n_bloch) = upper.row(static_cast<Eigen::Index>(i));
    d.col(r).tail(n_bloch) = lower.col(static_cast<Eigen::Index>(i));
  }
  d.bottomRightCorner(n_bloch, n_bloch) = corner;
  return d;
}

Arrowhead Arrowhead::axpy(cplx s, const Arrowhead& other) const {
  if (other.n_hat != n_hat || other.n_bloch != n_bloch || other.border_rows != border_rows) {
    throw ConfigError("arrowhead: layout mismatch");
  }
  Arrowhead out = *this;
  out.hat = hat + s * other.hat;
  out.upper = upper + s * other.upper;
  out.lower = lower + s * other.lower;
  out.corner = corner + s * other.corner;
  return out;
}

NodalOperators assemble_nodal(const Grid& grid, const std::vector<double>& a_elem) {
  const auto& spec = grid.spec();
  if (a_elem.size() != grid.elements().size()) throw ConfigError("assembly: coefficient size mismatch");
  const int n = grid.num_nodes();
  const double area = 0.5 * spec.h1() * spec.h2();
  const double inv_el = 1.0 / (spec.eps * spec.L);
  std::vector<Eigen::Triplet<double>> ts, tb, tmi, tmo;
  const auto& elems = grid.elements();
  ts.reserve(elems.size() * 9);
  tmi.reserve(elems.size() * 9);
  for (std::size_t e = 0; e < elems.size(); ++e) {
    const auto& el = elems[e];
    const auto lm = element_matrices(el.type, spec.h1(), spec.h2(), a_elem[e]);
    const auto off = vertex_offsets(el.type);
    std::array<double, 3> th{};
    for (int v = 0; v < 3; ++v) th[v] = theta_cutoff(grid.x1(el.ix + off[v][0]), spec);
    const double th_bary = (th[0] + th[1] + th[2]) / 3.0;
    for (int p = 0; p < 3; ++p) {
      for (int q = 0; q < 3; ++q) {
        const int r = el.nodes[p];
        const int c = el.nodes[q];
        ts.emplace_back(r, c, th_bary * lm.stiffness(p, q));
        if (el.region == Region::interior) {
          tmi.emplace_back(r, c, lm.mass(p, q));
          continue;
        }
        // ∫ ϑ φ_p φ_q with ϑ = Σ ϑ_m φ_m
        double wm = 0.0;
        for (int m = 0; m < 3; ++m) {
          const int equal = (p == q) + (p == m) + (q == m);
          const double w = equal == 3 ? area / 10.0 : (equal == 1 ? area / 30.0 : area / 60.0);
          wm += th[m] * w;
        }
        tmo.emplace_back(r, c, wm);
        const double sign = el.region == Region::box_plus ? 1.0 : -1.0;
        tb.emplace_back(r, c, sign * inv_el * lm.flux(p, q) * a_elem[e]);
      }
    }
  }
  NodalOperators out;
  for (auto* m : {&out.stiffness, &out.flux_sign, &out.mass_in, &out.mass_out}) m->resize(n, n);
  out.stiffness.setFromTriplets(ts.begin(), ts.end());
  out.flux_sign.setFromTriplets(tb.begin(), tb.end());
  out.mass_in.setFromTriplets(tmi.begin(), tmi.end());
  out.mass_out.setFromTriplets(tmo.begin(), tmo.end());
  return out;
}

std::vector<int> border_rows(const Grid& grid) {
  const int n0 = grid.num_interior();
  std::vector<char> mark(static_cast<std::size_t>(n0), 0);
  for (const auto& el : grid.elements()) {
    bool touches_box = false;
    for (int v : el.nodes) touches_box = touches_box || v >= n0;
    if (!touches_box) continue;
    for (int v : el.nodes) {
      if (v < n0) mark[v] = 1;
    }
  }
  std::vector<int> rows;
  for (int k = 0; k < n0; ++k) {
    if (mark[k]) rows.push_back(k);
  }
  return rows;
}

Arrowhead restrict_to_space(const SparseReal& op, const Grid& grid, const RadiationBasis& plus,
                            const RadiationBasis& minus, const std::vector<int>& rows) {
  const int n0 = grid.num_interior();
  const int nw = grid.num_box();
  const int np = plus.size();
  const int nm = minus.size();
  Arrowhead out;
  out.n_hat = n0;
  out.n_bloch = np + nm;
  out.border_rows = rows;
  std::vector<int> compact(static_cast<std::size_t>(n0), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) compact[rows[i]] = static_cast<int>(i);
  const auto nr = static_cast<Eigen::Index>(rows.size());
  out.upper = Eigen::MatrixXcd::Zero(nr, out.n_bloch);
  out.lower = Eigen::MatrixXcd::Zero(out.n_bloch, nr);
  out.corner = Eigen::MatrixXcd::Zero(out.n_bloch, out.n_bloch);

  // box side of node k: 0 interior, 1 plus, 2 minus
  auto side_of = [&](int k) { return k < n0 ? 0 : (k < n0 + nw ? 1 : 2); };
  const RadiationBasis* bases[3] = {nullptr, &plus, &minus};
  const int bloch_offset[3] = {0, 0, np};
  const int node_offset[3] = {0, n0, n0 + nw};

  std::vector<Eigen::Triplet<cplx>> th;
  std::vector<Eigen::Triplet<double>> tbox[3];
  for (int c = 0; c < op.outerSize(); ++c) {
    const int sc = side_of(c);
    for (SparseReal::InnerIterator it(op, c); it; ++it) {
      const int r = static_cast<int>(it.row());
      const int sr = side_of(r);
      const double v = it.value();
      if (sr == 0 && sc == 0) {
        th.emplace_back(r, c, cplx(v, 0.0));
      } else if (sr == 0) {
        if (compact[r] < 0) throw NumericalError("restrict: unexpected hat-box coupling");
        const auto& kap = bases[sc]->kappa;
        if (kap.cols() > 0) {
          out.upper.row(compact[r]).segment(bloch_offset[sc], kap.cols()) += v * kap.row(c - node_offset[sc]);
        }
      } else if (sc == 0) {
        if (compact[c] < 0) throw NumericalError("restrict: unexpected box-hat coupling");
        const auto& kap = bases[sr]->kappa;
        if (kap.cols() > 0) {
          out.lower.col(compact[c]).segment(bloch_offset[sr], kap.cols()) +=
              v * kap.row(r - node_offset[sr]).adjoint();
        }
      } else if (sr == sc) {
        tbox[sr].emplace_back(r - node_offset[sr], c - node_offset[sc], v);
      } else {
        throw NumericalError("restrict: coupling between the two radiation boxes");
      }
    }
  }
  out.hat.resize(n0, n0);
  out.hat.setFromTriplets(th.begin(), th.end());
  for (int s = 1; s <= 2; ++s) {
    const auto& kap = bases[s]->kappa;
    if (kap.cols() == 0) continue;
    SparseReal xb(nw, nw);
    xb.setFromTriplets(tbox[s].begin(), tbox[s].end());
    const Eigen::MatrixXcd xk = xb * kap;
    out.corner.block(bloch_offset[s], bloch_offset[s], kap.cols(), kap.cols()) = kap.adjoint() * xk;
  }
  return out;
}

Eigen::VectorXcd restrict_load(const Eigen::VectorXcd& nodal, const Grid& grid, const RadiationBasis& plus,
                               const RadiationBasis& minus) {
  const int n0 = grid.num_interior();
  const int nw = grid.num_box();
  Eigen::VectorXcd out(n0 + plus.size() + minus.size());
  out.head(n0) = nodal.head(n0);
  if (plus.size() > 0) out.segment(n0, plus.size()) = plus.kappa.adjoint() * nodal.segment(n0, nw);
  if (minus.size() > 0) out.tail(minus.size()) = minus.kappa.adjoint() * nodal.segment(n0 + nw, nw);
  return out;
}

Eigen::VectorXcd prolongate(const Eigen::VectorXcd& coords, const Grid& grid, const RadiationBasis& plus,
                            const RadiationBasis& minus) {
  const int n0 = grid.num_interior();
  const int nw = grid.num_box();
  if (coords.size() != n0 + plus.size() + minus.size()) throw ConfigError("prolongate: coordinate size mismatch");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(grid.num_nodes());
  out.head(n0) = coords.head(n0);
  if (plus.size() > 0) out.segment(n0, nw) = plus.kappa * coords.segment(n0, plus.size());
  if (minus.size() > 0) out.segment(n0 + nw, nw) = minus.kappa * coords.tail(minus.size());
  return out;
}

EnrichedSystem assemble(const Grid& grid, const std::vector<double>& a_elem, double omega, double delta,
                        const RadiationBasis& plus, const RadiationBasis& minus,
                        const Eigen::VectorXcd& nodal_load) {
  if (!(omega > 0.0)) throw ConfigError("assembly: omega must be positive");
  if (!(delta >= 0.0)) throw ConfigError("assembly: delta must be >= 0");
  if (nodal_load.size() != grid.num_nodes()) throw ConfigError("assembly: load size mismatch");
  for (const auto* b : {&plus, &minus}) {
    if (b->size() > 0 && b->kappa.rows() != grid.num_box()) throw ConfigError("assembly: basis built on another grid");
  }
  const auto ops = assemble_nodal(grid, a_elem);
  const auto rows = border_rows(grid);
  EnrichedSystem sys;
  sys.omega = omega;
  sys.delta = delta;
  sys.n_hat = grid.num_interior();
  sys.n_plus = plus.size();
  sys.n_minus = minus.size();
  sys.A = restrict_to_space(ops.stiffness, grid, plus, minus, rows);
  sys.B = restrict_to_space(ops.flux_sign, grid, plus, minus, rows);
  sys.M_in = restrict_to_space(ops.mass_in, grid, plus, minus, rows);
  sys.M_out = restrict_to_space(ops.mass_out, grid, plus, minus, rows);
  sys.load = restrict_load(nodal_load, grid, plus, minus);
  return sys;
}

Arrowhead EnrichedSystem::matrix() const {
  const double w2 = omega * omega;
  return A.axpy(-1.0, B).axpy(-w2, M_out).axpy(-w2 * cplx(1.0, delta), M_in);
}

cplx beta_form(const EnrichedSystem& sys, const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
  return std::conj(v.dot(sys.matrix().apply(u)));
}

}  // namespace blochguide
