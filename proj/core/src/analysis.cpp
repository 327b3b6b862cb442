#include "blochguide/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "blochguide/errors.hpp"

namespace blochguide {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double curvature_a(const CellProblem& cell, double dj) {
  const double mu0 = cell.eigenvalues({0.0, 0.0}, 2)[0];
  const double mup = cell.eigenvalues({dj, 0.0}, 2)[0];
  const double mum = cell.eigenvalues({-dj, 0.0}, 2)[0];
  const double s = cell.grid().eps / kTwoPi;
  return 0.5 * s * s * (mup - 2.0 * mu0 + mum) / (dj * dj);
}

}  // namespace

HomogenizedResult homogenized_a(const CellProblem& cell, double dj) {
  if (!(dj >= 1e-4 && dj <= 1e-2)) throw ConfigError("homogenized_a: dj must lie in [1e-4, 1e-2]");
  const auto mu = cell.eigenvalues({0.0, 0.0}, std::min(2, cell.grid().num_nodes()));
  if (std::abs(mu[0]) > 1e-8 * std::max(1.0, mu.size() > 1 ? mu[1] : 1.0)) {
    throw NumericalError("homogenized_a: lowest band at j=0 is not the constant mode (mu0 = " +
                         std::to_string(mu[0]) + ")");
  }
  HomogenizedResult out;
  out.a_star = curvature_a(cell, dj);
  out.a_star_half = curvature_a(cell, 0.5 * dj);
  out.rel_diff = std::abs(out.a_star - out.a_star_half) / std::abs(out.a_star);
  if (!(out.rel_diff < 1e-3)) {
    throw NumericalError("homogenized_a: step check failed, relative difference " + std::to_string(out.rel_diff));
  }
  return out;
}

FresnelReference snell_fresnel(const Vec2& j_in, double a_star) {
  if (!(a_star > 0.0)) throw ConfigError("snell_fresnel: a* must be positive");
  FresnelReference out;
  const double kin = std::hypot(j_in[0], j_in[1]);
  const double kout = kin / std::sqrt(a_star);
  const double r = kout * kout - j_in[1] * j_in[1];
  out.j_out = {r > 0.0 ? std::sqrt(r) : 0.0, j_in[1]};
  if (!(r > 0.0)) {
    out.evanescent = true;
    out.R = std::nan("");
    out.T = std::nan("");
    return out;
  }
  out.R = (j_in[0] - a_star * out.j_out[0]) / (j_in[0] + a_star * out.j_out[0]);
  out.T = 1.0 + out.R;
  return out;
}

Vec2 unfolded_wave_vector(const BlochMode& mode, const CellGrid& grid, int max_harmonic) {
  double best = -1.0;
  std::array<int, 2> nbest{0, 0};
  for (int n1 = -max_harmonic; n1 <= max_harmonic; ++n1) {
    for (int n2 = -max_harmonic; n2 <= max_harmonic; ++n2) {
      cplx c = 0.0;
      for (int i = 0; i < grid.m1; ++i) {
        for (int k = 0; k < grid.m2; ++k) {
          c += mode.psi[grid.node(i, k)] *
               std::polar(1.0, -kTwoPi * (static_cast<double>(n1 * i) / grid.m1 + static_cast<double>(n2 * k) / grid.m2));
        }
      }
      if (std::abs(c) > best * (1.0 + 1e-12)) {
        best = std::abs(c);
        nbest = {n1, n2};
      }
    }
  }
  return {kTwoPi * (mode.j[0] + nbest[0]) / grid.eps, kTwoPi * (mode.j[1] + nbest[1]) / grid.eps};
}

int dominant_index(const Eigen::VectorXcd& alpha, const std::vector<IndexEntry>& modes) {
  int best = -1;
  for (int i = 0; i < alpha.size(); ++i) {
    if (best < 0) {
      best = i;
      continue;
    }
    const double ai = std::abs(alpha[i]);
    const double ab = std::abs(alpha[best]);
    if (ai > ab + 1e-12) {
      best = i;
    } else if (std::abs(ai - ab) <= 1e-12 && i < static_cast<int>(modes.size())) {
      const double ji = std::abs(modes[i].j[0]);
      const double jb = std::abs(modes[best].j[0]);
      if (ji < jb || (ji == jb && modes[i].m < modes[best].m)) best = i;
    }
  }
  return best;
}

RTReport extract_rt(const SolutionField& sol, const RadiationBasis& plus, const RadiationBasis& minus,
                    const CellGrid& cell_grid, const Vec2& j_in, double a_star) {
  if (plus.size() == 0 || minus.size() == 0) throw ConfigError("extract_rt: empty Bloch basis");
  RTReport out;
  const auto ref = snell_fresnel(j_in, a_star);
  out.R_ref = ref.R;
  out.T_ref = ref.T;
  const Eigen::VectorXcd ap = raw_coefficients(plus, sol.alpha_plus);
  const Eigen::VectorXcd am = raw_coefficients(minus, sol.alpha_minus);
  out.lambda_out = dominant_index(ap, plus.modes);
  out.lambda_refl = dominant_index(am, minus.modes);
  out.alpha_out = std::abs(ap[out.lambda_out]);
  out.alpha_refl = std::abs(am[out.lambda_refl]);
  out.j_out = unfolded_wave_vector(plus.modes[out.lambda_out].mode, cell_grid);
  out.snell_ratio = std::hypot(j_in[0], j_in[1]) / std::hypot(out.j_out[0], out.j_out[1]);
  out.err_R = std::abs(out.R_ref - out.alpha_refl);
  out.err_T = std::abs(out.T_ref - out.alpha_out);
  return out;
}

RefractionDiagnostics refraction_diagnostics(const RadiationBasis& plus, const RadiationBasis& minus,
                                             const SolutionField& sol, double j_in2) {
  RefractionDiagnostics out;
  const Eigen::VectorXcd ap = raw_coefficients(plus, sol.alpha_plus);
  const Eigen::VectorXcd am = raw_coefficients(minus, sol.alpha_minus);
  auto add = [&](const RadiationBasis& b, const Eigen::VectorXcd& a) {
    for (int i = 0; i < b.size(); ++i) {
      const auto& e = b.modes[i];
      out.modes.push_back({b.side, e.j, e.m, e.P, e.vg, std::abs(a[i])});
    }
  };
  add(minus, am);
  add(plus, ap);
  const double amax = ap.size() > 0 ? ap.cwiseAbs().maxCoeff() : 0.0;
  bool any = false;
  bool all_down = true;
  for (int i = 0; i < plus.size(); ++i) {
    if (std::abs(ap[i]) < 0.5 * amax || amax == 0.0) continue;
    any = true;
    all_down = all_down && plus.modes[i].vg[1] < 0.0;
  }
  out.negative_refraction = any && all_down && j_in2 > 0.0;
  return out;
}

FocusingMetric focusing_metric(const Eigen::VectorXcd& nodal, const Grid& grid, double center, double half_width,
                               double x1_max) {
  const double height = grid.spec().height();
  double peak = 0.0;
  double sum = 0.0;
  long count = 0;
  for (int k = 0; k < grid.num_nodes(); ++k) {
    const auto x = grid.coords(k);
    if (!(x[0] > 0.0 && x[0] <= x1_max)) continue;
    double d = std::fmod(std::abs(x[1] - center), height);
    d = std::min(d, height - d);
    const double v = std::abs(nodal[k]);
    if (d < half_width) {
      peak = std::max(peak, v);
    } else {
      sum += v;
      ++count;
    }
  }
  FocusingMetric out;
  out.peak_in_strip = peak;
  out.mean_off_strip = count > 0 ? sum / count : 0.0;
  out.ratio = out.mean_off_strip > 0.0 ? peak / out.mean_off_strip : 0.0;
  return out;
}

cplx weak_flux_jump(const Eigen::VectorXcd& nodal, const Grid& grid, const std::vector<double>& a_elem,
                    const Eigen::VectorXcd& box_wave, Side side) {
  const auto& spec = grid.spec();
  const int line = side == Side::plus ? grid.box_first_column(Side::plus) : spec.L * spec.n1;
  const int offset = grid.box_offset(side);
  const int rows = grid.num_rows();
  const auto& elems = grid.elements();
  auto elem_index = [rows](int ix, int iy, int type) { return (static_cast<std::size_t>(ix) * rows + iy) * 2 + type; };
  auto d1 = [&](std::size_t e) {
    const auto& el = elems[e];
    const auto g = hat_gradients(el.type, spec.h1(), spec.h2());
    cplx s = 0.0;
    for (int v = 0; v < 3; ++v) s += nodal[el.nodes[v]] * g[v][0];
    return a_elem[e] * s;
  };
  cplx total = 0.0;
  for (int iy = 0; iy < rows; ++iy) {
    const cplx jump = d1(elem_index(line, iy, 1)) - d1(elem_index(line - 1, iy, 0));
    const cplx ua = box_wave[grid.node(line, iy) - offset];
    const cplx ub = box_wave[grid.node(line, iy + 1) - offset];
    total += jump * std::conj(0.5 * (ua + ub)) * spec.h2();
  }
  return total;
}

}  // namespace blochguide
