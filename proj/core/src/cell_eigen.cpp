#include "blochguide/cell_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "blochguide/dense_eigen.hpp"
#include "blochguide/errors.hpp"

namespace blochguide {

namespace {

using cd = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string j_str(const Vec2& j) {
  return "j=(" + std::to_string(j[0]) + ", " + std::to_string(j[1]) + ")";
}

}  // namespace

CellProblem::CellProblem(const CellGrid& grid, std::vector<double> a_local)
    : grid_(grid), a_(std::move(a_local)) {
  if (grid_.m1 < 1 || grid_.m2 < 1 || !(grid_.eps > 0.0)) {
    throw ConfigError("cell grid: eps, m1, m2 must be positive");
  }
  if (static_cast<int>(a_.size()) != grid_.num_elements()) {
    throw ConfigError("cell grid: coefficient table has " + std::to_string(a_.size()) +
                      " entries, expected " + std::to_string(grid_.num_elements()));
  }
  for (double v : a_) {
    if (!(v > 0.0)) throw ConfigError("cell grid: coefficient must be positive");
  }
  for (int type = 0; type < 2; ++type) unit_[type] = element_matrices(type, grid_.h1(), grid_.h2(), 1.0);
}

CellProblem::CellProblem(const CellGrid& grid, const Material& material, CoefficientSampling mode)
    : CellProblem(grid, local_element_coefficients(material, grid.m1, grid.m2, mode)) {}

std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> CellProblem::assemble_shifted(const Vec2& j) const {
  const int n = grid_.num_nodes();
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < grid_.m1; ++i) {
    for (int k = 0; k < grid_.m2; ++k) {
      for (int type = 0; type < 2; ++type) {
        const double a = a_[local_element_index(i, k, type, grid_.m2)];
        const auto off = vertex_offsets(type);
        std::array<int, 3> node{};
        std::array<double, 3> theta{};
        for (int v = 0; v < 3; ++v) {
          const int iv = i + off[v][0];
          const int kv = k + off[v][1];
          node[v] = grid_.node(iv, kv);
          theta[v] = kTwoPi * (j[0] * iv / grid_.m1 + j[1] * kv / grid_.m2);
        }
        const auto& S = unit_[type].stiffness;
        const auto& Ms = unit_[type].mass;
        for (int p = 0; p < 3; ++p) {
          K(node[p], node[p]) += a * S(p, p);
          M(node[p], node[p]) += Ms(p, p);
          for (int q = p + 1; q < 3; ++q) {
            const cd e = std::polar(1.0, theta[q] - theta[p]);
            K(node[p], node[q]) += a * S(p, q) * e;
            K(node[q], node[p]) += a * S(q, p) * std::conj(e);
            M(node[p], node[q]) += Ms(p, q) * e;
            M(node[q], node[p]) += Ms(q, p) * std::conj(e);
          }
        }
      }
    }
  }
  return {std::move(K), std::move(M)};
}

std::vector<BlochMode> CellProblem::solve(const Vec2& j, int n_bands, Side side) const {
  const auto [K, M] = assemble_shifted(j);
  HermitianEigen eig;
  try {
    eig = hermitian_generalized_lowest(K, M, n_bands, true);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(e.what()) + " at " + j_str(j));
  }
  std::vector<BlochMode> modes;
  modes.reserve(static_cast<std::size_t>(eig.values.size()));
  for (int m = 0; m < eig.values.size(); ++m) {
    BlochMode mode;
    mode.side = side;
    mode.j = j;
    mode.m = m;
    mode.mu = eig.values[m];
    Eigen::VectorXcd psi = eig.vectors.col(m) * grid_.eps;
    Eigen::Index imax = 0;
    psi.cwiseAbs().maxCoeff(&imax);
    psi *= std::abs(psi[imax]) / psi[imax];
    psi[imax] = std::abs(psi[imax]);
    mode.psi = std::move(psi);
    modes.push_back(std::move(mode));
  }
  return modes;
}

Eigen::VectorXd CellProblem::eigenvalues(const Vec2& j, int n_bands) const {
  const auto [K, M] = assemble_shifted(j);
  try {
    return hermitian_generalized_lowest(K, M, n_bands, false).values;
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(e.what()) + " at " + j_str(j));
  }
}

std::complex<double> CellProblem::wave_value(const BlochMode& mode, int i, int k) const {
  const double theta = kTwoPi * (mode.j[0] * i / grid_.m1 + mode.j[1] * k / grid_.m2);
  return mode.psi[grid_.node(i, k)] * std::polar(1.0, theta);
}

double CellProblem::poynting(const BlochMode& mode) const {
  cd sum = 0.0;
  for (int i = 0; i < grid_.m1; ++i) {
    for (int k = 0; k < grid_.m2; ++k) {
      for (int type = 0; type < 2; ++type) {
        const double a = a_[local_element_index(i, k, type, grid_.m2)];
        const auto off = vertex_offsets(type);
        std::array<cd, 3> u{};
        for (int v = 0; v < 3; ++v) u[v] = wave_value(mode, i + off[v][0], k + off[v][1]);
        const auto& F = unit_[type].flux;
        cd s = 0.0;
        for (int p = 0; p < 3; ++p) {
          for (int q = 0; q < 3; ++q) s += std::conj(u[p]) * F(p, q) * u[q];
        }
        sum += a * s;
      }
    }
  }
  return sum.imag() / (grid_.eps * grid_.eps);
}

double CellProblem::cell_norm2(const BlochMode& mode) const {
  cd sum = 0.0;
  for (int i = 0; i < grid_.m1; ++i) {
    for (int k = 0; k < grid_.m2; ++k) {
      for (int type = 0; type < 2; ++type) {
        const auto off = vertex_offsets(type);
        std::array<cd, 3> u{};
        for (int v = 0; v < 3; ++v) u[v] = wave_value(mode, i + off[v][0], k + off[v][1]);
        const auto& Ms = unit_[type].mass;
        for (int p = 0; p < 3; ++p) {
          for (int q = 0; q < 3; ++q) sum += std::conj(u[p]) * Ms(p, q) * u[q];
        }
      }
    }
  }
  return sum.real();
}

GroupVelocity CellProblem::group_velocity(const Vec2& j, int m, int n_bands, double dj) const {
  const int nb = std::max(n_bands, m + 2);
  const Eigen::VectorXd mu0 = eigenvalues(j, nb);
  if (m >= mu0.size()) throw NumericalError("group velocity: band " + std::to_string(m) + " missing at " + j_str(j));
  const double ref = mu0[m];
  GroupVelocity out;
  const double sep_tol = 1e-8 * std::max(1.0, std::abs(ref));
  if ((m > 0 && ref - mu0[m - 1] < sep_tol) || (m + 1 < mu0.size() && mu0[m + 1] - ref < sep_tol)) {
    out.degenerate = true;
  }
  auto matched = [&](const Vec2& jj) {
    const Eigen::VectorXd mu = eigenvalues(jj, nb);
    Eigen::Index best = 0;
    (mu.array() - ref).abs().minCoeff(&best);
    // a second candidate as close as the best one means the match is ambiguous
    for (Eigen::Index t = 0; t < mu.size(); ++t) {
      if (t != best && std::abs(std::abs(mu[t] - ref) - std::abs(mu[best] - ref)) < sep_tol) {
        out.degenerate = true;
      }
    }
    return std::sqrt(std::max(mu[best], 0.0));
  };
  for (int d = 0; d < 2; ++d) {
    Vec2 jp = j;
    Vec2 jm = j;
    jp[d] += dj;
    jm[d] -= dj;
    out.vg[d] = grid_.eps / kTwoPi * (matched(jp) - matched(jm)) / (2.0 * dj);
  }
  return out;
}

std::vector<BandSample> sample_bands(const CellProblem& cell, Side side, int n, int n_bands) {
  if (n < 3) throw ConfigError("band mesh needs at least 3 points per direction");
  auto coord = [n](int i) { return -0.5 + static_cast<double>(i + 1) / n; };
  std::vector<std::vector<BlochMode>> modes(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) modes[a * n + b] = cell.solve({coord(a), coord(b)}, n_bands, side);
  }
  const double scale = cell.grid().eps / (2.0 * std::numbers::pi) * n / 2.0;
  auto root = [&](int a, int b, int m) {
    const auto& v = modes[((a + n) % n) * n + (b + n) % n];
    return std::sqrt(std::max(v[m].mu, 0.0));
  };
  std::vector<BandSample> out;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (const auto& mode : modes[a * n + b]) {
        BandSample s;
        s.side = side;
        s.j = mode.j;
        s.m = mode.m;
        s.mu = mode.mu;
        s.P = cell.poynting(mode);
        s.vg = {scale * (root(a + 1, b, mode.m) - root(a - 1, b, mode.m)),
                scale * (root(a, b + 1, mode.m) - root(a, b - 1, mode.m))};
        out.push_back(s);
      }
    }
  }
  return out;
}

}  // namespace blochguide
