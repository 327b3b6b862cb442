#include <gtest/gtest.h>

#include <random>

#include "blochguide/assembly.hpp"
#include "blochguide/errors.hpp"
#include "support.hpp"

using namespace blochguide;
using testing_support::random_vector;
using testing_support::small_spec;

namespace {

struct Scattering {
  GridSpec spec = small_spec(2, 2, 4, 6);
  Grid grid{spec};
  Medium medium{Material::constant(1.0), hole_crystal(), std::nullopt, 0};
  std::vector<double> a = sample_coefficient(medium, grid);
  CellProblem cell_plus{cell_grid_for(spec), hole_crystal()};
  CellProblem cell_minus{cell_grid_for(spec), Material::constant(1.0)};
  double omega = 1.85;
  RadiationBasis plus;
  RadiationBasis minus;

  explicit Scattering(bool ortho) {
    SelectionOptions opt;
    opt.j1_mesh = 41;
    opt.n_bands = 4;
    plus = build_basis(select_indices(cell_plus, omega, Side::plus, spec.K, opt), cell_plus, grid,
                       box_matrices(grid, a, Side::plus), ortho);
    minus = build_basis(select_indices(cell_minus, omega, Side::minus, spec.K, opt), cell_minus, grid,
                        box_matrices(grid, a, Side::minus), ortho);
  }

  EnrichedSystem system(double delta) const {
    return assemble(grid, a, omega, delta, plus, minus, Eigen::VectorXcd::Zero(grid.num_nodes()));
  }
};

double norm_r(const EnrichedSystem& sys, const Eigen::VectorXcd& u) { return u.dot(sys.M_in.apply(u)).real(); }

}  // namespace

TEST(Cutoff, Values) {
  GridSpec s;
  EXPECT_EQ(theta_cutoff(10.0, s), 1.0);
  EXPECT_DOUBLE_EQ(theta_cutoff(18.0, s), 0.5);
  EXPECT_DOUBLE_EQ(theta_cutoff(-18.0, s), 0.5);
  EXPECT_EQ(theta_cutoff(21.0, s), 0.0);
  EXPECT_EQ(theta_cutoff(15.0, s), 1.0);
}

TEST(Assembly, NoBlochNoDampingIsWeightedStiffness) {
  const GridSpec spec = small_spec(2, 1, 2, 4);
  Grid grid(spec);
  const auto a = sample_coefficient(Medium{}, grid);
  const RadiationBasis none_plus{Side::plus, {}, {}, Eigen::MatrixXcd(grid.num_box(), 0), {}, false, {}};
  RadiationBasis none_minus = none_plus;
  none_minus.side = Side::minus;
  const auto sys = assemble(grid, a, 1.0, 0.0, none_plus, none_minus, Eigen::VectorXcd::Zero(grid.num_nodes()));
  EXPECT_EQ(sys.size(), grid.num_interior());
  const auto ops = assemble_nodal(grid, a);
  const int n0 = grid.num_interior();
  const Eigen::MatrixXd stiff = Eigen::MatrixXd(ops.stiffness).topLeftCorner(n0, n0);
  EXPECT_LT((Eigen::MatrixXcd(sys.A.hat) - stiff.cast<std::complex<double>>()).cwiseAbs().maxCoeff(), 1e-14);
  std::mt19937 rng(1);
  for (int t = 0; t < 20; ++t) {
    const auto u = random_vector(n0, rng);
    EXPECT_GE(u.dot(sys.A.apply(u)).real(), -1e-12);
  }
}

TEST(Assembly, DimensionIsInteriorPlusBloch) {
  Scattering s(true);
  const auto sys = s.system(1e-4);
  EXPECT_EQ(sys.size(), s.grid.num_interior() + s.plus.size() + s.minus.size());
  EXPECT_EQ(sys.n_plus, s.plus.size());
  EXPECT_EQ(sys.matrix().size(), sys.size());
}

TEST(Assembly, ArrowheadMatchesDenseProduct) {
  Scattering s(true);
  const auto G = s.system(1e-3).matrix();
  std::mt19937 rng(2);
  const auto x = random_vector(G.size(), rng);
  const Eigen::VectorXcd dense = G.dense() * x;
  EXPECT_LT((G.apply(x) - dense).cwiseAbs().maxCoeff(), 1e-10 * dense.cwiseAbs().maxCoeff());
}

TEST(BetaForm, ImaginaryPartIdentity) {
  Scattering s(false);
  const double delta = 1e-3;
  const auto sys = s.system(delta);
  const int n0 = sys.n_hat;
  std::mt19937 rng(3);
  const double eK = s.spec.eps * s.spec.K;
  for (int t = 0; t < 50; ++t) {
    const auto u = random_vector(sys.size(), rng);
    double flux = 0.0;
    for (int i = 0; i < s.plus.size(); ++i) flux += eK * std::norm(u[n0 + i]) * s.plus.modes[i].P;
    for (int i = 0; i < s.minus.size(); ++i) {
      flux -= eK * std::norm(u[n0 + s.plus.size() + i]) * s.minus.modes[i].P;
    }
    const double expected = delta * s.omega * s.omega * norm_r(sys, u) + flux;
    const double im = beta_form(sys, u, u).imag();
    EXPECT_NEAR(im, expected, 1e-9 * std::abs(expected));
  }
}

TEST(BetaForm, SingleOutgoingWaveCarriesItsFlux) {
  Scattering s(false);
  const auto sys = s.system(0.0);
  ASSERT_GT(s.plus.size(), 0);
  for (int i = 0; i < s.plus.size(); ++i) {
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(sys.size());
    u[sys.n_hat + i] = 1.0;
    const double expected = s.spec.eps * s.spec.K * s.plus.modes[i].P;
    EXPECT_NEAR(beta_form(sys, u, u).imag(), expected, 1e-10 * std::abs(expected));
  }
}

TEST(BetaForm, L2Coercivity) {
  Scattering s(true);
  const double delta = 1e-4;
  const auto sys = s.system(delta);
  const auto G = sys.matrix();
  std::mt19937 rng(4);
  for (int t = 0; t < 200; ++t) {
    const auto u = random_vector(sys.size(), rng);
    const double im = -u.dot(G.apply(u)).imag();
    EXPECT_GE(im, delta * s.omega * s.omega * norm_r(sys, u) - 1e-9 * u.squaredNorm());
  }
}

TEST(BetaForm, Sesquilinear) {
  Scattering s(true);
  const auto sys = s.system(1e-3);
  std::mt19937 rng(5);
  const int n = sys.size();
  const std::complex<double> a(0.3, -1.2), b(-0.7, 0.4);
  for (int t = 0; t < 3; ++t) {
    const auto u1 = random_vector(n, rng), u2 = random_vector(n, rng), v1 = random_vector(n, rng),
               v2 = random_vector(n, rng);
    const auto lhs_u = beta_form(sys, a * u1 + b * u2, v1);
    const auto rhs_u = std::conj(a) * beta_form(sys, u1, v1) + std::conj(b) * beta_form(sys, u2, v1);
    EXPECT_LT(std::abs(lhs_u - rhs_u), 1e-10 * std::abs(lhs_u));
    const auto lhs_v = beta_form(sys, u1, a * v1 + b * v2);
    const auto rhs_v = a * beta_form(sys, u1, v1) + b * beta_form(sys, u1, v2);
    EXPECT_LT(std::abs(lhs_v - rhs_v), 1e-10 * std::abs(lhs_v));
  }
  EXPECT_EQ(beta_form(sys, Eigen::VectorXcd::Zero(n), random_vector(n, rng)), std::complex<double>(0.0));
}

namespace {

struct IncomingSetup {
  GridSpec spec = small_spec(14, 1, 2, 4);
  Grid grid{spec};
  std::vector<double> a = sample_coefficient(Medium{}, grid);
  IncomingWave wave;

  IncomingSetup() { wave.j_in = incoming_wave_vector(1.0, 0, spec.K, spec.eps); }
};

}  // namespace

TEST(IncomingSource, ZeroAmplitude) {
  IncomingSetup s;
  s.wave.amplitude = 0.0;
  const auto src = incoming_source(s.wave, s.grid, s.a);
  EXPECT_EQ(src.load.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(src.offset.cwiseAbs().maxCoeff(), 0.0);
}

TEST(IncomingSource, SupportedOnLeftHalfOfInterior) {
  IncomingSetup s;
  const auto src = incoming_source(s.wave, s.grid, s.a);
  EXPECT_GT(src.load.cwiseAbs().maxCoeff(), 0.0);
  const double h = s.spec.h1();
  for (int n = 0; n < s.grid.num_nodes(); ++n) {
    const double x = s.grid.coords(n)[0];
    if (x > h + 1e-12 || x < -s.spec.eps * s.spec.R - h - 1e-12) EXPECT_EQ(src.load[n], std::complex<double>(0.0));
    if (x < -s.spec.eps * s.spec.R - 1e-12) {
      EXPECT_LT(std::abs(src.offset[n] - s.wave.value(x, s.grid.coords(n)[1])), 1e-15);
    }
    if (x >= 0.0) EXPECT_EQ(src.offset[n], std::complex<double>(0.0));
  }
}

TEST(IncomingSource, StepValues) {
  GridSpec s;
  s.R = 30;
  IncomingWave w;
  EXPECT_LT(w.theta(-1e-12, s), 1e-5);
  EXPECT_NEAR(w.theta(-15.0, s), 0.5, 1e-15);
  EXPECT_EQ(w.theta(-31.0, s), 1.0);
  EXPECT_EQ(w.theta(0.0, s), 0.0);
}

TEST(IncomingSource, ShortInteriorRejected) {
  const GridSpec spec = small_spec(2, 1, 2, 4);
  Grid grid(spec);
  IncomingWave w;
  w.j_in = {1.0, 0.0};
  EXPECT_THROW(incoming_source(w, grid, sample_coefficient(Medium{}, grid)), ConfigError);
}

TEST(IncomingSource, NonConstantLeftMediumRejected) {
  IncomingSetup s;
  Medium m;
  m.left = hole_crystal();
  EXPECT_THROW(incoming_source(s.wave, s.grid, sample_coefficient(m, s.grid)), ConfigError);
}
