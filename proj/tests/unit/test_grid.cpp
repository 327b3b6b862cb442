#include <gtest/gtest.h>

#include <Eigen/Cholesky>
#include <Eigen/SparseCore>

#include "blochguide/assembly.hpp"
#include "blochguide/errors.hpp"
#include "blochguide/grid.hpp"
#include "blochguide/medium.hpp"
#include "support.hpp"

using namespace blochguide;
using testing_support::small_spec;

TEST(Grid, SmallestGridCounts) {
  GridSpec s{1.0, 1, 1, 1, 1, 1};
  Grid g(s);
  EXPECT_EQ(g.elements().size(), 8u);
  EXPECT_EQ(g.num_columns(), 5);
  EXPECT_EQ(g.num_rows(), 1);
  EXPECT_EQ(g.num_interior(), 1);
  EXPECT_EQ(g.num_box(), 2);
  EXPECT_EQ(g.num_nodes(), 5);
}

TEST(Grid, PaperSpacing) {
  GridSpec s;
  EXPECT_DOUBLE_EQ(s.h1(), 0.05);
  EXPECT_NEAR(s.h2(), 0.0526, 1e-4);
  EXPECT_DOUBLE_EQ(s.height(), 14.0);
}

TEST(Grid, InvalidSpecThrows) {
  GridSpec s = small_spec();
  s.n1 = 0;
  EXPECT_THROW(s.validate(), ConfigError);
  s = small_spec();
  s.eps = -1.0;
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(Grid, NodeCountsMatchBruteForceScan) {
  for (const GridSpec& s : {small_spec(), small_spec(3, 1, 2, 4), GridSpec{}}) {
    Grid g(s);
    const double tol = 1e-9 * s.eps;
    int interior = 0, plus = 0, minus = 0;
    for (int ix = 0; ix < g.num_columns(); ++ix) {
      for (int iy = 0; iy < g.num_rows(); ++iy) {
        const double x = g.x1(ix);
        const int n = g.node(ix, iy);
        if (x >= s.eps * s.R - tol) {
          ++plus;
          EXPECT_GE(n, g.box_offset(Side::plus));
          EXPECT_LT(n, g.box_offset(Side::plus) + g.num_box());
        }
        if (x <= -s.eps * s.R + tol) {
          ++minus;
          EXPECT_GE(n, g.box_offset(Side::minus));
        }
        if (std::abs(x) < s.eps * s.R - tol) {
          ++interior;
          EXPECT_LT(n, g.num_interior());
        }
        EXPECT_EQ(g.grid_index(n), std::make_pair(ix, iy));
      }
    }
    EXPECT_EQ(interior, (2 * s.R * s.n1 - 1) * s.K * s.n2);
    EXPECT_EQ(plus, (s.L * s.n1 + 1) * s.K * s.n2);
    EXPECT_EQ(minus, plus);
    EXPECT_EQ(g.num_interior(), interior);
    EXPECT_EQ(g.num_box(), plus);
    EXPECT_EQ(g.num_nodes(), interior + plus + minus);
  }
}

TEST(Grid, VerticalWrap) {
  Grid g(small_spec());
  EXPECT_EQ(g.node(3, g.num_rows()), g.node(3, 0));
  EXPECT_EQ(g.node(3, -1), g.node(3, g.num_rows() - 1));
}

TEST(Grid, TranslationInvariance) {
  const GridSpec s = small_spec();
  Grid g(s);
  for (int ix = 0; ix + s.n1 < g.num_columns(); ++ix) {
    EXPECT_NEAR(g.x1(ix + s.n1) - g.x1(ix), s.eps, 1e-12);
  }
  const auto a = sample_coefficient(Medium{}, g);
  const auto& el = g.elements();
  for (const auto& e : el) {
    if (e.cell_column < 0 || e.ix + s.n1 >= g.num_columns() - 1) continue;
    const auto& shifted = el[((e.ix + s.n1) * g.num_rows() + e.iy) * 2 + e.type];
    ASSERT_EQ(shifted.local, e.local);
    EXPECT_EQ(a[&shifted - el.data()], a[&e - el.data()]);
  }
}

TEST(ElementMatrices, MassEntries) {
  const auto m = element_matrices(0, 1.0, 1.0, 1.0).mass;
  const double area = 0.5;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(m(i, j), i == j ? area / 6 : area / 12, 1e-15);
  }
}

TEST(ElementMatrices, StiffnessRowSumsAndFluxPartitionOfUnity) {
  for (int type : {0, 1}) {
    const auto lm = element_matrices(type, 0.05, 1.0 / 19, 0.7);
    EXPECT_LT(lm.stiffness.rowwise().sum().cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((lm.stiffness - lm.stiffness.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    // Σ_l ∫ φ_k ∂₁φ_l = ∫ φ_k ∂₁(Σ φ_l) = 0
    EXPECT_LT(lm.flux.rowwise().sum().cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(GlobalMatrices, MassPositiveDefiniteStiffnessSemidefinite) {
  const GridSpec s = small_spec(2, 1, 2, 3);
  Grid g(s);
  const int n = g.num_nodes();
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.elements()) {
    const auto lm = element_matrices(e.type, s.h1(), s.h2(), 1.0);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) mass(e.nodes[i], e.nodes[j]) += lm.mass(i, j);
    }
  }
  EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(mass).info(), Eigen::Success);

  const auto ops = assemble_nodal(g, sample_coefficient(Medium{}, g));
  const Eigen::MatrixXd k(ops.stiffness);
  EXPECT_LT((k - k.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((k * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff(), 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
  EXPECT_GT(es.eigenvalues().minCoeff(), -1e-12);
}
