#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "blochguide/grid.hpp"

namespace testing_support {

inline constexpr double kPi = std::numbers::pi;

inline blochguide::GridSpec small_spec(int R = 2, int L = 2, int K = 4, int n = 6) {
  blochguide::GridSpec s;
  s.eps = 1.0;
  s.R = R;
  s.L = L;
  s.K = K;
  s.n1 = n;
  s.n2 = n;
  return s;
}

inline Eigen::VectorXcd random_vector(int n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = {g(rng), g(rng)};
  return v;
}

// Eigenvalue of the a = 1 P1 Peierls operator on an m1 × m2 right-triangle cell mesh for the
// plane wave with phase steps θ = 2π(j + n)/m: ratio of the 5-point stiffness and 7-point mass symbols.
inline double p1_symbol(double t1, double t2, double h1, double h2) {
  const double k = 2.0 * (h2 / h1) * (1.0 - std::cos(t1)) + 2.0 * (h1 / h2) * (1.0 - std::cos(t2));
  const double m = h1 * h2 * (0.5 + (std::cos(t1) + std::cos(t2) + std::cos(t1 + t2)) / 6.0);
  return k / m;
}

}  // namespace testing_support
