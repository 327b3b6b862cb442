#pragma once

#include <Eigen/Dense>

namespace blochguide {

struct HermitianEigen {
  Eigen::VectorXd values;     // ascending
  Eigen::MatrixXcd vectors;   // B-orthonormal columns, empty when not requested
};

// Lowest `count` eigenpairs of K x = λ M x, K Hermitian, M Hermitian positive definite.
// Throws NumericalError on LAPACK failure.
HermitianEigen hermitian_generalized_lowest(const Eigen::MatrixXcd& K, const Eigen::MatrixXcd& M,
                                            int count, bool want_vectors);

// Pins the BLAS backend to n threads (deterministic reductions for n = 1).
void set_blas_threads(int n);

}  // namespace blochguide
