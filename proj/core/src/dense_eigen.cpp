#include "blochguide/dense_eigen.hpp"

#include <complex>
#include <string>
#include <vector>

#include <lapacke.h>

#include "blochguide/errors.hpp"

extern "C" void openblas_set_num_threads(int num_threads);

namespace blochguide {

HermitianEigen hermitian_generalized_lowest(const Eigen::MatrixXcd& K, const Eigen::MatrixXcd& M,
                                            int count, bool want_vectors) {
  const auto n = static_cast<lapack_int>(K.rows());
  if (K.cols() != n || M.rows() != n || M.cols() != n) {
    throw ConfigError("eigensolver: matrix size mismatch");
  }
  if (count < 1 || count > n) {
    throw ConfigError("eigensolver: requested " + std::to_string(count) + " of " +
                      std::to_string(n) + " eigenpairs");
  }
  Eigen::MatrixXcd a = K;
  Eigen::MatrixXcd b = M;
  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<lapack_int> ifail(static_cast<std::size_t>(n));
  Eigen::MatrixXcd z(n, count);
  lapack_int found = 0;
  const lapack_int info = LAPACKE_zhegvx(
      LAPACK_COL_MAJOR, 1, 'V', 'I', 'U', n,
      reinterpret_cast<lapack_complex_double*>(a.data()), n,
      reinterpret_cast<lapack_complex_double*>(b.data()), n, 0.0, 0.0, 1, count,
      2.0 * LAPACKE_dlamch('S'), &found, w.data(),
      reinterpret_cast<lapack_complex_double*>(z.data()), n, ifail.data());
  if (info != 0) {
    throw NumericalError("eigensolver: zhegvx info=" + std::to_string(info) + " for n=" +
                         std::to_string(n));
  }
  HermitianEigen out;
  out.values.resize(found);
  // Rayleigh quotient polish
  for (lapack_int m = 0; m < found; ++m) {
    const auto v = z.col(m);
    out.values[m] = (v.dot(K * v)).real() / (v.dot(M * v)).real();
  }
  if (want_vectors) out.vectors = z.leftCols(found);
  return out;
}

void set_blas_threads(int n) { openblas_set_num_threads(n < 1 ? 1 : n); }

}  // namespace blochguide
