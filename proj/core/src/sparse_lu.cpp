#include "blochguide/sparse_lu.hpp"

#include <string>
#include <utility>

#include <umfpack.h>

#include "blochguide/errors.hpp"

namespace blochguide {

SparseLU::SparseLU(const Eigen::SparseMatrix<std::complex<double>>& a) {
  if (a.rows() != a.cols()) throw ConfigError("sparse LU: matrix must be square");
  Eigen::SparseMatrix<std::complex<double>> m = a;
  m.makeCompressed();
  n_ = static_cast<int>(m.rows());
  ap_.assign(m.outerIndexPtr(), m.outerIndexPtr() + n_ + 1);
  ai_.assign(m.innerIndexPtr(), m.innerIndexPtr() + m.nonZeros());
  ax_.resize(2 * static_cast<std::size_t>(m.nonZeros()));
  for (Eigen::Index k = 0; k < m.nonZeros(); ++k) {
    ax_[2 * k] = m.valuePtr()[k].real();
    ax_[2 * k + 1] = m.valuePtr()[k].imag();
  }
  double control[UMFPACK_CONTROL];
  double info[UMFPACK_INFO];
  umfpack_zi_defaults(control);
  void* symbolic = nullptr;
  int status = umfpack_zi_symbolic(n_, n_, ap_.data(), ai_.data(), ax_.data(), nullptr, &symbolic, control, info);
  if (status != UMFPACK_OK) {
    throw NumericalError("sparse LU: symbolic analysis failed (status " + std::to_string(status) + ", n=" +
                         std::to_string(n_) + ")");
  }
  status = umfpack_zi_numeric(ap_.data(), ai_.data(), ax_.data(), nullptr, symbolic, &numeric_, control, info);
  umfpack_zi_free_symbolic(&symbolic);
  rcond_ = info[UMFPACK_RCOND];
  if (status != UMFPACK_OK) {
    if (numeric_) umfpack_zi_free_numeric(&numeric_);
    throw NumericalError("sparse LU: factorization failed (status " + std::to_string(status) + ", n=" +
                         std::to_string(n_) + ", rcond estimate " + std::to_string(rcond_) + ")");
  }
}

SparseLU::~SparseLU() {
  if (numeric_) umfpack_zi_free_numeric(&numeric_);
}

SparseLU::SparseLU(SparseLU&& o) noexcept
    : n_(o.n_), ap_(std::move(o.ap_)), ai_(std::move(o.ai_)), ax_(std::move(o.ax_)),
      numeric_(std::exchange(o.numeric_, nullptr)), rcond_(o.rcond_) {}

SparseLU& SparseLU::operator=(SparseLU&& o) noexcept {
  if (this != &o) {
    if (numeric_) umfpack_zi_free_numeric(&numeric_);
    n_ = o.n_;
    ap_ = std::move(o.ap_);
    ai_ = std::move(o.ai_);
    ax_ = std::move(o.ax_);
    numeric_ = std::exchange(o.numeric_, nullptr);
    rcond_ = o.rcond_;
  }
  return *this;
}

Eigen::VectorXcd SparseLU::solve(const Eigen::VectorXcd& b) const {
  if (b.size() != n_) throw ConfigError("sparse LU: right-hand side size mismatch");
  Eigen::VectorXcd x(n_);
  double control[UMFPACK_CONTROL];
  double info[UMFPACK_INFO];
  umfpack_zi_defaults(control);
  const int status = umfpack_zi_solve(UMFPACK_A, ap_.data(), ai_.data(), ax_.data(), nullptr,
                                      reinterpret_cast<double*>(x.data()), nullptr,
                                      reinterpret_cast<const double*>(b.data()), nullptr, numeric_, control, info);
  if (status != UMFPACK_OK) throw NumericalError("sparse LU: solve failed (status " + std::to_string(status) + ")");
  return x;
}

Eigen::MatrixXcd SparseLU::solve(const Eigen::MatrixXcd& b) const {
  Eigen::MatrixXcd x(b.rows(), b.cols());
  for (Eigen::Index c = 0; c < b.cols(); ++c) x.col(c) = solve(Eigen::VectorXcd(b.col(c)));
  return x;
}

}  // namespace blochguide
