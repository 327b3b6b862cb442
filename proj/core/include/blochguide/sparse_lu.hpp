#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace blochguide {

// UMFPACK LU of a square complex sparse matrix. Move-only; frees the numeric object on destruction.
class SparseLU {
 public:
  explicit SparseLU(const Eigen::SparseMatrix<std::complex<double>>& a);
  ~SparseLU();
  SparseLU(SparseLU&&) noexcept;
  SparseLU& operator=(SparseLU&&) noexcept;
  SparseLU(const SparseLU&) = delete;
  SparseLU& operator=(const SparseLU&) = delete;

  Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const;
  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& b) const;

  int rows() const { return n_; }
  double rcond() const { return rcond_; }  // UMFPACK reciprocal condition estimate

 private:
  int n_ = 0;
  std::vector<int> ap_;
  std::vector<int> ai_;
  std::vector<double> ax_;  // packed complex
  void* numeric_ = nullptr;
  double rcond_ = 0.0;
};

}  // namespace blochguide
