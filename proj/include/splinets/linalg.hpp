#pragma once

#include "splinets/family.hpp"

namespace splinets {

struct SymmetricEigen {
  Vector values;   // descending
  Matrix vectors;  // columns match values
  int sweeps = 0;
};

// Cyclic Jacobi rotations until the off-diagonal Frobenius norm is below rel_tol * ||A||_F.
SymmetricEigen jacobi_eigen(const Matrix& a, double rel_tol = 1e-12, int max_sweeps = 100);

// Square root of a symmetric non-negative matrix; eigenvalues below
// -neg_tol * trace are rejected, the rest are clamped at zero.
Matrix sqrt_psd(const Matrix& a, double neg_tol = 1e-10);

// Inverse square root of a symmetric positive definite matrix.
Matrix inverse_sqrt_spd(const Matrix& a);

// Cholesky factor L (lower) of a symmetric positive definite band matrix with
// half-bandwidth w, stored compactly.
class BandCholesky {
 public:
  BandCholesky(const Matrix& a, int half_bandwidth);

  int size() const { return n_; }
  Vector solve(const Vector& b) const;
  Matrix solve(const Matrix& b) const;

 private:
  double& at(int i, int j) { return l_(i, j - i + w_); }
  double at(int i, int j) const { return l_(i, j - i + w_); }

  int n_;
  int w_;
  Matrix l_;  // row i holds L(i, i-w .. i)
};

// Largest |i - j| with a(i, j) != 0.
int half_bandwidth(const Matrix& a);

}  // namespace splinets
