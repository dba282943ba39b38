#include "splinets/taylor.hpp"

#include "splinets/error.hpp"

namespace splinets {

TaylorStepMatrix taylor_matrices(double alpha, int k) {
  if (alpha < 0) throw DomainError("Taylor step must be non-negative");
  if (k < 0) throw DomainError("negative order");
  // powers[p] = alpha^p / p!
  Vector powers(k + 2);
  powers(0) = 1.0;
  for (int p = 1; p <= k + 1; ++p) powers(p) = powers(p - 1) * alpha / p;
  TaylorStepMatrix t{Matrix::Zero(k + 1, k + 1), Vector(k + 1)};
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= i; ++j) t.A(i, j) = powers(i - j);
  for (int j = 0; j <= k; ++j) t.Astar(j) = powers(j + 1);
  return t;
}

Matrix difference_matrix(int l) {
  Matrix d = Matrix::Zero(l + 2, l + 2);
  for (int i = 1; i < l + 2; ++i) {
    d(i, i - 1) = -1.0;
    d(i, i) = 1.0;
  }
  return d;
}

RowVector taylor_step(const RowVector& row, double alpha) {
  const int k = static_cast<int>(row.size()) - 1;
  RowVector out(k + 1);
  for (int j = 0; j <= k; ++j) {
    // Horner on sum_p alpha^p/p! row[j+p]
    double acc = row(k);
    for (int p = k - j; p >= 1; --p) acc = row(j + p - 1) + acc * alpha / p;
    out(j) = acc;
  }
  return out;
}

}  // namespace splinets
