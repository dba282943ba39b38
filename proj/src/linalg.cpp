#include "splinets/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "splinets/error.hpp"

namespace splinets {

SymmetricEigen jacobi_eigen(const Matrix& input, double rel_tol, int max_sweeps) {
  const int n = static_cast<int>(input.rows());
  if (input.cols() != n) throw DomainError("eigen decomposition needs a square matrix");
  Matrix a = 0.5 * (input + input.transpose());
  Matrix v = Matrix::Identity(n, n);
  const double threshold = rel_tol * a.norm();
  auto off_norm = [&] {
    double s = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  int sweep = 0;
  for (; sweep < max_sweeps && off_norm() > threshold; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int r = 0; r < n; ++r) {
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = c * arp - s * arq;
          a(r, q) = s * arp + c * arq;
        }
        for (int r = 0; r < n; ++r) {
          const double apr = a(p, r);
          const double aqr = a(q, r);
          a(p, r) = c * apr - s * aqr;
          a(q, r) = s * apr + c * aqr;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = c * vrp - s * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
    }
  }
  if (off_norm() > threshold) throw Error("Jacobi eigensolver did not converge");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return a(x, x) > a(y, y); });
  SymmetricEigen out{Vector(n), Matrix(n, n), sweep};
  for (int i = 0; i < n; ++i) {
    out.values(i) = a(order[i], order[i]);
    out.vectors.col(i) = v.col(order[i]);
  }
  return out;
}

Matrix sqrt_psd(const Matrix& a, double neg_tol) {
  const SymmetricEigen e = jacobi_eigen(a);
  const double trace = std::max(0.0, a.trace());
  Vector root(e.values.size());
  for (int i = 0; i < e.values.size(); ++i) {
    if (e.values(i) < -neg_tol * std::max(trace, 1e-300))
      throw DomainError("covariance matrix is not non-negative definite");
    root(i) = std::sqrt(std::max(0.0, e.values(i)));
  }
  return e.vectors * root.asDiagonal() * e.vectors.transpose();
}

Matrix inverse_sqrt_spd(const Matrix& a) {
  const SymmetricEigen e = jacobi_eigen(a, 1e-15);
  Vector inv(e.values.size());
  for (int i = 0; i < e.values.size(); ++i) {
    if (!(e.values(i) > 0)) throw DomainError("matrix is not positive definite");
    inv(i) = 1.0 / std::sqrt(e.values(i));
  }
  return e.vectors * inv.asDiagonal() * e.vectors.transpose();
}

int half_bandwidth(const Matrix& a) {
  int w = 0;
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i)
      if (a(i, j) != 0.0) w = std::max(w, std::abs(i - j));
  return w;
}

BandCholesky::BandCholesky(const Matrix& a, int half_bandwidth)
    : n_(static_cast<int>(a.rows())), w_(half_bandwidth), l_(Matrix::Zero(a.rows(), half_bandwidth + 1)) {
  if (a.cols() != n_) throw DomainError("band Cholesky needs a square matrix");
  for (int i = 0; i < n_; ++i) {
    for (int j = std::max(0, i - w_); j <= i; ++j) {
      double s = a(i, j);
      for (int p = std::max(0, i - w_); p < j; ++p)
        if (p >= j - w_) s -= at(i, p) * at(j, p);
      if (i == j) {
        if (!(s > 0)) throw DomainError("matrix is not positive definite");
        at(i, i) = std::sqrt(s);
      } else {
        at(i, j) = s / at(j, j);
      }
    }
  }
}

Vector BandCholesky::solve(const Vector& b) const {
  Vector y = b;
  for (int i = 0; i < n_; ++i) {
    double s = y(i);
    for (int p = std::max(0, i - w_); p < i; ++p) s -= at(i, p) * y(p);
    y(i) = s / at(i, i);
  }
  for (int i = n_ - 1; i >= 0; --i) {
    double s = y(i);
    for (int p = i + 1; p <= std::min(n_ - 1, i + w_); ++p) s -= at(p, i) * y(p);
    y(i) = s / at(i, i);
  }
  return y;
}

Matrix BandCholesky::solve(const Matrix& b) const {
  Matrix x(b.rows(), b.cols());
  for (int c = 0; c < b.cols(); ++c) x.col(c) = solve(Vector(b.col(c)));
  return x;
}

}  // namespace splinets
