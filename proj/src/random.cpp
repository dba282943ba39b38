#include "splinets/random.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "splinets/error.hpp"
#include "splinets/linalg.hpp"
#include "splinets/parallel.hpp"

namespace splinets {

Matrix Covariance::root(int dim) const {
  if (full) {
    if (full->rows() != dim || full->cols() != dim) throw DomainError("covariance dimension mismatch");
    if ((*full - full->transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, full->cwiseAbs().maxCoeff()))
      throw DomainError("covariance matrix must be symmetric");
    return sqrt_psd(*full);
  }
  Vector d = diagonal ? *diagonal : Vector::Constant(dim, scalar);
  if (d.size() != dim) throw DomainError("covariance dimension mismatch");
  const double trace = std::max(0.0, d.sum());
  for (int i = 0; i < dim; ++i) {
    if (d(i) < -1e-10 * std::max(trace, 1e-300)) throw DomainError("covariance must be non-negative");
    d(i) = std::sqrt(std::max(0.0, d(i)));
  }
  return d.asDiagonal();
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (i + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

// Box-Muller on 53-bit uniforms; both variates of each pair are used.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = ((engine_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = (engine_() >> 11) * 0x1.0p-53;        // [0, 1)
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace

SplineFamily rspline(const SplineFamily& mean, const NoiseSpec& noise, int count, Method method) {
  if (mean.size() != 1) throw DomainError("rspline needs a single-member mean");
  if (count < 1) throw DomainError("rspline needs a positive count");
  const KnotSet& knots = mean.knots();
  const int k = mean.order();
  const int rows = knots.size();
  const Matrix sig = noise.sigma.root(rows);
  const Matrix the = noise.theta.root(k + 1);

  SplineFamily full_mean(knots, k, Convention::one_sided);
  full_mean.add(spline_from_dense(dense_one_sided(mean, 0), SupportSet::full(knots.internal())));
  const Matrix mean_sym = full_mean.as_symmetric()[0].der[0];

  SplineFamily perturbed(knots, k, Convention::symmetric, BasisType::sp, mean.epsilon());
  std::vector<Matrix> draws(count);
  parallel_for(count, [&](std::size_t m) {
    NormalStream normal(substream_seed(noise.seed, m));
    Matrix z(rows, k + 1);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j <= k; ++j) z(i, j) = normal.next();
    draws[m] = mean_sym + sig * z * the;
  });
  perturbed.reserve(count);
  for (auto& d : draws) perturbed.add(Spline{SupportSet::full(knots.internal()), {std::move(d)}});
  SplineFamily out = correct(perturbed, method);
  out.set_epsilon(mean.epsilon());
  return out;
}

}  // namespace splinets
