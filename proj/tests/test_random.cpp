#include <doctest.h>

#include <cstdlib>
#include <random>

#include "oracles.hpp"
#include "splinets/error.hpp"
#include "splinets/io.hpp"
#include "splinets/random.hpp"

using namespace splinets;

namespace {

SplineFamily mean_spline(int k, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return oracle::random_family(rng, KnotSet::equidistant(0, 1, n), k, 1);
}

}  // namespace

TEST_CASE("zero noise returns the corrected mean") {
  const SplineFamily mean = mean_spline(2, 12, 1);
  NoiseSpec noise;
  noise.sigma = Covariance::identity(0.0);
  const SplineFamily r = rspline(mean, noise, 4, Method::rrm);
  const SplineFamily c = correct(mean, Method::rrm);
  for (int i = 0; i < r.size(); ++i) CHECK(r[i] == c[0]);
  NoiseSpec noise2;
  noise2.theta = Covariance::matrix(Matrix::Zero(3, 3));
  const SplineFamily r2 = rspline(mean, noise2, 2, Method::crlc);
  CHECK(r2[1] == correct(mean, Method::crlc)[0]);
}

TEST_CASE("draws are valid and reproducible") {
  for (int k = 0; k <= 3; ++k) {
    const SplineFamily mean = mean_spline(k, 2 * k + 9, 2);
    NoiseSpec noise;
    noise.seed = 99;
    for (auto method : {Method::rrm, Method::crlc, Method::crfc}) {
      if (k == 0 && method == Method::crfc) continue;
      const SplineFamily r = rspline(mean, noise, 50, method);
      CHECK(is_valid_spline(r).all_valid());
      const SplineFamily again = rspline(mean, noise, 50, method);
      CHECK(archive_to_string({r, std::nullopt, {}}) == archive_to_string({again, std::nullopt, {}}));
    }
  }
}

TEST_CASE("substreams make draws independent of the count") {
  const SplineFamily mean = mean_spline(3, 12, 3);
  NoiseSpec noise;
  noise.seed = 5;
  const SplineFamily a = rspline(mean, noise, 3, Method::rrm);
  const SplineFamily b = rspline(mean, noise, 7, Method::rrm);
  for (int i = 0; i < 3; ++i) CHECK(a[i] == b[i]);
  CHECK(substream_seed(5, 0) != substream_seed(5, 1));
}

TEST_CASE("covariance validation") {
  const SplineFamily mean = mean_spline(1, 6, 4);
  NoiseSpec noise;
  Matrix bad = Matrix::Identity(8, 8);
  bad(0, 0) = -1.0;
  noise.sigma = Covariance::matrix(bad);
  CHECK_THROWS_AS(rspline(mean, noise, 1, Method::rrm), DomainError);
  noise.sigma = Covariance::matrix(Matrix::Identity(3, 3));
  CHECK_THROWS_AS(rspline(mean, noise, 1, Method::rrm), DomainError);
  noise.sigma = Covariance::diag(Vector::Constant(8, 0.5));
  CHECK_NOTHROW(rspline(mean, noise, 1, Method::rrm));
}

TEST_CASE("sample mean converges and deviation scales with sigma") {
  const SplineFamily mean = mean_spline(2, 14, 6);
  const SplineFamily corrected = correct(mean, Method::rrm);
  const auto grid = sample_grid(mean.knots(), 2, 3);
  const Vector mu = evaluate(corrected, grid).col(0);
  const int m = 2000;
  auto stats = [&](double c, Vector& avg, Vector& sd) {
    NoiseSpec noise;
    noise.sigma = Covariance::identity(c * c * 1e-2);
    noise.seed = 77;
    const Matrix v = evaluate(rspline(mean, noise, m, Method::rrm), grid);
    avg = v.rowwise().mean();
    sd = ((v.colwise() - avg).array().square().rowwise().sum() / (m - 1)).sqrt();
  };
  Vector avg1, sd1, avg2, sd2;
  stats(1.0, avg1, sd1);
  stats(2.0, avg2, sd2);
  const double top = sd1.maxCoeff();
  for (int p = 0; p < avg1.size(); ++p) {
    if (sd1(p) <= 1e-8 * top) continue;  // pinned by the boundary conditions
    CHECK(std::abs(avg1(p) - mu(p)) <= 4 * sd1(p) / std::sqrt(m));
    const double ratio = sd2(p) / sd1(p);
    CHECK(ratio >= 1.6);
    CHECK(ratio <= 2.4);
  }
}
