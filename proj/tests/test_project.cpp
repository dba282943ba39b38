#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "splinets/error.hpp"
#include "splinets/project.hpp"

using namespace splinets;

namespace {

double grid_dev(const SplineFamily& a, const SplineFamily& b) {
  const auto grid = sample_grid(a.knots(), std::max(a.order(), 1), 8);
  return (evaluate(a, grid) - evaluate(b, grid)).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("projection onto the own space is the identity") {
  std::mt19937_64 rng(1);
  const KnotSet kn = oracle::random_knots(rng, 17);
  const SplineFamily f = oracle::random_family(rng, kn, 3, 4);
  for (auto type : {BasisType::spnt, BasisType::bs, BasisType::gsob, BasisType::twob}) {
    const ProjectionResult p = project_splines(f, std::nullopt, type);
    CHECK(p.coeff.rows() == 4);
    CHECK(p.coeff.cols() == 15);
    CHECK(grid_dev(p.sp, f) <= 1e-8);
    CHECK(is_valid_spline(p.sp).all_valid());
  }
  CHECK_THROWS(project_splines(f, KnotSet({0.0, 0.5, 1.0}), BasisType::spnt));
}

TEST_CASE("projection onto coarser knots") {
  std::mt19937_64 rng(2);
  const KnotSet fine = oracle::random_knots(rng, 30);
  const KnotSet coarse = KnotSet::equidistant(0, 1, 9);
  const SplineFamily f = oracle::random_family(rng, fine, 2, 3);
  const ProjectionResult p = project_splines(f, coarse);
  const KnotSet u = unite(fine, coarse);
  const SplineFamily fu = refine(f, u);
  const SplineFamily pu = refine(p.sp, u);
  Matrix neg = -Matrix::Identity(3, 3);
  Matrix comb(3, 6);
  comb << Matrix::Identity(3, 3), neg;
  const SplineFamily residual = lincomb(gather(fu, pu), comb);
  const Matrix orth = gramian(residual, refine(p.basis, u)).entries;
  CHECK(orth.cwiseAbs().maxCoeff() <= 1e-8);

  // Pythagoras
  const Vector s2 = gramian(fu).entries.diagonal();
  const Vector p2 = gramian(p.sp).entries.diagonal();
  const Vector r2 = gramian(residual).entries.diagonal();
  for (int i = 0; i < 3; ++i) CHECK(std::abs(s2(i) - p2(i) - r2(i)) <= 1e-8 * s2(i));

  // idempotence
  const ProjectionResult again = project_splines(p.sp, coarse);
  CHECK((again.coeff - p.coeff).cwiseAbs().maxCoeff() <= 1e-10);

  // basis independence
  for (auto type : {BasisType::bs, BasisType::gsob, BasisType::twob}) {
    const ProjectionResult q = project_splines(f, coarse, type);
    CHECK(grid_dev(q.sp, p.sp) <= 1e-8);
  }
  // bs coordinates map to splinet coordinates through P
  const ProjectionResult b = project_splines(f, coarse, BasisType::bs);
  REQUIRE(p.P.has_value());
  const Matrix mapped = b.coeff * p.P->P.transpose().inverse();
  CHECK((mapped - p.coeff).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("projection of discretized data") {
  std::mt19937_64 rng(3);
  const KnotSet kn = KnotSet::equidistant(0, 1, 12);
  const SplineFamily f = oracle::random_family(rng, kn, 3, 2);
  // left-step sampling biases the inner products by O(1/T), so the sampling is dense
  auto sampled = [&](int t) {
    FunctionalData data;
    for (int i = 0; i < t; ++i) data.args.push_back(static_cast<double>(i) / (t - 1));
    data.values = evaluate(f, data.args);
    return data;
  };
  const FunctionalData data = sampled(100000);
  const ProjectionResult p = project_data(data, kn, 3);
  const double dev = grid_dev(p.sp, f);
  MESSAGE("step-data projection deviation " << dev);
  CHECK(dev <= 1e-4);

  // idempotence on the same arguments
  const FunctionalData dense = sampled(2000000);
  const ProjectionResult pd = project_data(dense, kn, 3);
  FunctionalData again{dense.args, evaluate(pd.sp, dense.args)};
  const ProjectionResult q = project_data(again, kn, 3);
  MESSAGE("step-data idempotence gap " << (q.coeff - pd.coeff).cwiseAbs().maxCoeff());
  CHECK((q.coeff - pd.coeff).cwiseAbs().maxCoeff() <= 1e-6);

  // constant over the full range with a k = 0 basis
  FunctionalData c;
  for (int i = 0; i <= 240; ++i) c.args.push_back(i / 240.0);
  c.values = Matrix::Constant(241, 1, 2.5);
  const ProjectionResult pc = project_data(c, kn, 0);
  std::vector<double> interior;
  for (int i = 1; i < 100; ++i) interior.push_back(i / 100.0);
  CHECK((evaluate(pc.sp, interior).array() - 2.5).abs().maxCoeff() <= 1e-12);

  // arguments outside the range are truncated with a warning
  FunctionalData over{{-0.5, 0.2, 0.6, 1.5}, Matrix::Ones(4, 1)};
  CHECK(project_data(over, kn, 1).warnings.size() == 1);
  FunctionalData bad{{0.5, 0.2}, Matrix::Ones(2, 1)};
  CHECK_THROWS_AS(project_data(bad, kn, 1), DomainError);
  FunctionalData away{{2.0, 3.0}, Matrix::Ones(2, 1)};
  CHECK_THROWS_AS(project_data(away, kn, 1), DomainError);
}

TEST_CASE("fpca") {
  const KnotSet kn = KnotSet::equidistant(0, 1, 14);
  std::mt19937_64 rng(4);
  const SplineFamily f = oracle::random_family(rng, kn, 2, 1);
  const ProjectionResult base = project_splines(f, std::nullopt);
  ProjectionResult same = base;
  same.coeff = base.coeff.replicate(5, 1);
  const FpcaResult z = fpca(same);
  CHECK(z.eigenvalues.cwiseAbs().maxCoeff() <= 1e-20);
  CHECK(z.retained == 0);
  CHECK((z.mean_coeff - base.coeff.row(0)).cwiseAbs().maxCoeff() <= 1e-15);

  ProjectionResult bs = project_splines(oracle::random_family(rng, kn, 2, 3), std::nullopt, BasisType::bs);
  CHECK_THROWS_WITH(fpca(bs), doctest::Contains("spnt"));

  // eigenvalue sum equals the coefficient covariance trace; reconstruction is monotone
  ProjectionResult r = project_splines(oracle::random_family(rng, kn, 2, 40), std::nullopt);
  const FpcaResult fp = fpca(r);
  const Matrix centered = r.coeff.rowwise() - r.coeff.colwise().mean();
  const double trace = (centered.transpose() * centered).trace() / (r.coeff.rows() - 1);
  CHECK(fp.eigenvalues.sum() == doctest::Approx(trace).epsilon(1e-10));
  CHECK(gramian(fp.eigenfunctions).entries.diagonal().isOnes(1e-8));
  const RowVector row = r.coeff.row(3);
  const SplineFamily datum = lincomb(r.basis, row);
  double prev = INFINITY;
  const auto grid = sample_grid(kn, 2, 6);
  for (int m = 0; m <= fp.eigenvectors.cols(); ++m) {
    const SplineFamily rec = kl_reconstruct(fp, row, m);
    const double err = (evaluate(rec, grid) - evaluate(datum, grid)).norm();
    CHECK(err <= prev + 1e-12);
    prev = err;
    if (m == 0) CHECK(grid_dev(rec, fp.mean) <= 1e-15);
  }
  CHECK(prev <= 1e-8);
}
