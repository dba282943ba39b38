#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "splinets/error.hpp"
#include "splinets/linalg.hpp"

using namespace splinets;

TEST_CASE("lincomb") {
  std::mt19937_64 rng(1);
  const KnotSet kn = oracle::random_knots(rng, 12);
  const SplineFamily bs = bspline_basis(kn, 3);
  const SplineFamily same = lincomb(bs, Matrix::Identity(bs.size(), bs.size()));
  for (int i = 0; i < bs.size(); ++i) CHECK(same[i] == bs[i]);
  CHECK_THROWS_AS(lincomb(bs, Matrix::Identity(2, 3)), DomainError);

  // associativity
  Matrix p = Matrix::Random(4, bs.size());
  Matrix q = Matrix::Random(3, 4);
  const SplineFamily a = lincomb(lincomb(bs, p), q);
  const SplineFamily b = lincomb(bs, q * p);
  for (int i = 0; i < 3; ++i)
    CHECK((dense_one_sided(a, i) - dense_one_sided(b, i)).cwiseAbs().maxCoeff() <= 1e-10 * oracle::max_abs(dense_one_sided(b, i)));

  // support rule on disjoint supports
  const std::vector<int> ends{0, bs.size() - 1};
  const SplineFamily two = subsample(bs, ends);
  const SplineFamily sum = lincomb(two, Matrix::Ones(1, 2));
  CHECK(sum[0].supp.size() == 2);
  CHECK(is_valid_spline(sum).all_valid());
}

TEST_CASE("partition of unity through lincomb") {
  std::mt19937_64 rng(2);
  for (int k = 0; k <= 4; ++k) {
    const KnotSet kn = oracle::random_knots(rng, 3 * k + 6);
    const SplineFamily bs = bspline_basis(kn, k);
    const SplineFamily one = lincomb(bs, Matrix::Ones(1, bs.size()));
    std::vector<double> grid;
    for (int i = 0; i <= 400; ++i) grid.push_back(kn[k] + (kn[kn.size() - 1 - k] - kn[k]) * i / 400.0);
    const Matrix v = evaluate(one, grid);
    CHECK((v.array() - 1.0).abs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("deriva") {
  const double h = 0.25;
  const SplineFamily hat = bspline_basis(KnotSet::equidistant(0, 1, 3), 1);
  const SplineFamily d = deriva(hat);
  CHECK(d.order() == 0);
  const std::vector<double> pts{0.3, 0.6};
  const Matrix v = evaluate(d, pts);
  CHECK(v(0, 1) == doctest::Approx(1 / h));
  CHECK(v(1, 1) == doctest::Approx(-1 / h));
  CHECK_THROWS(deriva(bspline_basis(KnotSet::equidistant(0, 1, 3), 0)));

  SplineFamily zero(KnotSet::equidistant(0, 1, 6), 2);
  zero.add({SupportSet::full(6), {Matrix::Zero(8, 3)}});
  CHECK(oracle::max_abs(deriva(zero)[0].der[0]) == 0.0);
}

TEST_CASE("integra and dintegra") {
  const double h = 0.25;
  const KnotSet kn = KnotSet::equidistant(0, 1, 3);
  const SplineFamily hat = bspline_basis(kn, 1);
  CHECK(dintegra(hat)(1) == doctest::Approx(h));
  const SplineFamily i = integra(hat);
  CHECK(i.order() == 2);
  const std::vector<double> after{0.75, 0.9, 1.0};
  const Matrix v = evaluate(i, after);
  // member 1 covers [0.25, 0.75]
  CHECK(v(0, 1) == doctest::Approx(h));
  CHECK(v(1, 1) == doctest::Approx(h));
  CHECK(v(2, 1) == doctest::Approx(h));
  CHECK_FALSE(is_valid_spline(i).all_valid());  // right boundary fails as the area is non-zero
  const auto r = is_valid_spline(i);
  CHECK(r.members[0].taylor_ok);
  CHECK_FALSE(r.members[0].boundary_ok);

  SplineFamily zero(kn, 1);
  zero.add({SupportSet::full(3), {Matrix::Zero(5, 2)}});
  CHECK(oracle::max_abs(integra(zero)[0].der[0]) == 0.0);
  CHECK(dintegra(zero)(0) == 0.0);
}

TEST_CASE("integration and differentiation are inverse") {
  std::mt19937_64 rng(3);
  for (int k = 0; k <= 4; ++k) {
    const KnotSet kn = oracle::random_knots(rng, 2 * k + 8);
    const SplineFamily f = oracle::random_family(rng, kn, k, 3);
    const SplineFamily di = deriva(integra(f));
    for (int m = 0; m < f.size(); ++m) CHECK(dense_one_sided(di, m) == dense_one_sided(f, m));
    if (k == 0) continue;
    const SplineFamily id = integra(deriva(f));
    CHECK(is_valid_spline(id).all_valid());
    const auto grid = sample_grid(kn, k, 6);
    CHECK((evaluate(id, grid) - evaluate(f, grid)).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(dintegra(deriva(f)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("gramian against quadrature") {
  const double h = 0.2;
  const SplineFamily b0 = bspline_basis(KnotSet::equidistant(0, 1, 4), 0);
  const GramMatrix g0 = gramian(b0);
  CHECK(g0.symmetric);
  for (int i = 0; i < g0.entries.rows(); ++i)
    for (int j = 0; j < g0.entries.cols(); ++j) CHECK(g0.entries(i, j) == (i == j ? doctest::Approx(h) : doctest::Approx(0.0)));
  for (int i = 0; i < g0.entries.rows(); ++i)
    for (int j = 0; j < g0.entries.cols(); ++j)
      if (i != j) CHECK(g0.entries(i, j) == 0.0);

  const SplineFamily b1 = bspline_basis(KnotSet::equidistant(0, 1, 4), 1);
  const Matrix g1 = gramian(b1).entries;
  CHECK(g1(1, 1) == doctest::Approx(2 * h / 3));
  CHECK(g1(1, 2) == doctest::Approx(h / 6));
  CHECK((g1 - oracle::gram_quadrature(b1, b1, 6)).cwiseAbs().maxCoeff() <= 1e-14);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = trial % 5;
    const KnotSet kn = oracle::random_knots(rng, 10 + trial);
    const SplineFamily a = oracle::random_family(rng, kn, k, 3);
    const SplineFamily b = bspline_basis(kn, k);
    const Matrix g = gramian(a, b).entries;
    const Matrix q = oracle::gram_quadrature(a, b, k + 2);
    CHECK((g - q).cwiseAbs().maxCoeff() <= 1e-9 * oracle::max_abs(q));
  }
  CHECK_THROWS_WITH(gramian(b0, b1), doctest::Contains("refine"));
}

TEST_CASE("gramian work is linear in the dimension for B-splines") {
  const auto count = [](int n) { return gramian(bspline_basis(KnotSet::equidistant(0, 1, n), 3)).computed_entries; };
  const std::size_t c1 = count(40), c2 = count(80), c4 = count(160);
  const int d1 = 38;
  CHECK(c1 <= static_cast<std::size_t>(7 * d1));
  CHECK(static_cast<double>(c4 - c2) == doctest::Approx(static_cast<double>(c2 - c1) * 2).epsilon(0.05));
}

TEST_CASE("jacobi eigen, roots and band cholesky") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> z;
  Matrix x(12, 12);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) x(i, j) = z(rng);
  const Matrix a = x * x.transpose();
  const SymmetricEigen e = jacobi_eigen(a);
  CHECK((e.vectors * e.values.asDiagonal() * e.vectors.transpose() - a).cwiseAbs().maxCoeff() <= 1e-10 * a.norm());
  for (int i = 1; i < 12; ++i) CHECK(e.values(i) <= e.values(i - 1));
  const Eigen::SelfAdjointEigenSolver<Matrix> ref(a);
  CHECK(e.values(0) == doctest::Approx(ref.eigenvalues()(11)).epsilon(1e-12));

  const Matrix r = sqrt_psd(a);
  CHECK((r * r - a).cwiseAbs().maxCoeff() <= 1e-10 * a.norm());
  const Matrix ir = inverse_sqrt_spd(a);
  CHECK((ir * a * ir - Matrix::Identity(12, 12)).cwiseAbs().maxCoeff() <= 1e-9);
  Matrix neg = -Matrix::Identity(3, 3);
  CHECK_THROWS(sqrt_psd(neg));

  const Matrix g = gramian(bspline_basis(oracle::random_knots(rng, 30), 3)).entries;
  CHECK(half_bandwidth(g) == 3);
  const BandCholesky chol(g, 3);
  Vector b(g.rows());
  for (int i = 0; i < b.size(); ++i) b(i) = z(rng);
  CHECK((g * chol.solve(b) - b).cwiseAbs().maxCoeff() <= 1e-10 * b.cwiseAbs().maxCoeff() * g.norm() / g.diagonal().minCoeff());
}
