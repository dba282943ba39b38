#include "splinets/project.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "splinets/construct.hpp"
#include "splinets/core.hpp"
#include "splinets/error.hpp"
#include "splinets/linalg.hpp"
#include "splinets/parallel.hpp"

namespace splinets {

namespace {

struct Basis {
  SplineFamily family;
  std::optional<TransformMatrix> P;
  bool orthonormal;
};

Basis make_basis(const KnotSet& knots, int k, BasisType type) {
  if (knots.internal() < k) throw DomainError("projection space needs at least k internal knots");
  if (type == BasisType::sp) throw DomainError("projection needs a basis type");
  SplinetResult so = splinet(knots, k, type);
  if (type == BasisType::bs) return {std::move(so.bs), std::nullopt, false};
  return {std::move(*so.os), std::move(so.P), true};
}

// Inner products with the basis to coefficients.
Matrix solve_coefficients(const Basis& basis, const Matrix& products) {
  if (basis.orthonormal) return products;
  const GramMatrix g = gramian(basis.family);
  const BandCholesky chol(g.entries, basis.family.order());
  return chol.solve(Matrix(products.transpose())).transpose();
}

}  // namespace

ProjectionResult project_splines(const SplineFamily& fam, const std::optional<KnotSet>& target,
                                 BasisType type) {
  const KnotSet& tk = target ? *target : fam.knots();
  Basis basis = make_basis(tk, fam.order(), type);
  Matrix products;
  if (tk == fam.knots()) {
    products = gramian(fam, basis.family).entries;
  } else {
    const KnotSet u = unite(fam.knots(), tk);
    products = gramian(refine(fam, u), refine(basis.family, u)).entries;
  }
  Matrix coeff = solve_coefficients(basis, products);
  SplineFamily sp = lincomb(basis.family, coeff);
  return {std::move(coeff), std::move(basis.family), std::move(sp), std::move(basis.P), {}};
}

ProjectionResult project_data(const FunctionalData& data, const KnotSet& knots, int k, BasisType type) {
  const auto& args = data.args;
  const int t = static_cast<int>(args.size());
  if (t < 2) throw DomainError("functional data needs at least two arguments");
  if (data.values.rows() != t) throw DomainError("data values must have one row per argument");
  for (int j = 1; j < t; ++j)
    if (!(args[j] > args[j - 1])) throw DomainError("data arguments must be strictly increasing");
  if (args.back() <= knots.front() || args.front() >= knots.back())
    throw DomainError("data arguments lie entirely outside the knot range");

  std::vector<std::string> warnings;
  std::vector<double> clipped(args);
  bool clip = false;
  for (double& a : clipped) {
    const double c = std::clamp(a, knots.front(), knots.back());
    clip |= c != a;
    a = c;
  }
  if (clip) warnings.push_back("data arguments outside the knot range were truncated");

  Basis basis = make_basis(knots, k, type);
  const SplineFamily antideriv = integra(basis.family);
  const int d = basis.family.size();
  Matrix products = Matrix::Zero(data.values.cols(), d);
  // F is constant outside the member's support hull, so only nearby arguments contribute
  parallel_for(static_cast<std::size_t>(d), [&](std::size_t jj) {
    const int j = static_cast<int>(jj);
    const SupportSet& supp = basis.family[j].supp;
    if (supp.empty()) return;
    const Component hull = supp.hull();
    const auto first = std::lower_bound(clipped.begin(), clipped.end(), knots[hull.lo]);
    const auto last = std::upper_bound(clipped.begin(), clipped.end(), knots[hull.hi]);
    const int i0 = std::max(0, static_cast<int>(first - clipped.begin()) - 1);
    const int i1 = std::min(t - 1, static_cast<int>(last - clipped.begin()));
    if (i1 <= i0) return;
    const std::vector<int> one{j};
    const std::span<const double> window(clipped.data() + i0, static_cast<std::size_t>(i1 - i0 + 1));
    const Vector f = evaluate(subsample(antideriv, one), window).col(0);
    const Vector delta = f.tail(i1 - i0) - f.head(i1 - i0);
    products.col(j) = data.values.middleRows(i0, i1 - i0).transpose() * delta;
  });
  Matrix coeff = solve_coefficients(basis, products);
  SplineFamily sp = lincomb(basis.family, coeff);
  return {std::move(coeff), std::move(basis.family), std::move(sp), std::move(basis.P), std::move(warnings)};
}

FpcaResult fpca(const ProjectionResult& pr) {
  const Matrix& c = pr.coeff;
  const int m = static_cast<int>(c.rows());
  const int d = static_cast<int>(c.cols());
  if (m < 2) throw DomainError("fpca needs at least two samples");
  const GramMatrix g = gramian(pr.basis);
  if ((g.entries - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-6)
    throw DomainError("fpca needs an orthonormal basis; project with type spnt");

  FpcaResult out;
  out.basis = pr.basis;
  out.mean_coeff = c.colwise().mean();
  const Matrix centered = c.rowwise() - out.mean_coeff;
  const Matrix sigma = centered.transpose() * centered / (m - 1);
  SymmetricEigen e = jacobi_eigen(sigma, 1e-12);
  // variance at the rounding level of the coefficients counts as zero
  const double floor = std::pow(64 * std::numeric_limits<double>::epsilon() * c.cwiseAbs().maxCoeff(), 2);
  for (int i = 0; i < d; ++i) {
    if (e.values(i) <= floor) e.values(i) = 0.0;
    Eigen::Index arg = 0;
    e.vectors.col(i).cwiseAbs().maxCoeff(&arg);
    if (e.vectors(arg, i) < 0) e.vectors.col(i) *= -1.0;
  }
  out.eigenvalues = e.values;
  out.eigenvectors = e.vectors;
  out.eigenfunctions = lincomb(pr.basis, e.vectors.transpose());
  out.mean = lincomb(pr.basis, out.mean_coeff);
  const double top = d > 0 ? e.values(0) : 0.0;
  while (out.retained < d && top > 0 && e.values(out.retained) > 1e-10 * top) ++out.retained;
  out.scores = centered * e.vectors.leftCols(out.retained);
  for (int i = 0; i < out.retained; ++i) out.scores.col(i) /= std::sqrt(e.values(i));
  return out;
}

SplineFamily kl_reconstruct(const FpcaResult& fp, const RowVector& coeff_row, int m_components) {
  const int d = static_cast<int>(fp.eigenvectors.cols());
  if (m_components < 0 || m_components > d) throw DomainError("component count outside [0, d]");
  if (coeff_row.size() != d) throw DomainError("coefficient row length must equal the basis size");
  const Matrix v = fp.eigenvectors.leftCols(m_components);
  const RowVector centered = coeff_row - fp.mean_coeff;
  const RowVector c = fp.mean_coeff + (centered * v) * v.transpose();
  return lincomb(fp.basis, c);
}

}  // namespace splinets
