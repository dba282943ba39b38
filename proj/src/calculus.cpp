#include "splinets/calculus.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "splinets/error.hpp"
#include "splinets/parallel.hpp"
#include "splinets/taylor.hpp"

namespace splinets {

namespace {

SplineFamily restore(const SplineFamily& result, Convention convention) {
  return convention == Convention::one_sided ? result : result.as_symmetric();
}

double max_abs(const Spline& s) {
  double v = 0.0;
  for (const Matrix& b : s.der)
    if (b.size()) v = std::max(v, b.cwiseAbs().maxCoeff());
  return v;
}

}  // namespace

SplineFamily lincomb(const SplineFamily& fam, const Matrix& p) {
  if (p.cols() != fam.size()) throw DomainError("coefficient matrix columns must equal the member count");
  const SplineFamily one = fam.as_one_sided();
  const int k = fam.order();
  const int m = static_cast<int>(p.rows());
  std::vector<Spline> result(m);
  parallel_for(m, [&](std::size_t idx) {
    const int i = static_cast<int>(idx);
    SupportSet supp;
    for (int j = 0; j < fam.size(); ++j)
      if (p(i, j) != 0.0 && !one[j].supp.empty()) supp = unite(supp, one[j].supp);
    Spline out{supp, {}};
    for (const Component& c : supp.components()) out.der.push_back(Matrix::Zero(c.rows(), k + 1));
    for (int j = 0; j < fam.size(); ++j) {
      const double w = p(i, j);
      if (w == 0.0) continue;
      const Spline& s = one[j];
      for (int r = 0; r < s.supp.size(); ++r) {
        const Component& c = s.supp[r];
        const int t = supp.find_interval(c.lo);
        out.der[t].middleRows(c.lo - supp[t].lo, c.rows()) += w * s.der[r];
      }
    }
    result[idx] = std::move(out);
  });
  SplineFamily out(fam.knots(), k, Convention::one_sided, BasisType::sp, fam.epsilon());
  out.reserve(m);
  for (auto& s : result) out.add(std::move(s));
  return restore(out, fam.convention());
}

SplineFamily deriva(const SplineFamily& fam) {
  const int k = fam.order();
  if (k < 1) throw DomainError("cannot differentiate an order-0 family");
  const SplineFamily one = fam.as_one_sided();
  SplineFamily out(fam.knots(), k - 1, Convention::one_sided, BasisType::sp, fam.epsilon());
  out.reserve(fam.size());
  for (const Spline& s : one.members()) {
    Spline t{s.supp, {}};
    for (const Matrix& b : s.der) t.der.push_back(b.rightCols(k));
    out.add(std::move(t));
  }
  return restore(out, fam.convention());
}

SplineFamily integra(const SplineFamily& fam) {
  const int k = fam.order();
  const KnotSet& xi = fam.knots();
  const int rows = xi.size();
  const SplineFamily one = fam.as_one_sided();
  SplineFamily out(xi, k + 1, Convention::one_sided, BasisType::sp, fam.epsilon());
  out.reserve(fam.size());
  std::vector<Vector> astar(xi.intervals());
  for (int i = 0; i < xi.intervals(); ++i) astar[i] = taylor_matrices(xi.spacing(i), k).Astar;

  for (int mi = 0; mi < fam.size(); ++mi) {
    const Spline& s = one[mi];
    const Matrix u = dense_one_sided(one, mi);
    const double scale = max_abs(s);
    Matrix w = Matrix::Zero(rows, k + 2);
    w.rightCols(k + 1) = u;
    std::vector<char> live(xi.intervals(), 0);
    double c = 0.0;
    int r = 0;  // next support component
    for (int i = 0; i < xi.intervals(); ++i) {
      const bool inside = r < s.supp.size() && i >= s.supp[r].lo && i < s.supp[r].hi;
      w(i, 0) = c;
      live[i] = inside || c != 0.0;
      if (inside) c += u.row(i).dot(astar[i]);
      if (r < s.supp.size() && i + 1 == s.supp[r].hi) {
        double comp_scale = scale;
        for (int q = s.supp[r].lo; q <= i; ++q) comp_scale = std::max(comp_scale, std::abs(w(q, 0)));
        if (std::abs(c) <= fam.epsilon() * comp_scale) c = 0.0;
        ++r;
      }
    }
    w(rows - 1, 0) = c;
    std::vector<Component> comps;
    for (int i = 0, start = -1; i <= xi.intervals(); ++i) {
      const bool on = i < xi.intervals() && live[i];
      if (on && start < 0) start = i;
      if (!on && start >= 0) {
        comps.push_back({start, i});
        start = -1;
      }
    }
    out.add(spline_from_dense(w, SupportSet(std::move(comps))));
  }
  return restore(out, fam.convention());
}

Vector dintegra(const SplineFamily& fam) {
  const int k = fam.order();
  const KnotSet& xi = fam.knots();
  const SplineFamily one = fam.as_one_sided();
  Vector out = Vector::Zero(fam.size());
  for (int mi = 0; mi < fam.size(); ++mi) {
    const Spline& s = one[mi];
    double total = 0.0;
    for (int r = 0; r < s.supp.size(); ++r) {
      const Component& c = s.supp[r];
      for (int i = c.lo; i < c.hi; ++i)
        total += s.der[r].row(i - c.lo).dot(taylor_matrices(xi.spacing(i), k).Astar);
    }
    out(mi) = total;
  }
  return out;
}

namespace {

// Members prepared for inner products: one-sided rows divided by j!.
struct ScaledMember {
  SupportSet supp;
  std::vector<Matrix> rows;
  int lo = 0;
  int hi = -1;
};

std::vector<ScaledMember> prepare(const SplineFamily& fam) {
  const SplineFamily one = fam.as_one_sided();
  const int k = fam.order();
  Vector inv_fact(k + 1);
  inv_fact(0) = 1.0;
  for (int j = 1; j <= k; ++j) inv_fact(j) = inv_fact(j - 1) / j;
  std::vector<ScaledMember> out(fam.size());
  for (int i = 0; i < fam.size(); ++i) {
    const Spline& s = one[i];
    out[i].supp = s.supp;
    for (const Matrix& b : s.der) out[i].rows.push_back(b * inv_fact.asDiagonal());
    if (!s.supp.empty()) {
      out[i].lo = s.supp.hull().lo;
      out[i].hi = s.supp.hull().hi;
    }
  }
  return out;
}

double inner(const ScaledMember& a, const ScaledMember& b, const KnotSet& xi, int k) {
  double total = 0.0;
  int ra = 0;
  int rb = 0;
  while (ra < a.supp.size() && rb < b.supp.size()) {
    const Component& ca = a.supp[ra];
    const Component& cb = b.supp[rb];
    const int lo = std::max(ca.lo, cb.lo);
    const int hi = std::min(ca.hi, cb.hi);
    for (int i = lo; i < hi; ++i) {
      const double h = xi.spacing(i);
      const auto sa = a.rows[ra].row(i - ca.lo);
      const auto sb = b.rows[rb].row(i - cb.lo);
      double hp = h;
      double acc = 0.0;
      for (int l = 0; l <= 2 * k; ++l) {
        double conv = 0.0;
        for (int m = std::max(0, l - k); m <= std::min(l, k); ++m) conv += sa(l - m) * sb(m);
        acc += hp / (l + 1) * conv;
        hp *= h;
      }
      total += acc;
    }
    if (ca.hi < cb.hi)
      ++ra;
    else
      ++rb;
  }
  return total;
}

GramMatrix gram_impl(const SplineFamily& a, const SplineFamily* b) {
  if (b && (!(a.knots() == b->knots()) || a.order() != b->order()))
    throw DomainError("gramian requires identical knots and order; refine first");
  const auto pa = prepare(a);
  const auto pb = b ? prepare(*b) : std::vector<ScaledMember>{};
  const auto& qb = b ? pb : pa;
  const int da = a.size();
  const int db = static_cast<int>(qb.size());
  GramMatrix g{Matrix::Zero(da, db), b == nullptr, 0};
  std::vector<std::size_t> counts(da, 0);
  parallel_for(da, [&](std::size_t pi) {
    const int p = static_cast<int>(pi);
    for (int q = b ? 0 : p; q < db; ++q) {
      if (pa[p].hi <= qb[q].lo || qb[q].hi <= pa[p].lo) continue;
      g.entries(p, q) = inner(pa[p], qb[q], a.knots(), a.order());
      ++counts[pi];
    }
  });
  for (auto c : counts) g.computed_entries += c;
  if (!b)
    for (int p = 0; p < da; ++p)
      for (int q = 0; q < p; ++q) g.entries(p, q) = g.entries(q, p);
  return g;
}

}  // namespace

GramMatrix gramian(const SplineFamily& a) { return gram_impl(a, nullptr); }
GramMatrix gramian(const SplineFamily& a, const SplineFamily& b) { return gram_impl(a, &b); }

}  // namespace splinets
