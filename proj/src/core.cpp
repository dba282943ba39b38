#include "splinets/core.hpp"

#include <algorithm>
#include <cmath>

#include "splinets/error.hpp"
#include "splinets/parallel.hpp"

namespace splinets {

bool ValidityReport::all_valid() const {
  return std::all_of(members.begin(), members.end(), [](const MemberValidity& m) { return m.valid; });
}

double ValidityReport::max_violation() const {
  double v = 0.0;
  for (const auto& m : members) v = std::max(v, m.max_violation);
  return v;
}

int ValidityReport::worst_member() const {
  int worst = -1;
  for (int i = 0; i < static_cast<int>(members.size()); ++i)
    if (worst < 0 || members[i].max_violation > members[worst].max_violation) worst = i;
  return worst;
}

namespace {

struct Candidate {
  double ratio;
  int knot;
  Violation kind;
};

double max_abs(const Spline& s) {
  double scale = 0.0;
  for (const Matrix& b : s.der)
    if (b.size() > 0) scale = std::max(scale, b.cwiseAbs().maxCoeff());
  return scale;
}

MemberValidity check_member(const SplineFamily& fam, const Spline& s) {
  MemberValidity out;
  const double scale = max_abs(s);
  if (scale == 0.0) return out;
  const int k = fam.order();
  const KnotSet& xi = fam.knots();
  std::vector<Candidate> found;
  auto note = [&](double abs_value, int knot, Violation kind) {
    found.push_back({abs_value / scale, knot, kind});
  };

  for (int r = 0; r < s.supp.size(); ++r) {
    const Component& c = s.supp[r];
    const Matrix& block = s.der[r];
    const int rows = c.rows();
    const int nc = rows - 2;
    if (fam.convention() == Convention::symmetric) {
      if (nc % 2 == 0)
        note(std::abs(block(nc / 2, k) - block(nc / 2 + 1, k)), c.lo + nc / 2 + 1, Violation::convention);
      else
        note(std::abs(block((nc + 1) / 2, k)), c.lo + (nc + 1) / 2, Violation::convention);
    } else {
      note(std::abs(block(rows - 1, k)), c.hi, Violation::convention);
    }
    const Matrix u = fam.convention() == Convention::one_sided ? block : block_sym_to_one(block);
    for (int j = 0; j < k; ++j) {
      note(std::abs(u(0, j)), c.lo, Violation::boundary);
      note(std::abs(u(rows - 1, j)), c.hi, Violation::boundary);
    }
    for (int i = 0; i + 1 < rows; ++i) {
      const RowVector pred = taylor_step(u.row(i), xi.spacing(c.lo + i));
      double res = 0.0;
      for (int j = 0; j < k; ++j) res = std::max(res, std::abs(u(i + 1, j) - pred(j)));
      note(res, c.lo + i + 1, Violation::taylor);
    }
  }

  const double eps = fam.epsilon();
  double worst = 0.0;
  for (const auto& f : found) {
    worst = std::max(worst, f.ratio);
    if (f.ratio > eps) {
      if (f.kind == Violation::taylor) out.taylor_ok = false;
      if (f.kind == Violation::boundary) out.boundary_ok = false;
      if (f.kind == Violation::convention) out.convention_ok = false;
    }
  }
  out.max_violation = worst;
  out.valid = worst <= eps;
  if (worst > 0.0) {
    const Candidate* pick = nullptr;
    for (const auto& f : found)
      if (f.ratio >= worst * (1.0 - 1e-6) && (!pick || f.knot < pick->knot)) pick = &f;
    out.knot = pick->knot;
    if (!out.valid) out.kind = pick->kind;
  }
  return out;
}

}  // namespace

ValidityReport is_valid_spline(const SplineFamily& fam) {
  ValidityReport report;
  report.members.reserve(fam.size());
  for (const Spline& s : fam.members()) {
    check_structure(fam.knots(), fam.order(), s);
    report.members.push_back(check_member(fam, s));
  }
  return report;
}

SplineFamily sym2one(const SplineFamily& fam, bool inverse) {
  const Convention expected = inverse ? Convention::one_sided : Convention::symmetric;
  if (fam.convention() != expected)
    throw DomainError(inverse ? "sym2one inverse expects a one-sided family"
                              : "sym2one expects a symmetric family");
  return inverse ? fam.as_symmetric() : fam.as_one_sided();
}

Matrix evaluate(const SplineFamily& fam, std::span<const double> grid, int deriv) {
  const int k = fam.order();
  if (deriv < 0 || deriv > k) throw DomainError("derivative order outside [0, k]");
  const KnotSet& xi = fam.knots();
  std::vector<int> interval(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) interval[p] = xi.interval_of(grid[p]);

  const SplineFamily one = fam.as_one_sided();
  Matrix values = Matrix::Zero(static_cast<Eigen::Index>(grid.size()), fam.size());
  parallel_for(fam.size(), [&](std::size_t m) {
    const Spline& s = one[static_cast<int>(m)];
    if (s.supp.empty()) return;
    for (std::size_t p = 0; p < grid.size(); ++p) {
      const int i = interval[p];
      const int r = s.supp.find_interval(i);
      if (r < 0) continue;
      const Matrix& u = s.der[r];
      const int row = i - s.supp[r].lo;
      const double dt = grid[p] - xi[i];
      double acc = u(row, k);
      for (int j = k - 1; j >= deriv; --j) acc = u(row, j) + acc * dt / (j + 1 - deriv);
      values(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(m)) = acc;
    }
  });
  return values;
}

std::vector<double> sample_grid(const KnotSet& knots, int k, int points_per_interval) {
  if (points_per_interval < 1) throw DomainError("points per interval must be at least 1");
  const int inner = k * points_per_interval;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(knots.intervals()) * (inner + 1) + 1);
  for (int i = 0; i < knots.intervals(); ++i) {
    grid.push_back(knots[i]);
    const double h = knots.spacing(i);
    for (int j = 1; j <= inner; ++j) grid.push_back(knots[i] + h * j / (inner + 1));
  }
  grid.push_back(knots.back());
  return grid;
}

SplineFamily gather(const SplineFamily& a, const SplineFamily& b) {
  if (!(a.knots() == b.knots()) || a.order() != b.order())
    throw DomainError("gather requires identical knots and order");
  SplineFamily out = a.like();
  if (a.empty())
    out.set_type(b.type());
  else if (!b.empty() && a.type() != b.type())
    out.set_type(BasisType::sp);
  const SplineFamily bb = a.convention() == Convention::one_sided ? b.as_one_sided() : b.as_symmetric();
  out.reserve(a.size() + b.size());
  for (const Spline& s : a.members()) out.add(s);
  for (const Spline& s : bb.members()) out.add(s);
  return out;
}

SplineFamily subsample(const SplineFamily& fam, std::span<const int> indices) {
  SplineFamily out = fam.like();
  out.reserve(static_cast<int>(indices.size()));
  for (int i : indices) {
    if (i < 0 || i >= fam.size()) throw DomainError("subsample index out of range");
    out.add(fam[i]);
  }
  return out;
}

SplineFamily exsupp(const SplineFamily& fam) {
  const SplineFamily one = fam.as_one_sided();
  const int k = fam.order();
  SplineFamily out = one.like();
  out.reserve(fam.size());
  for (const Spline& s : one.members()) {
    const double thr = fam.epsilon() * max_abs(s);
    Spline t;
    std::vector<Component> comps;
    for (int r = 0; r < s.supp.size() && thr > 0.0; ++r) {
      const Component& c = s.supp[r];
      const Matrix& u = s.der[r];
      int start = -1;
      for (int i = c.lo; i <= c.hi; ++i) {
        const bool live = i < c.hi && u.row(i - c.lo).cwiseAbs().maxCoeff() > thr;
        if (live && start < 0) start = i;
        if (!live && start >= 0) {
          Matrix b = u.middleRows(start - c.lo, i - start + 1);
          b(b.rows() - 1, k) = 0.0;
          comps.push_back({start, i});
          t.der.push_back(std::move(b));
          start = -1;
        }
      }
    }
    t.supp = SupportSet(std::move(comps));
    out.add(std::move(t));
  }
  return fam.convention() == Convention::one_sided ? out : out.as_symmetric();
}

}  // namespace splinets
