#include "splinets/construct.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "splinets/error.hpp"
#include "splinets/parallel.hpp"
#include "splinets/taylor.hpp"

namespace splinets {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::crlc: return "crlc";
    case Method::crfc: return "crfc";
    case Method::rrm: return "rrm";
  }
  return "";
}

Method method_from_string(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  lower.erase(std::remove(lower.begin(), lower.end(), '-'), lower.end());
  if (lower == "crlc") return Method::crlc;
  if (lower == "crfc") return Method::crfc;
  if (lower == "rrm") return Method::rrm;
  throw DomainError("unknown construction method '" + std::string(name) + "'");
}

namespace {

void check_segment(std::span<const double> knots, std::size_t expected_rows) {
  if (knots.size() != expected_rows) throw DomainError("segment knot count does not match the block");
  for (std::size_t i = 1; i < knots.size(); ++i)
    if (!(knots[i] > knots[i - 1])) throw DomainError("segment knots must be strictly increasing");
}

bool equal_spacing(std::span<const double> knots) {
  const double h = knots[1] - knots[0];
  for (std::size_t i = 2; i < knots.size(); ++i)
    if (std::abs(knots[i] - knots[i - 1] - h) > 1e-12 * h) return false;
  return true;
}

}  // namespace

Matrix solve_frlc(const RowVector& first_row, const Vector& last_col, std::span<const double> knots) {
  const int k = static_cast<int>(first_row.size()) - 1;
  const int rows = static_cast<int>(last_col.size());
  check_segment(knots, rows);
  Matrix u(rows, k + 1);
  u.row(0) = first_row;
  u.col(k) = last_col;
  for (int i = 1; i < rows; ++i) {
    const RowVector next = taylor_step(u.row(i - 1), knots[i] - knots[i - 1]);
    u.row(i).head(k) = next.head(k);
  }
  return u;
}

Matrix solve_frfc(const RowVector& first_row_partial, const Vector& first_col,
                  std::span<const double> knots) {
  const int k = static_cast<int>(first_row_partial.size());
  if (k < 1) throw DomainError("frfc needs order at least 1");
  const int rows = static_cast<int>(first_col.size());
  check_segment(knots, rows);
  Matrix u = Matrix::Zero(rows, k + 1);
  u.row(0).head(k) = first_row_partial;
  u.col(0) = first_col;
  for (int i = 0; i + 1 < rows; ++i) {
    const double h = knots[i + 1] - knots[i];
    const TaylorStepMatrix t = taylor_matrices(h, k);
    double partial = 0.0;
    for (int j = 0; j < k; ++j) partial += u(i, j) * t.A(j, 0);
    u(i, k) = (first_col(i + 1) - partial) / t.A(k, 0);
    const RowVector next = taylor_step(u.row(i), h);
    u.row(i + 1).segment(1, k - 1) = next.segment(1, k - 1);
  }
  u(rows - 1, k) = 0.0;
  return u;
}

FrlrResult solve_frlr(const RowVector& first_row, const RowVector& last_row,
                      std::span<const double> knots) {
  const int k = static_cast<int>(first_row.size()) - 1;
  const int m = static_cast<int>(knots.size()) - 2;
  if (m < 0 || m > k) throw DomainError("frlr needs between 2 and k+2 knots");
  check_segment(knots, m + 2);
  Vector last_col(m + 2);
  last_col(0) = first_row(k);
  last_col(m + 1) = last_row(k);

  if (m > 0) {
    const int lo = k - m;
    std::vector<Matrix> blocks(m + 2);  // blocks[j] = A^{(j)}, j = 1..m+1
    std::vector<RowVector> cs(m + 2);
    Matrix first_a;
    if (equal_spacing(knots)) {
      const Matrix a = taylor_matrices(knots[1] - knots[0], k).A;
      first_a = a;
      for (int j = 1; j <= m + 1; ++j) {
        blocks[j] = a.block(lo, lo, m, m);
        cs[j] = a.block(k, lo, 1, m);
      }
    } else {
      for (int j = 1; j <= m + 1; ++j) {
        const Matrix a = taylor_matrices(knots[j] - knots[j - 1], k).A;
        if (j == 1) first_a = a;
        blocks[j] = a.block(lo, lo, m, m);
        cs[j] = a.block(k, lo, 1, m);
      }
    }
    // suffix[r] = A^{(r)} ... A^{(m+1)}, suffix[m+2] = I
    std::vector<Matrix> suffix(m + 3);
    suffix[m + 2] = Matrix::Identity(m, m);
    for (int r = m + 1; r >= 2; --r) suffix[r] = blocks[r] * suffix[r + 1];
    const Matrix d = first_a.block(lo, lo, m + 1, m) * suffix[2];
    Matrix c(m, m);
    for (int r = 2; r <= m + 1; ++r) c.row(r - 2) = cs[r] * suffix[r + 1];
    const RowVector rhs = last_row.segment(lo, m) - first_row.segment(lo, m + 1) * d;
    Eigen::PartialPivLU<Matrix> lu(c.transpose());
    const double rcond = lu.rcond();
    if (!(rcond > 1e-12)) throw SingularError("frlr system is singular or ill-conditioned");
    last_col.segment(1, m) = lu.solve(rhs.transpose());
  }

  FrlrResult out{solve_frlc(first_row, last_col, knots), 0.0};
  for (int j = 0; j < k - m; ++j)
    out.residual = std::max(out.residual, std::abs(out.block(m + 1, j) - last_row(j)));
  return out;
}

int seed_size(int n_internal, int k) { return n_internal - k + 1; }

double ConstructDiagnostics::max_residual() const {
  double r = 0.0;
  for (double v : residuals) r = std::max(r, v);
  return r;
}

namespace {

// Dense matrix seen from the right end: rows reversed, odd derivatives negated,
// kth column re-attached to the reversed intervals.
Matrix mirror(const Matrix& s) {
  const int rows = static_cast<int>(s.rows());
  const int k = static_cast<int>(s.cols()) - 1;
  Matrix t(rows, k + 1);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < k; ++j) t(i, j) = (j % 2 ? -1.0 : 1.0) * s(rows - 1 - i, j);
    t(i, k) = i + 1 < rows ? (k % 2 ? -1.0 : 1.0) * s(rows - 2 - i, k) : 0.0;
  }
  return t;
}

std::vector<double> mirror_knots(std::span<const double> xi) {
  std::vector<double> y(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) y[i] = -xi[xi.size() - 1 - i];
  return y;
}

struct SeedSlot {
  int frame;  // 0 = original, 1 = mirrored
  int row;
  int col;
};

// Runs one construction over a dense input pair (original, mirrored). Every entry the
// method treats as a seed is read through `get`, which also records its slot.
class Engine {
 public:
  Engine(std::span<const double> xi, int k, Method method) : xi_(xi.begin(), xi.end()), k_(k), method_(method) {
    n_ = static_cast<int>(xi.size()) - 2;
    yi_ = mirror_knots(xi);
  }

  Matrix run(const Matrix& src, const Matrix& src_mirror, std::vector<SeedSlot>* slots,
             std::vector<double>* residuals) {
    slots_ = slots;
    residuals_ = residuals;
    srcs_ = {&src, &src_mirror};
    const int rows = n_ + 2;
    if (k_ == 0) {
      Matrix s = Matrix::Zero(rows, 1);
      for (int i = 0; i <= n_; ++i) s(i, 0) = get(0, i, 0);
      return s;
    }
    const int c = n_ % 2 ? n_ / 2 + 1 : n_ / 2;
    Matrix right = Matrix::Zero(rows, k_ + 1);
    for (int j = 0; j < k_; ++j) right(c, j) = get(0, c, j);
    Matrix left = Matrix::Zero(rows, k_ + 1);
    const int cm = n_ + 1 - c;
    for (int j = 0; j < k_; ++j) left(cm, j) = (j % 2 ? -1.0 : 1.0) * right(c, j);

    pass(0, right, xi_, c, n_ % 2 == 0);
    pass(1, left, yi_, cm, false);

    const Matrix back = mirror(left);
    Matrix s = right;
    s.topRows(c) = back.topRows(c);
    return s;
  }

 private:
  double get(int frame, int row, int col) {
    if (slots_) slots_->push_back({frame, row, col});
    return (*srcs_[frame])(row, col);
  }

  double raw(int frame, int row, int col) const { return (*srcs_[frame])(row, col); }

  void note(double r) {
    if (residuals_) residuals_->push_back(r);
  }

  void propagate(Matrix& w, const std::vector<double>& x, int i) {
    const RowVector next = taylor_step(w.row(i), x[i + 1] - x[i]);
    w.row(i + 1).head(k_) = next.head(k_);
  }

  // frlr on rows g..e with the given last row; writes rows g+1..e except w(e, k).
  void frlr(Matrix& w, const std::vector<double>& x, int g, int e, const RowVector& last) {
    const FrlrResult r = solve_frlr(w.row(g), last, std::span<const double>(x).subspan(g, e - g + 1));
    w.block(g + 1, 0, e - g - 1, k_ + 1) = r.block.middleRows(1, e - g - 1);
    w.row(e).head(k_) = r.block.row(e - g).head(k_);
    note(r.residual);
  }

  // Fills rows c..n+1 of w given the derivatives at row c.
  void pass(int frame, Matrix& w, const std::vector<double>& x, int c, bool bridge) {
    const int end = n_ - k_;  // first row of the terminal block
    switch (method_) {
      case Method::crlc:
        for (int i = c; i <= end; ++i) {
          w(i, k_) = get(frame, i, k_);
          if (i < end) propagate(w, x, i);
        }
        break;
      case Method::crfc:
        for (int i = c; i <= end; ++i) {
          const double v = get(frame, i + 1, 0);
          const TaylorStepMatrix t = taylor_matrices(x[i + 1] - x[i], k_);
          double partial = 0.0;
          for (int j = 0; j < k_; ++j) partial += w(i, j) * t.A(j, 0);
          w(i, k_) = (v - partial) / t.A(k_, 0);
          propagate(w, x, i);
          w(i + 1, 0) = v;
        }
        break;
      case Method::rrm: {
        int g = c;
        w(g, k_) = get(frame, g, k_);
        if (bridge) {
          propagate(w, x, g);
          double r = 0.0;
          for (int j = 0; j < k_; ++j) r = std::max(r, std::abs(w(g + 1, j) - raw(frame, g + 1, j)));
          note(r);
          ++g;
          w(g, k_) = get(frame, g, k_);
        }
        const int span = end - g;
        const int groups = span / (k_ + 1);
        for (int q = 0; q < groups; ++q) {
          const int e = g + k_ + 1;
          RowVector last = RowVector::Zero(k_ + 1);
          for (int j = 0; j < k_; ++j) last(j) = get(frame, e, j);
          frlr(w, x, g, e, last);
          g = e;
          w(g, k_) = get(frame, g, k_);
        }
        const int rem = end - g;
        if (rem > 0) {
          const int m = rem - 1;
          RowVector last = RowVector::Zero(k_ + 1);
          for (int j = 0; j < k_ - m; ++j) last(j) = raw(frame, end, j);
          for (int j = k_ - m; j < k_; ++j) last(j) = get(frame, end, j);
          frlr(w, x, g, end, last);
          w(end, k_) = get(frame, end, k_);
        }
        break;
      }
    }
    frlr(w, x, end, n_ + 1, RowVector::Zero(k_ + 1));
    w(n_ + 1, k_) = 0.0;
  }

  std::vector<double> xi_, yi_;
  int n_ = 0;
  int k_ = 0;
  Method method_;
  std::vector<SeedSlot>* slots_ = nullptr;
  std::vector<double>* residuals_ = nullptr;
  std::array<const Matrix*, 2> srcs_{};
};

void check_construct_size(const KnotSet& knots, int k) {
  if (knots.internal() < 2 * k + 2)
    throw DomainError("construct needs at least 2k+2 internal knots; use project() for smaller supports");
}

std::vector<SeedSlot> seed_slots(const KnotSet& knots, int k, Method method) {
  const Matrix zero = Matrix::Zero(knots.size(), k + 1);
  std::vector<SeedSlot> slots;
  Engine(knots.values(), k, method).run(zero, zero, &slots, nullptr);
  return slots;
}

}  // namespace

Vector extract_seed(const Matrix& dense, const KnotSet& knots, int k, Method method) {
  check_construct_size(knots, k);
  if (dense.rows() != knots.size() || dense.cols() != k + 1)
    throw DomainError("dense matrix shape does not match knots and order");
  const Matrix mirrored = mirror(dense);
  const auto slots = seed_slots(knots, k, method);
  Vector seed(static_cast<Eigen::Index>(slots.size()));
  for (std::size_t i = 0; i < slots.size(); ++i)
    seed(static_cast<Eigen::Index>(i)) = (slots[i].frame ? mirrored : dense)(slots[i].row, slots[i].col);
  return seed;
}

SplineFamily construct(const KnotSet& knots, int k, const Vector& seed, Method method,
                       ConstructDiagnostics* diagnostics) {
  check_construct_size(knots, k);
  if (seed.size() != seed_size(knots.internal(), k))
    throw DomainError("seed length must be n - k + 1");
  const auto slots = seed_slots(knots, k, method);
  Matrix src = Matrix::Zero(knots.size(), k + 1);
  Matrix src_mirror = src;
  for (std::size_t i = 0; i < slots.size(); ++i)
    (slots[i].frame ? src_mirror : src)(slots[i].row, slots[i].col) = seed(static_cast<Eigen::Index>(i));
  const Matrix dense = Engine(knots.values(), k, method).run(src, src_mirror, nullptr, nullptr);
  if (diagnostics) diagnostics->residuals.clear();
  SplineFamily out(knots, k, Convention::one_sided);
  out.add(spline_from_dense(dense, SupportSet::full(knots.internal())));
  return out.as_symmetric();
}

SplineFamily correct(const SplineFamily& fam, Method method, ConstructDiagnostics* diagnostics) {
  const KnotSet& knots = fam.knots();
  const int k = fam.order();
  check_construct_size(knots, k);
  std::vector<Matrix> dense(fam.size());
  std::vector<std::vector<double>> residuals(fam.size());
  parallel_for(fam.size(), [&](std::size_t m) {
    const Matrix input = dense_one_sided(fam, static_cast<int>(m));
    dense[m] = Engine(knots.values(), k, method).run(input, mirror(input), nullptr, &residuals[m]);
  });
  SplineFamily out(knots, k, Convention::one_sided, BasisType::sp, fam.epsilon());
  out.reserve(fam.size());
  if (diagnostics) diagnostics->residuals.clear();
  for (int m = 0; m < fam.size(); ++m) {
    out.add(spline_from_dense(dense[m], SupportSet::full(knots.internal())));
    if (diagnostics)
      diagnostics->residuals.insert(diagnostics->residuals.end(), residuals[m].begin(), residuals[m].end());
  }
  return out.as_symmetric();
}

SplineFamily refine(const SplineFamily& fam, const KnotSet& new_knots, double tol) {
  const KnotSet& old = fam.knots();
  const double scale = std::max(1.0, std::max(new_knots.back(), old.back()) - std::min(new_knots.front(), old.front()));
  std::vector<int> map(old.size());
  for (int i = 0; i < old.size(); ++i) {
    const auto values = new_knots.values();
    auto it = std::lower_bound(values.begin(), values.end(), old[i] - tol * scale);
    if (it == values.end() || std::abs(*it - old[i]) > tol * scale)
      throw DomainError("refined knots must contain every original knot");
    map[i] = static_cast<int>(it - values.begin());
  }
  const int k = fam.order();
  const SplineFamily one = fam.as_one_sided();
  SplineFamily out(new_knots, k, Convention::one_sided, fam.type(), fam.epsilon());
  out.reserve(fam.size());
  for (const Spline& s : one.members()) {
    Spline t;
    std::vector<Component> comps;
    for (int r = 0; r < s.supp.size(); ++r) {
      const Component& c = s.supp[r];
      const Matrix& u = s.der[r];
      const int lo = map[c.lo];
      const int hi = map[c.hi];
      Matrix b(hi - lo + 1, k + 1);
      int i = c.lo;  // old interval governing new knot p
      for (int p = lo; p <= hi; ++p) {
        while (i + 1 <= c.hi && map[i + 1] <= p) ++i;
        if (map[i] == p)
          b.row(p - lo) = u.row(i - c.lo);
        else
          b.row(p - lo) = taylor_step(u.row(i - c.lo), new_knots[p] - old[i]);
      }
      comps.push_back({lo, hi});
      t.der.push_back(std::move(b));
    }
    t.supp = SupportSet(std::move(comps));
    out.add(std::move(t));
  }
  return fam.convention() == Convention::one_sided ? out : out.as_symmetric();
}

}  // namespace splinets
