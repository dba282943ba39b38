#include "splinets/bases.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "splinets/error.hpp"
#include "splinets/linalg.hpp"

namespace splinets {

namespace {

// One-sided blocks of all order-k B-splines; member l covers knots l..l+k+1.
std::vector<Matrix> bspline_blocks(std::span<const double> xi, int k) {
  const int n = static_cast<int>(xi.size()) - 2;
  std::vector<Matrix> cur(n + 1, Matrix::Zero(2, 1));
  for (auto& b : cur) b(0, 0) = 1.0;
  for (int q = 1; q <= k; ++q) {
    std::vector<Matrix> next(n + 1 - q);
    for (int l = 0; l <= n - q; ++l) {
      const int rows = q + 2;
      Matrix left = Matrix::Zero(rows, q + 1);
      Matrix right = Matrix::Zero(rows, q + 1);
      left.block(0, 0, q + 1, q) = cur[l];
      right.block(1, 0, q + 1, q) = cur[l + 1];
      const double wl = 1.0 / (xi[l + q] - xi[l]);
      const double wr = 1.0 / (xi[l + 1] - xi[l + q + 1]);
      Matrix b(rows, q + 1);
      for (int i = 0; i < rows; ++i) {
        const double lam_l = xi[l + i] - xi[l];
        const double lam_r = xi[l + i] - xi[l + q + 1];
        for (int j = 0; j <= q; ++j) {
          const double dl = j > 0 ? j * left(i, j - 1) : 0.0;
          const double dr = j > 0 ? j * right(i, j - 1) : 0.0;
          b(i, j) = wl * (dl + lam_l * left(i, j)) + wr * (dr + lam_r * right(i, j));
        }
      }
      b(rows - 1, q) = 0.0;
      next[l] = std::move(b);
    }
    cur = std::move(next);
  }
  return cur;
}

// Integral of the product of two one-sided blocks over consecutive intervals of equal width h.
double block_inner_uniform(const Matrix& a, int a_lo, const Matrix& b, int b_lo, double h) {
  const int k = static_cast<int>(a.cols()) - 1;
  const int lo = std::max(a_lo, b_lo);
  const int hi = std::min(a_lo + static_cast<int>(a.rows()) - 1, b_lo + static_cast<int>(b.rows()) - 1);
  Vector inv_fact(k + 1);
  inv_fact(0) = 1.0;
  for (int j = 1; j <= k; ++j) inv_fact(j) = inv_fact(j - 1) / j;
  double total = 0.0;
  for (int i = lo; i < hi; ++i) {
    double hp = h;
    double acc = 0.0;
    for (int l = 0; l <= 2 * k; ++l) {
      double conv = 0.0;
      for (int m = std::max(0, l - k); m <= std::min(l, k); ++m)
        conv += a(i - a_lo, l - m) * inv_fact(l - m) * b(i - b_lo, m) * inv_fact(m);
      acc += hp / (l + 1) * conv;
      hp *= h;
    }
    total += acc;
  }
  return total;
}

SplineFamily family_from_blocks(const KnotSet& knots, int k, const std::vector<Matrix>& blocks,
                                const std::vector<int>& offsets) {
  SplineFamily one(knots, k, Convention::one_sided, BasisType::bs);
  one.reserve(static_cast<int>(blocks.size()));
  for (std::size_t l = 0; l < blocks.size(); ++l) {
    const int lo = offsets[l];
    one.add(Spline{SupportSet({{lo, lo + static_cast<int>(blocks[l].rows()) - 1}}), {blocks[l]}});
  }
  return one;
}

}  // namespace

SplineFamily bspline_basis(const KnotSet& knots, int k, bool normalize) {
  if (k < 0) throw DomainError("negative order");
  if (knots.internal() < k) throw DomainError("B-splines of order k need at least k internal knots");
  std::vector<Matrix> blocks = bspline_blocks(knots.values(), k);
  std::vector<int> offsets(blocks.size());
  for (std::size_t l = 0; l < blocks.size(); ++l) offsets[l] = static_cast<int>(l);
  SplineFamily one = family_from_blocks(knots, k, blocks, offsets);
  if (normalize) {
    const GramMatrix g = gramian(one);
    SplineFamily scaled = one.like();
    for (int l = 0; l < one.size(); ++l)
      scaled.add(Spline{one[l].supp, {one[l].der[0] / std::sqrt(g.entries(l, l))}});
    one = std::move(scaled);
  }
  return one.as_symmetric();
}

std::vector<int> DyadicNet::member_levels(int dim) const {
  std::vector<int> lv(dim, 0);
  for (int l = 0; l < depth(); ++l)
    for (const auto& tuple : levels[l])
      for (int i : tuple) lv[i] = l + 1;
  return lv;
}

DyadicNet net_layout(int n_internal, int k) {
  if (k < 0 || n_internal < k) throw DomainError("net layout needs n >= k >= 0");
  const int t = std::max(k, 1);
  const int d = n_internal - k + 1;
  const int tuples = (d + t - 1) / t;
  DyadicNet net;
  for (int tau = 1; tau <= tuples; ++tau) {
    const int level = std::countr_zero(static_cast<unsigned>(tau)) + 1;
    if (static_cast<int>(net.levels.size()) < level) net.levels.resize(level);
    std::vector<int> tuple;
    for (int i = (tau - 1) * t; i < std::min(tau * t, d); ++i) tuple.push_back(i);
    net.levels[level - 1].push_back(std::move(tuple));
  }
  net.complete = d % t == 0 && tuples == (1 << net.depth()) - 1;
  return net;
}

std::size_t TransformMatrix::nnz(double rel_cutoff) const {
  if (P.size() == 0) return 0;
  const double cut = rel_cutoff * P.cwiseAbs().maxCoeff();
  return static_cast<std::size_t>((P.array().abs() > cut).count());
}

namespace {

// Columns of P with tracked nonzero row ranges, and band products with H.
class BandWorkspace {
 public:
  BandWorkspace(const Matrix& h, int w) : h_(h), w_(w), d_(static_cast<int>(h.rows())), p_(Matrix::Zero(d_, d_)) {
    lo_.assign(d_, 0);
    hi_.assign(d_, -1);
  }

  int dim() const { return d_; }
  int band() const { return w_; }
  Matrix& P() { return p_; }

  // H * v restricted to rows [lo - w, hi + w].
  Vector apply(const Vector& v, int lo, int hi, int& out_lo, int& out_hi) const {
    out_lo = std::max(0, lo - w_);
    out_hi = std::min(d_ - 1, hi + w_);
    Vector r = Vector::Zero(d_);
    for (int i = out_lo; i <= out_hi; ++i) {
      double s = 0.0;
      for (int j = std::max(lo, i - w_); j <= std::min(hi, i + w_); ++j) s += h_(i, j) * v(j);
      r(i) = s;
    }
    return r;
  }

  double dot_column(int c, const Vector& hv, int lo, int hi) const {
    const int a = std::max(lo, lo_[c]);
    const int b = std::min(hi, hi_[c]);
    double s = 0.0;
    for (int i = a; i <= b; ++i) s += p_(i, c) * hv(i);
    return s;
  }

  // Processed columns whose range meets [lo, hi].
  std::vector<int> overlapping(int lo, int hi) const {
    std::vector<int> out;
    for (int c : done_)
      if (lo_[c] <= hi && hi_[c] >= lo) out.push_back(c);
    return out;
  }

  // Orthogonalizes the unit vectors of `members` against processed columns, then
  // orthonormalizes them jointly (symmetric orthonormalization).
  void process(const std::vector<int>& members) {
    const int t = static_cast<int>(members.size());
    std::vector<Vector> v(t, Vector::Zero(d_));
    std::vector<int> vlo(t), vhi(t);
    for (int a = 0; a < t; ++a) {
      v[a](members[a]) = 1.0;
      vlo[a] = vhi[a] = members[a];
    }
    for (int pass = 0; pass < 2; ++pass) {
      for (int a = 0; a < t; ++a) {
        int hlo, hhi;
        const Vector hv = apply(v[a], vlo[a], vhi[a], hlo, hhi);
        const std::vector<int> cols = overlapping(hlo, hhi);
        std::vector<double> coef(cols.size());
        for (std::size_t q = 0; q < cols.size(); ++q) coef[q] = dot_column(cols[q], hv, hlo, hhi);
        for (std::size_t q = 0; q < cols.size(); ++q) {
          const int c = cols[q];
          for (int i = lo_[c]; i <= hi_[c]; ++i) v[a](i) -= coef[q] * p_(i, c);
          vlo[a] = std::min(vlo[a], lo_[c]);
          vhi[a] = std::max(vhi[a], hi_[c]);
        }
      }
    }
    int lo = d_, hi = -1;
    for (int a = 0; a < t; ++a) {
      lo = std::min(lo, vlo[a]);
      hi = std::max(hi, vhi[a]);
    }
    std::vector<Vector> hv(t);
    for (int a = 0; a < t; ++a) {
      int hlo, hhi;
      hv[a] = apply(v[a], vlo[a], vhi[a], hlo, hhi);
    }
    Matrix g(t, t);
    for (int a = 0; a < t; ++a)
      for (int b = 0; b < t; ++b) g(a, b) = v[a].segment(lo, hi - lo + 1).dot(hv[b].segment(lo, hi - lo + 1));
    const Matrix root = t == 1 ? Matrix::Constant(1, 1, 1.0 / std::sqrt(g(0, 0))) : inverse_sqrt_spd(g);
    for (int b = 0; b < t; ++b) {
      const int c = members[b];
      for (int i = lo; i <= hi; ++i) {
        double s = 0.0;
        for (int a = 0; a < t; ++a) s += v[a](i) * root(a, b);
        p_(i, c) = s;
      }
      mark(c, lo, hi);
    }
  }

  void mark(int c, int lo, int hi) {
    lo_[c] = lo;
    hi_[c] = hi;
    done_.push_back(c);
  }

  int col_lo(int c) const { return lo_[c]; }
  int col_hi(int c) const { return hi_[c]; }

 private:
  const Matrix& h_;
  int w_;
  int d_;
  Matrix p_;
  std::vector<int> lo_, hi_;
  std::vector<int> done_;
};

void check_gram(const Matrix& h) {
  if (h.rows() != h.cols()) throw DomainError("Gram matrix must be square");
  const double sym = (h - h.transpose()).cwiseAbs().maxCoeff();
  if (sym > 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff())) throw DomainError("Gram matrix must be symmetric");
  if (h.rows() == 0) return;
  const double trace = h.trace();
  const double min_eig = Eigen::SelfAdjointEigenSolver<Matrix>(h, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  if (!(min_eig > 1e-12 * trace)) throw DomainError("Gram matrix is not positive definite");
}

}  // namespace

TransformMatrix diagonalize_gram(const GramMatrix& gram, Orthogonalization method, const DyadicNet* net) {
  const Matrix& h = gram.entries;
  check_gram(h);
  const int d = static_cast<int>(h.rows());
  const int w = half_bandwidth(h);
  switch (method) {
    case Orthogonalization::gsob: {
      BandWorkspace ws(h, w);
      for (int i = 0; i < d; ++i) ws.process({i});
      return {ws.P()};
    }
    case Orthogonalization::twob: {
      const int mid = std::min(d, w + (d - w) % 2);
      const int side = (d - mid) / 2;
      BandWorkspace ws(h, w);
      for (int i = 0; i < side; ++i) {
        ws.process({i});
        ws.process({d - 1 - i});
      }
      std::vector<int> middle;
      for (int i = side; i < side + mid; ++i) middle.push_back(i);
      if (!middle.empty()) ws.process(middle);
      return {ws.P()};
    }
    case Orthogonalization::dyadic: {
      if (!net) throw DomainError("dyadic orthogonalization needs a net");
      BandWorkspace ws(h, w);
      for (const auto& level : net->levels)
        for (const auto& tuple : level) ws.process(tuple);
      return {ws.P()};
    }
  }
  return {};
}

namespace {

BasisType os_tag(BasisType requested, const DyadicNet& net) {
  if (requested == BasisType::gsob || requested == BasisType::twob) return requested;
  return net.complete ? BasisType::dspnt : BasisType::spnt;
}

// Translation-invariant construction for uniform knots and a complete net.
SplinetResult splinet_uniform(const KnotSet& knots, int k, bool normalize, const DyadicNet& net) {
  const int n = knots.internal();
  const int d = n - k + 1;
  const double h = knots.spacing(0);
  std::vector<double> local(knots.values().begin(), knots.values().begin() + k + 2);
  Matrix block = bspline_blocks(local, k).front();
  double norm2 = block_inner_uniform(block, 0, block, 0, h);
  if (normalize) {
    block /= std::sqrt(norm2);
    norm2 = 1.0;
  }
  std::vector<Matrix> blocks(d, block);
  std::vector<int> offsets(d);
  for (int l = 0; l < d; ++l) offsets[l] = l;
  SplineFamily bs = family_from_blocks(knots, k, blocks, offsets);

  Vector band(k + 1);
  band(0) = norm2;
  for (int j = 1; j <= k; ++j) band(j) = block_inner_uniform(block, 0, block, j, h);
  Matrix hm = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= k && i + j < d; ++j) hm(i, i + j) = hm(i + j, i) = band(j);

  BandWorkspace ws(hm, k);
  Matrix& p = ws.P();
  for (int level = 1; level <= net.depth(); ++level) {
    const auto& tuples = net.levels[level - 1];
    ws.process(tuples.front());
    const int first = tuples.front().front();
    const int lo = ws.col_lo(first);
    const int hi = ws.col_hi(first);
    for (std::size_t q = 1; q < tuples.size(); ++q) {
      const int shift = tuples[q].front() - first;
      for (std::size_t a = 0; a < tuples[q].size(); ++a) {
        const int src = tuples.front()[a];
        const int dst = tuples[q][a];
        for (int i = lo; i <= hi; ++i) p(i + shift, dst) = p(i, src);
        ws.mark(dst, lo + shift, hi + shift);
      }
    }
  }

  // os: one lincomb per level, then translated blocks.
  SplineFamily os_one(knots, k, Convention::one_sided, BasisType::dspnt);
  std::vector<Spline> members(d);
  for (int level = 1; level <= net.depth(); ++level) {
    const auto& tuples = net.levels[level - 1];
    const auto& base = tuples.front();
    Matrix coeff(static_cast<int>(base.size()), d);
    for (std::size_t a = 0; a < base.size(); ++a) coeff.row(static_cast<int>(a)) = p.col(base[a]).transpose();
    const SplineFamily proto = lincomb(bs, coeff);
    for (std::size_t q = 0; q < tuples.size(); ++q) {
      const int shift = tuples[q].front() - base.front();
      for (std::size_t a = 0; a < base.size(); ++a) {
        const Spline& s = proto[static_cast<int>(a)];
        std::vector<Component> comps;
        for (const Component& c : s.supp.components()) comps.push_back({c.lo + shift, c.hi + shift});
        members[tuples[q][a]] = Spline{SupportSet(std::move(comps)), s.der};
      }
    }
  }
  for (auto& s : members) os_one.add(std::move(s));

  SplinetResult out{bs.as_symmetric(), os_one.as_symmetric(), net, TransformMatrix{p}, true};
  return out;
}

}  // namespace

SplinetResult splinet(const KnotSet& knots, int k, BasisType type, SplinetOptions options) {
  if (knots.internal() < k) throw DomainError("splinet needs at least k internal knots");
  DyadicNet net = net_layout(knots.internal(), k);
  if (type == BasisType::sp) throw DomainError("splinet type must be a basis type");
  const bool dyadic = type == BasisType::spnt || type == BasisType::dspnt;
  if (dyadic && options.allow_fast_path && net.complete && knots.uniform(1e-12))
    return splinet_uniform(knots, k, options.normalize, net);

  SplinetResult out{bspline_basis(knots, k, options.normalize), std::nullopt, net, std::nullopt, false};
  if (type == BasisType::bs) return out;
  const GramMatrix g = gramian(out.bs);
  const Orthogonalization method = type == BasisType::gsob   ? Orthogonalization::gsob
                                   : type == BasisType::twob ? Orthogonalization::twob
                                                             : Orthogonalization::dyadic;
  out.P = diagonalize_gram(g, method, &net);
  SplineFamily os = lincomb(out.bs, out.P->P.transpose());
  os.set_type(os_tag(type, net));
  out.os = std::move(os);
  return out;
}

}  // namespace splinets
