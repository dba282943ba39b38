#include "splinets/knots.hpp"

#include <algorithm>
#include <cmath>

#include "splinets/error.hpp"

namespace splinets {

KnotSet::KnotSet(std::vector<double> xi) : xi_(std::move(xi)) {
  if (xi_.size() < 2) throw DomainError("knot set needs at least two knots");
  for (std::size_t i = 0; i < xi_.size(); ++i) {
    if (!std::isfinite(xi_[i])) throw DomainError("knot values must be finite");
    if (i > 0 && !(xi_[i] > xi_[i - 1]))
      throw DomainError("knots must be strictly increasing");
  }
  equid_ = uniform(kEquidTolerance);
}

KnotSet KnotSet::equidistant(double a, double b, int n_internal) {
  if (n_internal < 0) throw DomainError("negative internal knot count");
  if (!(b > a)) throw DomainError("empty knot range");
  std::vector<double> xi(n_internal + 2);
  const double step = (b - a) / (n_internal + 1);
  for (int i = 0; i <= n_internal; ++i) xi[i] = a + step * i;
  xi.back() = b;
  return KnotSet(std::move(xi));
}

bool KnotSet::uniform(double rel_tol) const {
  const double d0 = spacing(0);
  for (int i = 1; i < intervals(); ++i)
    if (std::abs(spacing(i) - d0) > rel_tol * d0) return false;
  return true;
}

int KnotSet::interval_of(double t) const {
  if (t < xi_.front() || t > xi_.back()) throw DomainError("point outside the knot range");
  auto it = std::upper_bound(xi_.begin(), xi_.end(), t);
  int i = static_cast<int>(it - xi_.begin()) - 1;
  return std::min(i, intervals() - 1);
}

KnotSet unite(const KnotSet& a, const KnotSet& b, double tol) {
  std::vector<double> all(a.values().begin(), a.values().end());
  all.insert(all.end(), b.values().begin(), b.values().end());
  std::sort(all.begin(), all.end());
  const double scale = std::max(1.0, all.back() - all.front());
  std::vector<double> out;
  for (double x : all)
    if (out.empty() || x - out.back() > tol * scale) out.push_back(x);
  return KnotSet(std::move(out));
}

}  // namespace splinets
