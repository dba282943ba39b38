#pragma once

#include <span>
#include <vector>

namespace splinets {

inline constexpr double kEquidTolerance = 1e-8;

// Strictly increasing knot vector xi_0 < ... < xi_{n+1}.
class KnotSet {
 public:
  KnotSet() = default;
  explicit KnotSet(std::vector<double> xi);

  // n internal knots equally spaced on [a, b].
  static KnotSet equidistant(double a, double b, int n_internal);

  int size() const { return static_cast<int>(xi_.size()); }
  int internal() const { return size() - 2; }
  int intervals() const { return size() - 1; }
  double operator[](int i) const { return xi_[i]; }
  double front() const { return xi_.front(); }
  double back() const { return xi_.back(); }
  double spacing(int i) const { return xi_[i + 1] - xi_[i]; }
  std::span<const double> values() const { return xi_; }
  bool equid() const { return equid_; }

  // Spacings equal to the first one within rel_tol (relative).
  bool uniform(double rel_tol) const;

  // Interval index i with xi_i <= t < xi_{i+1}; t == back() maps to the last interval.
  int interval_of(double t) const;

  bool operator==(const KnotSet& other) const { return xi_ == other.xi_; }

 private:
  std::vector<double> xi_;
  bool equid_ = false;
};

// Sorted union of two knot sets, merging values closer than tol.
KnotSet unite(const KnotSet& a, const KnotSet& b, double tol = 1e-12);

}  // namespace splinets
