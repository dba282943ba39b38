#pragma once

#include <vector>

namespace splinets {

// Knot index range [lo, hi] covering hi - lo intervals.
struct Component {
  int lo = 0;
  int hi = 0;

  int intervals() const { return hi - lo; }
  int rows() const { return hi - lo + 1; }
  bool operator==(const Component&) const = default;
};

class SupportSet {
 public:
  SupportSet() = default;
  explicit SupportSet(std::vector<Component> components);

  static SupportSet full(int n_internal) { return SupportSet({{0, n_internal + 1}}); }

  const std::vector<Component>& components() const { return comps_; }
  int size() const { return static_cast<int>(comps_.size()); }
  bool empty() const { return comps_.empty(); }
  const Component& operator[](int r) const { return comps_[r]; }

  // Component index containing interval i, or -1.
  int find_interval(int i) const;
  int total_intervals() const;
  // Smallest knot range covering the support; requires non-empty.
  Component hull() const { return {comps_.front().lo, comps_.back().hi}; }

  bool operator==(const SupportSet&) const = default;

 private:
  std::vector<Component> comps_;
};

// Interval-wise union. Components sharing a knot are merged.
SupportSet unite(const SupportSet& a, const SupportSet& b);

}  // namespace splinets
