#include "splinets/support.hpp"

#include <algorithm>

#include "splinets/error.hpp"

namespace splinets {

SupportSet::SupportSet(std::vector<Component> components) : comps_(std::move(components)) {
  for (std::size_t r = 0; r < comps_.size(); ++r) {
    if (comps_[r].lo < 0 || comps_[r].hi <= comps_[r].lo)
      throw StructureError("support component must span at least one interval");
    if (r > 0 && comps_[r].lo <= comps_[r - 1].hi)
      throw StructureError("support components must be ordered and separated");
  }
}

int SupportSet::find_interval(int i) const {
  auto it = std::upper_bound(comps_.begin(), comps_.end(), i,
                             [](int v, const Component& c) { return v < c.hi; });
  if (it == comps_.end() || i < it->lo) return -1;
  return static_cast<int>(it - comps_.begin());
}

int SupportSet::total_intervals() const {
  int total = 0;
  for (const auto& c : comps_) total += c.intervals();
  return total;
}

SupportSet unite(const SupportSet& a, const SupportSet& b) {
  std::vector<Component> all(a.components());
  all.insert(all.end(), b.components().begin(), b.components().end());
  std::sort(all.begin(), all.end(), [](const Component& x, const Component& y) { return x.lo < y.lo; });
  std::vector<Component> out;
  for (const auto& c : all) {
    if (!out.empty() && c.lo <= out.back().hi)
      out.back().hi = std::max(out.back().hi, c.hi);
    else
      out.push_back(c);
  }
  return SupportSet(std::move(out));
}

}  // namespace splinets
