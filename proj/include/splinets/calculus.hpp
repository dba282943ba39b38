#pragma once

#include <cstddef>
#include <optional>

#include "splinets/family.hpp"

namespace splinets {

struct GramMatrix {
  Matrix entries;
  bool symmetric = false;
  std::size_t computed_entries = 0;  // pairs with overlapping supports
};

// Member i = sum_j p(i, j) * fam[j].
SplineFamily lincomb(const SplineFamily& fam, const Matrix& p);

SplineFamily deriva(const SplineFamily& fam);
SplineFamily integra(const SplineFamily& fam);
Vector dintegra(const SplineFamily& fam);

GramMatrix gramian(const SplineFamily& a);
GramMatrix gramian(const SplineFamily& a, const SplineFamily& b);

}  // namespace splinets
