#pragma once

#include <span>
#include <vector>

#include "splinets/family.hpp"
#include "splinets/taylor.hpp"

namespace splinets {

enum class Violation { none, taylor, boundary, convention };

struct MemberValidity {
  bool valid = true;
  Violation kind = Violation::none;
  double max_violation = 0.0;  // relative to the member's largest entry
  int knot = -1;               // global knot index of the largest violation
  bool taylor_ok = true;
  bool boundary_ok = true;
  bool convention_ok = true;
};

struct ValidityReport {
  std::vector<MemberValidity> members;

  bool all_valid() const;
  double max_violation() const;
  // Index of the member with the largest violation, -1 when empty.
  int worst_member() const;
};

ValidityReport is_valid_spline(const SplineFamily& fam);

SplineFamily sym2one(const SplineFamily& fam, bool inverse = false);

// |grid| x members matrix of the d-th derivative.
Matrix evaluate(const SplineFamily& fam, std::span<const double> grid, int deriv = 0);

std::vector<double> sample_grid(const KnotSet& knots, int k, int points_per_interval);

SplineFamily gather(const SplineFamily& a, const SplineFamily& b);
SplineFamily subsample(const SplineFamily& fam, std::span<const int> indices);

SplineFamily exsupp(const SplineFamily& fam);

}  // namespace splinets
