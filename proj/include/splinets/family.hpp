#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>
#include <vector>

#include "splinets/knots.hpp"
#include "splinets/support.hpp"

namespace splinets {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

inline constexpr double kDefaultEpsilon = 1e-7;

enum class Convention { symmetric, one_sided };

enum class BasisType { sp, bs, gsob, twob, spnt, dspnt };

std::string_view to_string(BasisType type);
BasisType basis_type_from_string(std::string_view name);

// One member: derivative block der[r] of shape rows(r) x (k+1) per support component r.
struct Spline {
  SupportSet supp;
  std::vector<Matrix> der;

  bool operator==(const Spline& other) const;
};

class SplineFamily {
 public:
  SplineFamily() = default;
  SplineFamily(KnotSet knots, int order, Convention convention = Convention::symmetric,
               BasisType type = BasisType::sp, double epsilon = kDefaultEpsilon);

  const KnotSet& knots() const { return knots_; }
  int order() const { return order_; }
  Convention convention() const { return convention_; }
  BasisType type() const { return type_; }
  double epsilon() const { return epsilon_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }
  const Spline& operator[](int i) const { return members_[i]; }
  const std::vector<Spline>& members() const { return members_; }

  // Throws StructureError on support/shape mismatch.
  void add(Spline s);
  void reserve(int count) { members_.reserve(count); }
  void set_type(BasisType type) { type_ = type; }
  void set_epsilon(double epsilon) { epsilon_ = epsilon; }

  // Same knots, order, convention, type and epsilon with no members.
  SplineFamily like() const { return SplineFamily(knots_, order_, convention_, type_, epsilon_); }

  SplineFamily as_one_sided() const;
  SplineFamily as_symmetric() const;

 private:
  KnotSet knots_;
  int order_ = 0;
  Convention convention_ = Convention::symmetric;
  BasisType type_ = BasisType::sp;
  double epsilon_ = kDefaultEpsilon;
  std::vector<Spline> members_;
};

void check_structure(const KnotSet& knots, int order, const Spline& s);

// Per-component kth-column conventions. Only column k changes.
Matrix block_sym_to_one(const Matrix& sym);
Matrix block_one_to_sym(const Matrix& one);

// Member as a dense (n+2) x (k+1) one-sided matrix over the whole knot range.
Matrix dense_one_sided(const SplineFamily& fam, int member);

// Member from a dense one-sided matrix, with the given support clipped out of it.
Spline spline_from_dense(const Matrix& dense, const SupportSet& supp);

}  // namespace splinets
