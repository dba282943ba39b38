#include "splinets/family.hpp"

#include <array>

#include "splinets/error.hpp"

namespace splinets {

namespace {

constexpr std::array<std::string_view, 6> kTypeNames = {"sp", "bs", "gsob", "twob", "spnt", "dspnt"};

}  // namespace

std::string_view to_string(BasisType type) { return kTypeNames[static_cast<int>(type)]; }

BasisType basis_type_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kTypeNames.size(); ++i)
    if (kTypeNames[i] == name) return static_cast<BasisType>(i);
  throw DomainError("unknown basis type '" + std::string(name) + "'");
}

bool Spline::operator==(const Spline& other) const {
  if (!(supp == other.supp) || der.size() != other.der.size()) return false;
  for (std::size_t r = 0; r < der.size(); ++r)
    if (der[r].rows() != other.der[r].rows() || der[r].cols() != other.der[r].cols() ||
        der[r] != other.der[r])
      return false;
  return true;
}

SplineFamily::SplineFamily(KnotSet knots, int order, Convention convention, BasisType type,
                           double epsilon)
    : knots_(std::move(knots)), order_(order), convention_(convention), type_(type),
      epsilon_(epsilon) {
  if (order_ < 0) throw DomainError("negative order");
  if (!(epsilon_ > 0)) throw DomainError("epsilon must be positive");
}

void check_structure(const KnotSet& knots, int order, const Spline& s) {
  if (static_cast<int>(s.der.size()) != s.supp.size())
    throw StructureError("number of derivative blocks differs from support components");
  for (int r = 0; r < s.supp.size(); ++r) {
    const Component& c = s.supp[r];
    if (c.hi > knots.size() - 1) throw StructureError("support exceeds the knot range");
    if (s.der[r].rows() != c.rows() || s.der[r].cols() != order + 1)
      throw StructureError("derivative block shape does not match its support component");
  }
}

void SplineFamily::add(Spline s) {
  check_structure(knots_, order_, s);
  members_.push_back(std::move(s));
}

Matrix block_sym_to_one(const Matrix& sym) {
  const int rows = static_cast<int>(sym.rows());
  const int k = static_cast<int>(sym.cols()) - 1;
  const int nc = rows - 2;
  Matrix one = sym;
  for (int i = 0; i < rows - 1; ++i) one(i, k) = 2 * i <= nc ? sym(i, k) : sym(i + 1, k);
  one(rows - 1, k) = 0.0;
  return one;
}

Matrix block_one_to_sym(const Matrix& one) {
  const int rows = static_cast<int>(one.rows());
  const int k = static_cast<int>(one.cols()) - 1;
  const int nc = rows - 2;
  Matrix sym = one;
  for (int i = 0; i < rows; ++i) {
    if (2 * i <= nc)
      sym(i, k) = one(i, k);
    else if (2 * i >= nc + 2)
      sym(i, k) = one(i - 1, k);
    else
      sym(i, k) = 0.0;
  }
  return sym;
}

namespace {

SplineFamily convert(const SplineFamily& fam, Convention target) {
  if (fam.convention() == target) return fam;
  SplineFamily out(fam.knots(), fam.order(), target, fam.type(), fam.epsilon());
  out.reserve(fam.size());
  for (const Spline& s : fam.members()) {
    Spline t{s.supp, {}};
    t.der.reserve(s.der.size());
    for (const Matrix& b : s.der)
      t.der.push_back(target == Convention::one_sided ? block_sym_to_one(b) : block_one_to_sym(b));
    out.add(std::move(t));
  }
  return out;
}

}  // namespace

SplineFamily SplineFamily::as_one_sided() const { return convert(*this, Convention::one_sided); }
SplineFamily SplineFamily::as_symmetric() const { return convert(*this, Convention::symmetric); }

Matrix dense_one_sided(const SplineFamily& fam, int member) {
  const Spline& s = fam[member];
  Matrix dense = Matrix::Zero(fam.knots().size(), fam.order() + 1);
  for (int r = 0; r < s.supp.size(); ++r) {
    const Component& c = s.supp[r];
    dense.middleRows(c.lo, c.rows()) =
        fam.convention() == Convention::one_sided ? s.der[r] : block_sym_to_one(s.der[r]);
  }
  return dense;
}

Spline spline_from_dense(const Matrix& dense, const SupportSet& supp) {
  const int k = static_cast<int>(dense.cols()) - 1;
  Spline s{supp, {}};
  for (const Component& c : supp.components()) {
    Matrix b = dense.middleRows(c.lo, c.rows());
    b(c.rows() - 1, k) = 0.0;
    s.der.push_back(std::move(b));
  }
  return s;
}

}  // namespace splinets
