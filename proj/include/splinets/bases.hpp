#pragma once

#include <optional>
#include <vector>

#include "splinets/calculus.hpp"
#include "splinets/family.hpp"

namespace splinets {

SplineFamily bspline_basis(const KnotSet& knots, int k, bool normalize = false);

// Tuples of k consecutive basis indices (0-based) grouped into levels 1..N.
struct DyadicNet {
  std::vector<std::vector<std::vector<int>>> levels;  // levels[l-1][t] = member indices
  bool complete = false;

  int depth() const { return static_cast<int>(levels.size()); }
  // 1-based level of each member.
  std::vector<int> member_levels(int dim) const;
};

DyadicNet net_layout(int n_internal, int k);

enum class Orthogonalization { gsob, twob, dyadic };

struct TransformMatrix {
  Matrix P;
  // Entries above rel_cutoff * max|P|.
  std::size_t nnz(double rel_cutoff = 1e-11) const;
};

TransformMatrix diagonalize_gram(const GramMatrix& h, Orthogonalization method,
                                 const DyadicNet* net = nullptr);

struct SplinetResult {
  SplineFamily bs;
  std::optional<SplineFamily> os;
  DyadicNet net;
  std::optional<TransformMatrix> P;
  bool fast_path = false;
};

struct SplinetOptions {
  bool normalize = false;
  // Use the translation-invariant path on uniform knots with a complete net.
  bool allow_fast_path = true;
};

SplinetResult splinet(const KnotSet& knots, int k, BasisType type = BasisType::spnt,
                      SplinetOptions options = {});

}  // namespace splinets
