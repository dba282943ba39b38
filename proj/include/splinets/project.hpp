#pragma once

#include <optional>
#include <string>
#include <vector>

#include "splinets/bases.hpp"

namespace splinets {

struct ProjectionResult {
  Matrix coeff;        // samples x basis members
  SplineFamily basis;
  SplineFamily sp;     // lincomb(basis, coeff)
  std::optional<TransformMatrix> P;
  std::vector<std::string> warnings;
};

// Orthogonal projection of every member onto the order-k spline space over target knots
// (fam's own knots when absent), expressed in the chosen basis.
ProjectionResult project_splines(const SplineFamily& fam, const std::optional<KnotSet>& target,
                                 BasisType type = BasisType::spnt);

struct FunctionalData {
  std::vector<double> args;  // strictly increasing
  Matrix values;             // args x samples
};

// Data read as right-continuous steps: value j holds on [args_j, args_{j+1}).
ProjectionResult project_data(const FunctionalData& data, const KnotSet& knots, int k,
                              BasisType type = BasisType::spnt);

struct FpcaResult {
  RowVector mean_coeff;
  Vector eigenvalues;       // descending, clamped at zero
  Matrix eigenvectors;      // columns in basis coordinates
  SplineFamily eigenfunctions;
  SplineFamily mean;
  Matrix scores;            // samples x retained
  SplineFamily basis;
  int retained = 0;
};

FpcaResult fpca(const ProjectionResult& pr);

// Mean plus the first m_components terms of the expansion of one coefficient row.
SplineFamily kl_reconstruct(const FpcaResult& fp, const RowVector& coeff_row, int m_components);

}  // namespace splinets
