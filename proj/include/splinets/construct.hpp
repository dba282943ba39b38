#pragma once

#include <span>
#include <vector>

#include "splinets/family.hpp"

namespace splinets {

enum class Method { crlc, crfc, rrm };

std::string_view to_string(Method method);
Method method_from_string(std::string_view name);

// Completion solvers on a one-sided block over knots x_0..x_{m+1}.
Matrix solve_frlc(const RowVector& first_row, const Vector& last_col, std::span<const double> knots);
Matrix solve_frfc(const RowVector& first_row_partial, const Vector& first_col,
                  std::span<const double> knots);

struct FrlrResult {
  Matrix block;
  // Largest change applied to the unused last-row entries u_{m+1, 0..k-m-1}.
  double residual = 0.0;
};

// m = knots.size() - 2 must not exceed k.
FrlrResult solve_frlr(const RowVector& first_row, const RowVector& last_row,
                      std::span<const double> knots);

// Number of free values in a construct seed: n - k + 1.
int seed_size(int n_internal, int k);

// Seed of the given method read off a dense one-sided (n+2) x (k+1) matrix.
Vector extract_seed(const Matrix& dense, const KnotSet& knots, int k, Method method);

struct ConstructDiagnostics {
  std::vector<double> residuals;  // one per frlr step, in execution order
  double max_residual() const;
};

// Valid full-support spline from a seed; requires n >= 2k+2 internal knots.
SplineFamily construct(const KnotSet& knots, int k, const Vector& seed, Method method,
                       ConstructDiagnostics* diagnostics = nullptr);

// Projects every member's matrix onto the spline space by re-running the method on its seed.
SplineFamily correct(const SplineFamily& fam, Method method,
                     ConstructDiagnostics* diagnostics = nullptr);

// Same functions on a superset of knots.
SplineFamily refine(const SplineFamily& fam, const KnotSet& new_knots, double tol = 1e-12);

}  // namespace splinets
