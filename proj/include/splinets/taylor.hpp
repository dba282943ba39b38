#pragma once

#include "splinets/family.hpp"

namespace splinets {

struct TaylorStepMatrix {
  Matrix A;      // (k+1) x (k+1), A(i,j) = alpha^(i-j)/(i-j)! for i >= j
  Vector Astar;  // Astar(j) = alpha^(j+1)/(j+1)!
};

TaylorStepMatrix taylor_matrices(double alpha, int k);

// (l+2) x (l+2) difference matrix: zero first row, -1 on the subdiagonal, 1 on the diagonal below it.
Matrix difference_matrix(int l);

// Derivatives 0..k of the polynomial piece at distance alpha from the row's knot.
// row holds derivatives 0..k at the left knot (column k is the interval's constant).
RowVector taylor_step(const RowVector& row, double alpha);

}  // namespace splinets
