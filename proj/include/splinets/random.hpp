#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "splinets/construct.hpp"

namespace splinets {

inline constexpr std::string_view kRngName = "mt19937_64+splitmix64-substreams+box-muller";

// Covariance given as a full matrix, a diagonal, or a scalar multiple of the identity.
struct Covariance {
  std::optional<Matrix> full;
  std::optional<Vector> diagonal;
  double scalar = 1.0;

  static Covariance identity(double s = 1.0) { return {std::nullopt, std::nullopt, s}; }
  static Covariance diag(Vector d) { return {std::nullopt, std::move(d), 1.0}; }
  static Covariance matrix(Matrix m) { return {std::move(m), std::nullopt, 1.0}; }

  // Symmetric square root of dimension dim.
  Matrix root(int dim) const;
};

struct NoiseSpec {
  Covariance sigma = Covariance::identity();  // rows: knots
  Covariance theta = Covariance::identity();  // columns: derivative orders
  std::uint64_t seed = 0;
};

// Seed of the independent substream for member index i.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t i);

// count random splines around a single-member mean.
SplineFamily rspline(const SplineFamily& mean, const NoiseSpec& noise, int count, Method method);

}  // namespace splinets
