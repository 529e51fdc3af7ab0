#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ordpat/samples.hpp"

namespace ordpat {

enum class Family {
  IidAr1Pair,
  BlockMultinormal,
  BivAr1,
  BivAr1Rotation,
  BivAr2,
  ShiftedAr1,
};

std::string_view to_string(Family family) noexcept;
Family parse_family(std::string_view name);

/// Number of real parameters a family takes: rho, or (a, b).
std::size_t parameter_count(Family family) noexcept;

struct ProcessSpec {
  Family family = Family::IidAr1Pair;
  std::vector<double> params;
  std::size_t n = 0;
  std::uint64_t seed = 0;

  /// Rejects wrong parameter counts and parameters outside the family's
  /// stationarity (or positive semidefiniteness) region.
  void validate() const;

  /// One line of "key=value" pairs.
  std::string describe() const;
};

struct SeriesPair {
  Series x;
  Series y;
};

struct VectorPair {
  VectorSamples x;
  VectorSamples y;
};

/// Two independent stationary AR(1) paths with coefficient rho.
SeriesPair gen_iid_ar1_pair(double rho, std::size_t n, std::uint64_t seed);

/// n i.i.d. draws of a 6-vector with identity diagonal blocks and a
/// constant-rho cross block; requires |rho| <= 1/3.
VectorPair gen_block_multinormal(double rho, std::size_t n, std::uint64_t seed);

/// W_i = A W_{i-1} + xi_i with A = [[a, b], [b, -a]], or [[a, b], [-b, a]]
/// when `rotation` is set; stationary start N(0, I / (1 - a^2 - b^2)).
SeriesPair gen_biv_ar1(double a, double b, std::size_t n, std::uint64_t seed, bool rotation);

/// W_i = A W_{i-2} + xi_i with A = [[a, b], [b, -a]] and W_1 = xi_1,
/// W_2 = xi_2 (no burn-in).
SeriesPair gen_biv_ar2(double a, double b, std::size_t n, std::uint64_t seed);

/// AR(1) path of length n + 1; x is the first n points, y the last n.
SeriesPair gen_shifted_ar1(double rho, std::size_t n, std::uint64_t seed);

/// Dispatches on the family. For block-multinormal, n counts vector draws
/// and each returned series is the column-major concatenation of the three
/// coordinates (length 3n), so every window lies within one coordinate
/// except the two at the column joins.
SeriesPair simulate_series(const ProcessSpec& spec);

}  // namespace ordpat
