#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ordpat/samples.hpp"

namespace ordpat {

/// Largest supported pattern order; (8+1)! = 362880 distribution cells.
inline constexpr int kMaxOrder = 8;

/// Ordinal pattern of a window of h+1 values, stored as the Lehmer code
/// (factorial number system) of the permutation that sorts the window into
/// descending order. Code 0 is the identity permutation (0, 1, ..., h), i.e.
/// a non-increasing window.
struct PatternCode {
  std::uint32_t code = 0;
  int order = 1;

  friend bool operator==(const PatternCode&, const PatternCode&) = default;
};

/// Number of distinct patterns of order h, (h+1)!. Throws UnsupportedOrder
/// outside [1, kMaxOrder].
std::size_t pattern_count(int h);

/// Permutation pi with x[pi_0] >= ... >= x[pi_h]. Equal values are ordered
/// with the larger index first, so the result is unique even with ties.
std::vector<int> sorting_permutation(std::span<const double> window);

PatternCode encode_permutation(std::span<const int> permutation);
PatternCode encode_pattern(std::span<const double> window);
std::vector<int> decode_pattern(PatternCode code);

/// Codes of the windows starting at shift, shift+1, ..., n-h-1 (0-based).
std::vector<PatternCode> pattern_sequence(std::span<const double> series, int h,
                                          std::size_t shift = 0);

/// Pattern code of every row of a block of (h+1)-vectors.
std::vector<PatternCode> pattern_sequence(const VectorSamples& vectors);

struct PatternDistribution {
  int order = 1;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  std::vector<double> relative() const;
};

PatternDistribution pattern_counts(std::span<const PatternCode> codes);

}  // namespace ordpat
