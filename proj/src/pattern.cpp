#include "ordpat/pattern.hpp"

#include <array>
#include <cmath>
#include <string>

#include "ordpat/error.hpp"

namespace ordpat {
namespace {

constexpr std::array<std::uint32_t, kMaxOrder + 2> kFactorial = {
    1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880};

void check_order(int h) {
  if (h < 1 || h > kMaxOrder) {
    throw Error(ErrorKind::UnsupportedOrder,
                "order " + std::to_string(h) + " outside [1, " + std::to_string(kMaxOrder) + "]");
  }
}

// Insertion sort of indices by (value desc, index desc); h <= 8 so this beats
// std::sort and needs no allocation.
std::uint32_t encode_window(const double* w, int h) {
  std::array<int, kMaxOrder + 1> perm{};
  const int len = h + 1;
  for (int i = 0; i < len; ++i) {
    if (!std::isfinite(w[i])) throw Error(ErrorKind::InvalidInput, "non-finite value in window");
    int j = i;
    // Index i is the largest so far, so it precedes earlier equal values.
    while (j > 0 && w[perm[j - 1]] <= w[i]) {
      perm[j] = perm[j - 1];
      --j;
    }
    perm[j] = i;
  }
  std::uint32_t code = 0;
  for (int j = 0; j < len; ++j) {
    std::uint32_t smaller = 0;
    for (int k = j + 1; k < len; ++k) smaller += perm[k] < perm[j] ? 1u : 0u;
    code += smaller * kFactorial[h - j];
  }
  return code;
}

}  // namespace

std::size_t pattern_count(int h) {
  check_order(h);
  return kFactorial[h + 1];
}

std::vector<int> sorting_permutation(std::span<const double> window) {
  return decode_pattern(encode_pattern(window));
}

PatternCode encode_permutation(std::span<const int> permutation) {
  const int h = static_cast<int>(permutation.size()) - 1;
  check_order(h);
  std::array<bool, kMaxOrder + 1> seen{};
  for (int v : permutation) {
    if (v < 0 || v > h || seen[v]) throw Error(ErrorKind::InvalidInput, "not a permutation");
    seen[v] = true;
  }
  std::uint32_t code = 0;
  for (int j = 0; j <= h; ++j) {
    std::uint32_t smaller = 0;
    for (int k = j + 1; k <= h; ++k) smaller += permutation[k] < permutation[j] ? 1u : 0u;
    code += smaller * kFactorial[h - j];
  }
  return {code, h};
}

PatternCode encode_pattern(std::span<const double> window) {
  const int h = static_cast<int>(window.size()) - 1;
  check_order(h);
  return {encode_window(window.data(), h), h};
}

std::vector<int> decode_pattern(PatternCode code) {
  const int h = code.order;
  check_order(h);
  if (code.code >= kFactorial[h + 1]) {
    throw Error(ErrorKind::InvalidCode, "code " + std::to_string(code.code) +
                                            " out of range for order " + std::to_string(h));
  }
  std::vector<int> remaining(h + 1);
  for (int i = 0; i <= h; ++i) remaining[i] = i;
  std::vector<int> perm;
  perm.reserve(h + 1);
  std::uint32_t rest = code.code;
  for (int j = 0; j <= h; ++j) {
    const std::uint32_t f = kFactorial[h - j];
    const auto digit = rest / f;
    rest %= f;
    perm.push_back(remaining[digit]);
    remaining.erase(remaining.begin() + digit);
  }
  return perm;
}

std::vector<PatternCode> pattern_sequence(std::span<const double> series, int h,
                                          std::size_t shift) {
  check_order(h);
  const auto width = static_cast<std::size_t>(h) + 1;
  if (series.size() < width + shift) {
    throw Error(ErrorKind::InsufficientData,
                "series of length " + std::to_string(series.size()) + " too short for order " +
                    std::to_string(h) + " and shift " + std::to_string(shift));
  }
  const std::size_t count = series.size() - static_cast<std::size_t>(h) - shift;
  std::vector<PatternCode> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back({encode_window(series.data() + shift + i, h), h});
  }
  return out;
}

std::vector<PatternCode> pattern_sequence(const VectorSamples& vectors) {
  const int h = static_cast<int>(vectors.dim()) - 1;
  check_order(h);
  std::vector<PatternCode> out;
  out.reserve(vectors.rows());
  for (std::size_t i = 0; i < vectors.rows(); ++i) {
    out.push_back({encode_window(vectors.row(i).data(), h), h});
  }
  return out;
}

std::vector<double> PatternDistribution::relative() const {
  std::vector<double> out(counts.size(), 0.0);
  if (total == 0) return out;
  const double inv = 1.0 / static_cast<double>(total);
  for (std::size_t i = 0; i < counts.size(); ++i) out[i] = static_cast<double>(counts[i]) * inv;
  return out;
}

PatternDistribution pattern_counts(std::span<const PatternCode> codes) {
  if (codes.empty()) throw Error(ErrorKind::InsufficientData, "no pattern codes to count");
  const int h = codes.front().order;
  PatternDistribution dist{h, std::vector<std::uint64_t>(pattern_count(h), 0), 0};
  for (const auto& c : codes) {
    if (c.order != h) throw Error(ErrorKind::OrderMismatch, "codes of different orders");
    if (c.code >= dist.counts.size()) throw Error(ErrorKind::InvalidCode, "code out of range");
    ++dist.counts[c.code];
  }
  dist.total = codes.size();
  return dist;
}

}  // namespace ordpat
