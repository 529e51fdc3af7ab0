#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace ordpat {

/// Recorded in experiment metadata so reports can be regenerated.
inline constexpr std::string_view kRngName = "xoshiro256** (splitmix64 seeding) v1";

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Substream seed for a tuple of identifiers. Each word is folded in with a
/// splitmix64 finalizer so (seed, 1, 2) and (seed, 2, 1) differ.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept;

/// 64-bit FNV-1a, used to fold strings (family names, parameters) into seeds.
std::uint64_t hash_string(std::string_view s) noexcept;

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept;

  /// Uniform on the open interval (0, 1); 53 random bits.
  double uniform() noexcept;

  /// Standard normal by inverse-CDF transform of one uniform.
  double normal() noexcept;

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace ordpat
