#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace wwb {

/// Name recorded in manifests for the generator below.
inline constexpr std::string_view kGeneratorName = "philox4x32-10";

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// One Philox-4x32 block with 10 rounds (Salmon et al., Random123).
PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

/// Seed of the i-th independent child stream of `base`.
std::uint64_t substream(std::uint64_t base, std::uint64_t index);

/// Counter-based stream: key = seed, counter = (block lo, block hi, stream lo, stream hi).
/// Satisfies UniformRandomBitGenerator with 64-bit output.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  /// Uniform on [0,1) with 53 random bits.
  double uniform();
  /// Uniform on (0,1), never 0.
  double uniform_open();
  /// Uniform integer in [0, n) without modulo bias.
  std::uint64_t below(std::uint64_t n);
  /// Standard normal (Boost.Random ziggurat).
  double normal();

  std::uint64_t seed() const { return seed_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  int used_ = 4;
};

}  // namespace wwb
