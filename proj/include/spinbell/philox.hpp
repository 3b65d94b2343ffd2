#pragma once

#include <array>
#include <cstdint>

namespace spinbell {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Each
/// (key, counter) pair maps to four independent 32-bit words, so any stream
/// position can be reproduced without replaying the stream.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key);

  /// Counter words 2 and 3 hold `stream` and `substream`.
  Philox4x32(std::uint64_t seed, std::uint32_t stream, std::uint32_t substream = 0);

  /// Four words for draw number `n` of this stream.
  Counter draw(std::uint64_t n) const;

  /// Uniform double in [0, 1) with 53 random bits.
  static double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (std::uint64_t{hi} << 21) ^ (lo >> 11);
    return static_cast<double>(bits) * 0x1.0p-53;
  }
  /// Unbiased-enough integer in [0, n) by multiply-shift.
  static std::uint32_t to_range(std::uint32_t word, std::uint32_t n) {
    return static_cast<std::uint32_t>((std::uint64_t{word} * n) >> 32);
  }

 private:
  Key key_;
  std::uint32_t stream_;
  std::uint32_t substream_;
};

}  // namespace spinbell
