#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace suprec {

/*!
 * Philox4x32-10 counter-based generator.
 *
 * The 128-bit counter is split into a 64-bit block index (low words) and a
 * 64-bit stream id (high words); the 64-bit seed is the key. Two generators
 * with the same (seed, stream) produce identical sequences regardless of
 * what any other generator has done, which is what makes Monte Carlo runs
 * independent of thread scheduling.
 *
 * Satisfies UniformRandomBitGenerator, so it can drive <random> distributions.
 */
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();
  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1); safe to pass to log().
  double uniform_open();
  // Uniform integer in [0, n), unbiased. n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  // Ten rounds of the Philox bijection.
  static Block bijection(Block counter, Key key);

 private:
  void refill();

  Key key_;
  Block counter_{};
  Block buffer_{};
  unsigned position_ = 4;
};

using RandomStream = Philox4x32;

// Stream for replication `rep` of grid cell `cell`.
RandomStream derive_stream(std::uint64_t seed, std::uint32_t cell,
                           std::uint32_t rep);

}  // namespace suprec
