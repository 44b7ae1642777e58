#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace satpep {

// Deterministic, portable PRNG: xoshiro256** seeded through splitmix64.
// The same seed yields the same draw sequence on every platform; nothing
// here depends on libc rand state or std:: distribution internals.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 random bits.
  double uniform();

  // Uniform integer in [0, bound). bound == 0 returns 0.
  std::uint64_t uniform_below(std::uint64_t bound);

  bool bernoulli(double p) { return uniform() < p; }

  void fill(std::span<std::uint8_t> out);

  // Independent child stream; distinct labels give unrelated sequences.
  RngStream fork(std::uint64_t label);

  static std::uint64_t mix(std::uint64_t a, std::uint64_t b);

 private:
  std::array<std::uint64_t, 4> state_{};
};

// Reads SATPEP_SEED (decimal 64-bit) from the environment; falls back to
// `fallback` when unset or unparsable.
std::uint64_t seed_from_env_or(std::uint64_t fallback);

}  // namespace satpep
