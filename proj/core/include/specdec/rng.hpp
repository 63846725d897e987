#pragma once

#include <cstdint>

namespace specdec {

// Finalizer from the splitmix64 generator. Also doubles as the stable hash
// used wherever the library needs a platform-independent 64-bit mix.
std::uint64_t mix64(std::uint64_t x);

// Accumulate v into a running hash h (order-sensitive).
std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v);

// Deterministic counter-based generator: state is just (seed-derived counter),
// every draw advances the counter by one and feeds it through mix64. Identical
// seeds give identical streams on every platform; there is no hidden state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : counter_(mix64(seed + 0x9e3779b97f4a7c15ull)) {}

  std::uint64_t next_u64();

  // Uniform double in [0, 1), 53 bits of randomness.
  double next_unit();

  // Standard normal via Box-Muller (no spare value is cached, so the stream
  // stays a pure function of the draw count).
  double next_normal();

  // Independent stream derived from this generator's current state and a
  // stream id. Forking does not advance this generator.
  Rng fork(std::uint64_t stream) const;

 private:
  std::uint64_t counter_;
};

}  // namespace specdec
