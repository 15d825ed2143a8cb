#pragma once

#include <cstdint>
#include <vector>

namespace qplab {

// Splittable counter-based generator (splitmix64 core). Every stochastic
// operation in the library takes an explicit seed so runs are bit-reproducible
// across platforms; std:: distributions are avoided for the same reason.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  // Uniform in [0, 1).
  double uniform();

  // Uniform integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n);

  // Standard normal via Box-Muller on our own uniforms.
  double gauss();

  // Derive an independent child stream; deterministic in (parent seed, id).
  Rng child(std::uint64_t stream_id) const;

  // Sample an index from unnormalized non-negative weights.
  std::size_t categorical(const std::vector<double>& weights);

 private:
  std::uint64_t state_;
};

// Stable mix of two 64-bit values, used to derive per-trial seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace qplab
