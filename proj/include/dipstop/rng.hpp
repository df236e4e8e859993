#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace dipstop {

std::uint64_t fnv1a64(std::string_view s);
std::uint64_t splitmix64(std::uint64_t& state);

// Seed for the stream a (root, label) pair names; Rng::stream uses this.
std::uint64_t derive_seed(std::uint64_t root, std::string_view label);

// Deterministic random stream (xoshiro256++ core, splitmix64 seeding).
// All transforms are done with portable arithmetic so a (seed, label) pair
// reproduces the same draws on every platform and build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller; pairs are cached.
  double normal();
  double normal(double mean, double stddev);

  // Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi);

  bool bernoulli(double p) { return uniform() < p; }

  // Independent stream derived from the root seed and a label. Derivation
  // ignores consumed state, so streams do not depend on draw order.
  Rng stream(std::string_view label) const;

  std::uint64_t root_seed() const { return root_seed_; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j =
          static_cast<std::size_t>(uniform_int(0, static_cast<int>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t root_seed_ = 0;
  std::uint64_t s_[4] = {0, 0, 0, 0};
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace dipstop
