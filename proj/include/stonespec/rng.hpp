#pragma once

#include <cstdint>
#include <string_view>

namespace stonespec {

/// Splittable counter-based generator. A stream is identified by a 64-bit
/// key; drawing advances a counter and mixes (key, counter) through the
/// SplitMix64 finalizer, so any substream can be replayed independently of
/// every other. All derived values (uniforms, Gaussians) are computed with
/// explicit bit arithmetic and are therefore reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Child stream. Children with distinct ids are statistically independent
  /// of each other and of the parent; splitting does not advance the parent.
  [[nodiscard]] Rng split(std::uint64_t stream) const;
  [[nodiscard]] Rng split(std::string_view name) const;

  std::uint64_t next_u64();
  /// Uniform in [0, 1).
  double uniform();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal via Box-Muller.
  double gaussian();

 private:
  Rng(std::uint64_t key, int) : key_(key) {}
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// FNV-1a, used to derive substream ids from suite/property names.
std::uint64_t fnv1a(std::string_view text);

}  // namespace stonespec
