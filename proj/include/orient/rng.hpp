#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace orient {

// xoshiro256++ with splitmix64 seeding. `split(key)` derives an independent
// substream from (stream key, child key) without advancing this generator, so
// per-immigrant / per-replicate streams are reproducible in any visit order.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0x5eed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform on the open interval (0, 1).
  double uniform();

  Rng split(std::uint64_t key) const;

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::array<std::uint64_t, 4> s_{};
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace orient
