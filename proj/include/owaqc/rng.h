#pragma once

// Seeded random streams. Every consumer draws from its own named stream,
// derived from one top-level seed, so adding a consumer never perturbs the
// numbers another consumer sees.

#include <cstdint>
#include <random>
#include <string_view>

namespace owaqc {

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

std::uint64_t derive_stream_seed(std::uint64_t seed, std::string_view name);

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::string_view name)
      : engine_(derive_stream_seed(seed, name)) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }
  int bit() { return static_cast<int>(engine_() >> 63); }

  double normal() { return normal_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace owaqc
