#pragma once

// Seeded randomness with a pinned algorithm. Bounded integers and unit reals
// are derived here instead of through std distributions, whose output is
// implementation-defined, so runs reproduce across standard libraries.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace cforge {

std::uint64_t splitmix64(std::uint64_t x);

// FNV-1a over the bytes, finished with splitmix64.
std::uint64_t stable_hash(std::string_view bytes);

class Rng {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64";

  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, bound); bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound);
  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::string state() const;
  void restore(const std::string& state);

  friend bool operator==(const Rng& a, const Rng& b) { return a.engine_ == b.engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cforge
