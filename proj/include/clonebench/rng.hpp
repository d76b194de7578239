// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace clonebench {

class BitString;

// Seedable, splittable deterministic stream. Every stochastic operation in
// the toolkit draws from an explicit Rng; no hidden global state.
//
// split(name) derives a child stream from the *seed* (not the current stream
// position), so named sub-streams stay stable when unrelated draws are added
// elsewhere. fork() derives a child from the current position, for per-trial
// independence inside a loop.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  static Rng from_os_entropy();

  std::uint64_t seed() const noexcept { return seed_; }

  Rng split(std::string_view name) const;
  Rng split(std::uint64_t index) const;
  Rng fork() { return Rng(next_u64()); }

  std::uint64_t next_u64() { return engine_(); }
  int bit() { return static_cast<int>(engine_() >> 63); }
  double uniform01();
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  // Uniform in [0, n), n >= 1. Unbiased (rejection on the top range).
  std::size_t uniform_index(std::size_t n);
  BitString bits(std::size_t n);

  static std::uint64_t mix(std::uint64_t x);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> gauss_;
};

}  // namespace clonebench
