// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clonebench/rng.hpp"

#include <limits>

#include "clonebench/bitstring.hpp"

namespace clonebench {
namespace {

// FNV-1a; stable across platforms, unlike std::hash.
std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

// splitmix64 finalizer
std::uint64_t Rng::mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::from_os_entropy() {
  std::random_device rd;
  const std::uint64_t hi = rd();
  const std::uint64_t lo = rd();
  return Rng((hi << 32) ^ lo);
}

Rng Rng::split(std::string_view name) const {
  return Rng(mix(seed_ ^ mix(fnv1a(name))));
}

Rng Rng::split(std::uint64_t index) const {
  return Rng(mix(seed_ + mix(index ^ 0x5851f42d4c957f2dULL)));
}

double Rng::uniform01() {
  // 53 random mantissa bits, in [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() { return gauss_(engine_); }

std::size_t Rng::uniform_index(std::size_t n) {
  const std::uint64_t bound = n;
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<std::size_t>(x % bound);
}

BitString Rng::bits(std::size_t n) {
  BitString out(n);
  for (std::size_t i = 0; i < n; i += 64) {
    const std::uint64_t w = engine_();
    const std::size_t take = n - i < 64 ? n - i : 64;
    for (std::size_t b = 0; b < take; ++b) out.set(i + b, (w >> b) & 1u);
  }
  return out;
}

}  // namespace clonebench
