// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace clonebench {

// Ordered bit sequence carrying challenges, responses, keys and fingerprints.
//
// Bit 0 is the first bit. Text forms are MSB-first: bit 0 is the leading
// character of "0110" and the high bit of the first hex digit. Storage packs
// bit i into word i / 64 at position i % 64; bits past size() are always 0.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

  // "0110..." (characters '0' / '1').
  static BitString from_binary(std::string_view text);
  // Lowercase or uppercase hex, MSB-first. nbits defaults to 4 * digits and
  // may trim at most 3 trailing padding bits, which must be zero.
  static BitString from_hex(std::string_view hex,
                            std::optional<std::size_t> nbits = std::nullopt);
  // The low `nbits` bits of value, most significant first.
  static BitString from_u64(std::uint64_t value, std::size_t nbits = 64);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool get(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i, bool value) {
    const std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= m;
    } else {
      words_[i >> 6] &= ~m;
    }
  }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  bool operator[](std::size_t i) const { return get(i); }

  std::uint64_t to_u64() const;  // requires size() <= 64
  std::string to_hex() const;
  std::string to_binary() const;

  std::size_t popcount() const;
  BitString slice(std::size_t offset, std::size_t length) const;
  void append(const BitString& other);
  // Parity of popcount(*this & window) where window = other[offset, offset+size()).
  bool dot_window(const BitString& other, std::size_t offset) const;

  BitString& operator^=(const BitString& other);
  BitString& operator&=(const BitString& other);
  friend BitString operator^(BitString a, const BitString& b) { return a ^= b; }
  friend BitString operator&(BitString a, const BitString& b) { return a &= b; }
  friend bool operator==(const BitString&, const BitString&) = default;

  std::span<const std::uint64_t> words() const noexcept { return words_; }

 private:
  std::uint64_t word_at(std::size_t bit_offset) const;

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

std::size_t hamming_distance(const BitString& a, const BitString& b);
double fractional_hamming_distance(const BitString& a, const BitString& b);

}  // namespace clonebench
