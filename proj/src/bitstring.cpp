// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clonebench/bitstring.hpp"

#include <bit>

#include "clonebench/error.hpp"

namespace clonebench {
namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

BitString BitString::from_binary(std::string_view text) {
  BitString out(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    require(text[i] == '0' || text[i] == '1', ErrorCode::kInvalidInput,
            "binary string may only contain '0' and '1'");
    out.set(i, text[i] == '1');
  }
  return out;
}

BitString BitString::from_hex(std::string_view hex,
                              std::optional<std::size_t> nbits) {
  const std::size_t full = hex.size() * 4;
  const std::size_t n = nbits.value_or(full);
  require(n <= full && full - n < 4, ErrorCode::kInvalidInput,
          "hex length does not match bit count");
  BitString out(full);
  for (std::size_t d = 0; d < hex.size(); ++d) {
    const int v = hex_value(hex[d]);
    require(v >= 0, ErrorCode::kInvalidInput, "invalid hex digit");
    for (int b = 0; b < 4; ++b) out.set(4 * d + b, (v >> (3 - b)) & 1);
  }
  for (std::size_t i = n; i < full; ++i) {
    require(!out.get(i), ErrorCode::kInvalidInput, "nonzero hex padding bits");
  }
  out.size_ = n;
  out.words_.resize((n + 63) / 64);
  return out;
}

BitString BitString::from_u64(std::uint64_t value, std::size_t nbits) {
  require(nbits <= 64, ErrorCode::kInvalidParameter, "from_u64 takes <= 64 bits");
  BitString out(nbits);
  for (std::size_t i = 0; i < nbits; ++i) {
    out.set(i, (value >> (nbits - 1 - i)) & 1u);
  }
  return out;
}

std::uint64_t BitString::to_u64() const {
  require(size_ <= 64, ErrorCode::kInvalidInput, "to_u64 needs <= 64 bits");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < size_; ++i) v = (v << 1) | (get(i) ? 1u : 0u);
  return v;
}

std::string BitString::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve((size_ + 3) / 4);
  for (std::size_t d = 0; 4 * d < size_; ++d) {
    int v = 0;
    for (int b = 0; b < 4; ++b) {
      const std::size_t i = 4 * d + b;
      v = (v << 1) | (i < size_ && get(i) ? 1 : 0);
    }
    out.push_back(kDigits[v]);
  }
  return out;
}

std::string BitString::to_binary() const {
  std::string out(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (get(i)) out[i] = '1';
  }
  return out;
}

std::size_t BitString::popcount() const {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::uint64_t BitString::word_at(std::size_t bit_offset) const {
  const std::size_t w = bit_offset >> 6;
  const unsigned s = bit_offset & 63;
  if (w >= words_.size()) return 0;
  std::uint64_t v = words_[w] >> s;
  if (s != 0 && w + 1 < words_.size()) v |= words_[w + 1] << (64 - s);
  return v;
}

BitString BitString::slice(std::size_t offset, std::size_t length) const {
  require(offset + length <= size_, ErrorCode::kInvalidParameter,
          "slice out of range");
  BitString out(length);
  for (std::size_t w = 0; w < out.words_.size(); ++w) {
    out.words_[w] = word_at(offset + 64 * w);
  }
  if (length % 64 != 0) out.words_.back() &= (std::uint64_t{1} << (length % 64)) - 1;
  return out;
}

void BitString::append(const BitString& other) {
  const std::size_t old = size_;
  size_ += other.size_;
  words_.resize((size_ + 63) / 64, 0);
  for (std::size_t i = 0; i < other.size_; ++i) set(old + i, other.get(i));
}

bool BitString::dot_window(const BitString& other, std::size_t offset) const {
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    acc ^= words_[w] & other.word_at(offset + 64 * w);
  }
  return std::popcount(acc) & 1;
}

BitString& BitString::operator^=(const BitString& other) {
  require(size_ == other.size_, ErrorCode::kInvalidInput, "xor length mismatch");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

BitString& BitString::operator&=(const BitString& other) {
  require(size_ == other.size_, ErrorCode::kInvalidInput, "and length mismatch");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
  return *this;
}

std::size_t hamming_distance(const BitString& a, const BitString& b) {
  require(a.size() == b.size(), ErrorCode::kInvalidInput,
          "hamming distance length mismatch");
  std::size_t n = 0;
  const auto wa = a.words();
  const auto wb = b.words();
  for (std::size_t i = 0; i < wa.size(); ++i) {
    n += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
  }
  return n;
}

double fractional_hamming_distance(const BitString& a, const BitString& b) {
  require(!a.empty(), ErrorCode::kInvalidInput, "empty bit strings");
  return static_cast<double>(hamming_distance(a, b)) /
         static_cast<double>(a.size());
}

}  // namespace clonebench
