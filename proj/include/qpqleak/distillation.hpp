// Copyright 2026 The qpqleak Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Key distillation, shift declaration, and database encryption.
//
// Raw key layout: k consecutive blocks of length n; final bit i is the XOR of
// raw positions {i, n+i, ..., (k-1)n+i}.  Encryption convention:
//   c_i = d_i ^ key[(i + s) mod n],   s = (a - t) mod n
// so that the user's known key position a lands on target item t.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qpqleak/protocol.hpp"
#include "qpqleak/random.hpp"

namespace qpqleak {

using BitString = std::vector<Bit>;
using KnowledgeVector = std::vector<Knowledge>;

class RawKey {
 public:
  RawKey(BitString bits, std::size_t k, std::size_t n) : bits_(std::move(bits)), k_(k), n_(n) {
    if (k_ == 0 || n_ == 0) throw std::invalid_argument("RawKey: k and n must be >= 1");
    if (bits_.size() != k_ * n_)
      throw std::invalid_argument("RawKey: length " + std::to_string(bits_.size()) +
                                  " != k*n = " + std::to_string(k_ * n_));
  }

  const BitString& bits() const noexcept { return bits_; }
  std::size_t k() const noexcept { return k_; }
  std::size_t n() const noexcept { return n_; }

 private:
  BitString bits_;
  std::size_t k_;
  std::size_t n_;
};

struct FinalKey {
  BitString bits;

  std::size_t size() const noexcept { return bits.size(); }
  friend bool operator==(const FinalKey&, const FinalKey&) = default;
};

struct Database {
  BitString items;

  std::size_t size() const noexcept { return items.size(); }
  friend bool operator==(const Database&, const Database&) = default;
};

class ShiftDeclaration {
 public:
  ShiftDeclaration(std::size_t s, std::size_t n) : s_(s) {
    if (n == 0 || s >= n) throw std::invalid_argument("ShiftDeclaration: shift out of [0, n)");
  }
  std::size_t value() const noexcept { return s_; }

 private:
  std::size_t s_;
};

/// Bob's side of a raw round.
inline RawKey raw_key_of(std::span<const RawBitRecord> records, std::size_t k, std::size_t n) {
  BitString bits;
  bits.reserve(records.size());
  for (const auto& r : records) bits.push_back(r.bob_bit);
  return RawKey(std::move(bits), k, n);
}

inline FinalKey distill(const RawKey& raw) {
  const std::size_t n = raw.n();
  FinalKey out{BitString(raw.bits().begin(), raw.bits().begin() + static_cast<std::ptrdiff_t>(n))};
  for (std::size_t t = 1; t < raw.k(); ++t)
    for (std::size_t i = 0; i < n; ++i) out.bits[i] ^= raw.bits()[t * n + i];
  return out;
}

/// Position i is known iff all k constituent records are conclusive.
inline KnowledgeVector propagate_knowledge(std::span<const RawBitRecord> records, std::size_t k,
                                           std::size_t n) {
  if (k == 0 || n == 0 || records.size() != k * n)
    throw std::invalid_argument("propagate_knowledge: expected k*n records");
  KnowledgeVector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Bit acc = 0;
    bool known = true;
    for (std::size_t t = 0; t < k && known; ++t) {
      const auto& rec = records[t * n + i];
      known = rec.conclusive();
      if (known) acc ^= *rec.knowledge;
    }
    if (known) out[i] = acc;
  }
  return out;
}

inline ShiftDeclaration declare_shift(std::size_t known_position, std::size_t target,
                                      std::size_t n) {
  if (known_position >= n || target >= n)
    throw std::invalid_argument("declare_shift: index out of range");
  return ShiftDeclaration((known_position + n - target) % n, n);
}

/// Honest shift choice: align a uniformly chosen known position with `target`,
/// or declare a uniformly random shift when nothing is known.
template <RandomSource Rng>
ShiftDeclaration honest_shift(const KnowledgeVector& knowledge, std::size_t target, Rng& rng) {
  const std::size_t n = knowledge.size();
  std::vector<std::size_t> known;
  for (std::size_t i = 0; i < n; ++i)
    if (knowledge[i]) known.push_back(i);
  if (known.empty()) return ShiftDeclaration(static_cast<std::size_t>(rng.below(n)), n);
  return declare_shift(known[static_cast<std::size_t>(rng.below(known.size()))], target, n);
}

/// rotate(key, s)[i] = key[(i + s) mod n]
inline FinalKey rotate(const FinalKey& key, ShiftDeclaration s) {
  const std::size_t n = key.size();
  FinalKey out{BitString(n)};
  for (std::size_t i = 0; i < n; ++i) out.bits[i] = key.bits[(i + s.value()) % n];
  return out;
}

inline Database encrypt_single(const Database& db, const FinalKey& key, ShiftDeclaration s) {
  const std::size_t n = db.size();
  if (key.size() != n) throw std::invalid_argument("encrypt_single: key/database length mismatch");
  if (s.value() >= n) throw std::invalid_argument("encrypt_single: shift out of range");
  Database out{BitString(n)};
  for (std::size_t i = 0; i < n; ++i) out.items[i] = db.items[i] ^ key.bits[(i + s.value()) % n];
  return out;
}

/// Multi-key encryption with 2 or 3 independently shifted key segments.
inline Database encrypt_multi(const Database& db, std::span<const FinalKey> keys,
                              std::span<const ShiftDeclaration> shifts) {
  if (keys.size() != shifts.size())
    throw std::invalid_argument("encrypt_multi: key/shift count mismatch");
  if (keys.size() < 2 || keys.size() > 3)
    throw std::invalid_argument("encrypt_multi: segment count must be 2 or 3");
  Database out = db;
  for (std::size_t seg = 0; seg < keys.size(); ++seg) out = encrypt_single(out, keys[seg], shifts[seg]);
  return out;
}

}  // namespace qpqleak
