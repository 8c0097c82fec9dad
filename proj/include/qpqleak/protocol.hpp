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

// Oblivious-key transmission at the level of measurement statistics.
//
// The four signal states are carried as symbolic tags with a fixed
// orthogonality table.  Bob prepares, Alice measures in a random basis, Bob
// announces {sent, decoy}, and Alice's record is conclusive when exactly one
// of the announced states is excluded by her outcome.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qpqleak/random.hpp"

namespace qpqleak {

using Bit = std::uint8_t;

enum class Basis : std::uint8_t { rectilinear, diagonal };

/// Rectilinear encodes 0, diagonal encodes 1.
constexpr Bit encoded_bit(Basis b) noexcept { return b == Basis::diagonal ? 1 : 0; }

constexpr Basis complement(Basis b) noexcept {
  return b == Basis::rectilinear ? Basis::diagonal : Basis::rectilinear;
}

enum class State : std::uint8_t { z0, z1, x_plus, x_minus };

inline constexpr std::array<State, 4> kAllStates{State::z0, State::z1, State::x_plus,
                                                 State::x_minus};

constexpr Basis basis_of(State s) noexcept {
  return (s == State::z0 || s == State::z1) ? Basis::rectilinear : Basis::diagonal;
}

constexpr Bit key_bit(State s) noexcept { return encoded_bit(basis_of(s)); }

/// The two eigenstates of a basis, in a fixed order ({z0, z1} or {x_plus, x_minus}).
constexpr std::array<State, 2> basis_states(Basis b) noexcept {
  return b == Basis::rectilinear ? std::array{State::z0, State::z1}
                                 : std::array{State::x_plus, State::x_minus};
}

/// Only distinct states of the same basis are orthogonal.
constexpr bool orthogonal(State a, State b) noexcept {
  return a != b && basis_of(a) == basis_of(b);
}

struct Declaration {
  State sent;
  State decoy;

  friend constexpr bool operator==(const Declaration&, const Declaration&) = default;
};

/// Conclusive records carry the bit Alice learned; inconclusive ones are empty.
using Knowledge = std::optional<Bit>;

struct RawBitRecord {
  Bit bob_bit;
  Basis alice_basis;
  State alice_outcome;
  Declaration declaration;
  Knowledge knowledge;

  State sent() const noexcept { return declaration.sent; }
  bool conclusive() const noexcept { return knowledge.has_value(); }
};

template <RandomSource Rng>
State prepare_random(Rng& rng) {
  return kAllStates[static_cast<std::size_t>(rng.bits(2))];
}

template <RandomSource Rng>
Basis random_basis(Rng& rng) {
  return rng.bits(1) ? Basis::diagonal : Basis::rectilinear;
}

/// Projective measurement: deterministic in the matching basis, a fair coin
/// between the two eigenstates otherwise.
template <RandomSource Rng>
State measure(State state, Basis basis, Rng& rng) {
  if (basis_of(state) == basis) return state;
  return basis_states(basis)[static_cast<std::size_t>(rng.bits(1))];
}

template <RandomSource Rng>
Declaration declare(State sent, Rng& rng) {
  const auto others = basis_states(complement(basis_of(sent)));
  return {sent, others[static_cast<std::size_t>(rng.bits(1))]};
}

constexpr Knowledge resolve(State outcome, const Declaration& decl) noexcept {
  const bool excludes_sent = orthogonal(outcome, decl.sent);
  const bool excludes_decoy = orthogonal(outcome, decl.decoy);
  if (excludes_sent == excludes_decoy) return std::nullopt;
  return key_bit(excludes_decoy ? decl.sent : decl.decoy);
}

template <RandomSource Rng>
RawBitRecord transmit_one(Rng& rng) {
  const State sent = prepare_random(rng);
  const Basis basis = random_basis(rng);
  const State outcome = measure(sent, basis, rng);
  const Declaration decl = declare(sent, rng);
  return {key_bit(sent), basis, outcome, decl, resolve(outcome, decl)};
}

template <RandomSource Rng>
void run_raw_round(std::size_t length, Rng& rng, std::vector<RawBitRecord>& out) {
  if (length == 0) throw std::invalid_argument("run_raw_round: length must be >= 1");
  out.clear();
  out.reserve(length);
  for (std::size_t i = 0; i < length; ++i) out.push_back(transmit_one(rng));
}

template <RandomSource Rng>
std::vector<RawBitRecord> run_raw_round(std::size_t length, Rng& rng) {
  std::vector<RawBitRecord> out;
  run_raw_round(length, rng, out);
  return out;
}

}  // namespace qpqleak
