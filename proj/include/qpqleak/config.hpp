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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qpqleak {

enum class AttackKind : std::uint8_t { hbc, ud, med };

/// How HbC round likelihoods are oriented in the multi-round simulation.
///   faithful      - toward the attacker's own final-bit guess
///   paper_literal - toward the true item value, with the guess's confidence
enum class SimMode : std::uint8_t { faithful, paper_literal };

enum class OutputFormat : std::uint8_t { csv, json };

constexpr std::string_view to_string(AttackKind a) noexcept {
  switch (a) {
    case AttackKind::hbc: return "hbc";
    case AttackKind::ud: return "ud";
    case AttackKind::med: return "med";
  }
  return "?";
}

constexpr std::string_view to_string(SimMode m) noexcept {
  return m == SimMode::faithful ? "faithful" : "paper-literal";
}

inline std::optional<AttackKind> parse_attack(std::string_view s) {
  if (s == "hbc") return AttackKind::hbc;
  if (s == "ud") return AttackKind::ud;
  if (s == "med") return AttackKind::med;
  return std::nullopt;
}

inline std::optional<SimMode> parse_sim_mode(std::string_view s) {
  if (s == "faithful") return SimMode::faithful;
  if (s == "paper-literal" || s == "paper_literal") return SimMode::paper_literal;
  return std::nullopt;
}

inline std::optional<OutputFormat> parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  return std::nullopt;
}

struct ExperimentConfig {
  int k = 6;
  long long n = 32000;
  int rounds = 2000;
  int trials = 4;
  AttackKind attack = AttackKind::hbc;
  int defense_segments = 1;
  SimMode sim_mode = SimMode::faithful;
  std::uint64_t seed = 42;
  OutputFormat format = OutputFormat::csv;
  std::string output_path;  // empty: standard output

  void validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
    if (k < 1 || k > 32) fail("k must be in [1, 32]");
    if (n < 1 || n > 1'000'000) fail("n must be in [1, 1000000]");
    if (rounds < 1 || rounds > 10'000) fail("rounds must be in [1, 10000]");
    if (trials < 1) fail("trials must be >= 1");
    if (defense_segments < 1 || defense_segments > 3) fail("defense-segments must be 1, 2 or 3");
  }
};

}  // namespace qpqleak
