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

// Attacker models and per-item belief tracking.
//
// A RoundLikelihood is a distribution over one bit (key bit or item bit)
// induced by a single round's observation, l0 + l1 = 1.  Beliefs are combined
// across rounds by Bayes' rule; 2-3 key segments XOR together with their
// biases (l0 - l1) multiplying.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "qpqleak/analytics.hpp"
#include "qpqleak/config.hpp"
#include "qpqleak/distillation.hpp"
#include "qpqleak/protocol.hpp"
#include "qpqleak/random.hpp"

namespace qpqleak {

inline constexpr double kBeliefClamp = 1e-12;

class DegenerateUpdate : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Belief {
  double p0 = 0.5;

  double p1() const noexcept { return 1.0 - p0; }
  Belief clamped() const noexcept { return {std::clamp(p0, kBeliefClamp, 1.0 - kBeliefClamp)}; }
};

struct RoundLikelihood {
  double l0 = 0.5;
  double l1 = 0.5;

  /// Confidence q on `bit`, 1 - q on the other value.
  static constexpr RoundLikelihood toward(Bit bit, double q) noexcept {
    return bit ? RoundLikelihood{1.0 - q, q} : RoundLikelihood{q, 1.0 - q};
  }
  static constexpr RoundLikelihood uninformative() noexcept { return {0.5, 0.5}; }

  constexpr RoundLikelihood swapped() const noexcept { return {l1, l0}; }
  constexpr double bias() const noexcept { return l0 - l1; }
};

/// Key-bit likelihood seen through a ciphertext bit: item = cipher ^ key.
constexpr RoundLikelihood item_likelihood(RoundLikelihood key_like, Bit cipher) noexcept {
  return cipher ? key_like.swapped() : key_like;
}

// ---------------------------------------------------------------------------
// Honest-but-curious direct observation

enum class GuessKind : std::uint8_t { known, guessed };

struct RawGuess {
  Bit bit;
  GuessKind kind;
};

/// Inconclusive bits are set to the bit the user's own basis encodes.
constexpr RawGuess hbc_guess_raw(const RawBitRecord& rec) noexcept {
  if (rec.knowledge) return {*rec.knowledge, GuessKind::known};
  return {encoded_bit(rec.alice_basis), GuessKind::guessed};
}

struct FinalBitObservation {
  Bit guess;      // XOR of the k known/guessed raw bits
  int uncertain;  // number of guessed constituents
};

template <typename RecordAt>
FinalBitObservation hbc_observe(int k, RecordAt&& record_at) {
  FinalBitObservation obs{0, 0};
  for (int t = 0; t < k; ++t) {
    const RawGuess g = hbc_guess_raw(record_at(t));
    obs.guess ^= g.bit;
    obs.uncertain += g.kind == GuessKind::guessed ? 1 : 0;
  }
  return obs;
}

inline FinalBitObservation hbc_observe(std::span<const RawBitRecord> records) {
  return hbc_observe(static_cast<int>(records.size()),
                     [&](int t) -> const RawBitRecord& { return records[static_cast<std::size_t>(t)]; });
}

/// Likelihood over the final key bit built from its k constituent records.
inline RoundLikelihood hbc_round_likelihood(std::span<const RawBitRecord> records, int k) {
  if (k < 1 || records.size() != static_cast<std::size_t>(k))
    throw std::invalid_argument("hbc_round_likelihood: expected exactly k records");
  const auto obs = hbc_observe(records);
  return RoundLikelihood::toward(obs.guess, analytics::q_correct(obs.uncertain));
}

// ---------------------------------------------------------------------------
// Quantum-memory attacks, sampled from their exact per-round statistics.

namespace detail {

template <RandomSource Rng>
RoundLikelihood sample_guess(double q, Bit true_bit, Rng& rng) {
  const Bit guess = rng.bernoulli(q) ? true_bit : static_cast<Bit>(true_bit ^ 1);
  return RoundLikelihood::toward(guess, q);
}

template <RandomSource Rng>
RoundLikelihood sample_identified(double p, Bit true_bit, Rng& rng) {
  if (rng.bernoulli(p)) return RoundLikelihood::toward(true_bit, 1.0);
  return RoundLikelihood::uninformative();
}

}  // namespace detail

/// A final-bit guess that is right with probability med_correct_final(k).
template <RandomSource Rng>
RoundLikelihood med_round_sample(int k, Bit true_bit, Rng& rng) {
  return detail::sample_guess(analytics::med_correct_final(k), true_bit, rng);
}

/// Certain when all k raw bits were identified, uninformative otherwise.
template <RandomSource Rng>
RoundLikelihood ud_round_sample(int k, Bit true_bit, Rng& rng) {
  return detail::sample_identified(analytics::info_ud_single(k), true_bit, rng);
}

// ---------------------------------------------------------------------------

inline Belief bayes_update(Belief prior, RoundLikelihood like) {
  const double num = prior.p0 * like.l0;
  const double den = num + prior.p1() * like.l1;
  if (!(den > 0.0)) throw DegenerateUpdate("bayes_update: zero evidence for both item values");
  return {num / den};
}

/// Likelihood on the XOR of 2 or 3 independently observed segment bits.
inline RoundLikelihood defense_combine(std::span<const RoundLikelihood> segments) {
  if (segments.size() < 2 || segments.size() > 3)
    throw std::invalid_argument("defense_combine: expected 2 or 3 segments");
  double bias = 1.0;
  for (const auto& s : segments) bias *= s.bias();
  return {0.5 * (1.0 + bias), 0.5 * (1.0 - bias)};
}

/// 1 - H(p0), information held about one item.
inline double belief_info(Belief b) { return 1.0 - analytics::binary_entropy(b.p0); }

// ---------------------------------------------------------------------------
// Multi-round simulation of one trial.

/// Per-round mean item information for each tracked series of one trial.
struct TrialTrajectory {
  std::vector<double> honest;   // known-item fraction, single-key protocol
  std::vector<double> attack;   // undefended attacker
  std::vector<double> defense;  // attacker against multi-key encryption (segments >= 2)
};

namespace detail {

class BeliefTrack {
 public:
  explicit BeliefTrack(std::size_t n) : p0_(n, 0.5) {}

  void update(std::size_t item, RoundLikelihood like) {
    p0_[item] = bayes_update(Belief{p0_[item]}, like).clamped().p0;
  }

  double mean_info() const {
    double sum = 0.0;
    for (double p : p0_) sum += belief_info(Belief{p});
    return sum / static_cast<double>(p0_.size());
  }

 private:
  std::vector<double> p0_;
};

class KnownTrack {
 public:
  explicit KnownTrack(std::size_t n) : known_(n, 0) {}

  void mark(std::size_t item) {
    if (!known_[item]) {
      known_[item] = 1;
      ++count_;
    }
  }
  double fraction() const { return static_cast<double>(count_) / static_cast<double>(known_.size()); }

 private:
  std::vector<std::uint8_t> known_;
  std::size_t count_ = 0;
};

// One key segment of one round, as produced by the real protocol transcript.
struct SegmentRound {
  std::vector<RawBitRecord> records;
  FinalKey key;
  KnowledgeVector knowledge;
};

template <RandomSource Rng>
void run_segment(std::size_t k, std::size_t n, Rng& rng, SegmentRound& seg) {
  run_raw_round(k * n, rng, seg.records);
  seg.key = distill(raw_key_of(seg.records, k, n));
  seg.knowledge = propagate_knowledge(seg.records, k, n);
}

inline RoundLikelihood hbc_key_likelihood(const SegmentRound& seg, std::size_t pos, int k,
                                          std::size_t n, SimMode mode,
                                          std::span<const double> q_by_uncertain) {
  const auto obs = hbc_observe(k, [&](int t) -> const RawBitRecord& {
    return seg.records[static_cast<std::size_t>(t) * n + pos];
  });
  const double q = q_by_uncertain[static_cast<std::size_t>(obs.uncertain)];
  const Bit toward = mode == SimMode::faithful ? obs.guess : seg.key.bits[pos];
  return RoundLikelihood::toward(toward, q);
}

}  // namespace detail

/// Simulates `config.rounds` query rounds against one random n-item database.
///
/// Randomness for setup comes from substream (trial, 0) and for round r from
/// substream (trial, r), so trials can run on any worker in any order.
inline TrialTrajectory run_multi_round(const ExperimentConfig& config, std::uint64_t trial) {
  config.validate();
  const int k = config.k;
  const auto n = static_cast<std::size_t>(config.n);
  const auto m = static_cast<std::size_t>(config.rounds);
  const auto segments = static_cast<std::size_t>(config.defense_segments);
  const bool defended = segments >= 2;

  TrialTrajectory out;
  out.honest.reserve(m);
  out.attack.reserve(m);
  if (defended) out.defense.reserve(m);

  Database db{BitString(n)};
  {
    auto rng = RandomStream::for_round(config.seed, trial, 0);
    for (auto& d : db.items) d = rng.bit();
  }

  detail::KnownTrack honest(n);
  detail::BeliefTrack attack(n);
  detail::BeliefTrack defense(defended ? n : 0);

  const double p_honest = analytics::info_honest_single(k);
  const double q_med = analytics::med_correct_final(k);
  const double p_ud = analytics::info_ud_single(k);
  std::vector<double> q_table;
  for (int j = 0; j <= k; ++j) q_table.push_back(analytics::q_correct(j));

  std::vector<detail::SegmentRound> seg(segments);
  std::vector<ShiftDeclaration> shifts;
  std::vector<RoundLikelihood> seg_like(segments);
  std::vector<Bit> key_bits(segments);

  for (std::size_t round = 1; round <= m; ++round) {
    auto rng = RandomStream::for_round(config.seed, trial, round);

    if (config.attack == AttackKind::hbc) {
      // Segment 0 doubles as the single-key protocol run.
      const std::size_t target = static_cast<std::size_t>(rng.below(n));
      shifts.clear();
      for (std::size_t s = 0; s < segments; ++s) {
        detail::run_segment(static_cast<std::size_t>(k), n, rng, seg[s]);
        shifts.push_back(honest_shift(seg[s].knowledge, target, rng));
      }

      const std::size_t s0 = shifts[0].value();
      const Database cipher = encrypt_single(db, seg[0].key, shifts[0]);
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t pos = (i + s0) % n;
        if (seg[0].knowledge[pos]) honest.mark(i);
        attack.update(i, item_likelihood(detail::hbc_key_likelihood(seg[0], pos, k, n, config.sim_mode, q_table),
                                         cipher.items[i]));
      }

      if (defended) {
        std::vector<FinalKey> keys;
        for (const auto& sg : seg) keys.push_back(sg.key);
        const Database cipher_multi = encrypt_multi(db, keys, shifts);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t s = 0; s < segments; ++s)
            seg_like[s] = detail::hbc_key_likelihood(seg[s], (i + shifts[s].value()) % n, k, n,
                                                     config.sim_mode, q_table);
          defense.update(i, item_likelihood(defense_combine(seg_like), cipher_multi.items[i]));
        }
      }
    } else {
      auto sample = [&](Bit key_bit) {
        return config.attack == AttackKind::med ? detail::sample_guess(q_med, key_bit, rng)
                                                : detail::sample_identified(p_ud, key_bit, rng);
      };
      for (std::size_t i = 0; i < n; ++i) {
        if (rng.bernoulli(p_honest)) honest.mark(i);

        const Bit key_bit = rng.bit();
        attack.update(i, item_likelihood(sample(key_bit), static_cast<Bit>(db.items[i] ^ key_bit)));

        if (defended) {
          Bit key_xor = 0;
          for (std::size_t s = 0; s < segments; ++s) {
            key_bits[s] = rng.bit();
            key_xor ^= key_bits[s];
            seg_like[s] = sample(key_bits[s]);
          }
          defense.update(i, item_likelihood(defense_combine(seg_like),
                                            static_cast<Bit>(db.items[i] ^ key_xor)));
        }
      }
    }

    out.honest.push_back(honest.fraction());
    out.attack.push_back(attack.mean_info());
    if (defended) out.defense.push_back(defense.mean_info());
  }
  return out;
}

}  // namespace qpqleak
