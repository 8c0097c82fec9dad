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

// Closed-form leakage figures for the single- and multi-round attacks.
//
// Information is measured per final key bit (single round) or per database
// item (multi-round) as 1 - H(posterior), in bits.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qpqleak::analytics {

namespace detail {

inline void require_positive(long long v, const char* what) {
  if (v < 1) throw std::invalid_argument(std::string(what) + " must be >= 1");
}

inline double log_choose(long long n, long long r) {
  return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(r) + 1) -
         std::lgamma(static_cast<double>(n - r) + 1);
}

// Multiplicative form; exact for the small arguments used in the tables.
inline double choose(long long n, long long r) {
  if (r < 0 || r > n) return 0.0;
  if (r > n - r) r = n - r;
  double out = 1.0;
  for (long long i = 1; i <= r; ++i) out = out * static_cast<double>(n - r + i) / static_cast<double>(i);
  return out;
}

inline double logistic(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

// H(logistic(x)), evaluated on both tails so it stays accurate as |x| grows.
inline double entropy_of_logit(double x) {
  const double p = logistic(x);
  const double q = logistic(-x);
  double h = 0.0;
  if (p > 0) h -= p * std::log2(p);
  if (q > 0) h -= q * std::log2(q);
  return h;
}

}  // namespace detail

inline constexpr double kUdSuccess = 1.0 - std::numbers::sqrt2 / 2.0;

inline double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binary_entropy: p outside [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

/// Probability that exactly j of the k raw bits behind a final bit are inconclusive.
inline double p_uncertain(int k, int j) {
  detail::require_positive(k, "k");
  if (j < 0 || j > k) throw std::invalid_argument("p_uncertain: j outside [0, k]");
  return detail::choose(k, j) * std::pow(0.25, k - j) * std::pow(0.75, j);
}

/// Probability that the XOR of j basis-guessed bits (each right w.p. 2/3) is right:
/// the sum over even error counts.
inline double q_correct(int j) {
  if (j < 0) throw std::invalid_argument("q_correct: j must be >= 0");
  double sum = 0.0;
  for (int e = 0; e <= j; e += 2)
    sum += detail::choose(j, e) * std::pow(2.0 / 3.0, j - e) * std::pow(1.0 / 3.0, e);
  return sum;
}

inline double info_hbc_single(int k) {
  detail::require_positive(k, "k");
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) sum += p_uncertain(k, j) * (1.0 - binary_entropy(q_correct(j)));
  return sum;
}

inline double info_honest_single(int k) {
  detail::require_positive(k, "k");
  return std::pow(0.25, k);
}

/// UD only yields a final bit when every constituent raw bit is identified.
inline double info_ud_single(int k) {
  detail::require_positive(k, "k");
  return std::pow(kUdSuccess, k);
}

/// Helstrom error for two equiprobable states with overlap sqrt(2)/2.
inline double med_error() { return 0.5 * (1.0 - std::numbers::sqrt2 / 2.0); }

inline double med_correct_final(int k) {
  detail::require_positive(k, "k");
  const double pe = med_error();
  double sum = 0.0;
  for (int e = 0; e <= k; e += 2)
    sum += detail::choose(k, e) * std::pow(1.0 - pe, k - e) * std::pow(pe, e);
  return sum;
}

inline double info_med_single(int k) { return 1.0 - binary_entropy(med_correct_final(k)); }

/// Expected 1 - H(posterior) after m independent rounds, each delivering a
/// guess that is right with probability q.  Grouped by the number c of right
/// rounds; ties (2c = m) contribute nothing.  Weights are renormalized so
/// lgamma round-off cannot push the result past 1.
inline double info_multi_from_correct(double q, int m) {
  detail::require_positive(m, "m");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("info_multi_from_correct: q outside [0, 1]");
  if (q == 0.5) return 0.0;
  if (q == 0.0 || q == 1.0) return 1.0;
  const double lq = std::log(q);
  const double lnq = std::log1p(-q);
  const double logit = lq - lnq;
  double weight_sum = 0.0;
  double entropy_sum = 0.0;
  for (int c = 0; c <= m; ++c) {
    const double w = std::exp(detail::log_choose(m, c) + c * lq + (m - c) * lnq);
    weight_sum += w;
    entropy_sum += w * detail::entropy_of_logit((2.0 * c - m) * logit);
  }
  return std::clamp(1.0 - entropy_sum / weight_sum, 0.0, 1.0);
}

inline double info_med_multi(int k, int m) {
  return info_multi_from_correct(med_correct_final(k), m);
}

/// Expected fraction of items an honest user has learned after r rounds.
/// `n` is carried for the record only; the per-round targeted item is not added.
inline double info_honest_multi(int k, int r, long long n) {
  detail::require_positive(r, "r");
  detail::require_positive(n, "n");
  return -std::expm1(r * std::log1p(-info_honest_single(k)));
}

inline double info_ud_multi(int k, int m) {
  detail::require_positive(m, "m");
  return -std::expm1(m * std::log1p(-info_ud_single(k)));
}

}  // namespace qpqleak::analytics
