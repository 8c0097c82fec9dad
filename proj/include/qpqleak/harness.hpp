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

// Experiment driver: trial fan-out, aggregation, and CSV/JSON emission.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qpqleak/analytics.hpp"
#include "qpqleak/attacks.hpp"
#include "qpqleak/config.hpp"

namespace qpqleak {

inline constexpr const char* kResultCsvHeader = "round,series,mean_info,stderr,trials,k,n,seed";
inline constexpr const char* kTableCsvHeader = "table,series,k,value";

struct ResultRow {
  int round = 0;
  std::string series;
  double mean_info = 0.0;
  double std_err = 0.0;
  int trials = 0;
  int k = 0;
  long long n = 0;
  std::uint64_t seed = 0;
};

struct TableRow {
  std::string table;  // "I" or "II"
  std::string series;
  int k = 0;
  double value = 0.0;
};

/// Ten significant digits, locale independent.
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

/// Every round up to 2000; beyond that roughly 1% geometric spacing plus the last round.
inline std::vector<int> recorded_rounds(int m) {
  std::vector<int> out;
  for (int r = 1; r <= std::min(m, 2000); ++r) out.push_back(r);
  double next = 2000.0;
  for (int r = 2001; r <= m; ++r) {
    if (r >= next * 1.01 || r == m) {
      out.push_back(r);
      next = r;
    }
  }
  return out;
}

namespace detail {

struct SeriesStats {
  double mean;
  double std_err;
};

inline SeriesStats across_trials(const std::vector<TrialTrajectory>& trials,
                                 std::vector<double> TrialTrajectory::*series, std::size_t idx) {
  const double count = static_cast<double>(trials.size());
  double sum = 0.0;
  for (const auto& t : trials) sum += (t.*series)[idx];
  const double mean = sum / count;
  if (trials.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (const auto& t : trials) {
    const double d = (t.*series)[idx] - mean;
    ss += d * d;
  }
  return {mean, std::sqrt(ss / (count - 1.0) / count)};
}

}  // namespace detail

/// Runs every trial of `config` on up to `workers` threads (0: hardware
/// concurrency) and reduces in trial order, so output is independent of
/// scheduling.
inline std::vector<TrialTrajectory> run_trials(const ExperimentConfig& config, unsigned workers = 0) {
  config.validate();
  const auto trials = static_cast<std::size_t>(config.trials);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, trials));

  std::vector<TrialTrajectory> results(trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t t = next++; t < trials; t = next++) {
      try {
        results[t] = run_multi_round(config, t);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

inline std::vector<ResultRow> aggregate(const ExperimentConfig& config,
                                        const std::vector<TrialTrajectory>& trials) {
  std::vector<ResultRow> rows;
  const bool defended = config.defense_segments >= 2;
  auto emit = [&](int round, std::string series, detail::SeriesStats st) {
    rows.push_back({round, std::move(series), std::clamp(st.mean, 0.0, 1.0), st.std_err,
                    config.trials, config.k, config.n, config.seed});
  };
  for (int r : recorded_rounds(config.rounds)) {
    const auto idx = static_cast<std::size_t>(r - 1);
    emit(r, "honest", detail::across_trials(trials, &TrialTrajectory::honest, idx));
    emit(r, std::string(to_string(config.attack)),
         detail::across_trials(trials, &TrialTrajectory::attack, idx));
    if (defended) emit(r, "defense", detail::across_trials(trials, &TrialTrajectory::defense, idx));
  }
  return rows;
}

inline std::vector<ResultRow> simulate(const ExperimentConfig& config, unsigned workers = 0) {
  return aggregate(config, run_trials(config, workers));
}

inline std::vector<TableRow> analytic_tables(int k_min, int k_max) {
  if (k_min < 1 || k_max > 32 || k_min > k_max)
    throw std::invalid_argument("k range must satisfy 1 <= k-min <= k-max <= 32");
  std::vector<TableRow> rows;
  for (int k = k_min; k <= k_max; ++k) {
    const double hbc = analytics::info_hbc_single(k);
    const double honest = analytics::info_honest_single(k);
    rows.push_back({"I", "hbc", k, hbc});
    rows.push_back({"I", "honest", k, honest});
    rows.push_back({"I", "ratio", k, hbc / honest});
  }
  for (int k = k_min; k <= k_max; ++k) {
    const double med = analytics::info_med_single(k);
    const double ud = analytics::info_ud_single(k);
    rows.push_back({"II", "med", k, med});
    rows.push_back({"II", "ud", k, ud});
    rows.push_back({"II", "ratio", k, med / ud});
  }
  return rows;
}

/// Exact multi-round trajectories for m = 1..m_max.  HbC has no closed form.
inline std::vector<ResultRow> analytic_curves(int k, int m_max, long long n,
                                              const std::set<AttackKind>& attacks) {
  if (k < 1 || k > 32) throw std::invalid_argument("k must be in [1, 32]");
  if (m_max < 1 || m_max > 10'000) throw std::invalid_argument("rounds must be in [1, 10000]");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (attacks.contains(AttackKind::hbc))
    throw std::invalid_argument("no analytic multi-round curve for hbc; use simulate");
  std::vector<ResultRow> rows;
  for (int m = 1; m <= m_max; ++m) {
    rows.push_back({m, "honest", analytics::info_honest_multi(k, m, n), 0.0, 0, k, n, 0});
    if (attacks.contains(AttackKind::med))
      rows.push_back({m, "med", analytics::info_med_multi(k, m), 0.0, 0, k, n, 0});
    if (attacks.contains(AttackKind::ud))
      rows.push_back({m, "ud", analytics::info_ud_multi(k, m), 0.0, 0, k, n, 0});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Writers

inline void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << kResultCsvHeader << '\n';
  for (const auto& r : rows)
    os << r.round << ',' << r.series << ',' << format_number(r.mean_info) << ','
       << format_number(r.std_err) << ',' << r.trials << ',' << r.k << ',' << r.n << ',' << r.seed
       << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<TableRow>& rows) {
  os << kTableCsvHeader << '\n';
  for (const auto& r : rows)
    os << r.table << ',' << r.series << ',' << r.k << ',' << format_number(r.value) << '\n';
}

namespace detail {
// Round-trip through the CSV text so both formats carry the same digits.
inline double as_emitted(double v) { return std::strtod(format_number(v).c_str(), nullptr); }
}  // namespace detail

inline void write_json(std::ostream& os, const std::vector<ResultRow>& rows) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    arr.push_back({{"round", r.round},
                   {"series", r.series},
                   {"mean_info", detail::as_emitted(r.mean_info)},
                   {"stderr", detail::as_emitted(r.std_err)},
                   {"trials", r.trials},
                   {"k", r.k},
                   {"n", r.n},
                   {"seed", r.seed}});
  }
  os << arr.dump(1) << '\n';
}

inline void write_json(std::ostream& os, const std::vector<TableRow>& rows) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows)
    arr.push_back({{"table", r.table}, {"series", r.series}, {"k", r.k}, {"value", detail::as_emitted(r.value)}});
  os << arr.dump(1) << '\n';
}

template <typename Row>
void write_rows(std::ostream& os, const std::vector<Row>& rows, OutputFormat fmt) {
  if (fmt == OutputFormat::csv)
    write_csv(os, rows);
  else
    write_json(os, rows);
}

}  // namespace qpqleak
