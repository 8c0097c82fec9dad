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

// qpqleak: leakage tables, analytic curves, and Monte Carlo attack runs.
//
//   qpqleak tables   [--k-min 3 --k-max 8]
//   qpqleak curves   --k 6 --rounds 8000 [--attack med --attack ud]
//   qpqleak simulate --attack hbc --k 6 --n 32000 --rounds 2000 --trials 4 --seed 42
//
// Exit codes: 0 success, 2 usage error, 1 runtime or I/O error.

#include <fstream>
#include <iostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpqleak/qpqleak.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Opened before any work starts so an unwritable path fails fast.
class Sink {
 public:
  explicit Sink(const std::string& path) : path_(path) {
    if (path_.empty() || path_ == "-") return;
    file_.open(path_, std::ios::binary | std::ios::trunc);
    if (!file_) throw IoError("cannot open output file: " + path_);
  }

  template <typename Row>
  void write(const std::vector<Row>& rows, qpqleak::OutputFormat fmt) {
    std::ostream& os = file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout;
    qpqleak::write_rows(os, rows, fmt);
    if (!os.flush()) throw IoError("write failed: " + (path_.empty() ? "<stdout>" : path_));
  }

 private:
  std::string path_;
  std::ofstream file_;
};

qpqleak::OutputFormat format_or_throw(const std::string& s) {
  auto f = qpqleak::parse_format(s);
  if (!f) throw UsageError("unknown format '" + s + "' (expected csv or json)");
  return *f;
}

qpqleak::AttackKind attack_or_throw(const std::string& s) {
  auto a = qpqleak::parse_attack(s);
  if (!a) throw UsageError("unknown attack '" + s + "' (expected hbc, ud or med)");
  return *a;
}

// Raw flag values as parsed; merged over an optional --config file.
struct SimulateFlags {
  int k = 6;
  long long n = 32000;
  int rounds = 2000;
  int trials = 4;
  std::string attack = "hbc";
  int defense_segments = 1;
  std::string sim_mode = "faithful";
  std::uint64_t seed = 42;
  std::string format = "csv";
  std::string out;
  std::string config;
  unsigned threads = 0;
};

// Keys mirror the long flag names.
void apply_config_file(const std::string& path, SimulateFlags& f, const CLI::App& cmd) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("malformed config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  auto take = [&](const char* key, auto& field) {
    if (j.contains(key) && cmd.count(std::string("--") + key) == 0) {
      try {
        j.at(key).get_to(field);
      } catch (const nlohmann::json::exception&) {
        throw UsageError(std::string("config key '") + key + "' has the wrong type");
      }
    }
  };
  for (const auto& [key, _] : j.items()) {
    static const std::set<std::string> known{"k",  "n",    "rounds", "trials",  "attack", "defense-segments",
                                             "sim-mode", "seed", "format", "out", "threads"};
    if (!known.contains(key)) throw UsageError("unknown config key '" + key + "'");
  }
  take("k", f.k);
  take("n", f.n);
  take("rounds", f.rounds);
  take("trials", f.trials);
  take("attack", f.attack);
  take("defense-segments", f.defense_segments);
  take("sim-mode", f.sim_mode);
  take("seed", f.seed);
  take("format", f.format);
  take("out", f.out);
  take("threads", f.threads);
}

qpqleak::ExperimentConfig to_config(const SimulateFlags& f) {
  qpqleak::ExperimentConfig c;
  c.k = f.k;
  c.n = f.n;
  c.rounds = f.rounds;
  c.trials = f.trials;
  c.attack = attack_or_throw(f.attack);
  c.defense_segments = f.defense_segments;
  auto mode = qpqleak::parse_sim_mode(f.sim_mode);
  if (!mode) throw UsageError("unknown sim-mode '" + f.sim_mode + "' (expected faithful or paper-literal)");
  c.sim_mode = *mode;
  c.seed = f.seed;
  c.format = format_or_throw(f.format);
  c.output_path = f.out;
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leakage analysis for QKD-based quantum private queries"};
  app.require_subcommand(1);

  int k_min = 3;
  int k_max = 8;
  std::string tables_format = "csv";
  std::string tables_out;
  auto* tables = app.add_subcommand("tables", "Single-round leakage per final key bit (HbC/honest, MED/UD)");
  tables->add_option("--k-min", k_min, "Smallest substring count")->capture_default_str();
  tables->add_option("--k-max", k_max, "Largest substring count")->capture_default_str();
  tables->add_option("--format", tables_format, "csv or json")->capture_default_str();
  tables->add_option("--out", tables_out, "Output path (default: stdout)");

  int curves_k = 6;
  int curves_rounds = 2000;
  long long curves_n = 32000;
  std::vector<std::string> curves_attacks;
  std::string curves_format = "csv";
  std::string curves_out;
  auto* curves = app.add_subcommand("curves", "Exact multi-round curves for honest, MED and UD");
  curves->add_option("--k", curves_k, "Substring count")->capture_default_str();
  curves->add_option("--rounds", curves_rounds, "Largest round count m")->capture_default_str();
  curves->add_option("--n", curves_n, "Database size (echoed)")->capture_default_str();
  curves->add_option("--attack", curves_attacks, "med and/or ud (repeatable; default both)");
  curves->add_option("--format", curves_format, "csv or json")->capture_default_str();
  curves->add_option("--out", curves_out, "Output path (default: stdout)");

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo multi-round attack simulation");
  simulate->add_option("--k", sim.k, "Substring count")->capture_default_str();
  simulate->add_option("--n", sim.n, "Database size")->capture_default_str();
  simulate->add_option("--rounds", sim.rounds, "Query rounds")->capture_default_str();
  simulate->add_option("--trials", sim.trials, "Independent trials")->capture_default_str();
  simulate->add_option("--attack", sim.attack, "hbc, ud or med")->capture_default_str();
  simulate->add_option("--defense-segments", sim.defense_segments, "Key segments per query (1-3)")
      ->capture_default_str();
  simulate->add_option("--sim-mode", sim.sim_mode, "faithful or paper-literal")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  simulate->add_option("--format", sim.format, "csv or json")->capture_default_str();
  simulate->add_option("--out", sim.out, "Output path (default: stdout)");
  simulate->add_option("--threads", sim.threads, "Worker threads (0: all cores)")->capture_default_str();
  simulate->add_option("--config", sim.config, "JSON file with the same keys as the flags");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*tables) {
      const auto fmt = format_or_throw(tables_format);
      std::vector<qpqleak::TableRow> rows;
      try {
        rows = qpqleak::analytic_tables(k_min, k_max);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      Sink(tables_out).write(rows, fmt);
    } else if (*curves) {
      std::set<qpqleak::AttackKind> attacks;
      for (const auto& a : curves_attacks) attacks.insert(attack_or_throw(a));
      if (attacks.empty()) attacks = {qpqleak::AttackKind::med, qpqleak::AttackKind::ud};
      const auto fmt = format_or_throw(curves_format);
      std::vector<qpqleak::ResultRow> rows;
      try {
        rows = qpqleak::analytic_curves(curves_k, curves_rounds, curves_n, attacks);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      Sink(curves_out).write(rows, fmt);
    } else if (*simulate) {
      if (!sim.config.empty()) apply_config_file(sim.config, sim, *simulate);
      const auto config = to_config(sim);
      Sink sink(config.output_path);
      sink.write(qpqleak::simulate(config, sim.threads), config.format);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
