#pragma once

// Command-line front end. Commands: gen, mate, verify, trials, diag.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 algorithmic failure (no
// mate found, verification failed).

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "latinmate/process.hpp"

namespace latinmate::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

enum class Algorithm { Guided, Hall, Backtrack };

const char* algorithm_name(Algorithm a);

struct TrialOptions {
  int n = 16;
  int m = 4;
  int count = 1;
  std::uint64_t seed = 1;
  Algorithm algorithm = Algorithm::Guided;
  int jobs = 1;
  double epsilon = 0.75;  // passed to the guided process
  ProcessConfig config;
};

struct TrialRecord {
  int index = 0;
  std::uint64_t seed = 0;
  int n = 0;
  int m = 0;
  double epsilon = 0.0;
  Algorithm algorithm = Algorithm::Guided;
  std::string outcome;  // success, gamma_exit, infeasible_row, baseline_failure
  std::optional<int> exit_time;
  std::string exit_inequality;
  double eta_min = 0.0;
  double eta_mean = 0.0;
  double eta_max = 0.0;
  double max_line_deviation = 0.0;
  double max_pair_excess = 0.0;
  double max_p_scaled = 0.0;
  double wall_ms = 0.0;
};

// Trial i draws J from Rng(seed + i), then seeds the algorithm with the next
// draw of that generator. Records come back in trial order whatever `jobs`.
std::vector<TrialRecord> run_trials(const TrialOptions& opts);

// Header comment line, then one row per trial; wall_ms is the last column.
void write_trials_csv(const std::vector<TrialRecord>& records, std::ostream& out);

// argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace latinmate::cli
