#pragma once

// Per-step measurements of the quantities the guided process is supposed to
// keep under control: local line sums (B), pair overlaps (C), the largest
// entry (A), kill counts, martingale residuals and one-step deviations, plus
// the product/sum identity along a sample of central lines.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "latinmate/gamma.hpp"
#include "latinmate/matching.hpp"
#include "latinmate/state.hpp"

namespace latinmate {

struct StepRecord {
  int t = 0;  // the row placed during this step

  // Γ statistics of the state after the step, over rows still open.
  double min_line_sum = 0.0;
  double max_line_sum = 0.0;
  double min_b_margin = 0.0;
  double max_b_margin = 0.0;
  double max_c = 0.0;
  double max_p = 0.0;

  std::size_t kills = 0;   // points with p > 0 zeroed this step
  int max_line_kills = 0;  // over RC and RS lines of later rows
  int max_c_kills = 0;     // over pair sums Σ_γ p(i,k,γ)p(i,l,γ) of later rows
  double eta_used = 0.0;

  // max_x |E_t[p^{t+1}(x)] - p^t(x)|, the expectation taken over the
  // decomposition actually sampled from.
  double martingale_residual = 0.0;
  // max over local lines of |E_t[X^{t+1}] - X^t|.
  double line_expectation_residual = 0.0;
  // max over local lines of |X^{t+1} - E_t[X^{t+1}]| / max(X^t, X^0).
  double line_step_deviation = 0.0;
  // same for the tracked pair sums, and their relative drift
  // (E_t[X^{t+1}] - X^t) / max(X^t, X^0).
  double pair_step_deviation = 0.0;
  double pair_drift = 0.0;

  // Extremes of p^{t+1}(x)/p^t(x) over surviving points.
  double max_growth = 1.0;
  double max_shrink = 0.0;  // max of 1 - p^{t+1}/p^t, expected 0

  // max relative residual of ∏(1 - p^s∘ρ^s)^{-1} = 1/(1 - S) over tracked
  // central lines, and how many of them are still alive.
  double central_identity_residual = 0.0;
  int central_lines_alive = 0;
};

struct TrajectoryStats {
  int n = 0;
  int m = 0;
  double epsilon = 0.0;
  std::vector<StepRecord> steps;
  std::optional<int> exit_time;
  std::optional<std::string> exit_inequality;
};

// `marginals` is the probability that each (column, symbol) of the active row
// is chosen; pass the reconstruction of the sampled decomposition.
StepRecord record_step(const GuidanceState<double>& before, const SquareMatrix<double>& q,
                       const SquareMatrix<double>& marginals, const Permutation& l_row,
                       const GuidanceState<double>& after, const LatinRectangle& j,
                       const GammaReport& after_gamma);

// Owns the central-line sample and appends one record per step.
class TrajectoryRecorder {
 public:
  TrajectoryRecorder(const LatinRectangle& j, double epsilon);

  void record(const GuidanceState<double>& before, const SquareMatrix<double>& q,
              const SquareMatrix<double>& marginals, const Permutation& l_row,
              const GuidanceState<double>& after, const GammaReport& after_gamma,
              double eta_used);
  void mark_exit(int t, const GammaReport& report);

  const TrajectoryStats& stats() const { return stats_; }
  TrajectoryStats take() { return std::move(stats_); }

 private:
  struct CentralLine {
    LineClass cls;
    int first;
    int sym;
    bool alive = true;
    double product = 1.0;
    double sum = 0.0;
  };

  const LatinRectangle* j_;
  TrajectoryStats stats_;
  std::vector<CentralLine> lines_;
};

struct SummaryReport {
  int n = 0;
  int m = 0;
  double epsilon = 0.0;
  int steps = 0;
  std::optional<int> exit_time;
  std::optional<std::string> exit_inequality;
  int frozen_steps = 0;  // m - exit time after a Γ-exit

  double width = 0.0;  // log n / √n
  double max_line_deviation = 0.0;  // max |Σ_ℓ p - 1|
  double max_pair_excess = 0.0;     // max n·C - 1
  double max_p_scaled = 0.0;        // max n·p

  int observed_line_kills = 0;  // the 𝒩 of the line sums
  int observed_pair_kills = 0;
  double growth_constant = 0.0;  // max n·(p^{t+1}/p^t - 1)
  double xi_plus = 0.0;
  double xi_minus = 0.0;
  double xi_line = 0.0;  // 𝒩·𝔪/X^0 + ξ₋ + ξ₊ for line sums (X^0 = 1)
  double xi_pair = 0.0;  // same for pair sums (X^0 = 1/n)
  double cumulative_pair_drift = 0.0;
  double max_martingale_residual = 0.0;
  double max_central_identity_residual = 0.0;
  double eta_min = 0.0;
  double eta_max = 0.0;
  double eta_mean = 0.0;

  // Per-step max line deviation in bins of width/10 over [0, 2·width), last
  // bin collects the overflow.
  std::vector<int> line_deviation_histogram;
};

// Throws EmptyTrajectory when there is nothing to summarize (no step and no
// exit).
SummaryReport summarize(const TrajectoryStats& stats);

void write_trajectory_csv(const TrajectoryStats& stats, std::ostream& out);
nlohmann::json to_json(const TrajectoryStats& stats);
nlohmann::json to_json(const SummaryReport& summary);

}  // namespace latinmate
