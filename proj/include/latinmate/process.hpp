#pragma once

// The guided greedy process. At step t (active row t) it either stops, when
// the state has left Γ, or extends: normalize row t of p, build a fractional
// matching q <= (1+η)·d by max flow, decompose q into permutations, sample
// one as row t of L, and update every later point by
//
//   p'(x) = p(x) · (1 - K(x)) / (1 - q(ρ_CS(x)) - q(ρ_DS(x)))
//
// where K(x) says whether the new row occupies one of x's two projections.
// Killed points keep p = 0, so q and L never touch them again and the column
// and diagonal constraints hold for every prefix.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "latinmate/diagnostics.hpp"
#include "latinmate/gamma.hpp"
#include "latinmate/latin.hpp"
#include "latinmate/matching.hpp"
#include "latinmate/random.hpp"
#include "latinmate/state.hpp"

namespace latinmate {

enum class Arithmetic { Double, Rational };

struct ProcessConfig {
  EtaPolicy eta_policy = EtaPolicy::Doubling;
  std::optional<double> eta_initial;  // default_eta_initial(n) when unset
  double eta_max = 64.0;
  Arithmetic arithmetic = Arithmetic::Double;
  GammaConstants gamma;
  bool record_trajectory = true;

  EtaSchedule eta_schedule(int n) const;
};

nlohmann::json to_json(const ProcessConfig& c);
// Missing keys keep their defaults. Throws ParseError on bad values.
ProcessConfig process_config_from_json(const nlohmann::json& j);

// Throws DegenerateDenominator when a surviving point's update would divide
// by a non-positive number, and Error when `s` is stopped or fully placed.
template <class T>
GuidanceState<T> advance_state(const GuidanceState<T>& s, const FractionalMatching<T>& q_row,
                               const Permutation& l_row, const LatinRectangle& j);

enum class OutcomeKind { Success, GammaExit, InfeasibleRow };

const char* outcome_name(OutcomeKind kind);

struct ProcessOutcome {
  OutcomeKind kind = OutcomeKind::Success;
  std::optional<LatinRectangle> mate;  // set iff Success
  int time = 0;                        // exit step, or m on success
  GammaReport gamma;                   // the failing report on GammaExit
  std::string reason;                  // InfeasibleRow detail
  std::vector<Permutation> rows;       // rows placed before the run ended
  std::vector<double> eta_used;        // per placed row
  GuidanceState<double> final_state;
  TrajectoryStats trajectory;
};

// Step-wise driver, exposed so callers can audit every intermediate prefix.
template <class T>
class GuidedProcess {
 public:
  enum class Status { Running, Success, GammaExit, InfeasibleRow };

  GuidedProcess(const LatinRectangle& j, double epsilon, std::uint64_t seed,
                ProcessConfig config = {});

  // One Extend or Stop. No-op once finished.
  Status step();
  Status run();

  Status status() const { return status_; }
  const GuidanceState<T>& state() const { return state_; }
  const GammaReport& gamma() const { return gamma_; }
  const std::vector<Permutation>& rows() const { return rows_; }
  const std::string& reason() const { return reason_; }

  // Artifacts of the last Extend step.
  const FractionalMatching<T>& last_q() const { return last_q_; }
  const BirkhoffDecomposition<T>& last_decomposition() const { return last_dec_; }
  double last_eta() const { return last_eta_; }

  // Rows placed so far; unplaced cells hold -1.
  LatinRectangle partial() const;

  ProcessOutcome outcome();

 private:
  void fail_row(std::string why);

  const LatinRectangle* j_;
  double epsilon_;
  ProcessConfig config_;
  Rng rng_;
  GuidanceState<T> state_;
  GammaReport gamma_;
  Status status_ = Status::Running;
  std::vector<Permutation> rows_;
  std::vector<double> etas_;
  std::string reason_;
  FractionalMatching<T> last_q_;
  BirkhoffDecomposition<T> last_dec_;
  double last_eta_ = 0.0;
  std::optional<TrajectoryRecorder> recorder_;
};

ProcessOutcome run_process(const LatinRectangle& j, double epsilon, std::uint64_t seed,
                           const ProcessConfig& config = {});

}  // namespace latinmate
