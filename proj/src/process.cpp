#include "latinmate/process.hpp"

#include <stdexcept>

namespace latinmate {

EtaSchedule ProcessConfig::eta_schedule(int n) const {
  EtaSchedule s;
  s.policy = eta_policy;
  s.initial = eta_initial.value_or(default_eta_initial(n));
  s.max = std::max(eta_max, s.initial);
  return s;
}

nlohmann::json to_json(const ProcessConfig& c) {
  nlohmann::json out = {
      {"eta_policy", c.eta_policy == EtaPolicy::Doubling ? "doubling" : "fixed"},
      {"eta_max", c.eta_max},
      {"arithmetic", c.arithmetic == Arithmetic::Double ? "double" : "rational"},
      {"gamma_constants", {{"a", c.gamma.a}, {"b", c.gamma.b}, {"c", c.gamma.c}}},
      {"record_trajectory", c.record_trajectory},
  };
  out["eta_initial"] = c.eta_initial ? nlohmann::json(*c.eta_initial) : nullptr;
  return out;
}

ProcessConfig process_config_from_json(const nlohmann::json& j) {
  ProcessConfig c;
  try {
    if (j.contains("eta_policy")) {
      const auto v = j.at("eta_policy").get<std::string>();
      if (v == "doubling") {
        c.eta_policy = EtaPolicy::Doubling;
      } else if (v == "fixed") {
        c.eta_policy = EtaPolicy::Fixed;
      } else {
        throw ParseError("eta_policy must be \"doubling\" or \"fixed\"");
      }
    }
    if (j.contains("eta_initial") && !j.at("eta_initial").is_null()) {
      c.eta_initial = j.at("eta_initial").get<double>();
    }
    if (j.contains("eta_max")) c.eta_max = j.at("eta_max").get<double>();
    if (j.contains("arithmetic")) {
      const auto v = j.at("arithmetic").get<std::string>();
      if (v == "double") {
        c.arithmetic = Arithmetic::Double;
      } else if (v == "rational") {
        c.arithmetic = Arithmetic::Rational;
      } else {
        throw ParseError("arithmetic must be \"double\" or \"rational\"");
      }
    }
    if (j.contains("gamma_constants")) {
      const auto& g = j.at("gamma_constants");
      if (g.contains("a")) c.gamma.a = g.at("a").get<double>();
      if (g.contains("b")) c.gamma.b = g.at("b").get<double>();
      if (g.contains("c")) c.gamma.c = g.at("c").get<double>();
    }
    if (j.contains("record_trajectory")) {
      c.record_trajectory = j.at("record_trajectory").get<bool>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad process config: ") + e.what());
  }
  return c;
}

template <class T>
GuidanceState<T> advance_state(const GuidanceState<T>& s, const FractionalMatching<T>& q_row,
                               const Permutation& l_row, const LatinRectangle& j) {
  const int n = s.shape.n;
  const int m = s.shape.m;
  const int t = s.t;
  if (s.stopped()) throw Error("cannot advance a stopped state");
  if (t >= m) throw Error("all rows are already placed");
  if (q_row.n() != n || static_cast<int>(l_row.size()) != n) {
    throw ShapeMismatch("row matching does not match the state's width");
  }

  GuidanceState<T> next = s;
  next.t = t + 1;
  const ProjectionTable proj(j, t);
  for (int i = t + 1; i < m; ++i) {
    for (int k = 0; k < n; ++k) {
      const int kd = proj.diag_column(i, k);
      for (int g = 0; g < n; ++g) {
        T& p = next.at(i, k, g);
        if (!(p > T(0))) continue;
        if (l_row[k] == g || l_row[kd] == g) {
          p = T(0);
          continue;
        }
        const T denom = T(1) - q_row.q(k, g) - q_row.q(kd, g);
        if (!(denom > T(0))) {
          throw DegenerateDenominator("survival probability " + std::to_string(to_double(denom)) +
                                      " at point (" + std::to_string(i) + "," +
                                      std::to_string(k) + "," + std::to_string(g) + ")");
        }
        p /= denom;
      }
    }
  }
  return next;
}

const char* outcome_name(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::Success:
      return "success";
    case OutcomeKind::GammaExit:
      return "gamma_exit";
    case OutcomeKind::InfeasibleRow:
      return "infeasible_row";
  }
  return "?";
}

template <class T>
GuidedProcess<T>::GuidedProcess(const LatinRectangle& j, double epsilon, std::uint64_t seed,
                                ProcessConfig config)
    : j_(&j),
      epsilon_(epsilon),
      config_(std::move(config)),
      rng_(seed),
      state_(init_state<T>(j.shape())) {
  const auto report = verify_latin(j);
  if (!report.ok) throw NotLatin(report.violations.front().describe());
  gamma_ = check_gamma(state_, epsilon_, config_.gamma);
  if (config_.record_trajectory) recorder_.emplace(j, epsilon_);
}

template <class T>
void GuidedProcess<T>::fail_row(std::string why) {
  status_ = Status::InfeasibleRow;
  reason_ = std::move(why);
}

template <class T>
typename GuidedProcess<T>::Status GuidedProcess<T>::step() {
  if (status_ != Status::Running) return status_;
  const int t = state_.t;
  const int m = state_.shape.m;

  if (!gamma_.good) {
    state_.stopped_at = t;
    status_ = Status::GammaExit;
    if (recorder_) recorder_->mark_exit(t, gamma_);
    return status_;
  }

  MatchingResult<T> matched;
  BirkhoffDecomposition<T> dec;
  Permutation row;
  GuidanceState<T> next;
  try {
    const auto d = normalize_row(state_, t);
    matched = build_fractional_matching(d, config_.eta_schedule(state_.shape.n));
    dec = birkhoff_decompose(matched.q);
    row = sample_matching(dec, rng_);
    next = advance_state(state_, matched.q, row, *j_);
  } catch (const DeadSymbol& e) {
    fail_row(e.what());
    return status_;
  } catch (const Infeasible& e) {
    fail_row(e.what());
    return status_;
  } catch (const NoSupportMatching& e) {
    fail_row(e.what());
    return status_;
  } catch (const DegenerateDenominator& e) {
    fail_row(e.what());
    return status_;
  }

  for (int k = 0; k < state_.shape.n; ++k) {
    if (!(state_.at(t, k, row[k]) > T(0))) {
      throw std::logic_error("sampled row uses a killed point");
    }
  }

  GammaReport next_gamma = check_gamma(next, epsilon_, config_.gamma);
  if (recorder_) {
    const auto& before_d = to_double_state(state_);
    const auto& after_d = to_double_state(next);
    SquareMatrix<double> q_d(matched.q.n());
    for (std::size_t i = 0; i < q_d.a.size(); ++i) q_d.a[i] = to_double(matched.q.q.a[i]);
    recorder_->record(before_d, q_d, reconstruct(dec), row, after_d, next_gamma,
                      matched.eta_used);
  }

  rows_.push_back(row);
  etas_.push_back(matched.eta_used);
  state_ = std::move(next);
  gamma_ = std::move(next_gamma);
  last_q_ = std::move(matched.q);
  last_dec_ = std::move(dec);
  last_eta_ = matched.eta_used;
  if (state_.t == m) status_ = Status::Success;
  return status_;
}

template <class T>
typename GuidedProcess<T>::Status GuidedProcess<T>::run() {
  while (step() == Status::Running) {
  }
  return status_;
}

template <class T>
LatinRectangle GuidedProcess<T>::partial() const {
  const Shape shape = j_->shape();
  std::vector<int> cells(shape.cells(), -1);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    std::copy(rows_[i].begin(), rows_[i].end(),
              cells.begin() + static_cast<std::ptrdiff_t>(i * shape.n));
  }
  return LatinRectangle(shape, std::move(cells));
}

template <class T>
ProcessOutcome GuidedProcess<T>::outcome() {
  ProcessOutcome out;
  out.rows = rows_;
  out.eta_used = etas_;
  out.final_state = to_double_state(state_);
  out.gamma = gamma_;
  out.reason = reason_;
  out.time = state_.t;
  switch (status_) {
    case Status::Success: {
      out.kind = OutcomeKind::Success;
      LatinRectangle l = partial();
      const auto latin = verify_latin(l);
      const auto ortho = verify_orthogonal(l, *j_);
      if (!latin.ok || !ortho.ok) {
        throw std::logic_error("guided process produced an invalid mate: " +
                               (latin.ok ? ortho.describe() : latin.describe()));
      }
      out.mate = std::move(l);
      break;
    }
    case Status::GammaExit:
      out.kind = OutcomeKind::GammaExit;
      break;
    case Status::InfeasibleRow:
    case Status::Running:
      out.kind = OutcomeKind::InfeasibleRow;
      if (status_ == Status::Running) out.reason = "process did not finish";
      break;
  }
  if (recorder_) {
    out.trajectory = recorder_->take();
    recorder_.reset();
  } else {
    out.trajectory.n = j_->n();
    out.trajectory.m = j_->m();
    out.trajectory.epsilon = epsilon_;
    if (status_ == Status::GammaExit) out.trajectory.exit_time = state_.t;
  }
  return out;
}

ProcessOutcome run_process(const LatinRectangle& j, double epsilon, std::uint64_t seed,
                           const ProcessConfig& config) {
  if (config.arithmetic == Arithmetic::Rational) {
    GuidedProcess<Rational> process(j, epsilon, seed, config);
    process.run();
    return process.outcome();
  }
  GuidedProcess<double> process(j, epsilon, seed, config);
  process.run();
  return process.outcome();
}

template GuidanceState<double> advance_state<double>(const GuidanceState<double>&,
                                                     const FractionalMatching<double>&,
                                                     const Permutation&, const LatinRectangle&);
template GuidanceState<Rational> advance_state<Rational>(const GuidanceState<Rational>&,
                                                         const FractionalMatching<Rational>&,
                                                         const Permutation&,
                                                         const LatinRectangle&);
template class GuidedProcess<double>;
template class GuidedProcess<Rational>;

}  // namespace latinmate
