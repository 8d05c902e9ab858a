#include "latinmate/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace latinmate {

namespace {

// Up to 64 column pairs (k < l) spread evenly over the n(n-1)/2 possibilities.
std::vector<std::pair<int, int>> tracked_pairs(int n) {
  std::vector<std::pair<int, int>> all;
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) all.emplace_back(k, l);
  }
  const std::size_t count = std::min<std::size_t>(all.size(), 64);
  std::vector<std::pair<int, int>> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) out.push_back(all[j * all.size() / count]);
  return out;
}

double finite_or(double v, double fallback) { return std::isfinite(v) ? v : fallback; }

}  // namespace

StepRecord record_step(const GuidanceState<double>& before, const SquareMatrix<double>& q,
                       const SquareMatrix<double>& marginals, const Permutation& l_row,
                       const GuidanceState<double>& after, const LatinRectangle& j,
                       const GammaReport& after_gamma) {
  const int n = before.shape.n;
  const int m = before.shape.m;
  const int t = before.t;

  StepRecord rec;
  rec.t = t;
  rec.min_line_sum = after_gamma.min_line_sum;
  rec.max_line_sum = after_gamma.max_line_sum;
  rec.min_b_margin = after_gamma.min_b_margin;
  rec.max_b_margin = after_gamma.max_b_margin;
  rec.max_c = after_gamma.max_c;
  rec.max_p = after_gamma.max_p;
  if (t + 1 >= m) return rec;

  const ProjectionTable proj(j, t);
  const auto pairs = tracked_pairs(n);
  const double x0_pair = 1.0 / n;

  std::vector<double> e_rc(n), e_rs(n), x_rc(n), x_rs(n), a_rc(n), a_rs(n);
  std::vector<int> k_rc(n), k_rs(n);
  // per point of the current row: killed flag, growth-if-survive, kill probability
  std::vector<char> killed(static_cast<std::size_t>(n) * n);
  std::vector<double> growth(static_cast<std::size_t>(n) * n);
  std::vector<double> kill_prob(static_cast<std::size_t>(n) * n);
  std::vector<int> pair_kills(static_cast<std::size_t>(n) * n);
  std::vector<int> killed_cols;

  for (int i = t + 1; i < m; ++i) {
    std::fill(e_rc.begin(), e_rc.end(), 0.0);
    std::fill(e_rs.begin(), e_rs.end(), 0.0);
    std::fill(x_rc.begin(), x_rc.end(), 0.0);
    std::fill(x_rs.begin(), x_rs.end(), 0.0);
    std::fill(a_rc.begin(), a_rc.end(), 0.0);
    std::fill(a_rs.begin(), a_rs.end(), 0.0);
    std::fill(k_rc.begin(), k_rc.end(), 0);
    std::fill(k_rs.begin(), k_rs.end(), 0);

    for (int k = 0; k < n; ++k) {
      const int kd = proj.diag_column(i, k);
      for (int g = 0; g < n; ++g) {
        const std::size_t c = static_cast<std::size_t>(k) * n + g;
        const double p = before.at(i, k, g);
        const double pa = after.at(i, k, g);
        const bool dies = l_row[k] == g || l_row[kd] == g;
        const double denom = 1.0 - q(k, g) - q(kd, g);
        killed[c] = dies && p > 0.0;
        growth[c] = denom > 0.0 ? 1.0 / denom : 0.0;
        kill_prob[c] = marginals(k, g) + marginals(kd, g);
        x_rc[k] += p;
        x_rs[g] += p;
        a_rc[k] += pa;
        a_rs[g] += pa;
        if (p <= 0.0) continue;

        if (dies) {
          ++rec.kills;
          ++k_rc[k];
          ++k_rs[g];
        } else {
          const double ratio = pa / p;
          rec.max_growth = std::max(rec.max_growth, ratio);
          rec.max_shrink = std::max(rec.max_shrink, 1.0 - ratio);
        }
        // value on survival: read off the update when x survived, else the formula
        const double if_survive = dies ? p * growth[c] : pa;
        const double expected = (1.0 - kill_prob[c]) * if_survive;
        rec.martingale_residual = std::max(rec.martingale_residual, std::abs(expected - p));
        e_rc[k] += expected;
        e_rs[g] += expected;
      }
    }

    auto line_stats = [&](const std::vector<double>& x, const std::vector<double>& e,
                          const std::vector<double>& a, const std::vector<int>& kills) {
      for (int idx = 0; idx < n; ++idx) {
        rec.line_expectation_residual =
            std::max(rec.line_expectation_residual, std::abs(e[idx] - x[idx]));
        rec.line_step_deviation =
            std::max(rec.line_step_deviation, std::abs(a[idx] - e[idx]) / std::max(x[idx], 1.0));
        rec.max_line_kills = std::max(rec.max_line_kills, kills[idx]);
      }
    };
    line_stats(x_rc, e_rc, a_rc, k_rc);
    line_stats(x_rs, e_rs, a_rs, k_rs);

    // Pair sums losing terms: term γ of (k,l) dies when either factor dies.
    std::fill(pair_kills.begin(), pair_kills.end(), 0);
    for (int g = 0; g < n; ++g) {
      killed_cols.clear();
      for (int k = 0; k < n; ++k) {
        if (killed[static_cast<std::size_t>(k) * n + g]) killed_cols.push_back(k);
      }
      for (const int c : killed_cols) {
        for (int l = 0; l < n; ++l) {
          if (l == c || before.at(i, l, g) <= 0.0) continue;
          const bool l_killed = killed[static_cast<std::size_t>(l) * n + g] != 0;
          if (l_killed && l < c) continue;
          const int lo = std::min(c, l);
          const int hi = std::max(c, l);
          const int v = ++pair_kills[static_cast<std::size_t>(lo) * n + hi];
          rec.max_c_kills = std::max(rec.max_c_kills, v);
        }
      }
    }

    for (const auto& [k, l] : pairs) {
      const int kd = proj.diag_column(i, k);
      const int ld = proj.diag_column(i, l);
      double x = 0.0, xa = 0.0, e = 0.0;
      for (int g = 0; g < n; ++g) {
        const double term = before.at(i, k, g) * before.at(i, l, g);
        x += term;
        xa += after.at(i, k, g) * after.at(i, l, g);
        if (term <= 0.0) continue;
        // E[K_k K_l] = chance that γ lands in a column both kill sets share
        double both = 0.0;
        for (const int ck : {k, kd}) {
          if (ck == l || ck == ld) both += marginals(ck, g);
        }
        const std::size_t ck = static_cast<std::size_t>(k) * n + g;
        const std::size_t cl = static_cast<std::size_t>(l) * n + g;
        const double survive = 1.0 - kill_prob[ck] - kill_prob[cl] + both;
        e += term * growth[ck] * growth[cl] * survive;
      }
      const double scale = std::max(x, x0_pair);
      rec.pair_step_deviation = std::max(rec.pair_step_deviation, std::abs(xa - e) / scale);
      rec.pair_drift = std::max(rec.pair_drift, (e - x) / scale);
    }
  }
  return rec;
}

TrajectoryRecorder::TrajectoryRecorder(const LatinRectangle& j, double epsilon) : j_(&j) {
  stats_.n = j.n();
  stats_.m = j.m();
  stats_.epsilon = epsilon;
  const int n = j.n();
  const int count = std::min(n, 64);
  for (int idx = 0; idx < count; ++idx) {
    const int h = idx / 2;
    if (idx % 2 == 0) {
      lines_.push_back({LineClass::CS, h % n, (3 * h + 1) % n});
    } else {
      lines_.push_back({LineClass::DS, h % n, (5 * h + 2) % n});
    }
  }
}

void TrajectoryRecorder::record(const GuidanceState<double>& before, const SquareMatrix<double>& q,
                                const SquareMatrix<double>& marginals, const Permutation& l_row,
                                const GuidanceState<double>& after,
                                const GammaReport& after_gamma, double eta_used) {
  StepRecord rec = record_step(before, q, marginals, l_row, after, *j_, after_gamma);
  rec.eta_used = eta_used;

  const int t = before.t;
  for (auto& line : lines_) {
    if (!line.alive) continue;
    const int col = line.cls == LineClass::CS ? line.first : j_->column_of(t, line.first);
    if (l_row[col] == line.sym) {
      line.alive = false;  // the line receives its point now
      continue;
    }
    const double p = before.at(t, col, line.sym);
    if (p >= 1.0) {
      line.alive = false;
      continue;
    }
    const double tracked = (1.0 - line.sum) * p;
    line.sum += tracked;
    line.product /= (1.0 - p);
    const double residual = std::abs(line.product * (1.0 - line.sum) - 1.0);
    rec.central_identity_residual = std::max(rec.central_identity_residual, residual);
    ++rec.central_lines_alive;
  }
  stats_.steps.push_back(rec);
}

void TrajectoryRecorder::mark_exit(int t, const GammaReport& report) {
  stats_.exit_time = t;
  if (!report.violations.empty()) {
    stats_.exit_inequality = inequality_name(report.violations.front().id);
  }
}

SummaryReport summarize(const TrajectoryStats& stats) {
  if (stats.steps.empty() && !stats.exit_time) {
    throw EmptyTrajectory("trajectory has no steps");
  }
  SummaryReport s;
  s.n = stats.n;
  s.m = stats.m;
  s.epsilon = stats.epsilon;
  s.steps = static_cast<int>(stats.steps.size());
  s.exit_time = stats.exit_time;
  s.exit_inequality = stats.exit_inequality;
  if (stats.exit_time) s.frozen_steps = stats.m - *stats.exit_time;
  s.width = gamma_width(stats.n);

  const int bins = 20;
  s.line_deviation_histogram.assign(bins + 1, 0);
  double max_p = 0.0;
  double eta_sum = 0.0;
  s.eta_min = std::numeric_limits<double>::infinity();
  s.eta_max = 0.0;
  for (const auto& r : stats.steps) {
    const double dev = std::max(std::abs(finite_or(r.min_line_sum, 1.0) - 1.0),
                                std::abs(finite_or(r.max_line_sum, 1.0) - 1.0));
    s.max_line_deviation = std::max(s.max_line_deviation, dev);
    if (s.width > 0.0) {
      const int bin = std::min(bins, static_cast<int>(dev / (s.width / 10.0)));
      ++s.line_deviation_histogram[bin];
    } else {
      ++s.line_deviation_histogram[dev > 0.0 ? bins : 0];
    }
    if (std::isfinite(r.max_c)) {
      s.max_pair_excess = std::max(s.max_pair_excess, stats.n * r.max_c - 1.0);
    }
    max_p = std::max(max_p, r.max_p);
    s.observed_line_kills = std::max(s.observed_line_kills, r.max_line_kills);
    s.observed_pair_kills = std::max(s.observed_pair_kills, r.max_c_kills);
    s.xi_plus = std::max(s.xi_plus, r.max_growth - 1.0);
    s.xi_minus = std::max(s.xi_minus, r.max_shrink);
    s.cumulative_pair_drift += std::max(0.0, r.pair_drift);
    s.max_martingale_residual = std::max(s.max_martingale_residual, r.martingale_residual);
    s.max_central_identity_residual =
        std::max(s.max_central_identity_residual, r.central_identity_residual);
    s.eta_min = std::min(s.eta_min, r.eta_used);
    s.eta_max = std::max(s.eta_max, r.eta_used);
    eta_sum += r.eta_used;
  }
  if (stats.steps.empty()) {
    s.eta_min = 0.0;
  } else {
    s.eta_mean = eta_sum / static_cast<double>(stats.steps.size());
  }
  s.max_p_scaled = stats.n * max_p;
  s.growth_constant = stats.n * s.xi_plus;
  s.xi_line = s.observed_line_kills * max_p + s.xi_minus + s.xi_plus;
  const double xi_plus_pair = (1.0 + s.xi_plus) * (1.0 + s.xi_plus) - 1.0;
  const double xi_minus_pair = 1.0 - (1.0 - s.xi_minus) * (1.0 - s.xi_minus);
  s.xi_pair = s.observed_pair_kills * max_p * max_p * stats.n + xi_minus_pair + xi_plus_pair;
  return s;
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

void write_trajectory_csv(const TrajectoryStats& stats, std::ostream& out) {
  out << "# latinmate-trajectory v1 n=" << stats.n << " m=" << stats.m
      << " epsilon=" << num(stats.epsilon) << '\n';
  out << "t,min_b_margin,max_b_margin,max_c_lhs,max_p,kills_this_step,eta_used,"
         "min_line_sum,max_line_sum,max_line_kills,max_c_kills,martingale_residual,"
         "line_expectation_residual,line_step_deviation,pair_step_deviation,pair_drift,"
         "max_growth,max_shrink,central_identity_residual,central_lines_alive\n";
  for (const auto& r : stats.steps) {
    out << r.t << ',' << num(r.min_b_margin) << ',' << num(r.max_b_margin) << ','
        << num(r.max_c) << ',' << num(r.max_p) << ',' << r.kills << ',' << num(r.eta_used) << ','
        << num(r.min_line_sum) << ',' << num(r.max_line_sum) << ',' << r.max_line_kills << ','
        << r.max_c_kills << ',' << num(r.martingale_residual) << ','
        << num(r.line_expectation_residual) << ',' << num(r.line_step_deviation) << ','
        << num(r.pair_step_deviation) << ',' << num(r.pair_drift) << ',' << num(r.max_growth)
        << ',' << num(r.max_shrink) << ',' << num(r.central_identity_residual) << ','
        << r.central_lines_alive << '\n';
  }
}

namespace {

nlohmann::json opt_number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nullptr; }

}  // namespace

nlohmann::json to_json(const TrajectoryStats& stats) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& r : stats.steps) {
    steps.push_back({
        {"t", r.t},
        {"min_b_margin", opt_number(r.min_b_margin)},
        {"max_b_margin", opt_number(r.max_b_margin)},
        {"max_c_lhs", opt_number(r.max_c)},
        {"max_p", r.max_p},
        {"kills", r.kills},
        {"eta_used", r.eta_used},
        {"min_line_sum", opt_number(r.min_line_sum)},
        {"max_line_sum", opt_number(r.max_line_sum)},
        {"max_line_kills", r.max_line_kills},
        {"max_c_kills", r.max_c_kills},
        {"martingale_residual", r.martingale_residual},
        {"line_expectation_residual", r.line_expectation_residual},
        {"line_step_deviation", r.line_step_deviation},
        {"pair_step_deviation", r.pair_step_deviation},
        {"pair_drift", r.pair_drift},
        {"max_growth", r.max_growth},
        {"max_shrink", r.max_shrink},
        {"central_identity_residual", r.central_identity_residual},
        {"central_lines_alive", r.central_lines_alive},
    });
  }
  nlohmann::json out = {{"n", stats.n}, {"m", stats.m}, {"epsilon", stats.epsilon},
                        {"steps", steps}};
  out["exit_time"] = stats.exit_time ? nlohmann::json(*stats.exit_time) : nullptr;
  out["exit_inequality"] =
      stats.exit_inequality ? nlohmann::json(*stats.exit_inequality) : nullptr;
  return out;
}

nlohmann::json to_json(const SummaryReport& s) {
  nlohmann::json out = {
      {"n", s.n},
      {"m", s.m},
      {"epsilon", s.epsilon},
      {"steps", s.steps},
      {"frozen_steps", s.frozen_steps},
      {"width", s.width},
      {"max_line_deviation", s.max_line_deviation},
      {"max_pair_excess", s.max_pair_excess},
      {"max_p_scaled", s.max_p_scaled},
      {"observed_line_kills", s.observed_line_kills},
      {"observed_pair_kills", s.observed_pair_kills},
      {"growth_constant", s.growth_constant},
      {"xi_plus", s.xi_plus},
      {"xi_minus", s.xi_minus},
      {"xi_line", s.xi_line},
      {"xi_pair", s.xi_pair},
      {"cumulative_pair_drift", s.cumulative_pair_drift},
      {"max_martingale_residual", s.max_martingale_residual},
      {"max_central_identity_residual", s.max_central_identity_residual},
      {"eta_min", s.eta_min},
      {"eta_max", s.eta_max},
      {"eta_mean", s.eta_mean},
      {"line_deviation_histogram", s.line_deviation_histogram},
  };
  out["exit_time"] = s.exit_time ? nlohmann::json(*s.exit_time) : nullptr;
  out["exit_inequality"] = s.exit_inequality ? nlohmann::json(*s.exit_inequality) : nullptr;
  return out;
}

}  // namespace latinmate
