#include "latinmate/cli.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "latinmate/baselines.hpp"
#include "latinmate/diagnostics.hpp"

namespace latinmate::cli {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Guided:
      return "guided";
    case Algorithm::Hall:
      return "hall";
    case Algorithm::Backtrack:
      return "backtrack";
  }
  return "?";
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

TrialRecord run_one(const TrialOptions& opts, int index) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord r;
  r.index = index;
  r.seed = opts.seed + static_cast<std::uint64_t>(index);
  r.n = opts.n;
  r.m = opts.m;
  r.epsilon = opts.epsilon;
  r.algorithm = opts.algorithm;
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  r.eta_min = r.eta_mean = r.eta_max = nan;
  r.max_line_deviation = r.max_pair_excess = r.max_p_scaled = nan;

  Rng rng(r.seed);
  const LatinRectangle j = random_latin_rectangle(opts.n, opts.m, rng);
  const std::uint64_t algo_seed = rng();

  switch (opts.algorithm) {
    case Algorithm::Guided: {
      const auto out = run_process(j, opts.epsilon, algo_seed, opts.config);
      r.outcome = outcome_name(out.kind);
      if (out.kind != OutcomeKind::Success) r.exit_time = out.time;
      if (out.kind == OutcomeKind::GammaExit && !out.gamma.violations.empty()) {
        r.exit_inequality = inequality_name(out.gamma.violations.front().id);
      }
      if (!out.eta_used.empty()) {
        double lo = out.eta_used.front(), hi = lo, sum = 0.0;
        for (double e : out.eta_used) {
          lo = std::min(lo, e);
          hi = std::max(hi, e);
          sum += e;
        }
        r.eta_min = lo;
        r.eta_max = hi;
        r.eta_mean = sum / static_cast<double>(out.eta_used.size());
      }
      if (!out.trajectory.steps.empty()) {
        const auto s = summarize(out.trajectory);
        r.max_line_deviation = s.max_line_deviation;
        r.max_pair_excess = s.max_pair_excess;
        r.max_p_scaled = s.max_p_scaled;
      }
      break;
    }
    case Algorithm::Hall: {
      Rng algo_rng(algo_seed);
      const auto out = hall_greedy(j, opts.m, algo_rng);
      r.outcome = out.mate ? "success" : "baseline_failure";
      if (!out.mate) r.exit_time = out.failed_row;
      break;
    }
    case Algorithm::Backtrack: {
      try {
        const auto out = backtrack_mate(j);
        r.outcome = out ? "success" : "baseline_failure";
      } catch (const LimitExceeded&) {
        r.outcome = "baseline_failure";
      }
      break;
    }
  }
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                  .count();
  return r;
}

}  // namespace

std::vector<TrialRecord> run_trials(const TrialOptions& opts) {
  if (opts.count < 1) throw InvalidShape("trial count must be at least 1");
  static_cast<void>(Shape(opts.n, opts.m));

  std::vector<TrialRecord> records(static_cast<std::size_t>(opts.count));
  const int jobs = std::max(1, std::min(opts.jobs, opts.count));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next++; i < opts.count; i = next++) {
      try {
        records[static_cast<std::size_t>(i)] = run_one(opts, i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

void write_trials_csv(const std::vector<TrialRecord>& records, std::ostream& out) {
  out << "# latinmate-trials v1\n";
  out << "trial,seed,n,m,epsilon,algorithm,outcome,exit_time,exit_inequality,eta_min,eta_mean,"
         "eta_max,max_line_deviation,max_pair_excess,max_p_scaled,wall_ms\n";
  for (const auto& r : records) {
    out << r.index << ',' << r.seed << ',' << r.n << ',' << r.m << ',' << num(r.epsilon) << ','
        << algorithm_name(r.algorithm) << ',' << r.outcome << ','
        << (r.exit_time ? std::to_string(*r.exit_time) : "") << ',' << r.exit_inequality << ','
        << num(r.eta_min) << ',' << num(r.eta_mean) << ',' << num(r.eta_max) << ','
        << num(r.max_line_deviation) << ',' << num(r.max_pair_excess) << ','
        << num(r.max_p_scaled) << ',' << num(r.wall_ms) << '\n';
  }
}

namespace {

// Options shared by the commands that run the guided process.
struct GuidedFlags {
  std::optional<double> epsilon;
  std::optional<double> eta_initial;
  std::optional<double> eta_max;
  bool exact = false;
  std::string config_path;

  void add(CLI::App& app) {
    app.add_option("--epsilon", epsilon, "epsilon in the pointwise bound (default 1 - m/n)");
    app.add_option("--eta-initial", eta_initial, "first slack value of the flow capacities");
    app.add_option("--eta-max", eta_max, "largest slack value tried");
    app.add_flag("--exact", exact, "run the process in exact rational arithmetic");
    app.add_option("--config", config_path, "process config JSON");
  }

  ProcessConfig config() const {
    ProcessConfig c;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::ios_base::failure("cannot open " + config_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad config JSON: ") + e.what());
      }
      c = process_config_from_json(j);
    }
    if (eta_initial) c.eta_initial = *eta_initial;
    if (eta_max) c.eta_max = *eta_max;
    if (exact) c.arithmetic = Arithmetic::Rational;
    return c;
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::ios_base::failure("cannot write " + path);
  f << text;
  if (!f) throw std::ios_base::failure("write failed for " + path);
}

// The only way a mate reaches the disk or stdout.
void emit_mate(const LatinRectangle& l, const LatinRectangle& j, const std::string& path,
               std::ostream& out) {
  const auto latin = verify_latin(l);
  const auto ortho = verify_orthogonal(l, j);
  if (!latin.ok || !ortho.ok) {
    throw std::logic_error("refusing to write an unverified mate: " +
                           (latin.ok ? ortho.describe() : latin.describe()));
  }
  if (path.empty()) {
    out << format_rectangle(l);
  } else {
    save_rectangle(l, path);
  }
}

Algorithm parse_algorithm(const std::string& s) {
  if (s == "guided") return Algorithm::Guided;
  if (s == "hall") return Algorithm::Hall;
  if (s == "backtrack") return Algorithm::Backtrack;
  throw ParseError("unknown algorithm '" + s + "'");
}

int cmd_gen(int n, std::optional<int> m, std::optional<double> epsilon, std::uint64_t seed,
            const std::string& out_path, std::ostream& out) {
  const Shape shape = m ? Shape(n, *m) : Shape::from_epsilon(n, epsilon.value_or(0.0));
  Rng rng(seed);
  const LatinRectangle j = random_latin_rectangle(shape.n, shape.m, rng);
  if (!verify_latin(j).ok) throw std::logic_error("generated rectangle is not Latin");
  if (out_path.empty()) {
    out << format_rectangle(j);
  } else {
    save_rectangle(j, out_path);
  }
  return kExitOk;
}

int cmd_mate(const std::string& j_path, const GuidedFlags& flags, std::uint64_t seed,
             Algorithm algorithm, const std::string& out_path, const std::string& diag_path,
             std::ostream& out, std::ostream& err) {
  const LatinRectangle j = load_rectangle(j_path);
  switch (algorithm) {
    case Algorithm::Guided: {
      const ProcessConfig config = flags.config();
      const double eps = flags.epsilon.value_or(j.shape().epsilon());
      const auto result = run_process(j, eps, seed, config);
      if (!diag_path.empty()) {
        std::ostringstream csv;
        write_trajectory_csv(result.trajectory, csv);
        write_text(diag_path, csv.str());
      }
      if (result.kind == OutcomeKind::Success) {
        emit_mate(*result.mate, j, out_path, out);
        return kExitOk;
      }
      out << "outcome: " << outcome_name(result.kind) << "\n";
      out << "time: " << result.time << "\n";
      if (result.kind == OutcomeKind::GammaExit) {
        for (const auto& v : result.gamma.violations) out << "violation: " << v.describe() << "\n";
      } else {
        out << "reason: " << result.reason << "\n";
      }
      return kExitFailure;
    }
    case Algorithm::Hall: {
      if (!diag_path.empty()) err << "note: --diag only applies to the guided algorithm\n";
      Rng rng(seed);
      const auto result = hall_greedy(j, j.m(), rng);
      if (result.mate) {
        emit_mate(*result.mate, j, out_path, out);
        return kExitOk;
      }
      out << "outcome: baseline_failure\n";
      out << "reason: " << result.reason << "\n";
      return kExitFailure;
    }
    case Algorithm::Backtrack: {
      if (!diag_path.empty()) err << "note: --diag only applies to the guided algorithm\n";
      BacktrackStats stats;
      std::optional<LatinRectangle> mate;
      try {
        mate = backtrack_mate(j, {}, &stats);
      } catch (const LimitExceeded& e) {
        out << "outcome: baseline_failure\n";
        out << "reason: " << e.what() << "\n";
        return kExitFailure;
      }
      if (mate) {
        emit_mate(*mate, j, out_path, out);
        return kExitOk;
      }
      out << "outcome: baseline_failure\n";
      out << "reason: search space exhausted after " << stats.nodes
          << " nodes, no orthogonal mate exists\n";
      return kExitFailure;
    }
  }
  return kExitUsage;
}

int cmd_verify(const std::string& j_path, const std::string& l_path, std::ostream& out) {
  const LatinRectangle j = load_rectangle(j_path);
  LatinRectangle l;
  try {
    l = load_rectangle(l_path);
  } catch (const NotLatin& e) {
    out << "NotLatin: " << e.what() << "\n";
    return kExitFailure;
  }
  if (l.shape() != j.shape()) {
    out << "ShapeMismatch: J is " << j.m() << "x" << j.n() << ", L is " << l.m() << "x" << l.n()
        << "\n";
    return kExitFailure;
  }
  const auto ortho = verify_orthogonal(l, j);
  if (ortho.ok) {
    out << "ok\n";
    return kExitOk;
  }
  for (const auto& v : ortho.violations) out << v.describe() << "\n";
  return kExitFailure;
}

int cmd_trials(TrialOptions opts, std::optional<int> m, std::optional<double> epsilon,
               const std::string& out_path, std::ostream& out, std::ostream& err) {
  if (opts.count < 1) throw CLI::ValidationError("--count", "must be at least 1");
  if (m) {
    opts.m = Shape(opts.n, *m).m;
    opts.epsilon = epsilon.value_or(Shape(opts.n, *m).epsilon());
  } else {
    opts.epsilon = epsilon.value_or(0.75);
    opts.m = Shape::from_epsilon(opts.n, opts.epsilon).m;
  }
  const auto records = run_trials(opts);
  std::ostringstream csv;
  write_trials_csv(records, csv);
  int successes = 0;
  for (const auto& r : records) successes += r.outcome == "success";
  char line[128];
  std::snprintf(line, sizeof line, "success fraction: %d/%d = %.4f\n", successes,
                static_cast<int>(records.size()),
                static_cast<double>(successes) / static_cast<double>(records.size()));
  if (out_path.empty()) {
    out << csv.str();
    err << line;
  } else {
    write_text(out_path, csv.str());
    out << line;
  }
  return kExitOk;
}

int cmd_diag(const std::string& j_path, std::optional<int> n, std::optional<int> m,
             const GuidedFlags& flags, std::uint64_t seed, const std::string& out_path,
             const std::string& summary_path, std::ostream& out, std::ostream& err) {
  LatinRectangle j;
  if (!j_path.empty()) {
    j = load_rectangle(j_path);
  } else {
    if (!n) throw CLI::ValidationError("diag", "give a rectangle file or --n");
    const Shape shape = m ? Shape(*n, *m) : Shape::from_epsilon(*n, flags.epsilon.value_or(0.5));
    Rng rng(seed);
    j = random_latin_rectangle(shape.n, shape.m, rng);
  }
  ProcessConfig config = flags.config();
  config.record_trajectory = true;
  const double eps = flags.epsilon.value_or(j.shape().epsilon());
  const auto result = run_process(j, eps, seed, config);

  std::ostringstream csv;
  write_trajectory_csv(result.trajectory, csv);
  nlohmann::json summary = {{"outcome", outcome_name(result.kind)}, {"time", result.time}};
  try {
    summary["summary"] = to_json(summarize(result.trajectory));
  } catch (const EmptyTrajectory&) {
    summary["summary"] = nullptr;
  }
  if (!result.reason.empty()) summary["reason"] = result.reason;

  const std::string summary_text = summary.dump(2) + "\n";
  if (out_path.empty()) {
    out << csv.str();
  } else {
    write_text(out_path, csv.str());
  }
  if (!summary_path.empty()) {
    write_text(summary_path, summary_text);
  } else if (out_path.empty()) {
    err << summary_text;
  } else {
    out << summary_text;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Orthogonal mates for Latin rectangles", "latinmate"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::string out_path;

  auto* gen = app.add_subcommand("gen", "write a random Latin rectangle");
  int gen_n = 0;
  std::optional<int> gen_m;
  std::optional<double> gen_eps;
  gen->add_option("--n", gen_n, "columns and symbols")->required();
  gen->add_option("--m", gen_m, "rows");
  gen->add_option("--epsilon", gen_eps, "rows as round((1 - epsilon) n) when --m is absent");
  gen->add_option("--seed", seed);
  gen->add_option("--out", out_path, "output file (.json for JSON), stdout if absent");

  auto* mate = app.add_subcommand("mate", "find an orthogonal mate of J");
  std::string j_path, l_path, diag_path, algorithm = "guided";
  GuidedFlags mate_flags;
  mate->add_option("J", j_path, "rectangle file")->required();
  mate->add_option("--seed", seed);
  mate->add_option("--algorithm", algorithm)
      ->check(CLI::IsMember({"guided", "hall", "backtrack"}));
  mate->add_option("--out", out_path, "where to write L, stdout if absent");
  mate->add_option("--diag", diag_path, "trajectory CSV (guided only)");
  mate_flags.add(*mate);

  auto* verify = app.add_subcommand("verify", "check that L is an orthogonal mate of J");
  verify->add_option("J", j_path)->required();
  verify->add_option("L", l_path)->required();

  auto* trials = app.add_subcommand("trials", "run an ensemble on fresh random rectangles");
  TrialOptions topts;
  std::optional<int> trials_m;
  GuidedFlags trial_flags;
  trials->add_option("--n", topts.n)->required();
  trials->add_option("--m", trials_m);
  trials->add_option("--count", topts.count)->required();
  trials->add_option("--seed", seed);
  trials->add_option("--algorithm", algorithm)
      ->check(CLI::IsMember({"guided", "hall", "backtrack"}));
  trials->add_option("--jobs", topts.jobs)->check(CLI::PositiveNumber);
  trials->add_option("--out", out_path, "trials CSV, stdout if absent");
  trial_flags.add(*trials);

  auto* diag = app.add_subcommand("diag", "export the trajectory of one guided run");
  std::optional<int> diag_n, diag_m;
  std::string summary_path;
  GuidedFlags diag_flags;
  diag->add_option("J", j_path, "rectangle file; generated from --n/--m/--seed if absent");
  diag->add_option("--n", diag_n);
  diag->add_option("--m", diag_m);
  diag->add_option("--seed", seed);
  diag->add_option("--out", out_path, "trajectory CSV, stdout if absent");
  diag->add_option("--summary", summary_path, "summary JSON file");
  diag_flags.add(*diag);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) return cmd_gen(gen_n, gen_m, gen_eps, seed, out_path, out);
    if (*mate) {
      return cmd_mate(j_path, mate_flags, seed, parse_algorithm(algorithm), out_path, diag_path,
                      out, err);
    }
    if (*verify) return cmd_verify(j_path, l_path, out);
    if (*trials) {
      topts.seed = seed;
      topts.algorithm = parse_algorithm(algorithm);
      topts.config = trial_flags.config();
      return cmd_trials(topts, trials_m, trial_flags.epsilon, out_path, out, err);
    }
    if (*diag) {
      return cmd_diag(j_path, diag_n, diag_m, diag_flags, seed, out_path, summary_path, out,
                      err);
    }
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace latinmate::cli
