#include "latinmate/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace latinmate {

double gamma_width(int n) {
  return std::log(static_cast<double>(n)) / std::sqrt(static_cast<double>(n));
}

GammaBounds GammaBounds::make(int n, double epsilon, const GammaConstants& k) {
  GammaBounds b;
  b.a_bound = epsilon > 0.0 ? k.a / (epsilon * epsilon) / n
                            : std::numeric_limits<double>::infinity();
  const double w = gamma_width(n);
  b.b_low = 1.0 - k.b * w;
  b.b_high = 1.0 + k.b * w;
  b.c_bound = (1.0 + k.c * w) / n;
  return b;
}

const char* inequality_name(Inequality id) {
  switch (id) {
    case Inequality::A_x:
      return "A_x";
    case Inequality::B_line:
      return "B_line";
    case Inequality::C_ikl:
      return "C_ikl";
  }
  return "?";
}

std::string GammaViolation::describe() const {
  std::ostringstream os;
  os << inequality_name(id) << " at ";
  switch (id) {
    case Inequality::A_x:
      os << "point (" << row << "," << first << "," << second << ")";
      break;
    case Inequality::B_line:
      os << (line_class == LineClass::RC ? "RC" : "RS") << " line (" << row << "," << first
         << ")";
      break;
    case Inequality::C_ikl:
      os << "row " << row << " columns (" << first << "," << second << ")";
      break;
  }
  os << ": lhs=" << lhs << " bound=" << bound << " margin=" << margin;
  return os.str();
}

namespace {

// Pair sums Σ_γ a[γ]·b[γ]; the double path is the hot loop of the whole run.
inline double pair_overlap(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int g = 0; g < n; ++g) s += a[g] * b[g];
  return s;
}

inline double pair_overlap(const Rational* a, const Rational* b, int n) {
  Rational s(0);
  for (int g = 0; g < n; ++g) s += a[g] * b[g];
  return s.convert_to<double>();
}

template <class T>
double line_sum_rc(const GuidanceState<T>& s, int i, int k) {
  T sum(0);
  for (int g = 0; g < s.shape.n; ++g) sum += s.at(i, k, g);
  return to_double(sum);
}

template <class T>
double line_sum_rs(const GuidanceState<T>& s, int i, int g) {
  T sum(0);
  for (int k = 0; k < s.shape.n; ++k) sum += s.at(i, k, g);
  return to_double(sum);
}

}  // namespace

template <class T>
GammaReport check_gamma(const GuidanceState<T>& s, double epsilon,
                        const GammaConstants& constants) {
  const int n = s.shape.n;
  const int m = s.shape.m;
  const double tol = 1e-9;
  const auto bounds = GammaBounds::make(n, epsilon, constants);
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  GammaReport report;
  auto fail = [&](GammaViolation v) {
    report.good = false;
    report.violations.push_back(v);
  };

  report.max_p = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < n; ++k) {
      for (int g = 0; g < n; ++g) {
        const double v = to_double(s.at(i, k, g));
        report.max_p = std::max(report.max_p, v);
        const double margin = bounds.a_bound - v;
        if (margin < -tol) {
          fail({.id = Inequality::A_x, .row = i, .first = k, .second = g, .lhs = v,
                .bound = bounds.a_bound, .margin = margin});
        }
      }
    }
  }

  const int first_open = std::max(s.t, 0);
  if (first_open >= m) {
    report.min_line_sum = report.max_line_sum = nan;
    report.min_b_margin = report.max_b_margin = nan;
    report.max_c = nan;
    return report;
  }

  report.min_line_sum = report.min_b_margin = std::numeric_limits<double>::infinity();
  report.max_line_sum = report.max_b_margin = -std::numeric_limits<double>::infinity();
  report.max_c = 0.0;
  auto check_line = [&](LineClass cls, int i, int idx, double sum) {
    report.min_line_sum = std::min(report.min_line_sum, sum);
    report.max_line_sum = std::max(report.max_line_sum, sum);
    const bool low = sum - bounds.b_low < bounds.b_high - sum;
    const double margin = std::min(sum - bounds.b_low, bounds.b_high - sum);
    report.min_b_margin = std::min(report.min_b_margin, margin);
    report.max_b_margin = std::max(report.max_b_margin, margin);
    if (margin < -tol) {
      fail({.id = Inequality::B_line, .row = i, .first = idx, .second = -1, .line_class = cls,
            .lhs = sum, .bound = low ? bounds.b_low : bounds.b_high, .margin = margin});
    }
  };

  for (int i = first_open; i < m; ++i) {
    for (int k = 0; k < n; ++k) check_line(LineClass::RC, i, k, line_sum_rc(s, i, k));
    for (int g = 0; g < n; ++g) check_line(LineClass::RS, i, g, line_sum_rs(s, i, g));
    for (int k = 0; k < n; ++k) {
      const T* pk = &s.at(i, k, 0);
      for (int l = k + 1; l < n; ++l) {
        const double c = pair_overlap(pk, &s.at(i, l, 0), n);
        report.max_c = std::max(report.max_c, c);
        const double margin = bounds.c_bound - c;
        if (margin < -tol) {
          fail({.id = Inequality::C_ikl, .row = i, .first = k, .second = l, .lhs = c,
                .bound = bounds.c_bound, .margin = margin});
        }
      }
    }
  }
  return report;
}

template GammaReport check_gamma<double>(const GuidanceState<double>&, double,
                                         const GammaConstants&);
template GammaReport check_gamma<Rational>(const GuidanceState<Rational>&, double,
                                           const GammaConstants&);

}  // namespace latinmate
