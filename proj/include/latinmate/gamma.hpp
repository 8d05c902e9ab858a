#pragma once

// Membership test for the good region Γ:
//   (A_x)  p(x) <= a·ε⁻²/n                            for every point
//   (B_ℓ)  |Σ_{y∈ℓ} p(y) - 1| <= b·log n/√n           for RC and RS lines of open rows
//   (C_ikl) Σ_γ p(i,k,γ)p(i,l,γ) <= (1/n)(1 + c·log n/√n)  for open rows, k < l
// with a = 1.1, b = c = 1 unless overridden.

#include <string>
#include <vector>

#include "latinmate/state.hpp"

namespace latinmate {

struct GammaConstants {
  double a = 1.1;
  double b = 1.0;
  double c = 1.0;
};

struct GammaBounds {
  double a_bound;  // +inf when ε <= 0
  double b_low;
  double b_high;
  double c_bound;

  static GammaBounds make(int n, double epsilon, const GammaConstants& k);
};

// log n / √n with the natural log.
double gamma_width(int n);

enum class Inequality { A_x, B_line, C_ikl };

const char* inequality_name(Inequality id);

struct GammaViolation {
  Inequality id;
  // A_x: (row, col, sym). B_line: (row, col or sym) with line_class RC or RS.
  // C_ikl: (row, k, l).
  int row = 0;
  int first = 0;
  int second = 0;
  LineClass line_class = LineClass::RC;
  double lhs = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // negative: by how much the inequality fails

  std::string describe() const;
};

struct GammaReport {
  bool good = true;
  std::vector<GammaViolation> violations;

  // Extremes over everything that was checked; NaN when no open row exists.
  double max_p = 0.0;
  double min_line_sum = 0.0;
  double max_line_sum = 0.0;
  double min_b_margin = 0.0;
  double max_b_margin = 0.0;
  double max_c = 0.0;
};

template <class T>
GammaReport check_gamma(const GuidanceState<T>& s, double epsilon,
                        const GammaConstants& constants = {});

}  // namespace latinmate
