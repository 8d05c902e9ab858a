#pragma once

// Turning one row of the guidance state into a random permutation:
//   normalize_row -> build_fractional_matching (max flow with capacities
//   (1+η)·d) -> birkhoff_decompose -> sample_matching.
// cut_check_bruteforce is the independent min-cut oracle for the flow step.

#include <optional>
#include <vector>

#include "json.hpp"
#include "latinmate/latin.hpp"
#include "latinmate/random.hpp"
#include "latinmate/scalar.hpp"
#include "latinmate/state.hpp"

namespace latinmate {

// Dense n×n matrix indexed (column, symbol).
template <class T>
struct SquareMatrix {
  int n = 0;
  std::vector<T> a;

  SquareMatrix() = default;
  explicit SquareMatrix(int n_, T fill = T(0))
      : n(n_), a(static_cast<std::size_t>(n_) * n_, fill) {}

  T& operator()(int k, int g) { return a[static_cast<std::size_t>(k) * n + g]; }
  const T& operator()(int k, int g) const { return a[static_cast<std::size_t>(k) * n + g]; }
};

// Per-symbol normalized weights of one row: Σ_k w(k,γ) = 1 for every γ.
template <class T>
struct RowDistribution {
  SquareMatrix<T> w;
  int n() const { return w.n; }
};

// Doubly stochastic n×n matrix (fractional perfect matching columns↔symbols).
template <class T>
struct FractionalMatching {
  SquareMatrix<T> q;
  int n() const { return q.n; }
};

template <class T>
struct BirkhoffDecomposition {
  struct Term {
    T coefficient;
    Permutation perm;  // column -> symbol
  };
  int n = 0;
  std::vector<Term> terms;
};

enum class EtaPolicy { Doubling, Fixed };

struct EtaSchedule {
  EtaPolicy policy = EtaPolicy::Doubling;
  double initial = 0.0;
  double max = 64.0;
};

// 4·sqrt(log n / sqrt n), natural log; 0 for n = 1.
double default_eta_initial(int n);

template <class T>
struct MatchingResult {
  FractionalMatching<T> q;
  double eta_used = 0.0;
  int attempts = 0;
};

// Throws RowAlreadyColoured for a placed row and DeadSymbol when some symbol
// has no mass left on the row.
template <class T>
RowDistribution<T> normalize_row(const GuidanceState<T>& s, int row);

// Max-flow attempt at a single η. Returns nullopt when the flow value falls
// short of n (beyond the scalar tolerance).
template <class T>
std::optional<FractionalMatching<T>> try_fractional_matching(const RowDistribution<T>& d,
                                                             double eta);

// Runs the η schedule: initial, then doubling up to max (Doubling), or the
// initial value only (Fixed). Throws Infeasible.
template <class T>
MatchingResult<T> build_fractional_matching(const RowDistribution<T>& d,
                                            const EtaSchedule& schedule);

// Entries at or below the dust level are dropped first. Throws
// NoSupportMatching.
template <class T>
BirkhoffDecomposition<T> birkhoff_decompose(const FractionalMatching<T>& q);

// One uniform draw; picks term i with probability c_i / Σ c.
template <class T>
Permutation sample_matching(const BirkhoffDecomposition<T>& dec, Rng& rng);

struct CutWitness {
  std::vector<int> symbols;  // A: symbols on the sink side
  std::vector<int> columns;  // B: columns on the source side
  double capacity = 0.0;
};

struct CutCheck {
  bool feasible = true;
  double min_capacity = 0.0;
  std::optional<CutWitness> witness;
};

inline constexpr int kCutCheckMaxN = 14;

// Evaluates 2n - |A| - |B| + (1+η)·Σ_{γ∈A, k∈B} d(k,γ) >= n over all symbol
// sets A and column sets B. For each B the minimizing A is taken directly
// (γ ∈ A iff (1+η)·d(B,γ) < 1), so the cost is 2^n · n². Throws TooLarge for
// n > kCutCheckMaxN.
CutCheck cut_check_bruteforce(const RowDistribution<double>& d, double eta);

template <class T>
bool is_doubly_stochastic(const SquareMatrix<T>& m, double tol);

template <class T>
SquareMatrix<double> reconstruct(const BirkhoffDecomposition<T>& dec);

template <class T>
nlohmann::json to_json(const FractionalMatching<T>& q);
template <class T>
nlohmann::json to_json(const BirkhoffDecomposition<T>& dec);

}  // namespace latinmate
