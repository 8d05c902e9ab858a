#include "latinmate/matching.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "latinmate/flow.hpp"

namespace latinmate {

double default_eta_initial(int n) {
  if (n <= 1) return 0.0;
  const double a = std::log(static_cast<double>(n)) / std::sqrt(static_cast<double>(n));
  return 4.0 * std::sqrt(a);
}

template <class T>
RowDistribution<T> normalize_row(const GuidanceState<T>& s, int row) {
  const int n = s.shape.n;
  if (row < 0 || row >= s.shape.m) throw IndexOutOfRange("row " + std::to_string(row));
  if (!s.row_uncoloured(row)) {
    throw RowAlreadyColoured("row " + std::to_string(row) + " is already placed");
  }
  RowDistribution<T> d{SquareMatrix<T>(n)};
  for (int g = 0; g < n; ++g) {
    T total(0);
    for (int k = 0; k < n; ++k) total += s.at(row, k, g);
    if (!(total > T(0))) {
      throw DeadSymbol("symbol " + std::to_string(g) + " has no mass left on row " +
                       std::to_string(row));
    }
    for (int k = 0; k < n; ++k) d.w(k, g) = s.at(row, k, g) / total;
  }
  return d;
}

template <class T>
std::optional<FractionalMatching<T>> try_fractional_matching(const RowDistribution<T>& d,
                                                             double eta) {
  const int n = d.n();
  const T scale = T(1) + ScalarTraits<T>::from_double(eta);
  std::vector<T> capacity(d.w.a.size());
  std::vector<T> warm(d.w.a.size());
  for (int k = 0; k < n; ++k) {
    T row_mass(0);
    for (int g = 0; g < n; ++g) row_mass += d.w(k, g);
    // d itself, scaled so no column ships more than 1
    const T shrink = row_mass > T(1) ? row_mass : T(1);
    for (int g = 0; g < n; ++g) {
      const std::size_t i = static_cast<std::size_t>(k) * n + g;
      capacity[i] = scale * d.w.a[i];
      warm[i] = d.w.a[i] / shrink;
    }
  }
  auto flow = max_bipartite_flow<T>(n, capacity, std::move(warm));
  if (flow.value < T(n) - ScalarTraits<T>::tolerance()) return std::nullopt;

  FractionalMatching<T> q{SquareMatrix<T>(n)};
  for (std::size_t i = 0; i < flow.flow.size(); ++i) {
    T v = flow.flow[i];
    if (v < T(0)) v = T(0);
    if (v > capacity[i]) v = capacity[i];
    q.q.a[i] = v;
  }
  return q;
}

template <class T>
MatchingResult<T> build_fractional_matching(const RowDistribution<T>& d,
                                            const EtaSchedule& schedule) {
  MatchingResult<T> result;
  double eta = std::max(0.0, schedule.initial);
  while (true) {
    ++result.attempts;
    if (auto q = try_fractional_matching(d, eta)) {
      result.q = std::move(*q);
      result.eta_used = eta;
      return result;
    }
    if (schedule.policy == EtaPolicy::Fixed || eta >= schedule.max) {
      throw Infeasible("no fractional matching with q <= (1+eta)d up to eta=" +
                       std::to_string(eta));
    }
    eta = eta > 0.0 ? std::min(2.0 * eta, schedule.max) : schedule.max;
  }
}

namespace {

// Kuhn's augmenting paths over the positive support, deterministic order.
template <class T>
class SupportMatcher {
 public:
  explicit SupportMatcher(const SquareMatrix<T>& r)
      : r_(r),
        adj_(static_cast<std::size_t>(r.n)),
        sym_of_(static_cast<std::size_t>(r.n), -1),
        col_of_(static_cast<std::size_t>(r.n), -1),
        seen_(static_cast<std::size_t>(r.n)) {
    for (int k = 0; k < r.n; ++k) {
      for (int g = 0; g < r.n; ++g) {
        if (r(k, g) > T(0)) adj_[k].push_back(g);
      }
    }
  }

  // Completes the current partial matching; false if the support has no
  // perfect matching.
  bool complete() {
    for (int k = 0; k < r_.n; ++k) {
      if (sym_of_[k] >= 0) continue;
      std::fill(seen_.begin(), seen_.end(), 0);
      if (!augment(k)) return false;
    }
    return true;
  }

  void unmatch(int k) {
    col_of_[sym_of_[k]] = -1;
    sym_of_[k] = -1;
  }

  const Permutation& perm() const { return sym_of_; }

 private:
  // Each column is entered at most once per search, so its list can be
  // pruned of zeroed entries on the way in.
  bool augment(int k) {
    auto& adj = adj_[k];
    std::erase_if(adj, [&](int g) { return !(r_(k, g) > T(0)); });
    for (int g : adj) {
      if (seen_[g]) continue;
      seen_[g] = 1;
      if (col_of_[g] < 0 || augment(col_of_[g])) {
        sym_of_[k] = g;
        col_of_[g] = k;
        return true;
      }
    }
    return false;
  }

  const SquareMatrix<T>& r_;
  std::vector<std::vector<int>> adj_;
  Permutation sym_of_;
  std::vector<int> col_of_;
  std::vector<char> seen_;
};

}  // namespace

template <class T>
BirkhoffDecomposition<T> birkhoff_decompose(const FractionalMatching<T>& q) {
  const int n = q.n();
  const T dust = ScalarTraits<T>::dust();
  SquareMatrix<T> r = q.q;
  std::size_t support = 0;
  for (auto& v : r.a) {
    if (v <= dust) {
      v = T(0);
    } else {
      ++support;
    }
  }

  BirkhoffDecomposition<T> dec;
  dec.n = n;
  SupportMatcher<T> matcher(r);
  while (support > 0) {
    if (!matcher.complete()) {
      // Whatever is left must be rounding residue.
      double left = 0.0;
      for (const auto& v : r.a) left += to_double(v);
      if (!ScalarTraits<T>::exact && left <= 1e-9 * n) break;
      throw NoSupportMatching("support has no perfect matching (remaining mass " +
                              std::to_string(left) + ")");
    }
    const Permutation& perm = matcher.perm();
    int argmin = 0;
    for (int k = 1; k < n; ++k) {
      if (r(k, perm[k]) < r(argmin, perm[argmin])) argmin = k;
    }
    const T c = r(argmin, perm[argmin]);
    dec.terms.push_back({c, perm});
    for (int k = 0; k < n; ++k) {
      T& v = r(k, perm[k]);
      v -= c;
      if (k == argmin || v <= dust) {
        v = T(0);
        --support;
        matcher.unmatch(k);
      }
    }
  }
  return dec;
}

template <class T>
Permutation sample_matching(const BirkhoffDecomposition<T>& dec, Rng& rng) {
  double total = 0.0;
  for (const auto& term : dec.terms) total += to_double(term.coefficient);
  const double u = uniform01(rng) * total;
  double acc = 0.0;
  for (const auto& term : dec.terms) {
    acc += to_double(term.coefficient);
    if (u < acc) return term.perm;
  }
  return dec.terms.back().perm;
}

CutCheck cut_check_bruteforce(const RowDistribution<double>& d, double eta) {
  const int n = d.n();
  if (n > kCutCheckMaxN) {
    throw TooLarge("cut enumeration capped at n=" + std::to_string(kCutCheckMaxN) + ", got " +
                   std::to_string(n));
  }
  const double tol = ScalarTraits<double>::tolerance();
  CutCheck out;
  out.min_capacity = 2.0 * n;
  std::vector<double> through(static_cast<std::size_t>(n));
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::fill(through.begin(), through.end(), 0.0);
    int b = 0;
    for (int k = 0; k < n; ++k) {
      if (!(mask >> k & 1u)) continue;
      ++b;
      for (int g = 0; g < n; ++g) through[g] += d.w(k, g);
    }
    // symbol γ joins A exactly when that lowers the capacity
    double capacity = 2.0 * n - b;
    for (int g = 0; g < n; ++g) {
      const double term = (1.0 + eta) * through[g] - 1.0;
      if (term < 0.0) capacity += term;
    }
    if (capacity < out.min_capacity) out.min_capacity = capacity;
    if (capacity < n - tol && !out.witness) {
      CutWitness w;
      w.capacity = capacity;
      for (int k = 0; k < n; ++k) {
        if (mask >> k & 1u) w.columns.push_back(k);
      }
      for (int g = 0; g < n; ++g) {
        if ((1.0 + eta) * through[g] < 1.0) w.symbols.push_back(g);
      }
      out.witness = std::move(w);
      out.feasible = false;
    }
  }
  return out;
}

template <class T>
bool is_doubly_stochastic(const SquareMatrix<T>& m, double tol) {
  for (int k = 0; k < m.n; ++k) {
    double row = 0.0;
    double col = 0.0;
    for (int g = 0; g < m.n; ++g) {
      if (to_double(m(k, g)) < -tol || to_double(m(g, k)) < -tol) return false;
      row += to_double(m(k, g));
      col += to_double(m(g, k));
    }
    if (std::abs(row - 1.0) > tol || std::abs(col - 1.0) > tol) return false;
  }
  return true;
}

template <class T>
SquareMatrix<double> reconstruct(const BirkhoffDecomposition<T>& dec) {
  SquareMatrix<double> out(dec.n);
  for (const auto& term : dec.terms) {
    const double c = to_double(term.coefficient);
    for (int k = 0; k < dec.n; ++k) out(k, term.perm[k]) += c;
  }
  return out;
}

template <class T>
nlohmann::json to_json(const FractionalMatching<T>& q) {
  nlohmann::json rows = nlohmann::json::array();
  for (int k = 0; k < q.n(); ++k) {
    std::vector<double> row;
    for (int g = 0; g < q.n(); ++g) row.push_back(to_double(q.q(k, g)));
    rows.push_back(row);
  }
  return {{"n", q.n()}, {"q", rows}};
}

template <class T>
nlohmann::json to_json(const BirkhoffDecomposition<T>& dec) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& term : dec.terms) {
    terms.push_back({{"coefficient", to_double(term.coefficient)}, {"perm", term.perm}});
  }
  return {{"n", dec.n}, {"terms", terms}};
}

#define LATINMATE_INSTANTIATE(T)                                                              \
  template RowDistribution<T> normalize_row<T>(const GuidanceState<T>&, int);                 \
  template std::optional<FractionalMatching<T>> try_fractional_matching<T>(                   \
      const RowDistribution<T>&, double);                                                     \
  template MatchingResult<T> build_fractional_matching<T>(const RowDistribution<T>&,          \
                                                          const EtaSchedule&);                \
  template BirkhoffDecomposition<T> birkhoff_decompose<T>(const FractionalMatching<T>&);      \
  template Permutation sample_matching<T>(const BirkhoffDecomposition<T>&, Rng&);             \
  template bool is_doubly_stochastic<T>(const SquareMatrix<T>&, double);                      \
  template SquareMatrix<double> reconstruct<T>(const BirkhoffDecomposition<T>&);              \
  template nlohmann::json to_json<T>(const FractionalMatching<T>&);                           \
  template nlohmann::json to_json<T>(const BirkhoffDecomposition<T>&);

LATINMATE_INSTANTIATE(double)
LATINMATE_INSTANTIATE(Rational)

#undef LATINMATE_INSTANTIATE

}  // namespace latinmate
