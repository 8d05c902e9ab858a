#include "latinmate/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace latinmate {

int LegalityGraph::column_degree(int k) const {
  int d = 0;
  for (int g = 0; g < n; ++g) d += edge(k, g);
  return d;
}

int LegalityGraph::symbol_degree(int g) const {
  int d = 0;
  for (int k = 0; k < n; ++k) d += edge(k, g);
  return d;
}

int LegalityGraph::min_degree() const {
  int d = n;
  for (int v = 0; v < n; ++v) d = std::min({d, column_degree(v), symbol_degree(v)});
  return d;
}

LegalityGraph legality_graph(const LatinRectangle& j, const std::vector<Permutation>& prefix) {
  const int n = j.n();
  const int t = static_cast<int>(prefix.size());
  if (t >= j.m()) throw IndexOutOfRange("no row of J left to pair with");

  LegalityGraph g;
  g.n = n;
  g.t = t;
  g.allowed.assign(static_cast<std::size_t>(n) * n, 1);
  auto forbid = [&](int k, int s) { g.allowed[static_cast<std::size_t>(k) * n + s] = 0; };
  for (int i = 0; i < t; ++i) {
    const Permutation& row = prefix[i];
    if (static_cast<int>(row.size()) != n) throw ShapeMismatch("prefix row has wrong width");
    for (int k = 0; k < n; ++k) {
      forbid(k, row[k]);
      // (J(t,k), row[kd]) already appeared at (i, kd).
      const int kd = j.column_of(i, j.at(t, k));
      forbid(k, row[kd]);
    }
  }
  return g;
}

namespace {

class Kuhn {
 public:
  Kuhn(const LegalityGraph& g, Rng* rng) : g_(g), adj_(g.n), match_sym_(g.n, -1) {
    for (int k = 0; k < g.n; ++k) {
      for (int s = 0; s < g.n; ++s) {
        if (g.edge(k, s)) adj_[k].push_back(s);
      }
      if (rng) shuffle(adj_[k], *rng);
    }
    order_.resize(g.n);
    std::iota(order_.begin(), order_.end(), 0);
    if (rng) shuffle(order_, *rng);
  }

  std::optional<Permutation> solve() {
    for (int k : order_) {
      seen_.assign(g_.n, 0);
      if (!augment(k)) return std::nullopt;
    }
    Permutation row(g_.n, -1);
    for (int s = 0; s < g_.n; ++s) row[match_sym_[s]] = s;
    return row;
  }

 private:
  bool augment(int k) {
    for (int s : adj_[k]) {
      if (seen_[s]) continue;
      seen_[s] = 1;
      if (match_sym_[s] < 0 || augment(match_sym_[s])) {
        match_sym_[s] = k;
        return true;
      }
    }
    return false;
  }

  const LegalityGraph& g_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> match_sym_;
  std::vector<int> order_;
  std::vector<std::uint8_t> seen_;
};

LatinRectangle from_rows(const Shape& shape, const std::vector<Permutation>& rows) {
  std::vector<int> cells;
  cells.reserve(shape.cells());
  for (const auto& r : rows) cells.insert(cells.end(), r.begin(), r.end());
  return LatinRectangle(shape, std::move(cells));
}

LatinRectangle first_rows(const LatinRectangle& j, int m) {
  std::vector<int> cells(j.cells().begin(),
                         j.cells().begin() + static_cast<std::ptrdiff_t>(m) * j.n());
  return LatinRectangle(Shape(j.n(), m), std::move(cells));
}

}  // namespace

std::optional<Permutation> perfect_matching(const LegalityGraph& g, Rng* rng) {
  return Kuhn(g, rng).solve();
}

HallResult hall_greedy(const LatinRectangle& j, int m, Rng& rng) {
  if (m < 1 || m > j.m()) {
    throw InvalidShape("hall_greedy needs 1 <= m <= " + std::to_string(j.m()) + ", got " +
                       std::to_string(m));
  }
  const LatinRectangle jm = m == j.m() ? j : first_rows(j, m);

  HallResult result;
  std::vector<Permutation> rows;
  for (int t = 0; t < m; ++t) {
    const LegalityGraph g = legality_graph(jm, rows);
    result.min_degrees.push_back(g.min_degree());
    auto row = perfect_matching(g, &rng);
    if (!row) {
      result.failed_row = t;
      result.reason = "no perfect matching in the legality graph of row " + std::to_string(t) +
                      " (min degree " + std::to_string(result.min_degrees.back()) + ")";
      return result;
    }
    rows.push_back(std::move(*row));
  }

  LatinRectangle l = from_rows(jm.shape(), rows);
  if (!verify_latin(l).ok || !verify_orthogonal(l, jm).ok) {
    throw std::logic_error("hall_greedy produced an invalid mate");
  }
  result.mate = std::move(l);
  return result;
}

namespace {

class Backtracker {
 public:
  Backtracker(const LatinRectangle& j, const BacktrackLimits& limits)
      : j_(j),
        n_(j.n()),
        m_(j.m()),
        limits_(limits),
        cells_(j.cells().size(), -1),
        row_used_(static_cast<std::size_t>(m_) * n_, 0),
        col_used_(static_cast<std::size_t>(n_) * n_, 0),
        pair_used_(static_cast<std::size_t>(n_) * n_, 0) {}

  bool search(int cell) {
    if (cell == m_ * n_) return true;
    const int i = cell / n_;
    const int k = cell % n_;
    const int a = j_.at(i, k);
    for (int s = 0; s < n_; ++s) {
      if (!free(i, k, a, s)) continue;
      if (++nodes_ > limits_.max_nodes) {
        throw LimitExceeded("backtrack node budget of " + std::to_string(limits_.max_nodes) +
                            " exhausted");
      }
      place(cell, a, s, 1);
      if (row_open(i, k) && search(cell + 1)) return true;
      place(cell, a, s, 0);
    }
    return false;
  }

  std::uint64_t nodes() const { return nodes_; }
  const std::vector<int>& cells() const { return cells_; }

 private:
  std::size_t idx(int a, int b) const { return static_cast<std::size_t>(a) * n_ + b; }

  bool free(int i, int k, int a, int s) const {
    return !row_used_[idx(i, s)] && !col_used_[idx(k, s)] && !pair_used_[idx(a, s)];
  }

  void place(int cell, int a, int s, std::uint8_t v) {
    const int k = cell % n_;
    row_used_[idx(cell / n_, s)] = v;
    col_used_[idx(k, s)] = v;
    pair_used_[idx(a, s)] = v;
    cells_[cell] = v ? s : -1;
  }

  // Every later cell of row i still has a candidate.
  bool row_open(int i, int k) const {
    for (int kk = k + 1; kk < n_; ++kk) {
      const int a = j_.at(i, kk);
      bool any = false;
      for (int s = 0; s < n_ && !any; ++s) any = free(i, kk, a, s);
      if (!any) return false;
    }
    return true;
  }

  const LatinRectangle& j_;
  int n_;
  int m_;
  BacktrackLimits limits_;
  std::uint64_t nodes_ = 0;
  std::vector<int> cells_;
  std::vector<std::uint8_t> row_used_;
  std::vector<std::uint8_t> col_used_;
  std::vector<std::uint8_t> pair_used_;
};

}  // namespace

std::optional<LatinRectangle> backtrack_mate(const LatinRectangle& j,
                                             const BacktrackLimits& limits,
                                             BacktrackStats* stats) {
  const auto report = verify_latin(j);
  if (!report.ok) throw NotLatin(report.violations.front().describe());

  Backtracker bt(j, limits);
  bool found = false;
  try {
    found = bt.search(0);
  } catch (const LimitExceeded&) {
    if (stats) stats->nodes = bt.nodes();
    throw;
  }
  if (stats) stats->nodes = bt.nodes();
  if (!found) return std::nullopt;

  LatinRectangle l(j.shape(), bt.cells());
  if (!verify_latin(l).ok || !verify_orthogonal(l, j).ok) {
    throw std::logic_error("backtrack_mate produced an invalid mate");
  }
  return l;
}

LatinRectangle random_latin_rectangle(int n, int m, Rng& rng) {
  const Shape shape(n, m);
  LegalityGraph g;
  g.n = n;
  g.allowed.assign(static_cast<std::size_t>(n) * n, 1);
  std::vector<Permutation> rows;
  for (int t = 0; t < m; ++t) {
    g.t = t;
    auto row = perfect_matching(g, &rng);
    if (!row) throw std::logic_error("availability graph lost its perfect matching");
    for (int k = 0; k < n; ++k) g.allowed[static_cast<std::size_t>(k) * n + (*row)[k]] = 0;
    rows.push_back(std::move(*row));
  }
  return from_rows(shape, rows);
}

}  // namespace latinmate
