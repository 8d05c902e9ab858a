#pragma once

// Reference constructions that do not use the guidance state: the
// row-by-row matching greedy, an exhaustive search for small orders, and a
// generator for the input rectangles.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latinmate/latin.hpp"
#include "latinmate/random.hpp"

namespace latinmate {

// Columns × symbols of the next row of L. Edge (k,γ) is present iff γ is
// not yet in column k of L and the pair (J(t,k), γ) has not been used.
struct LegalityGraph {
  int n = 0;
  int t = 0;  // rows already placed; the graph describes row t
  std::vector<std::uint8_t> allowed;

  bool edge(int k, int g) const { return allowed[static_cast<std::size_t>(k) * n + g] != 0; }
  int column_degree(int k) const;
  int symbol_degree(int g) const;
  int min_degree() const;
};

// `prefix` holds the rows of L placed so far (rows 0..t-1 of J are paired
// with them).
LegalityGraph legality_graph(const LatinRectangle& j, const std::vector<Permutation>& prefix);

// Perfect matching column -> symbol by augmenting paths. With an rng the
// column order and every adjacency list are shuffled first; without one the
// search is in index order.
std::optional<Permutation> perfect_matching(const LegalityGraph& g, Rng* rng = nullptr);

struct HallResult {
  std::optional<LatinRectangle> mate;
  int failed_row = -1;
  std::string reason;
  std::vector<int> min_degrees;  // of each legality graph that was built
};

// Mates the first m rows of J. Each row always has a perfect matching while
// the legality graph's minimum degree is at least n/2, which holds for
// m <= n/4.
HallResult hall_greedy(const LatinRectangle& j, int m, Rng& rng);

struct BacktrackLimits {
  std::uint64_t max_nodes = 50'000'000;
};

struct BacktrackStats {
  std::uint64_t nodes = 0;
};

// Depth-first search over cells in row-major order, symbols ascending, with
// forward checking on the open cells of the current row. Returns nullopt once
// the space is exhausted. Throws LimitExceeded when the node budget runs out.
std::optional<LatinRectangle> backtrack_mate(const LatinRectangle& j,
                                             const BacktrackLimits& limits = {},
                                             BacktrackStats* stats = nullptr);

// Extension-random Latin rectangle: each row is a shuffled perfect matching
// of the availability graph (symbol not yet in the column). Not uniform over
// all Latin rectangles.
LatinRectangle random_latin_rectangle(int n, int m, Rng& rng);

}  // namespace latinmate
