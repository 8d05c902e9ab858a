#include <cmath>

#include "doctest.h"
#include "latinmate/baselines.hpp"

using namespace latinmate;

TEST_CASE("random Latin rectangles are Latin and reproducible") {
  for (int n : {1, 2, 5, 9, 16}) {
    for (int m : {1, (n + 1) / 2, n}) {
      Rng a(n * 100 + m);
      Rng b(n * 100 + m);
      const auto r = random_latin_rectangle(n, m, a);
      CHECK(r.shape() == Shape(n, m));
      CHECK(verify_latin(r).ok);
      CHECK(r == random_latin_rectangle(n, m, b));
    }
  }
  Rng rng(1);
  CHECK_THROWS_AS(random_latin_rectangle(4, 5, rng), InvalidShape);
}

TEST_CASE("first cell of a random rectangle is uniform") {
  const int n = 4;
  const int draws = 5000;
  std::vector<int> count(n, 0);
  Rng rng(31);
  for (int i = 0; i < draws; ++i) count[random_latin_rectangle(n, 2, rng).at(0, 0)]++;
  const double tol = 4.0 * std::sqrt(0.1875 / draws);
  for (int c : count) CHECK(std::abs(static_cast<double>(c) / draws - 0.25) <= tol);
}

TEST_CASE("legality graph degrees") {
  Rng rng(12);
  const int n = 12;
  const auto j = random_latin_rectangle(n, n, rng);
  std::vector<Permutation> prefix;
  for (int t = 0; t < 5; ++t) {
    const auto g = legality_graph(j, prefix);
    CHECK(g.t == t);
    CHECK(g.min_degree() >= n - 2 * t);
    // Each placed row removes at most two options per vertex.
    for (int v = 0; v < n; ++v) {
      CHECK(g.column_degree(v) >= n - 2 * t);
      CHECK(g.symbol_degree(v) >= n - 2 * t);
    }
    // Every edge is legal by the definition.
    for (int k = 0; k < n; ++k) {
      for (int s = 0; s < n; ++s) {
        bool legal = true;
        for (int i = 0; i < t; ++i) {
          for (int c = 0; c < n; ++c) {
            if (prefix[i][c] != s) continue;
            if (c == k || j.at(i, c) == j.at(t, k)) legal = false;
          }
        }
        CHECK(g.edge(k, s) == legal);
      }
    }
    auto row = perfect_matching(g, &rng);
    REQUIRE(row);
    prefix.push_back(*row);
  }
  CHECK_THROWS_AS(legality_graph(cyclic_rectangle(3, 1), {{0, 1, 2}}), IndexOutOfRange);
}

TEST_CASE("hall greedy succeeds below n/4") {
  for (int n : {4, 8, 16, 32}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng(seed);
      const int m = n / 4;
      const auto j = random_latin_rectangle(n, n, rng);
      const auto r = hall_greedy(j, m, rng);
      REQUIRE(r.mate);
      CHECK(r.mate->shape() == Shape(n, m));
      const std::vector<int> top(j.cells().begin(), j.cells().begin() + m * n);
      CHECK(verify_orthogonal(*r.mate, LatinRectangle(Shape(n, m), top)).ok);
      for (int t = 0; t < m; ++t) CHECK(r.min_degrees[t] >= n - 2 * t);
    }
  }
}

TEST_CASE("hall greedy on one row and on hopeless inputs") {
  Rng rng(3);
  for (int n : {1, 3, 7}) {
    const auto r = hall_greedy(cyclic_rectangle(n, 1), 1, rng);
    REQUIRE(r.mate);
  }
  // No mate exists, so some row must fail.
  const auto r = hall_greedy(cyclic_rectangle(2, 2), 2, rng);
  CHECK_FALSE(r.mate);
  CHECK(r.failed_row == 1);
  CHECK_FALSE(r.reason.empty());
  CHECK_THROWS_AS(hall_greedy(cyclic_rectangle(4, 2), 3, rng), InvalidShape);
}

TEST_CASE("backtracking on small cyclic squares") {
  CHECK_FALSE(backtrack_mate(cyclic_rectangle(2, 2)).has_value());
  const auto j3 = cyclic_rectangle(3, 3);
  const auto l3 = backtrack_mate(j3);
  REQUIRE(l3);
  CHECK(verify_latin(*l3).ok);
  CHECK(verify_orthogonal(*l3, j3).ok);
  const auto one = backtrack_mate(cyclic_rectangle(6, 1));
  REQUIRE(one);
  CHECK(one->row(0) == Permutation{0, 1, 2, 3, 4, 5});
  const auto j5 = cyclic_rectangle(5, 5);
  const auto l5 = backtrack_mate(j5);
  REQUIRE(l5);
  CHECK(verify_orthogonal(*l5, j5).ok);
  CHECK_FALSE(backtrack_mate(cyclic_rectangle(4, 4)).has_value());
}

TEST_CASE("backtracking respects the node budget") {
  BacktrackStats stats;
  CHECK_THROWS_AS(backtrack_mate(cyclic_rectangle(6, 6), {1000}, &stats), LimitExceeded);
  CHECK(stats.nodes > 1000);
}

TEST_CASE("backtracking finds mates for random rectangles") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const auto j = random_latin_rectangle(6, 3, rng);
    const auto l = backtrack_mate(j);
    REQUIRE(l);
    CHECK(verify_orthogonal(*l, j).ok);
  }
}
