#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "latinmate/flow.hpp"
#include "latinmate/matching.hpp"

using namespace latinmate;
using testutil::random_doubly_stochastic;
using testutil::random_row_distribution;

TEST_CASE("default eta") {
  CHECK(default_eta_initial(1) == 0.0);
  CHECK(default_eta_initial(64) == doctest::Approx(4.0 * std::sqrt(std::log(64.0) / 8.0)));
}

TEST_CASE("normalize_row") {
  auto s = init_state<double>(Shape(4, 3));
  s.at(1, 0, 2) = 0.75;
  const auto d = normalize_row(s, 1);
  for (int g = 0; g < 4; ++g) {
    double sum = 0.0;
    for (int k = 0; k < 4; ++k) sum += d.w(k, g);
    CHECK(sum == doctest::Approx(1.0));
  }
  CHECK(d.w(0, 2) == doctest::Approx(0.75 / 1.5));
  s.t = 1;
  CHECK_THROWS_AS(normalize_row(s, 0), RowAlreadyColoured);
  CHECK_THROWS_AS(normalize_row(s, 3), IndexOutOfRange);
  for (int k = 0; k < 4; ++k) s.at(2, k, 1) = 0.0;
  CHECK_THROWS_AS(normalize_row(s, 2), DeadSymbol);
}

TEST_CASE("max flow on a small network") {
  // Column 0 reaches symbol 0 only; column 1 reaches symbol 1 with 0.5.
  const std::vector<double> cap{1.0, 0.0, 1.0, 0.5};
  const auto f = max_bipartite_flow<double>(2, cap);
  CHECK(f.value == doctest::Approx(1.5));
  CHECK(f.flow[1] == 0.0);
  const std::vector<Rational> rcap{Rational(1, 3), Rational(2, 3), Rational(2, 3),
                                   Rational(1, 3)};
  const auto rf = max_bipartite_flow<Rational>(2, rcap);
  CHECK(rf.value == Rational(2));
}

TEST_CASE("uniform and doubly stochastic inputs come back unchanged") {
  const int n = 6;
  RowDistribution<double> uniform{SquareMatrix<double>(n, 1.0 / n)};
  const auto q = try_fractional_matching(uniform, 0.0);
  REQUIRE(q);
  for (double v : q->q.a) CHECK(v == doctest::Approx(1.0 / n));

  Rng rng(4);
  const auto ds = random_doubly_stochastic(n, 5, rng);
  const auto q2 = try_fractional_matching(RowDistribution<double>{ds}, 0.0);
  REQUIRE(q2);
  for (std::size_t i = 0; i < ds.a.size(); ++i) CHECK(q2->q.a[i] == doctest::Approx(ds.a[i]));
}

TEST_CASE("flow feasibility equals the cut condition") {
  Rng rng(2024);
  int feasible = 0;
  int infeasible = 0;
  for (int n = 2; n <= 8; ++n) {
    for (int rep = 0; rep < 60; ++rep) {
      const auto d = random_row_distribution(n, rng, rep % 3 == 0 ? 0.6 : 0.3);
      for (double eta : {0.0, 0.1, 0.5, 2.0}) {
        const bool flow_ok = try_fractional_matching(d, eta).has_value();
        const auto cut = cut_check_bruteforce(d, eta);
        CHECK_MESSAGE(flow_ok == cut.feasible, "n=" << n << " rep=" << rep << " eta=" << eta);
        if (!cut.feasible) {
          REQUIRE(cut.witness);
          CHECK(cut.witness->capacity < n);
        }
        (flow_ok ? feasible : infeasible)++;
      }
    }
  }
  // The sample must exercise both outcomes.
  CHECK(feasible > 50);
  CHECK(infeasible > 50);
}

TEST_CASE("cut witness for a column with no mass") {
  RowDistribution<double> d{SquareMatrix<double>(3)};
  // Column 2 carries nothing; columns 0 and 1 split every symbol.
  for (int g = 0; g < 3; ++g) d.w(0, g) = d.w(1, g) = 0.5;
  const auto cut = cut_check_bruteforce(d, 0.5);
  CHECK_FALSE(cut.feasible);
  CHECK_FALSE(try_fractional_matching(d, 0.5).has_value());
  CHECK(cut.min_capacity == doctest::Approx(2.0));
  CHECK_THROWS_AS(cut_check_bruteforce(RowDistribution<double>{SquareMatrix<double>(15)}, 0.1),
                  TooLarge);
}

TEST_CASE("returned matchings respect the capacity and are doubly stochastic") {
  Rng rng(77);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 3 + rep % 8;
    const auto d = random_row_distribution(n, rng, 0.2);
    const EtaSchedule sched{EtaPolicy::Doubling, 0.05, 64.0};
    MatchingResult<double> r;
    try {
      r = build_fractional_matching(d, sched);
    } catch (const Infeasible&) {
      continue;
    }
    CHECK(is_doubly_stochastic(r.q.q, 1e-9));
    for (std::size_t i = 0; i < d.w.a.size(); ++i) {
      CHECK(r.q.q.a[i] <= (1.0 + r.eta_used) * d.w.a[i] + 1e-12);
    }
    CHECK(r.eta_used >= 0.05);
    CHECK(r.attempts >= 1);
  }
}

TEST_CASE("eta schedule") {
  RowDistribution<double> d{SquareMatrix<double>(2)};
  // Column 0 holds 0.8 of both symbols; needs (1+η)·0.2 >= 0.5 for column 1.
  for (int g = 0; g < 2; ++g) {
    d.w(0, g) = 0.8;
    d.w(1, g) = 0.2;
  }
  const auto r = build_fractional_matching(d, {EtaPolicy::Doubling, 0.25, 64.0});
  CHECK(r.eta_used == doctest::Approx(2.0));
  CHECK(r.attempts == 4);  // 0.25, 0.5, 1, 2
  CHECK_THROWS_AS(build_fractional_matching(d, {EtaPolicy::Fixed, 0.25, 64.0}), Infeasible);
  CHECK_THROWS_AS(build_fractional_matching(d, {EtaPolicy::Doubling, 0.25, 1.0}), Infeasible);
  const auto z = build_fractional_matching(d, {EtaPolicy::Doubling, 0.0, 4.0});
  CHECK(z.eta_used == 4.0);
  CHECK(z.attempts == 2);
}

TEST_CASE("Birkhoff decomposition reconstructs its input") {
  Rng rng(99);
  for (int rep = 0; rep < 60; ++rep) {
    const int n = 2 + rep % 11;
    const auto m = random_doubly_stochastic(n, 1 + rep % (2 * n), rng);
    const auto dec = birkhoff_decompose(FractionalMatching<double>{m});
    const auto back = reconstruct(dec);
    double total = 0.0;
    for (const auto& term : dec.terms) {
      total += term.coefficient;
      CHECK(term.coefficient > 0.0);
      std::vector<int> seen(n, 0);
      for (int k = 0; k < n; ++k) {
        CHECK(m(k, term.perm[k]) > 0.0);  // support only
        seen[term.perm[k]]++;
      }
      for (int c : seen) CHECK(c == 1);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(dec.terms.size() <= static_cast<std::size_t>(n * n - 2 * n + 2));
    for (std::size_t i = 0; i < m.a.size(); ++i) CHECK(std::abs(back.a[i] - m.a[i]) <= 1e-9);
  }
}

TEST_CASE("Birkhoff decomposition in exact arithmetic") {
  SquareMatrix<Rational> m(3);
  const Rational a(1, 3), b(1, 6), c(1, 2);
  // rows: (a, b, c), (c, a, b), (b, c, a)
  m(0, 0) = a; m(0, 1) = b; m(0, 2) = c;
  m(1, 0) = c; m(1, 1) = a; m(1, 2) = b;
  m(2, 0) = b; m(2, 1) = c; m(2, 2) = a;
  const auto dec = birkhoff_decompose(FractionalMatching<Rational>{m});
  SquareMatrix<Rational> back(3);
  Rational total(0);
  for (const auto& t : dec.terms) {
    total += t.coefficient;
    for (int k = 0; k < 3; ++k) back(k, t.perm[k]) += t.coefficient;
  }
  CHECK(total == Rational(1));
  CHECK(back.a == m.a);
  CHECK(dec.terms.size() <= 5);
}

TEST_CASE("Birkhoff rejects a matrix whose support has no perfect matching") {
  SquareMatrix<double> m(2);
  m(0, 0) = 1.0;
  m(1, 0) = 1.0;
  CHECK_THROWS_AS(birkhoff_decompose(FractionalMatching<double>{m}), NoSupportMatching);
}

TEST_CASE("sampling frequencies follow the coefficients") {
  BirkhoffDecomposition<double> dec;
  dec.n = 2;
  dec.terms = {{0.25, {0, 1}}, {0.75, {1, 0}}};
  Rng rng(5);
  int first = 0;
  const int draws = 40000;
  for (int i = 0; i < draws; ++i) first += sample_matching(dec, rng) == Permutation{0, 1};
  const double f = static_cast<double>(first) / draws;
  CHECK(std::abs(f - 0.25) <= 4.0 * std::sqrt(0.25 * 0.75 / draws));
}

TEST_CASE("json export") {
  SquareMatrix<double> m(2, 0.5);
  const auto dec = birkhoff_decompose(FractionalMatching<double>{m});
  const auto j = to_json(dec);
  CHECK(j.at("n") == 2);
  CHECK(j.at("terms").size() == 2);
  CHECK(to_json(FractionalMatching<double>{m}).at("q").size() == 2);
}
