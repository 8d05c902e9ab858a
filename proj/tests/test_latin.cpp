#include <algorithm>
#include <filesystem>
#include <set>

#include "doctest.h"
#include "latinmate/latin.hpp"

using namespace latinmate;

namespace {

// Every Latin square of order n by brute force over row permutations.
std::vector<LatinRectangle> all_latin_squares(int n) {
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));

  std::vector<LatinRectangle> out;
  std::vector<std::size_t> pick(n, 0);
  while (true) {
    std::vector<int> cells;
    for (int i = 0; i < n; ++i) {
      cells.insert(cells.end(), perms[pick[i]].begin(), perms[pick[i]].end());
    }
    LatinRectangle r(Shape(n, n), cells);
    if (verify_latin(r).ok) out.push_back(r);
    int i = 0;
    while (i < n && ++pick[i] == perms.size()) pick[i++] = 0;
    if (i == n) break;
  }
  return out;
}

// Orthogonality straight from the definition: count distinct pairs.
bool orthogonal_by_pairs(const LatinRectangle& a, const LatinRectangle& b) {
  std::set<std::pair<int, int>> pairs;
  for (int i = 0; i < a.m(); ++i) {
    for (int k = 0; k < a.n(); ++k) pairs.insert({b.at(i, k), a.at(i, k)});
  }
  return pairs.size() == a.cells().size();
}

}  // namespace

TEST_CASE("shape validation and epsilon") {
  CHECK(Shape(8, 4).epsilon() == doctest::Approx(0.5));
  CHECK_THROWS_AS(Shape(4, 5), InvalidShape);
  CHECK_THROWS_AS(Shape(0, 0), InvalidShape);
  CHECK_THROWS_AS(Shape(4, 0), InvalidShape);
  CHECK(Shape::from_epsilon(16, 0.75).m == 4);
  CHECK(Shape::from_epsilon(64, 0.5).m == 32);
  CHECK(Shape::from_epsilon(8, 0.99).m == 1);
  CHECK_THROWS_AS(Shape::from_epsilon(8, 1.0), InvalidShape);
  CHECK_THROWS_AS(Shape::from_epsilon(8, -0.1), InvalidShape);
}

TEST_CASE("make_rectangle rejects non-Latin grids") {
  CHECK_NOTHROW(make_rectangle({{0, 1, 2}, {1, 2, 0}}));
  CHECK_THROWS_AS(make_rectangle({{0, 1, 1}, {1, 2, 0}}), NotLatin);
  CHECK_THROWS_AS(make_rectangle({{0, 1, 2}, {0, 2, 1}}), NotLatin);
  CHECK_THROWS_AS(make_rectangle({{0, 1, 3}}), NotLatin);
  CHECK_THROWS_AS(make_rectangle({{0, 1}, {1, 0}, {0, 1}}), NotLatin);
}

TEST_CASE("verify_latin names each kind of violation") {
  LatinRectangle bad(Shape(3, 2), {0, 0, 2, 1, 2, 0});
  const auto report = verify_latin(bad);
  CHECK_FALSE(report.ok);
  bool row_repeat = false;
  bool column_repeat = false;
  for (const auto& v : report.violations) {
    row_repeat |= v.kind == Violation::Kind::RowRepeat;
    column_repeat |= v.kind == Violation::Kind::ColumnRepeat;
  }
  CHECK(row_repeat);
  CHECK_FALSE(column_repeat);

  LatinRectangle col(Shape(3, 2), {0, 1, 2, 0, 2, 1});
  const auto r2 = verify_latin(col);
  REQUIRE_FALSE(r2.ok);
  CHECK(r2.violations.front().kind == Violation::Kind::ColumnRepeat);

  LatinRectangle range(Shape(2, 1), {0, 5});
  CHECK(verify_latin(range).violations.front().kind == Violation::Kind::SymbolOutOfRange);
  CHECK_FALSE(verify_latin(range).describe().empty());
}

TEST_CASE("parse and format round trip") {
  const auto r = parse_rectangle("# comment\n0 1 2 3\n\n1,2,3,0\n  2 3 0 1\n");
  CHECK(r.m() == 3);
  CHECK(r.n() == 4);
  CHECK(r.at(2, 1) == 3);
  CHECK(parse_rectangle(format_rectangle(r)) == r);
  CHECK_THROWS_AS(parse_rectangle("0 1\n1 x\n"), ParseError);
  CHECK_THROWS_AS(parse_rectangle("0 1 2\n1 2\n"), ParseError);
  CHECK_THROWS_AS(parse_rectangle("\n# nothing\n"), ParseError);
  CHECK_THROWS_AS(parse_rectangle("0 1\n0 1\n"), NotLatin);
}

TEST_CASE("json and file round trip") {
  const auto r = cyclic_rectangle(5, 3);
  CHECK(rectangle_from_json(rectangle_to_json(r)) == r);
  CHECK_THROWS_AS(rectangle_from_json(nlohmann::json{{"n", 5}}), ParseError);

  const auto dir = std::filesystem::temp_directory_path();
  const auto txt = (dir / "latinmate_test_rect.txt").string();
  const auto js = (dir / "latinmate_test_rect.json").string();
  save_rectangle(r, txt);
  save_rectangle(r, js);
  CHECK(load_rectangle(txt) == r);
  CHECK(load_rectangle(js) == r);
  std::filesystem::remove(txt);
  std::filesystem::remove(js);
  CHECK_THROWS(load_rectangle((dir / "latinmate_no_such_file.txt").string()));
}

TEST_CASE("cyclic rectangles") {
  const auto c = cyclic_rectangle(5, 5);
  CHECK(verify_latin(c).ok);
  for (int i = 0; i < 5; ++i) {
    for (int k = 0; k < 5; ++k) CHECK(c.at(i, k) == (i + k) % 5);
  }
  CHECK(c.column_of(2, 0) == 3);
}

TEST_CASE("orthogonality agrees with brute-force pair counting on order 3") {
  const auto squares = all_latin_squares(3);
  CHECK(squares.size() == 12);
  const auto j = cyclic_rectangle(3, 3);
  int mates = 0;
  for (const auto& l : squares) {
    const bool brute = orthogonal_by_pairs(l, j);
    CHECK(verify_orthogonal(l, j).ok == brute);
    mates += brute;
  }
  // All 12 are αi + βk + c over Z_3; orthogonal to i + k iff α ≠ β.
  CHECK(mates == 6);
}

TEST_CASE("order 2 cyclic square has no mate") {
  const auto squares = all_latin_squares(2);
  CHECK(squares.size() == 2);
  const auto j = cyclic_rectangle(2, 2);
  for (const auto& l : squares) {
    CHECK_FALSE(orthogonal_by_pairs(l, j));
    CHECK_FALSE(verify_orthogonal(l, j).ok);
  }
}

TEST_CASE("verify_orthogonal reports repeats and shape mismatch") {
  const auto j = cyclic_rectangle(3, 3);
  const auto self = verify_orthogonal(j, j);
  CHECK_FALSE(self.ok);
  CHECK(self.violations.size() == 6);  // 9 cells, 3 distinct pairs
  for (const auto& v : self.violations) CHECK(v.kind == Violation::Kind::PairRepeat);
  CHECK_THROWS_AS(verify_orthogonal(cyclic_rectangle(3, 2), j), ShapeMismatch);
}

TEST_CASE("line members") {
  const auto j = cyclic_rectangle(5, 3);
  const Shape s = j.shape();
  CHECK(line_members({LineClass::RC, 1, 2}, s, j).size() == 5);
  CHECK(line_members({LineClass::RS, 1, 2}, s, j).size() == 5);
  CHECK(line_members({LineClass::CS, 4, 0}, s, j).size() == 3);
  const auto ds = line_members({LineClass::DS, 2, 1}, s, j);
  CHECK(ds.size() == 3);
  for (const auto& p : ds) {
    CHECK(j.at(p.row, p.col) == 2);
    CHECK(p.sym == 1);
  }
  CHECK_THROWS_AS(line_members({LineClass::RC, 3, 0}, s, j), IndexOutOfRange);
  CHECK_THROWS_AS(line_members({LineClass::CS, 0, 5}, s, j), IndexOutOfRange);
}

TEST_CASE("transversals of a mate") {
  const auto j = cyclic_rectangle(3, 3);
  const auto l = make_rectangle({{0, 1, 2}, {2, 0, 1}, {1, 2, 0}});
  REQUIRE(verify_orthogonal(l, j).ok);
  const auto ts = extract_transversals(l, j);
  CHECK(ts.size() == 3);
  for (const auto& t : ts) {
    CHECK(t.cells.size() == 3);
    CHECK(is_partial_transversal(t, j));
  }
  CHECK_THROWS_AS(extract_transversals(j, j), NotOrthogonal);
  PartialTransversal same_row{{{0, 0}, {0, 1}}};
  CHECK_FALSE(is_partial_transversal(same_row, j));
  PartialTransversal same_sym{{{0, 1}, {1, 0}}};
  CHECK_FALSE(is_partial_transversal(same_sym, j));
}
