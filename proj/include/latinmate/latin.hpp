#pragma once

// Latin rectangles, points, lines and the exact verifiers used everywhere
// else to check what the randomized constructions produce.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "latinmate/errors.hpp"

namespace latinmate {

// n columns (= n symbols), m rows.
struct Shape {
  int n = 0;
  int m = 0;

  Shape() = default;
  Shape(int n_, int m_);

  // m = round((1 - ε)·n), clamped to [1, n]. Throws InvalidShape for ε
  // outside [0, 1).
  static Shape from_epsilon(int n, double epsilon);

  double epsilon() const { return 1.0 - static_cast<double>(m) / n; }
  std::size_t cells() const { return static_cast<std::size_t>(m) * n; }
  std::size_t points() const { return cells() * n; }

  friend bool operator==(const Shape&, const Shape&) = default;
};

// A row given as column -> symbol.
using Permutation = std::vector<int>;

// m×n grid of 0-based symbols stored row-major. Construction only checks the
// dimensions; use make_rectangle / parse_rectangle for validated input and
// verify_latin to audit an arbitrary grid.
class LatinRectangle {
 public:
  LatinRectangle() = default;
  LatinRectangle(Shape shape, std::vector<int> cells);

  const Shape& shape() const { return shape_; }
  int n() const { return shape_.n; }
  int m() const { return shape_.m; }

  int at(int row, int col) const { return cells_[index(row, col)]; }
  void set(int row, int col, int sym) { cells_[index(row, col)] = sym; }

  Permutation row(int i) const;
  const std::vector<int>& cells() const { return cells_; }

  // Column of `sym` in `row`, i.e. the inverse of the row permutation.
  // Requires a row-Latin grid.
  int column_of(int row, int sym) const;

  friend bool operator==(const LatinRectangle&, const LatinRectangle&) = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * shape_.n + col;
  }

  Shape shape_;
  std::vector<int> cells_;
};

struct Point {
  int row = 0;
  int col = 0;
  int sym = 0;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

// RC = (row, col), RS = (row, sym), CS = (col, sym), DS = (diagonal, sym).
// A diagonal is identified by the J-symbol shared by its cells.
enum class LineClass { RC, RS, CS, DS };

struct LineId {
  LineClass cls = LineClass::RC;
  int first = 0;
  int second = 0;

  friend bool operator==(const LineId&, const LineId&) = default;
};

struct PartialTransversal {
  struct Cell {
    int row;
    int col;
    friend bool operator==(const Cell&, const Cell&) = default;
  };
  std::vector<Cell> cells;
};

struct Violation {
  enum class Kind {
    SymbolOutOfRange,
    RowRepeat,         // symbol appears twice in a row
    RowMissing,        // symbol absent from a row
    ColumnRepeat,      // symbol appears twice in a column
    PairRepeat,        // (J, L) symbol pair occurs twice
    ShapeMismatch,
  };
  Kind kind;
  int row = -1;
  int col = -1;
  int sym = -1;
  int other_row = -1;  // the earlier occurrence, when there is one
  int other_col = -1;

  std::string describe() const;
};

struct VerifyReport {
  bool ok = true;
  std::vector<Violation> violations;

  std::string describe() const;
};

// Validating constructor from explicit rows. Throws NotLatin.
LatinRectangle make_rectangle(const std::vector<std::vector<int>>& rows);

// Rows of whitespace or comma separated integers; blank lines and lines
// starting with '#' are skipped. Throws ParseError or NotLatin.
LatinRectangle parse_rectangle(std::string_view text);
std::string format_rectangle(const LatinRectangle& rect);

nlohmann::json rectangle_to_json(const LatinRectangle& rect);
LatinRectangle rectangle_from_json(const nlohmann::json& j);

// Loads either format: JSON when the first non-space character is '{'.
LatinRectangle load_rectangle(const std::string& path);
void save_rectangle(const LatinRectangle& rect, const std::string& path);

VerifyReport verify_latin(const LatinRectangle& rect);

// All mn pairs (J(i,k), L(i,k)) distinct. Throws ShapeMismatch.
VerifyReport verify_orthogonal(const LatinRectangle& l, const LatinRectangle& j);

// J is only consulted for DS lines. Throws IndexOutOfRange.
std::vector<Point> line_members(const LineId& line, const Shape& shape,
                                const LatinRectangle& j);

// The n colour classes of L, each a partial transversal of J of size m.
// Throws NotOrthogonal.
std::vector<PartialTransversal> extract_transversals(const LatinRectangle& l,
                                                     const LatinRectangle& j);

bool is_partial_transversal(const PartialTransversal& t, const LatinRectangle& j);

// Cyclic Cayley table rows: cell (i,k) holds (i + k) mod n.
LatinRectangle cyclic_rectangle(int n, int m);

}  // namespace latinmate
