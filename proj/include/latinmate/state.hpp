#pragma once

// The guidance vector p over all points (row, col, sym), together with the
// central projections and the kill mask that drive its evolution.
//
// Rows are 0-based and row i is placed at step t = i, so a point's colouring
// time is its row index. At step t the active row is t; rows < t are placed
// and frozen, rows > t are still open.

#include <optional>
#include <utility>
#include <vector>

#include "latinmate/latin.hpp"
#include "latinmate/scalar.hpp"

namespace latinmate {

template <class T>
struct GuidanceState {
  Shape shape;
  int t = 0;
  std::optional<int> stopped_at;
  std::vector<T> p;

  std::size_t index(int row, int col, int sym) const {
    return (static_cast<std::size_t>(row) * shape.n + col) * shape.n + sym;
  }
  const T& at(int row, int col, int sym) const { return p[index(row, col, sym)]; }
  T& at(int row, int col, int sym) { return p[index(row, col, sym)]; }
  const T& at(const Point& x) const { return at(x.row, x.col, x.sym); }

  // Placed rows are frozen; the active row and rows after it are uncoloured.
  bool row_uncoloured(int row) const { return row >= t; }
  bool stopped() const { return stopped_at.has_value(); }
};

template <class T>
GuidanceState<T> init_state(const Shape& shape);

GuidanceState<double> to_double_state(const GuidanceState<Rational>& s);
inline const GuidanceState<double>& to_double_state(const GuidanceState<double>& s) { return s; }

// Central projections of a point in a later row onto the active row `t`:
// along its column (CS) and along its J-diagonal (DS). Both carry sym(x) and
// lie in distinct columns of row t. Throws RowAlreadyColoured when
// row(x) <= t.
std::pair<Point, Point> central_projections(const Point& x, int t, const LatinRectangle& j);

// For every open row after `t`, the column of row t that shares the
// J-diagonal of cell (row, col). diag_column(row, col) == k' with
// J(t, k') == J(row, col).
class ProjectionTable {
 public:
  ProjectionTable(const LatinRectangle& j, int t);
  int active_row() const { return t_; }
  int diag_column(int row, int col) const { return inverse_active_[j_->at(row, col)]; }

 private:
  const LatinRectangle* j_;
  int t_;
  std::vector<int> inverse_active_;  // symbol -> column in row t
};

// killed[x] == 1 iff the row placed at `t` occupies one of x's projections.
// Only rows after t carry kills.
struct KillMask {
  Shape shape;
  int t = 0;
  std::vector<std::uint8_t> killed;

  bool at(int row, int col, int sym) const {
    return killed[(static_cast<std::size_t>(row) * shape.n + col) * shape.n + sym] != 0;
  }
  std::size_t count() const;
};

// An empty `l_row` (nothing placed, e.g. when no later rows exist) gives an
// all-zero mask.
KillMask kill_mask(const Permutation& l_row, int t, const LatinRectangle& j, const Shape& shape);

}  // namespace latinmate
