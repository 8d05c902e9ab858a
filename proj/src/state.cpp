#include "latinmate/state.hpp"

#include <algorithm>
#include <string>

namespace latinmate {

template <class T>
GuidanceState<T> init_state(const Shape& shape) {
  GuidanceState<T> s;
  s.shape = shape;
  s.t = 0;
  s.p.assign(shape.points(), T(1) / T(shape.n));
  return s;
}

template GuidanceState<double> init_state<double>(const Shape&);
template GuidanceState<Rational> init_state<Rational>(const Shape&);

GuidanceState<double> to_double_state(const GuidanceState<Rational>& s) {
  GuidanceState<double> out;
  out.shape = s.shape;
  out.t = s.t;
  out.stopped_at = s.stopped_at;
  out.p.reserve(s.p.size());
  for (const auto& v : s.p) out.p.push_back(to_double(v));
  return out;
}

std::pair<Point, Point> central_projections(const Point& x, int t, const LatinRectangle& j) {
  if (x.row <= t) {
    throw RowAlreadyColoured("point in row " + std::to_string(x.row) +
                             " is not after the active row " + std::to_string(t));
  }
  if (x.row >= j.m() || x.col < 0 || x.col >= j.n() || x.sym < 0 || x.sym >= j.n() || t < 0) {
    throw IndexOutOfRange("point outside the rectangle");
  }
  const Point cs{t, x.col, x.sym};
  const Point ds{t, j.column_of(t, j.at(x.row, x.col)), x.sym};
  return {cs, ds};
}

ProjectionTable::ProjectionTable(const LatinRectangle& j, int t)
    : j_(&j), t_(t), inverse_active_(static_cast<std::size_t>(j.n()), -1) {
  for (int k = 0; k < j.n(); ++k) inverse_active_[j.at(t, k)] = k;
}

std::size_t KillMask::count() const {
  return static_cast<std::size_t>(std::count(killed.begin(), killed.end(), std::uint8_t{1}));
}

KillMask kill_mask(const Permutation& l_row, int t, const LatinRectangle& j, const Shape& shape) {
  KillMask mask;
  mask.shape = shape;
  mask.t = t;
  mask.killed.assign(shape.points(), 0);
  if (l_row.empty() || t + 1 >= shape.m) return mask;

  const int n = shape.n;
  const ProjectionTable proj(j, t);
  for (int i = t + 1; i < shape.m; ++i) {
    for (int k = 0; k < n; ++k) {
      const int kd = proj.diag_column(i, k);
      auto* cell = &mask.killed[(static_cast<std::size_t>(i) * n + k) * n];
      // (i,k,γ) dies iff γ sits at column k (CS) or at column kd (DS) of row t.
      cell[l_row[k]] = 1;
      cell[l_row[kd]] = 1;
    }
  }
  return mask;
}

}  // namespace latinmate
