#include "latinmate/latin.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace latinmate {

Shape::Shape(int n_, int m_) : n(n_), m(m_) {
  if (n < 1 || m < 1 || m > n) {
    throw InvalidShape("invalid shape: need 1 <= m <= n, got n=" + std::to_string(n) +
                       " m=" + std::to_string(m));
  }
}

Shape Shape::from_epsilon(int n, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw InvalidShape("epsilon must lie in [0, 1), got " + std::to_string(epsilon));
  }
  const int m = static_cast<int>(std::lround((1.0 - epsilon) * n));
  return Shape(n, std::clamp(m, 1, std::max(n, 1)));
}

LatinRectangle::LatinRectangle(Shape shape, std::vector<int> cells)
    : shape_(shape), cells_(std::move(cells)) {
  if (cells_.size() != shape_.cells()) {
    throw InvalidShape("grid has " + std::to_string(cells_.size()) + " cells, expected " +
                       std::to_string(shape_.cells()));
  }
}

Permutation LatinRectangle::row(int i) const {
  auto first = cells_.begin() + static_cast<std::ptrdiff_t>(index(i, 0));
  return Permutation(first, first + shape_.n);
}

int LatinRectangle::column_of(int row, int sym) const {
  for (int k = 0; k < shape_.n; ++k) {
    if (at(row, k) == sym) return k;
  }
  throw NotLatin("symbol " + std::to_string(sym) + " missing from row " + std::to_string(row));
}

std::string Violation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::SymbolOutOfRange:
      os << "symbol " << sym << " out of range at (" << row << "," << col << ")";
      break;
    case Kind::RowRepeat:
      os << "row " << row << " repeats symbol " << sym << " at columns " << other_col << " and "
         << col;
      break;
    case Kind::RowMissing:
      os << "row " << row << " is missing symbol " << sym;
      break;
    case Kind::ColumnRepeat:
      os << "column " << col << " repeats symbol " << sym << " at rows " << other_row << " and "
         << row;
      break;
    case Kind::PairRepeat:
      os << "pair containing L-symbol " << sym << " repeats at cells (" << other_row << ","
         << other_col << ") and (" << row << "," << col << ")";
      break;
    case Kind::ShapeMismatch:
      os << "shape mismatch";
      break;
  }
  return os.str();
}

std::string VerifyReport::describe() const {
  if (ok) return "ok";
  std::string out;
  for (const auto& v : violations) {
    out += v.describe();
    out += '\n';
  }
  return out;
}

VerifyReport verify_latin(const LatinRectangle& rect) {
  VerifyReport report;
  const int n = rect.n();
  const int m = rect.m();
  auto add = [&](Violation v) {
    report.ok = false;
    report.violations.push_back(v);
  };

  std::vector<int> seen(static_cast<std::size_t>(n));
  for (int i = 0; i < m; ++i) {
    std::fill(seen.begin(), seen.end(), -1);
    for (int k = 0; k < n; ++k) {
      const int s = rect.at(i, k);
      if (s < 0 || s >= n) {
        add({.kind = Violation::Kind::SymbolOutOfRange, .row = i, .col = k, .sym = s});
        continue;
      }
      if (seen[s] >= 0) {
        add({.kind = Violation::Kind::RowRepeat, .row = i, .col = k, .sym = s, .other_row = i,
             .other_col = seen[s]});
      } else {
        seen[s] = k;
      }
    }
    for (int s = 0; s < n; ++s) {
      if (seen[s] < 0) add({.kind = Violation::Kind::RowMissing, .row = i, .sym = s});
    }
  }

  for (int k = 0; k < n; ++k) {
    std::fill(seen.begin(), seen.end(), -1);
    for (int i = 0; i < m; ++i) {
      const int s = rect.at(i, k);
      if (s < 0 || s >= n) continue;
      if (seen[s] >= 0) {
        add({.kind = Violation::Kind::ColumnRepeat, .row = i, .col = k, .sym = s,
             .other_row = seen[s], .other_col = k});
      } else {
        seen[s] = i;
      }
    }
  }
  return report;
}

VerifyReport verify_orthogonal(const LatinRectangle& l, const LatinRectangle& j) {
  if (l.shape() != j.shape()) {
    throw ShapeMismatch("rectangles differ in shape: " + std::to_string(l.m()) + "x" +
                        std::to_string(l.n()) + " vs " + std::to_string(j.m()) + "x" +
                        std::to_string(j.n()));
  }
  VerifyReport report;
  const int n = l.n();
  // first cell seen for each (J, L) pair, encoded row * n + col
  std::vector<int> first(static_cast<std::size_t>(n) * n, -1);
  for (int i = 0; i < l.m(); ++i) {
    for (int k = 0; k < n; ++k) {
      const int a = j.at(i, k);
      const int b = l.at(i, k);
      if (a < 0 || a >= n || b < 0 || b >= n) {
        report.ok = false;
        report.violations.push_back(
            {.kind = Violation::Kind::SymbolOutOfRange, .row = i, .col = k, .sym = b});
        continue;
      }
      int& slot = first[static_cast<std::size_t>(a) * n + b];
      if (slot >= 0) {
        report.ok = false;
        report.violations.push_back({.kind = Violation::Kind::PairRepeat, .row = i, .col = k,
                                     .sym = b, .other_row = slot / n, .other_col = slot % n});
      } else {
        slot = i * n + k;
      }
    }
  }
  return report;
}

namespace {

void require_index(int value, int bound, const char* what) {
  if (value < 0 || value >= bound) {
    throw IndexOutOfRange(std::string(what) + " index " + std::to_string(value) +
                          " outside [0," + std::to_string(bound) + ")");
  }
}

}  // namespace

std::vector<Point> line_members(const LineId& line, const Shape& shape, const LatinRectangle& j) {
  std::vector<Point> out;
  switch (line.cls) {
    case LineClass::RC:
      require_index(line.first, shape.m, "row");
      require_index(line.second, shape.n, "column");
      for (int s = 0; s < shape.n; ++s) out.push_back({line.first, line.second, s});
      break;
    case LineClass::RS:
      require_index(line.first, shape.m, "row");
      require_index(line.second, shape.n, "symbol");
      for (int k = 0; k < shape.n; ++k) out.push_back({line.first, k, line.second});
      break;
    case LineClass::CS:
      require_index(line.first, shape.n, "column");
      require_index(line.second, shape.n, "symbol");
      for (int i = 0; i < shape.m; ++i) out.push_back({i, line.first, line.second});
      break;
    case LineClass::DS:
      require_index(line.first, shape.n, "diagonal");
      require_index(line.second, shape.n, "symbol");
      if (j.shape() != shape) throw ShapeMismatch("diagonal lookup needs J of the same shape");
      for (int i = 0; i < shape.m; ++i) {
        out.push_back({i, j.column_of(i, line.first), line.second});
      }
      break;
  }
  return out;
}

std::vector<PartialTransversal> extract_transversals(const LatinRectangle& l,
                                                     const LatinRectangle& j) {
  const auto latin = verify_latin(l);
  const auto ortho = verify_orthogonal(l, j);
  if (!latin.ok || !ortho.ok) {
    throw NotOrthogonal("cannot split into transversals: " +
                        (latin.ok ? ortho.describe() : latin.describe()));
  }
  std::vector<PartialTransversal> classes(static_cast<std::size_t>(l.n()));
  for (int i = 0; i < l.m(); ++i) {
    for (int k = 0; k < l.n(); ++k) classes[l.at(i, k)].cells.push_back({i, k});
  }
  return classes;
}

bool is_partial_transversal(const PartialTransversal& t, const LatinRectangle& j) {
  std::vector<char> rows(static_cast<std::size_t>(j.m())), cols(static_cast<std::size_t>(j.n())),
      syms(static_cast<std::size_t>(j.n()));
  for (const auto& c : t.cells) {
    if (c.row < 0 || c.row >= j.m() || c.col < 0 || c.col >= j.n()) return false;
    const int s = j.at(c.row, c.col);
    if (rows[c.row] || cols[c.col] || syms[s]) return false;
    rows[c.row] = cols[c.col] = syms[s] = 1;
  }
  return true;
}

LatinRectangle make_rectangle(const std::vector<std::vector<int>>& rows) {
  if (rows.empty() || rows.front().empty()) throw NotLatin("empty grid");
  const int n = static_cast<int>(rows.front().size());
  const int m = static_cast<int>(rows.size());
  std::vector<int> cells;
  cells.reserve(static_cast<std::size_t>(m) * n);
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(rows[i].size()) != n) {
      throw NotLatin("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                     " entries, expected " + std::to_string(n));
    }
    cells.insert(cells.end(), rows[i].begin(), rows[i].end());
  }
  if (m > n) {
    throw NotLatin(std::to_string(m) + " rows over " + std::to_string(n) +
                   " symbols cannot keep columns injective");
  }
  LatinRectangle rect(Shape(n, m), std::move(cells));
  const auto report = verify_latin(rect);
  if (!report.ok) throw NotLatin(report.violations.front().describe());
  return rect;
}

LatinRectangle parse_rectangle(std::string_view text) {
  std::vector<std::vector<int>> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    std::vector<int> row;
    std::size_t i = 0;
    auto is_sep = [](char c) { return std::isspace(static_cast<unsigned char>(c)) || c == ','; };
    while (i < line.size() && is_sep(line[i])) ++i;
    if (i == line.size() || line[i] == '#') continue;
    while (i < line.size()) {
      std::size_t j = i;
      while (j < line.size() && !is_sep(line[j])) ++j;
      const std::string_view token = line.substr(i, j - i);
      int value = 0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": not an integer: '" +
                         std::string(token) + "'");
      }
      row.push_back(value);
      i = j;
      while (i < line.size() && is_sep(line[i])) ++i;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(rows.front().size()) + " entries, got " +
                       std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no rows");
  return make_rectangle(rows);
}

std::string format_rectangle(const LatinRectangle& rect) {
  std::string out;
  for (int i = 0; i < rect.m(); ++i) {
    for (int k = 0; k < rect.n(); ++k) {
      if (k) out += ' ';
      out += std::to_string(rect.at(i, k));
    }
    out += '\n';
  }
  return out;
}

nlohmann::json rectangle_to_json(const LatinRectangle& rect) {
  nlohmann::json grid = nlohmann::json::array();
  for (int i = 0; i < rect.m(); ++i) grid.push_back(rect.row(i));
  return {{"n", rect.n()}, {"m", rect.m()}, {"grid", grid}};
}

LatinRectangle rectangle_from_json(const nlohmann::json& j) {
  try {
    auto rows = j.at("grid").get<std::vector<std::vector<int>>>();
    auto rect = make_rectangle(rows);
    if (rect.n() != j.at("n").get<int>() || rect.m() != j.at("m").get<int>()) {
      throw ParseError("declared n/m disagree with grid");
    }
    return rect;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad rectangle JSON: ") + e.what());
  }
}

LatinRectangle load_rectangle(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad JSON: ") + e.what());
    }
    return rectangle_from_json(j);
  }
  return parse_rectangle(text);
}

void save_rectangle(const LatinRectangle& rect, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    out << rectangle_to_json(rect).dump() << '\n';
  } else {
    out << format_rectangle(rect);
  }
  if (!out) throw std::ios_base::failure("write failed for " + path);
}

LatinRectangle cyclic_rectangle(int n, int m) {
  Shape shape(n, m);
  std::vector<int> cells(shape.cells());
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < n; ++k) cells[static_cast<std::size_t>(i) * n + k] = (i + k) % n;
  }
  return LatinRectangle(shape, std::move(cells));
}

}  // namespace latinmate
