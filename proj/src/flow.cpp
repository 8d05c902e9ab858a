#include "latinmate/flow.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "latinmate/scalar.hpp"

namespace latinmate {

namespace {

// Node numbering: 0 = source, 1..n columns, n+1..2n symbols, 2n+1 = sink.
template <class T>
class Dinic {
 public:
  Dinic(int n, const std::vector<T>& capacity, std::vector<T> flow)
      : n_(n),
        cap_(capacity),
        f_(std::move(flow)),
        fs_(static_cast<std::size_t>(n), T(0)),
        ft_(static_cast<std::size_t>(n), T(0)),
        level_(static_cast<std::size_t>(2 * n + 2)),
        next_(static_cast<std::size_t>(2 * n + 2)) {
    for (int k = 0; k < n; ++k) {
      for (int g = 0; g < n; ++g) {
        const T& x = f_[idx(k, g)];
        fs_[k] += x;
        ft_[g] += x;
      }
    }
  }

  T run() {
    while (bfs()) {
      std::fill(next_.begin(), next_.end(), 0);
      while (true) {
        T pushed = push(source(), T(2 * n_));
        if (!(pushed > dust())) break;
      }
    }
    T value(0);
    for (const auto& x : fs_) value += x;
    return value;
  }

  std::vector<T> take_flow() { return std::move(f_); }

 private:
  static T dust() { return ScalarTraits<T>::dust(); }
  int source() const { return 0; }
  int sink() const { return 2 * n_ + 1; }
  int col_node(int k) const { return 1 + k; }
  int sym_node(int g) const { return 1 + n_ + g; }
  std::size_t idx(int k, int g) const { return static_cast<std::size_t>(k) * n_ + g; }

  bool bfs() {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> queue;
    level_[source()] = 0;
    for (int k = 0; k < n_; ++k) {
      if (T(1) - fs_[k] > dust()) {
        level_[col_node(k)] = 1;
        queue.push(col_node(k));
      }
    }
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop();
      if (u <= n_) {
        const int k = u - 1;
        for (int g = 0; g < n_; ++g) {
          const int v = sym_node(g);
          if (level_[v] < 0 && cap_[idx(k, g)] - f_[idx(k, g)] > dust()) {
            level_[v] = level_[u] + 1;
            queue.push(v);
          }
        }
      } else {
        const int g = u - 1 - n_;
        if (level_[sink()] < 0 && T(1) - ft_[g] > dust()) level_[sink()] = level_[u] + 1;
        for (int k = 0; k < n_; ++k) {
          const int v = col_node(k);
          if (level_[v] < 0 && f_[idx(k, g)] > dust()) {
            level_[v] = level_[u] + 1;
            queue.push(v);
          }
        }
      }
    }
    return level_[sink()] >= 0;
  }

  // Blocking-flow DFS with per-node arc pointers. For a symbol node, arc 0 is
  // the sink edge and arc 1+k the reverse edge back to column k.
  T push(int u, T limit) {
    if (u == sink()) return limit;
    if (u == source()) {
      for (int& a = next_[u]; a < n_; ++a) {
        const int k = a;
        const T room = T(1) - fs_[k];
        if (level_[col_node(k)] != 1 || !(room > dust())) continue;
        T got = push(col_node(k), std::min(limit, room));
        if (got > dust()) {
          fs_[k] += got;
          return got;
        }
      }
      return T(0);
    }
    if (u <= n_) {
      const int k = u - 1;
      for (int& a = next_[u]; a < n_; ++a) {
        const int g = a;
        const int v = sym_node(g);
        const T room = cap_[idx(k, g)] - f_[idx(k, g)];
        if (level_[v] != level_[u] + 1 || !(room > dust())) continue;
        T got = push(v, std::min(limit, room));
        if (got > dust()) {
          f_[idx(k, g)] += got;
          return got;
        }
      }
      return T(0);
    }
    const int g = u - 1 - n_;
    for (int& a = next_[u]; a <= n_; ++a) {
      if (a == 0) {
        const T room = T(1) - ft_[g];
        if (level_[sink()] != level_[u] + 1 || !(room > dust())) continue;
        T got = std::min(limit, room);
        ft_[g] += got;
        return got;
      }
      const int k = a - 1;
      const int v = col_node(k);
      const T room = f_[idx(k, g)];
      if (level_[v] != level_[u] + 1 || !(room > dust())) continue;
      T got = push(v, std::min(limit, room));
      if (got > dust()) {
        // column k reroutes: its outflow moves from γ to whatever push(v) used
        f_[idx(k, g)] -= got;
        return got;
      }
    }
    return T(0);
  }

  int n_;
  const std::vector<T>& cap_;
  std::vector<T> f_;
  std::vector<T> fs_;
  std::vector<T> ft_;
  std::vector<int> level_;
  std::vector<int> next_;
};

}  // namespace

template <class T>
BipartiteFlow<T> max_bipartite_flow(int n, const std::vector<T>& capacity,
                                    std::vector<T> warm_start) {
  const std::size_t size = static_cast<std::size_t>(n) * n;
  if (capacity.size() != size) throw std::invalid_argument("capacity matrix has wrong size");
  if (warm_start.empty()) warm_start.assign(size, T(0));
  if (warm_start.size() != size) throw std::invalid_argument("warm start has wrong size");

  Dinic<T> solver(n, capacity, std::move(warm_start));
  BipartiteFlow<T> out;
  out.n = n;
  out.value = solver.run();
  out.flow = solver.take_flow();
  return out;
}

template BipartiteFlow<double> max_bipartite_flow<double>(int, const std::vector<double>&,
                                                          std::vector<double>);
template BipartiteFlow<Rational> max_bipartite_flow<Rational>(int, const std::vector<Rational>&,
                                                              std::vector<Rational>);

}  // namespace latinmate
