#pragma once

#include <vector>

namespace latinmate {

// Max flow on the network source -> column k (cap 1) -> symbol γ (cap
// capacity[k*n+γ]) -> sink (cap 1), solved with Dinic's shortest augmenting
// paths over dense residual adjacency.
//
// `warm_start`, when non-empty, must be a feasible flow on the middle edges;
// the solver augments from it rather than from zero, so the result stays
// close to the warm start wherever the warm start is already maximal.
template <class T>
struct BipartiteFlow {
  int n = 0;
  T value{};
  std::vector<T> flow;  // middle-edge flow, row-major (column, symbol)
};

template <class T>
BipartiteFlow<T> max_bipartite_flow(int n, const std::vector<T>& capacity,
                                    std::vector<T> warm_start = {});

}  // namespace latinmate
