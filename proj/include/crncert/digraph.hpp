#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "crncert/network.hpp"
#include "crncert/rational.hpp"

namespace crncert {

// Bipartite digraph G_{A,B}: m row-vertices u_i, n column-vertices v_j,
// arc u_i -> v_j iff A_{ij} != 0 and v_j -> u_i iff B_{ji} != 0.
struct BipartiteDigraph {
  int m = 0, n = 0;
  // adjacency over vertices 0..m-1 (u) then m..m+n-1 (v)
  std::vector<std::vector<int>> adj;

  int vertex_count() const { return m + n; }

  void add_arc_u_to_v(int i, int j) { adj[i].push_back(m + j); }
  void add_arc_v_to_u(int j, int i) { adj[m + j].push_back(i); }
};

inline BipartiteDigraph build_bipartite_digraph(const RatMat& a, const RatMat& bmat) {
  if (a.rows() != bmat.cols() || a.cols() != bmat.rows())
    throw std::invalid_argument("build_bipartite_digraph: dimension mismatch");
  BipartiteDigraph g;
  g.m = a.rows();
  g.n = a.cols();
  g.adj.assign(g.m + g.n, {});
  for (int i = 0; i < g.m; ++i)
    for (int j = 0; j < g.n; ++j) {
      if (a(i, j) != 0) g.add_arc_u_to_v(i, j);
      if (bmat(j, i) != 0) g.add_arc_v_to_u(j, i);
    }
  return g;
}

// The digraph G_{Gamma, V(x)} at interior x, inferred structurally: for a
// reversible reaction the rate depends on every participant, for an
// irreversible one only on its left-hand species.
inline BipartiteDigraph structural_digraph(const ReactionNetwork& net) {
  RatMat gamma = stoichiometric_matrix(net);
  BipartiteDigraph g;
  g.m = net.species_count();
  g.n = net.reaction_count();
  g.adj.assign(g.m + g.n, {});
  for (int i = 0; i < g.m; ++i)
    for (int j = 0; j < g.n; ++j)
      if (gamma(i, j) != 0) g.add_arc_u_to_v(i, j);
  for (int j = 0; j < g.n; ++j) {
    const Reaction& r = net.reactions[j];
    for (const auto& t : r.left) g.add_arc_v_to_u(j, t.species);
    if (r.reversible)
      for (const auto& t : r.right) g.add_arc_v_to_u(j, t.species);
  }
  return g;
}

namespace detail {

// Tarjan
struct SccState {
  const std::vector<std::vector<int>>& adj;
  std::vector<int> dfn, low, stack, comp;
  std::vector<bool> on_stack;
  int index = 0, count = 0;

  explicit SccState(const std::vector<std::vector<int>>& a)
      : adj(a), dfn(a.size(), -1), low(a.size()), comp(a.size(), -1), on_stack(a.size(), false) {}

  void dfs(int root) {
    // iterative to keep stack depth flat
    std::vector<std::pair<int, std::size_t>> work{{root, 0}};
    while (!work.empty()) {
      auto& [v, ei] = work.back();
      if (ei == 0) {
        dfn[v] = low[v] = index++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      bool descended = false;
      while (ei < adj[v].size()) {
        int w = adj[v][ei++];
        if (dfn[w] < 0) {
          work.emplace_back(w, 0);
          descended = true;
          break;
        }
        if (on_stack[w] && dfn[w] < low[v]) low[v] = dfn[w];
      }
      if (descended) continue;
      if (dfn[v] == low[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = count;
        } while (w != v);
        ++count;
      }
      int done = v;
      work.pop_back();
      if (!work.empty()) {
        int parent = work.back().first;
        if (low[done] < low[parent]) low[parent] = low[done];
      }
    }
  }
};

}  // namespace detail

inline int strongly_connected_components(const BipartiteDigraph& g, std::vector<int>* comp = nullptr) {
  detail::SccState s(g.adj);
  for (int v = 0; v < g.vertex_count(); ++v)
    if (s.dfn[v] < 0) s.dfs(v);
  if (comp) *comp = s.comp;
  return s.count;
}

inline bool is_strongly_connected(const BipartiteDigraph& g) {
  if (g.vertex_count() == 0) return true;
  return strongly_connected_components(g) == 1;
}

/// One arc per line, `u:<name> -> v:<reaction index>` (1-based reactions).
inline std::string export_digraph(const BipartiteDigraph& g, const std::vector<std::string>& species_names) {
  std::ostringstream out;
  auto label = [&](int v) {
    if (v < g.m) return "u:" + (v < int(species_names.size()) ? species_names[v] : std::to_string(v));
    return "v:" + std::to_string(v - g.m + 1);
  };
  for (int v = 0; v < g.vertex_count(); ++v)
    for (int w : g.adj[v]) out << label(v) << " -> " << label(w) << "\n";
  return out.str();
}

}  // namespace crncert
