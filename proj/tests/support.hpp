#pragma once

// Test-side helpers and independent oracles. Nothing here calls into the
// library code it is used to check.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "simcol/simcol.hpp"

namespace testing_support {

using namespace simcol;

/// Ĝ = path on 3 vertices: G1 is the path 1-2-3-4, G2 is empty.
inline GraphPair path3() { return GraphPair(4, {{1, 2}, {2, 3}, {3, 4}}, {}); }

/// Properness straight from the graph pair: two edges sharing an endpoint
/// inside the same graph must differ.
inline bool proper_by_pairs(const GraphPair& gp, const std::vector<Edge>& edges, const std::vector<int>& colors) {
  auto in = [](const std::vector<Edge>& es, const Edge& e) { return std::binary_search(es.begin(), es.end(), e); };
  for (std::size_t i = 0; i < edges.size(); ++i)
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const Edge& a = edges[i];
      const Edge& b = edges[j];
      bool touch = a.u == b.u || a.u == b.v || a.v == b.u || a.v == b.v;
      if (!touch || colors[i] != colors[j]) continue;
      if ((in(gp.edges1(), a) && in(gp.edges1(), b)) || (in(gp.edges2(), a) && in(gp.edges2(), b))) return false;
    }
  return true;
}

/// Brute force over all k^m assignments, iterating vertices in the given order.
inline std::uint64_t brute_force_count(const GraphPair& gp, int k, const std::vector<std::size_t>& order) {
  std::vector<Edge> edges;
  std::set_union(gp.edges1().begin(), gp.edges1().end(), gp.edges2().begin(), gp.edges2().end(),
                 std::back_inserter(edges));
  const std::size_t m = edges.size();
  std::vector<int> colors(m, 1);
  std::uint64_t count = 0;
  while (true) {
    if (proper_by_pairs(gp, edges, colors)) ++count;
    std::size_t i = 0;
    while (i < m && colors[order[i]] == k) colors[order[i++]] = 1;
    if (i == m) break;
    ++colors[order[i]];
  }
  return count;
}

/// Two-color components of σ by union-find over {a,b}-edges with distinct
/// endpoint colors. Key: (min color, max color, sorted members).
using Component = std::tuple<Color, Color, std::vector<std::size_t>>;

inline std::set<Component> two_color_components(const Coloring& sigma, const UnionLineGraph& g, int k) {
  std::set<Component> out;
  const std::size_t m = g.m();
  for (Color a = 1; a <= k; ++a)
    for (Color b = a + 1; b <= k; ++b) {
      std::vector<std::size_t> parent(m);
      for (std::size_t i = 0; i < m; ++i) parent[i] = i;
      auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
      };
      for (std::size_t u = 0; u < m; ++u)
        for (const Neighbor& nb : g.neighbors(u)) {
          Color cu = sigma[u], cw = sigma[nb.id];
          if (cu != cw && (cu == a || cu == b) && (cw == a || cw == b)) parent[find(u)] = find(nb.id);
        }
      std::map<std::size_t, std::vector<std::size_t>> groups;
      for (std::size_t u = 0; u < m; ++u)
        if (sigma[u] == a || sigma[u] == b) groups[find(u)].push_back(u);
      for (auto& [root, members] : groups) out.insert({a, b, members});
      // Singletons {v} for a vertex colored a with no b around, and vice versa,
      // are already covered: every vertex colored a or b is in some group.
    }
  return out;
}

/// Random proper coloring by rejection from a greedy start plus Glauber moves.
inline Coloring random_proper(const UnionLineGraph& g, int k, Rng& rng, std::size_t steps) {
  Coloring s = *greedy_coloring(g, k);
  for (std::size_t i = 0; i < steps; ++i) glauber_step(s, g, rng);
  return s;
}

/// Uniform coloring of [k]^m, proper or not.
inline Coloring random_coloring(std::size_t m, int k, Rng& rng) {
  std::vector<Color> c(m);
  for (auto& x : c) x = static_cast<Color>(rng.below(static_cast<std::uint64_t>(k))) + 1;
  return Coloring(std::move(c), k);
}

using Marginal = std::map<Component, Rational>;

inline Component key(const ClusterMove& mv) { return {std::min(mv.a, mv.b), std::max(mv.a, mv.b), mv.members}; }

/// Per-side aggregation of the table masses.
inline std::pair<Marginal, Marginal> table_marginals(const CouplingTable& t) {
  Marginal mx, my;
  for (const auto& e : t.entries) {
    if (e.x) mx[key(*e.x)] += e.mass;
    if (e.y) my[key(*e.y)] += e.mass;
  }
  return {mx, my};
}

/// What a single flip chain does: each non-trivial two-color component S
/// moves with mass P_|S|/(mk), or 0 when some member cannot take both colors.
inline Marginal chain_marginal(const Coloring& s, const UnionLineGraph& g, const FlipParams& fp, int k,
                        const ListAssignment* lists = nullptr) {
  Marginal out;
  const int colors = lists ? s.k : k;
  for (const auto& comp : two_color_components(s, g, colors)) {
    const auto& [a, b, members] = comp;
    Rational p = fp(members.size());
    if (lists)
      for (std::size_t w : members)
        if (!lists->contains(w, a) || !lists->contains(w, b)) p = 0;
    if (p != 0) out[comp] = p * make_rational(1, static_cast<long>(g.m()) * k);
  }
  return out;
}

/// ΔĤ of an entry from scratch: apply both moves to full copies and recompute.
inline int full_delta(const AdjacentPair& pair, const UnionLineGraph& g, const CouplingEntry& e) {
  Coloring x = pair.x, y = pair.y;
  if (e.x) apply_flip(x, e.x->members, e.x->a, e.x->b);
  if (e.y) apply_flip(y, e.y->members, e.y->a, e.y->b);
  int before = 0, after = 0;
  for (std::size_t v = 0; v < g.m(); ++v) {
    before += pair.x[v] != pair.y[v] ? g.weight(v) : 0;
    after += x[v] != y[v] ? g.weight(v) : 0;
  }
  return after - before;
}

}  // namespace testing_support
