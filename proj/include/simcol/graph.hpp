#pragma once

// Graph pairs on a common vertex set and their weighted union line graph.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "simcol/errors.hpp"
#include "simcol/rng.hpp"

namespace simcol {

/// Undirected edge in canonical form (u < v), endpoints 1-indexed.
struct Edge {
  int u = 0;
  int v = 0;

  Edge() = default;
  Edge(int a, int b) : u(std::min(a, b)), v(std::max(a, b)) {}

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Two simple undirected graphs G1 = (V, E1), G2 = (V, E2) on V = [1..n].
class GraphPair {
 public:
  GraphPair() = default;

  /// Validates and canonicalizes. Throws InvalidInput on self-loops,
  /// out-of-range endpoints or duplicates within one graph.
  GraphPair(int n, std::vector<Edge> edges1, std::vector<Edge> edges2)
      : n_(n), edges1_(std::move(edges1)), edges2_(std::move(edges2)) {
    if (n_ < 0) throw InvalidInput("negative vertex count");
    normalize(edges1_, "g1");
    normalize(edges2_, "g2");
    delta_ = std::max(max_degree(edges1_), max_degree(edges2_));
  }

  int n() const { return n_; }
  const std::vector<Edge>& edges1() const { return edges1_; }
  const std::vector<Edge>& edges2() const { return edges2_; }
  int delta() const { return delta_; }

  /// Degree of each vertex (index 0 unused) in a single edge list.
  std::vector<int> degrees(const std::vector<Edge>& edges) const {
    std::vector<int> deg(static_cast<std::size_t>(n_) + 1, 0);
    for (const Edge& e : edges) {
      ++deg[e.u];
      ++deg[e.v];
    }
    return deg;
  }

  std::size_t shared_edge_count() const {
    std::vector<Edge> both;
    std::set_intersection(edges1_.begin(), edges1_.end(), edges2_.begin(), edges2_.end(),
                          std::back_inserter(both));
    return both.size();
  }

  friend bool operator==(const GraphPair&, const GraphPair&) = default;

 private:
  void normalize(std::vector<Edge>& edges, const char* which) const {
    for (Edge& e : edges) {
      e = Edge(e.u, e.v);
      if (e.u == e.v) throw InvalidInput(std::string(which) + ": self-loop at " + std::to_string(e.u));
      if (e.u < 1 || e.v > n_)
        throw InvalidInput(std::string(which) + ": endpoint out of range in edge " + std::to_string(e.u) +
                           " " + std::to_string(e.v));
    }
    std::sort(edges.begin(), edges.end());
    auto dup = std::adjacent_find(edges.begin(), edges.end());
    if (dup != edges.end())
      throw InvalidInput(std::string(which) + ": duplicate edge " + std::to_string(dup->u) + " " +
                         std::to_string(dup->v));
  }

  int max_degree(const std::vector<Edge>& edges) const {
    auto deg = degrees(edges);
    return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  }

  int n_ = 0;
  std::vector<Edge> edges1_;
  std::vector<Edge> edges2_;
  int delta_ = 0;
};

/// Which of the two line graphs an adjacency comes from.
enum Origin : std::uint8_t { kG1 = 1, kG2 = 2 };

struct Neighbor {
  std::size_t id;
  std::uint8_t origin;  // bitmask of Origin

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// The graph whose vertices are the edges of E1 ∪ E2. Two vertices are adjacent
/// when their edges share an endpoint inside the same original graph. A vertex
/// has weight 2 iff its edge lies in E1 ∩ E2.
class UnionLineGraph {
 public:
  std::size_t m() const { return verts_.size(); }
  int delta() const { return delta_; }

  const Edge& edge(std::size_t id) const { return verts_[id]; }
  const std::vector<Edge>& edges() const { return verts_; }
  int weight(std::size_t id) const { return weight_[id]; }
  bool in_g1(std::size_t id) const { return (membership_[id] & kG1) != 0; }
  bool in_g2(std::size_t id) const { return (membership_[id] & kG2) != 0; }

  /// Neighbors sorted by id.
  const std::vector<Neighbor>& neighbors(std::size_t id) const { return adj_[id]; }
  std::size_t degree(std::size_t id) const { return adj_[id].size(); }

  int neighborhood_weight(std::size_t id) const {
    int total = 0;
    for (const Neighbor& w : adj_[id]) total += weight_[w.id];
    return total;
  }

  int total_weight() const { return std::accumulate(weight_.begin(), weight_.end(), 0); }

  bool adjacent(std::size_t a, std::size_t b) const {
    const auto& list = adj_[a];
    auto it = std::lower_bound(list.begin(), list.end(), b,
                               [](const Neighbor& nb, std::size_t key) { return nb.id < key; });
    return it != list.end() && it->id == b;
  }

  friend UnionLineGraph build_union_line_graph(const GraphPair& gp);

 private:
  std::vector<Edge> verts_;
  std::vector<int> weight_;
  std::vector<std::uint8_t> membership_;
  std::vector<std::vector<Neighbor>> adj_;
  int delta_ = 0;
};

/// Vertex ids follow the sorted canonical order of E1 ∪ E2.
inline UnionLineGraph build_union_line_graph(const GraphPair& gp) {
  UnionLineGraph g;
  g.delta_ = gp.delta();
  std::set_union(gp.edges1().begin(), gp.edges1().end(), gp.edges2().begin(), gp.edges2().end(),
                 std::back_inserter(g.verts_));
  const std::size_t m = g.verts_.size();
  g.weight_.assign(m, 1);
  g.membership_.assign(m, 0);
  g.adj_.assign(m, {});

  auto id_of = [&](const Edge& e) {
    return static_cast<std::size_t>(std::lower_bound(g.verts_.begin(), g.verts_.end(), e) - g.verts_.begin());
  };

  std::vector<std::map<std::size_t, std::uint8_t>> nb(m);
  auto add_graph = [&](const std::vector<Edge>& edges, std::uint8_t origin) {
    std::vector<std::vector<std::size_t>> incident(static_cast<std::size_t>(gp.n()) + 1);
    for (const Edge& e : edges) {
      std::size_t id = id_of(e);
      g.membership_[id] |= origin;
      incident[e.u].push_back(id);
      incident[e.v].push_back(id);
    }
    for (const auto& at : incident)
      for (std::size_t i = 0; i < at.size(); ++i)
        for (std::size_t j = i + 1; j < at.size(); ++j) {
          nb[at[i]][at[j]] |= origin;
          nb[at[j]][at[i]] |= origin;
        }
  };
  add_graph(gp.edges1(), kG1);
  add_graph(gp.edges2(), kG2);

  for (std::size_t id = 0; id < m; ++id) {
    if (g.membership_[id] == (kG1 | kG2)) g.weight_[id] = 2;
    g.adj_[id].reserve(nb[id].size());
    for (auto [other, origin] : nb[id]) g.adj_[id].push_back({other, origin});
  }
  return g;
}

/// Seeded random pair with both max degrees <= delta.
///
/// G1 is a random maximal degree-bounded graph: all vertex pairs in shuffled
/// order, each kept if both endpoints still have spare degree. Then
/// round(overlap * |E1|) edges of E1, chosen uniformly, are copied into E2, and
/// E2 is topped up towards |E1| edges with shuffled pairs outside E1 under the
/// same degree bound.
inline GraphPair random_graph_pair(int n, int delta, double overlap, std::uint64_t seed) {
  if (n < 2) throw InvalidInput("random_graph_pair: need n >= 2");
  if (delta < 1) throw InvalidInput("random_graph_pair: need delta >= 1");
  if (delta >= n) throw InvalidInput("random_graph_pair: delta must be < n");
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw InvalidInput("random_graph_pair: overlap must lie in [0,1]");

  Rng rng(seed);
  auto shuffle = [&](auto& items) {
    for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[rng.below(i)]);
  };

  std::vector<Edge> pairs;
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) pairs.emplace_back(u, v);

  std::vector<int> deg1(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Edge> e1;
  shuffle(pairs);
  for (const Edge& e : pairs)
    if (deg1[e.u] < delta && deg1[e.v] < delta) {
      e1.push_back(e);
      ++deg1[e.u];
      ++deg1[e.v];
    }

  std::vector<Edge> picked = e1;
  shuffle(picked);
  const auto shared = static_cast<std::size_t>(std::llround(overlap * static_cast<double>(e1.size())));
  std::vector<Edge> e2(picked.begin(), picked.begin() + static_cast<std::ptrdiff_t>(shared));

  std::vector<int> deg2(static_cast<std::size_t>(n) + 1, 0);
  for (const Edge& e : e2) {
    ++deg2[e.u];
    ++deg2[e.v];
  }
  std::vector<Edge> sorted1 = e1;
  std::sort(sorted1.begin(), sorted1.end());
  shuffle(pairs);
  for (const Edge& e : pairs) {
    if (e2.size() >= e1.size()) break;
    if (std::binary_search(sorted1.begin(), sorted1.end(), e)) continue;
    if (deg2[e.u] < delta && deg2[e.v] < delta) {
      e2.push_back(e);
      ++deg2[e.u];
      ++deg2[e.v];
    }
  }
  return GraphPair(n, std::move(e1), std::move(e2));
}

// ---------------------------------------------------------------------------
// Instance file format
//
//   simcol 1
//   n <N>
//   g1 <m1>      followed by m1 lines "u v"
//   g2 <m2>      followed by m2 lines "u v"
//
// Lines starting with '#' (after optional blanks) and blank lines are skipped.

inline std::string write_instance(const GraphPair& gp) {
  std::ostringstream out;
  out << "simcol 1\n" << "n " << gp.n() << "\n";
  out << "g1 " << gp.edges1().size() << "\n";
  for (const Edge& e : gp.edges1()) out << e.u << " " << e.v << "\n";
  out << "g2 " << gp.edges2().size() << "\n";
  for (const Edge& e : gp.edges2()) out << e.u << " " << e.v << "\n";
  return out.str();
}

inline GraphPair read_instance(std::string_view text) {
  struct Line {
    std::size_t number;
    std::vector<std::string> tokens;
  };
  std::vector<Line> lines;
  {
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      ++number;
      std::istringstream in{std::string(text.substr(pos, end - pos))};
      std::vector<std::string> tokens;
      for (std::string tok; in >> tok;) tokens.push_back(tok);
      if (!tokens.empty() && tokens.front().front() != '#') lines.push_back({number, std::move(tokens)});
      pos = end + 1;
    }
  }

  std::size_t cursor = 0;
  std::size_t last_line = lines.empty() ? 1 : lines.back().number;
  auto next = [&](const char* expected) -> const Line& {
    if (cursor >= lines.size()) throw ParseError(last_line, std::string("unexpected end of input, expected ") + expected);
    return lines[cursor++];
  };
  auto to_int = [](const Line& l, const std::string& tok) {
    std::size_t used = 0;
    long long value = 0;
    try {
      value = std::stoll(tok, &used);
    } catch (const std::exception&) {
      throw ParseError(l.number, "expected an integer, got '" + tok + "'");
    }
    if (used != tok.size() || value < INT32_MIN || value > INT32_MAX)
      throw ParseError(l.number, "expected an integer, got '" + tok + "'");
    return static_cast<int>(value);
  };
  auto header = [&](const char* key) {
    const Line& l = next(key);
    if (l.tokens.size() != 2 || l.tokens[0] != key)
      throw ParseError(l.number, std::string("malformed header, expected '") + key + " <value>'");
    int value = to_int(l, l.tokens[1]);
    if (value < 0) throw ParseError(l.number, std::string("negative value for ") + key);
    return value;
  };

  if (header("simcol") != 1) throw ParseError(lines.front().number, "unsupported format version");
  const int n = header("n");
  auto edges = [&](const char* key) {
    const int count = header(key);
    std::vector<Edge> out;
    std::vector<std::pair<Edge, std::size_t>> seen;
    for (int i = 0; i < count; ++i) {
      const Line& l = next("edge");
      if (l.tokens.size() != 2) throw ParseError(l.number, "expected 'u v'");
      int u = to_int(l, l.tokens[0]);
      int v = to_int(l, l.tokens[1]);
      if (u < 1 || u > n || v < 1 || v > n) throw ParseError(l.number, "vertex out of range [1.." + std::to_string(n) + "]");
      if (u == v) throw ParseError(l.number, "self-loop");
      out.emplace_back(u, v);
      seen.emplace_back(out.back(), l.number);
    }
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 1; i < seen.size(); ++i)
      if (seen[i].first == seen[i - 1].first)
        throw ParseError(seen[i].second, std::string("duplicate edge in ") + key);
    return out;
  };
  auto e1 = edges("g1");
  auto e2 = edges("g2");
  if (cursor != lines.size()) throw ParseError(lines[cursor].number, "trailing content");
  return GraphPair(n, std::move(e1), std::move(e2));
}

}  // namespace simcol
