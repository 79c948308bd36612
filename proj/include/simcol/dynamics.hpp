#pragma once

// Colorings of the union line graph and single steps of the Glauber, flip and
// list-flip chains on the expanded state space (improper colorings allowed).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "simcol/errors.hpp"
#include "simcol/graph.hpp"
#include "simcol/rational.hpp"
#include "simcol/rng.hpp"

namespace simcol {

using Color = int;

/// Per-vertex colors in [1..k]. Properness is not required.
struct Coloring {
  std::vector<Color> assign;
  int k = 0;

  Coloring() = default;
  Coloring(std::vector<Color> colors, int num_colors) : assign(std::move(colors)), k(num_colors) {
    if (k < 1) throw InvalidInput("coloring needs k >= 1");
    for (Color c : assign)
      if (c < 1 || c > k) throw InvalidInput("color " + std::to_string(c) + " outside [1.." + std::to_string(k) + "]");
  }

  Color operator[](std::size_t v) const { return assign[v]; }
  Color& operator[](std::size_t v) { return assign[v]; }
  std::size_t size() const { return assign.size(); }

  friend bool operator==(const Coloring&, const Coloring&) = default;
};

/// Flip probabilities P_1..P_locality (P_i = 0 beyond). P_1 = 1, each in [0,1].
class FlipParams {
 public:
  explicit FlipParams(std::vector<Rational> p) : p_(std::move(p)) {
    if (p_.empty() || p_[0] != 1) throw InvalidInput("flip parameters need P_1 = 1");
    for (const Rational& x : p_)
      if (x < 0 || x > 1) throw InvalidInput("flip parameter " + to_string(x) + " outside [0,1]");
    while (!p_.empty() && p_.back() == 0) p_.pop_back();
  }

  /// (1, 137/650, 77/650, 47/650, 27/650, 12/650).
  static FlipParams standard() {
    return FlipParams({make_rational(1), make_rational(137, 650), make_rational(77, 650), make_rational(47, 650),
                       make_rational(27, 650), make_rational(12, 650)});
  }

  /// P = (1, 0, 0, ...): the flip chain reduces to Glauber dynamics.
  static FlipParams glauber() { return FlipParams({make_rational(1)}); }

  /// Largest i with P_i > 0.
  std::size_t locality() const { return p_.size(); }

  /// P_i for any i >= 0; P_0 is not defined by the chain and reported as 0.
  const Rational& operator()(std::size_t i) const {
    static const Rational zero = 0;
    return (i >= 1 && i <= p_.size()) ? p_[i - 1] : zero;
  }

  const std::vector<Rational>& values() const { return p_; }

  friend bool operator==(const FlipParams&, const FlipParams&) = default;

 private:
  std::vector<Rational> p_;
};

/// One line per P_i, "num/den". Blank and '#' lines skipped.
inline FlipParams parse_flip_params(std::string_view text) {
  std::vector<Rational> p;
  std::size_t line = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line;
    std::string_view row = text.substr(pos, end - pos);
    auto first = row.find_first_not_of(" \t\r");
    if (first != std::string_view::npos && row[first] != '#') p.push_back(parse_rational(row, line));
    pos = end + 1;
  }
  try {
    return FlipParams(std::move(p));
  } catch (const InvalidInput& e) {
    throw ParseError(line, e.what());
  }
}

/// Kempe component: vertices reachable from seed by (σ(seed), other)-alternating paths.
struct Cluster {
  std::size_t seed = 0;
  Color seed_color = 0;
  Color other_color = 0;
  std::vector<std::size_t> members;  // sorted
  bool truncated = false;            // search stopped after exceeding the size limit

  std::size_t size() const { return members.size(); }
};

/// Breadth-first closure of v, stepping along an edge (u,w) only when
/// {σ(u), σ(w)} = {σ(v), c} with σ(u) ≠ σ(w). Returns {v} when c = σ(v).
/// With `limit`, the search stops as soon as more than `limit` members are
/// found and the result is marked truncated (its size is then limit + 1).
inline Cluster compute_cluster(const Coloring& sigma, const UnionLineGraph& g, std::size_t v, Color c,
                               std::size_t limit = std::numeric_limits<std::size_t>::max()) {
  Cluster cl;
  cl.seed = v;
  cl.seed_color = sigma[v];
  cl.other_color = c;
  cl.members.push_back(v);
  if (c == sigma[v]) return cl;

  const Color a = sigma[v];
  std::vector<std::size_t> frontier{v};
  std::vector<std::size_t>& found = cl.members;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const std::size_t u = frontier[head];
    const Color want = sigma[u] == a ? c : a;
    for (const Neighbor& nb : g.neighbors(u)) {
      if (sigma[nb.id] != want) continue;
      if (std::find(found.begin(), found.end(), nb.id) != found.end()) continue;
      found.push_back(nb.id);
      frontier.push_back(nb.id);
      if (found.size() > limit) {
        cl.truncated = true;
        std::sort(found.begin(), found.end());
        return cl;
      }
    }
  }
  std::sort(found.begin(), found.end());
  return cl;
}

/// Swap the two colors of the cluster on its members.
inline void apply_flip(Coloring& sigma, const std::vector<std::size_t>& members, Color a, Color b) {
  for (std::size_t u : members) {
    if (sigma[u] == a)
      sigma[u] = b;
    else if (sigma[u] == b)
      sigma[u] = a;
  }
}

inline bool is_proper(const Coloring& sigma, const UnionLineGraph& g) {
  for (std::size_t v = 0; v < g.m(); ++v)
    for (const Neighbor& nb : g.neighbors(v))
      if (nb.id > v && sigma[v] == sigma[nb.id]) return false;
  return true;
}

/// d_c for every color present in N(v).
inline std::map<Color, int> measure_color_multiplicity(const Coloring& sigma, const UnionLineGraph& g, std::size_t v) {
  std::map<Color, int> d;
  for (const Neighbor& nb : g.neighbors(v)) ++d[sigma[nb.id]];
  return d;
}

/// First available color per vertex in id order; nullopt if some vertex has none.
inline std::optional<Coloring> greedy_coloring(const UnionLineGraph& g, int k) {
  std::vector<Color> colors(g.m(), 0);
  std::vector<char> used(static_cast<std::size_t>(k) + 1);
  for (std::size_t v = 0; v < g.m(); ++v) {
    std::fill(used.begin(), used.end(), 0);
    for (const Neighbor& nb : g.neighbors(v))
      if (colors[nb.id] > 0) used[colors[nb.id]] = 1;
    Color c = 1;
    while (c <= k && used[c]) ++c;
    if (c > k) return std::nullopt;
    colors[v] = c;
  }
  return Coloring(std::move(colors), k);
}

/// Per-vertex sorted color lists; k bounds the index draw of the list chain.
struct ListAssignment {
  std::vector<std::vector<Color>> lists;
  int k = 0;

  ListAssignment() = default;
  ListAssignment(std::vector<std::vector<Color>> l, int num_colors) : lists(std::move(l)), k(num_colors) {
    for (auto& list : lists) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
      if (list.empty()) throw InvalidInput("empty color list");
      if (list.size() > static_cast<std::size_t>(k)) throw InvalidInput("color list longer than k");
      if (list.front() < 1) throw InvalidInput("list colors must be positive");
    }
  }

  /// Every vertex gets [1..k].
  static ListAssignment full(std::size_t m, int k) {
    std::vector<Color> all(static_cast<std::size_t>(k));
    for (int c = 1; c <= k; ++c) all[static_cast<std::size_t>(c - 1)] = c;
    return ListAssignment(std::vector<std::vector<Color>>(m, all), k);
  }

  bool contains(std::size_t v, Color c) const { return std::binary_search(lists[v].begin(), lists[v].end(), c); }

  /// σ(v) ∈ L(v) for all v.
  bool admits(const Coloring& sigma) const {
    for (std::size_t v = 0; v < sigma.size(); ++v)
      if (!contains(v, sigma[v])) return false;
    return true;
  }

  /// Every member has both swap colors in its list.
  bool flippable(const std::vector<std::size_t>& members, Color a, Color b) const {
    return std::all_of(members.begin(), members.end(), [&](std::size_t w) { return contains(w, a) && contains(w, b); });
  }
};

// ---------------------------------------------------------------------------
// Chain steps. Draw order per step: vertex = rng.below(m), then color (or
// list index) = rng.below(k), then, only when the acceptance probability is
// strictly between 0 and 1, one acceptance draw (see accept()). A step with
// m = 0 draws nothing. Rejected proposals still count as a step.

/// What a single step did; returned so callers can keep acceptance statistics.
struct StepOutcome {
  std::size_t vertex = 0;
  Color color = 0;
  std::size_t cluster_size = 0;  // 0 when no cluster was formed (Glauber, null list move)
  bool changed = false;
};

namespace detail {

/// Accept with probability num/den exactly. When s·den fits in 64 bits the
/// decision is rng.below(den) < num; otherwise a 53-bit uniform is compared.
inline bool accept(const Rational& prob, Rng& rng) {
  if (prob <= 0) return false;
  if (prob >= 1) return true;
  const BigInt& num = boost::multiprecision::numerator(prob);
  const BigInt& den = boost::multiprecision::denominator(prob);
  if (den <= BigInt(std::numeric_limits<std::uint64_t>::max()))
    return BigInt(rng.below(den.convert_to<std::uint64_t>())) < num;
  return rng.uniform() < to_double(prob);
}

inline bool flip_cluster_step(Coloring& sigma, const UnionLineGraph& g, std::size_t v, Color c,
                              const FlipParams& fp, const ListAssignment* lists, StepOutcome& out, Rng& rng) {
  Cluster cl = compute_cluster(sigma, g, v, c, fp.locality());
  out.cluster_size = cl.size();
  if (cl.truncated || c == sigma[v]) return false;
  if (lists && !lists->flippable(cl.members, sigma[v], c)) return false;
  Rational prob = fp(cl.size()) / static_cast<long>(cl.size());
  if (!accept(prob, rng)) return false;
  apply_flip(sigma, cl.members, sigma[v], c);
  return true;
}

}  // namespace detail

/// Recolor a uniform vertex to a uniform color iff no neighbor carries it.
inline StepOutcome glauber_step(Coloring& sigma, const UnionLineGraph& g, Rng& rng) {
  StepOutcome out;
  if (g.m() == 0) return out;
  out.vertex = rng.below(g.m());
  out.color = static_cast<Color>(rng.below(static_cast<std::uint64_t>(sigma.k))) + 1;
  for (const Neighbor& nb : g.neighbors(out.vertex))
    if (sigma[nb.id] == out.color) return out;
  out.changed = sigma[out.vertex] != out.color;
  sigma[out.vertex] = out.color;
  return out;
}

/// Flip the cluster S(v, c) of a uniform (v, c) with probability P_|S| / |S|.
inline StepOutcome flip_step(Coloring& sigma, const UnionLineGraph& g, const FlipParams& fp, Rng& rng) {
  StepOutcome out;
  if (g.m() == 0) return out;
  out.vertex = rng.below(g.m());
  out.color = static_cast<Color>(rng.below(static_cast<std::uint64_t>(sigma.k))) + 1;
  out.changed = detail::flip_cluster_step(sigma, g, out.vertex, out.color, fp, nullptr, out, rng);
  return out;
}

/// List version: draw (v, i) uniform on V × [k]; i beyond |L(v)| is a null
/// move; otherwise c is the i-th smallest color of L(v) and the cluster flips
/// only if every member has both colors in its list.
inline StepOutcome list_flip_step(Coloring& sigma, const UnionLineGraph& g, const ListAssignment& lists,
                                  const FlipParams& fp, Rng& rng) {
  if (!lists.admits(sigma)) throw InvalidInput("list_flip_step: coloring violates list assignment");
  StepOutcome out;
  if (g.m() == 0) return out;
  out.vertex = rng.below(g.m());
  const auto index = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(lists.k)));
  const auto& list = lists.lists[out.vertex];
  if (index >= list.size()) return out;
  out.color = list[index];
  out.changed = detail::flip_cluster_step(sigma, g, out.vertex, out.color, fp, &lists, out, rng);
  return out;
}

}  // namespace simcol
