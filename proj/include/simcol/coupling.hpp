#pragma once

// Path-coupling machinery: the weighted Hamming metric, the Jerrum-style
// coupling of two Glauber chains and the cluster-matching coupling of two flip
// chains, both for states that differ at a single vertex v*.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "simcol/color_scheme.hpp"
#include "simcol/dynamics.hpp"
#include "simcol/errors.hpp"
#include "simcol/graph.hpp"
#include "simcol/rational.hpp"
#include "simcol/rng.hpp"

namespace simcol {

/// Sum of W(v) over vertices where the colorings disagree.
inline int weighted_hamming(const Coloring& x, const Coloring& y, const UnionLineGraph& g) {
  if (x.size() != g.m() || y.size() != g.m()) throw InvalidInput("weighted_hamming: coloring size does not match graph");
  int total = 0;
  for (std::size_t v = 0; v < g.m(); ++v)
    if (x[v] != y[v]) total += g.weight(v);
  return total;
}

/// Two colorings that differ exactly at vstar.
struct AdjacentPair {
  Coloring x;
  Coloring y;
  std::size_t vstar = 0;

  static AdjacentPair make(Coloring x, Coloring y) {
    if (x.size() != y.size() || x.k != y.k) throw InvalidInput("adjacent pair: colorings of different shape");
    std::optional<std::size_t> where;
    for (std::size_t v = 0; v < x.size(); ++v)
      if (x[v] != y[v]) {
        if (where) throw InvalidInput("adjacent pair: colorings differ at more than one vertex");
        where = v;
      }
    if (!where) throw InvalidInput("adjacent pair: colorings are equal");
    return AdjacentPair{std::move(x), std::move(y), *where};
  }

  Color xstar() const { return x[vstar]; }
  Color ystar() const { return y[vstar]; }
};

/// One side of a coupled move: swap colors a <-> b on members.
struct ClusterMove {
  std::vector<std::size_t> members;
  Color a = 0;
  Color b = 0;

  friend auto operator<=>(const ClusterMove&, const ClusterMove&) = default;
};

/// Contribution of one color to the expected change of the metric.
struct ColorDrift {
  Color color = 0;
  int dc = 0;                // neighbors of v* with this color
  int wc = 0;                // their total weight
  Rational contribution;     // Σ mass · ΔĤ over entries attributed to the color
  Rational k_gamma;          // (mk · contribution − (d_c − 1) W(v*)) / W_c, for d_c >= 1
  bool merged = false;       // two neighbors share a unit cluster
  bool clamped = false;
};

struct DriftReport {
  Rational exact_drift;
  std::vector<ColorDrift> per_color;
  Rational bound;
  Rational beta;             // 1 + exact_drift / W(v*)
  int vstar_weight = 0;
  int dc_max = 0;
  bool merged = false;
  bool clamped = false;
};

// ---------------------------------------------------------------------------
// Glauber coupling

/// Color attempted in Y when X attempts (v, c): X and Y colors of v* are
/// exchanged for v ∈ N(v*), identity otherwise. A bijection on [k] for each v.
inline Color coupled_color(const AdjacentPair& pair, const UnionLineGraph& g, std::size_t v, Color c) {
  if (v == pair.vstar || !g.adjacent(v, pair.vstar)) return c;
  if (c == pair.xstar()) return pair.ystar();
  if (c == pair.ystar()) return pair.xstar();
  return c;
}

namespace detail {

inline bool try_recolor(Coloring& sigma, const UnionLineGraph& g, std::size_t v, Color c) {
  for (const Neighbor& nb : g.neighbors(v))
    if (sigma[nb.id] == c) return false;
  sigma[v] = c;
  return true;
}

inline void require_proper(const AdjacentPair& pair, const UnionLineGraph& g, const char* who) {
  if (pair.x.size() != g.m()) throw InvalidInput(std::string(who) + ": coloring size does not match graph");
  if (!is_proper(pair.x, g) || !is_proper(pair.y, g))
    throw InvalidInput(std::string(who) + ": both states must be proper colorings");
}

}  // namespace detail

/// Draws (v, c) as glauber_step does (vertex, then color) and applies the coupled attempt.
inline std::pair<Coloring, Coloring> coupled_glauber_step(const AdjacentPair& pair, const UnionLineGraph& g, Rng& rng) {
  Coloring x = pair.x, y = pair.y;
  if (g.m() == 0) return {x, y};
  const std::size_t v = rng.below(g.m());
  const Color c = static_cast<Color>(rng.below(static_cast<std::uint64_t>(x.k))) + 1;
  detail::try_recolor(x, g, v, c);
  detail::try_recolor(y, g, v, coupled_color(pair, g, v, c));
  return {std::move(x), std::move(y)};
}

/// Exact expected ΔĤ over all mk coupled proposals. Bound is
/// (−W(v*)(k − |N(v*)|) + Σ_{w∈N(v*)} W(w)) / (mk).
inline DriftReport glauber_exact_drift(const AdjacentPair& pair, const UnionLineGraph& g) {
  detail::require_proper(pair, g, "glauber_exact_drift");
  const int k = pair.x.k;
  const auto mk = static_cast<long>(g.m()) * k;
  const std::size_t vs = pair.vstar;
  const int before = g.weight(vs);

  DriftReport rep;
  rep.vstar_weight = before;
  std::map<Color, Rational> by_color;
  for (std::size_t v = 0; v < g.m(); ++v) {
    if (v != vs && !g.adjacent(v, vs)) continue;  // identical moves, ΔĤ = 0
    for (Color c = 1; c <= k; ++c) {
      Coloring x = pair.x, y = pair.y;
      detail::try_recolor(x, g, v, c);
      detail::try_recolor(y, g, v, coupled_color(pair, g, v, c));
      int after = (x[vs] != y[vs] ? g.weight(vs) : 0) + (v != vs && x[v] != y[v] ? g.weight(v) : 0);
      if (after != before) by_color[c] += make_rational(after - before, mk);
    }
  }
  for (auto& [c, r] : by_color) {
    rep.exact_drift += r;
    rep.per_color.push_back({c, 0, 0, r, 0, false, false});
  }
  auto dc = measure_color_multiplicity(pair.x, g, vs);
  for (auto& cd : rep.per_color)
    if (auto it = dc.find(cd.color); it != dc.end()) cd.dc = it->second;
  for (auto& [c, d] : dc) rep.dc_max = std::max(rep.dc_max, d);
  rep.bound = make_rational(-before * (k - static_cast<long>(g.degree(vs))) + g.neighborhood_weight(vs), mk);
  rep.beta = 1 + rep.exact_drift / before;
  return rep;
}

// ---------------------------------------------------------------------------
// Flip coupling

struct CouplingEntry {
  Rational mass;                    // probability of this joint move
  std::optional<ClusterMove> x;     // nullopt: X stays put
  std::optional<ClusterMove> y;
  Color color = 0;                  // color it is attributed to; 0 for shared clusters
  int delta_h = 0;                  // exact change of the weighted Hamming metric
};

struct CouplingTable {
  std::vector<CouplingEntry> entries;
  Rational residual;                // mass of the joint null move
  std::size_t m = 0;
  int k = 0;
  std::vector<ColorDrift> colors;   // one per color of [k] (or L(v*)) with per-color flags, contribution unset
  bool merged = false;
  bool clamped = false;
};

namespace detail {

/// Effective flip probability of a cluster (0 if truncated or not flippable).
inline Rational cluster_prob(const Cluster& cl, const FlipParams& fp, const ListAssignment* lists) {
  if (cl.truncated || cl.seed_color == cl.other_color) return 0;
  if (lists && !lists->flippable(cl.members, cl.seed_color, cl.other_color)) return 0;
  return fp(cl.size());
}

inline int move_delta(const AdjacentPair& pair, const UnionLineGraph& g, const std::optional<ClusterMove>& mx,
                      const std::optional<ClusterMove>& my) {
  std::vector<std::size_t> touched;
  if (mx) touched.insert(touched.end(), mx->members.begin(), mx->members.end());
  if (my) touched.insert(touched.end(), my->members.begin(), my->members.end());
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  auto after = [](const std::optional<ClusterMove>& mv, std::size_t u, Color now) {
    if (!mv || !std::binary_search(mv->members.begin(), mv->members.end(), u)) return now;
    return now == mv->a ? mv->b : (now == mv->b ? mv->a : now);
  };
  int delta = 0;
  for (std::size_t u : touched) {
    bool was = pair.x[u] != pair.y[u];
    bool is = after(mx, u, pair.x[u]) != after(my, u, pair.y[u]);
    delta += g.weight(u) * (static_cast<int>(is) - static_cast<int>(was));
  }
  return delta;
}

using ClusterKey = std::tuple<Color, Color, std::vector<std::size_t>>;

inline ClusterKey key_of(const Cluster& cl) {
  return {std::min(cl.seed_color, cl.other_color), std::max(cl.seed_color, cl.other_color), cl.members};
}

inline std::vector<Color> proposal_colors(std::size_t v, int k, const ListAssignment* lists) {
  if (lists) return lists->lists[v];
  std::vector<Color> all;
  for (Color c = 1; c <= k; ++c) all.push_back(c);
  return all;
}

}  // namespace detail

/// Explicit joint distribution of one coupled flip step from an adjacent pair
/// of proper colorings. With `lists`, the chains are list-flip chains and
/// unflippable clusters carry mass 0.
inline CouplingTable build_flip_coupling_table(const AdjacentPair& pair, const UnionLineGraph& g, const FlipParams& fp,
                                               const ListAssignment* lists = nullptr) {
  detail::require_proper(pair, g, "build_flip_coupling_table");
  if (lists && (!lists->admits(pair.x) || !lists->admits(pair.y)))
    throw InvalidInput("build_flip_coupling_table: coloring violates list assignment");
  const int k = lists ? lists->k : pair.x.k;
  const std::size_t m = g.m();
  const Rational unit = make_rational(1, static_cast<long>(m) * k);
  const std::size_t vs = pair.vstar;
  const Color xs = pair.xstar(), ys = pair.ystar();
  const std::size_t limit = fp.locality();

  CouplingTable table;
  table.m = m;
  table.k = k;

  auto add = [&](const Rational& prob, std::optional<ClusterMove> mx, std::optional<ClusterMove> my, Color color) {
    if (prob <= 0) return;
    int d = detail::move_delta(pair, g, mx, my);
    table.entries.push_back({prob * unit, std::move(mx), std::move(my), color, d});
  };
  auto move_of = [](const Cluster& cl) { return ClusterMove{cl.members, cl.seed_color, cl.other_color}; };

  // Colors seen around v*.
  std::map<Color, std::vector<std::size_t>> around;
  for (const Neighbor& nb : g.neighbors(vs)) around[pair.x[nb.id]].push_back(nb.id);

  std::set<detail::ClusterKey> covered_x, covered_y;

  // Singleton clusters at v*: every color absent from N(v*) makes the chains coalesce.
  for (Color c : detail::proposal_colors(vs, k, lists)) {
    if (around.count(c)) continue;
    ColorDrift info;
    info.color = c;
    table.colors.push_back(info);
    std::optional<ClusterMove> mx, my;
    if (c != xs) mx = ClusterMove{{vs}, xs, c};
    if (c != ys) my = ClusterMove{{vs}, ys, c};
    bool ok = !lists || (lists->contains(vs, xs) && lists->contains(vs, ys) && lists->contains(vs, c));
    if (ok) add(fp(1), mx, my, c);
    if (mx) covered_x.insert({std::min(xs, c), std::max(xs, c), {vs}});
    if (my) covered_y.insert({std::min(ys, c), std::max(ys, c), {vs}});
  }

  // Colors carried by neighbors.
  for (const auto& [c, nbrs] : around) {
    ColorDrift info;
    info.color = c;
    info.dc = static_cast<int>(nbrs.size());
    for (std::size_t w : nbrs) info.wc += g.weight(w);

    Cluster big_x = compute_cluster(pair.x, g, vs, c, limit);
    Cluster big_y = compute_cluster(pair.y, g, vs, c, limit);

    // Distinct clusters among S_sigma(w_i, other), one unit each.
    auto make_units = [&](const Coloring& sigma, Color other, std::vector<Cluster>& clusters) {
      std::vector<scheme::Unit> units;
      for (std::size_t i = 0; i < nbrs.size(); ++i) {
        std::size_t j = 0;
        while (j < clusters.size() &&
               !std::binary_search(clusters[j].members.begin(), clusters[j].members.end(), nbrs[i]))
          ++j;
        if (j < clusters.size()) {
          units[j].neighbors.push_back(i);
          units[j].weight += g.weight(nbrs[i]);
          info.merged = true;
          continue;
        }
        Cluster cl = compute_cluster(sigma, g, nbrs[i], other, limit);
        units.push_back({detail::cluster_prob(cl, fp, lists), cl.size(), g.weight(nbrs[i]), {i}});
        clusters.push_back(std::move(cl));
      }
      return units;
    };

    scheme::Input in;
    in.neighbor_count = nbrs.size();
    in.big_x = detail::cluster_prob(big_x, fp, lists);
    in.big_y = detail::cluster_prob(big_y, fp, lists);
    std::vector<Cluster> y_clusters, x_clusters;
    in.y_units = make_units(pair.y, xs, y_clusters);
    in.x_units = make_units(pair.x, ys, x_clusters);

    scheme::Output out = scheme::match_color(in);
    info.clamped = out.clamped;
    table.merged = table.merged || info.merged;
    table.clamped = table.clamped || info.clamped;

    auto resolve_x = [&](const std::optional<scheme::Ref>& r) -> std::optional<ClusterMove> {
      if (!r) return std::nullopt;
      return move_of(r->big ? big_x : x_clusters[r->index]);
    };
    auto resolve_y = [&](const std::optional<scheme::Ref>& r) -> std::optional<ClusterMove> {
      if (!r) return std::nullopt;
      return move_of(r->big ? big_y : y_clusters[r->index]);
    };
    for (const scheme::Entry& e : out.entries) add(e.mass, resolve_x(e.x), resolve_y(e.y), c);

    covered_x.insert(detail::key_of(big_x));
    covered_y.insert(detail::key_of(big_y));
    for (const Cluster& cl : x_clusters) covered_x.insert(detail::key_of(cl));
    for (const Cluster& cl : y_clusters) covered_y.insert(detail::key_of(cl));
    table.colors.push_back(info);
  }

  // Clusters away from v* that look the same in both chains move together.
  std::set<detail::ClusterKey> shared;
  for (std::size_t u = 0; u < m; ++u) {
    if (u == vs) continue;
    for (Color c : detail::proposal_colors(u, k, lists)) {
      if (c == pair.x[u]) continue;
      Cluster cx = compute_cluster(pair.x, g, u, c, limit);
      Rational p = detail::cluster_prob(cx, fp, lists);
      if (p == 0) continue;
      auto key = detail::key_of(cx);
      if (shared.count(key) || covered_x.count(key)) continue;
      Cluster cy = compute_cluster(pair.y, g, u, c, limit);
      if (cy.members != cx.members) throw std::logic_error("flip coupling: unmatched cluster away from v*");
      shared.insert(key);
      add(p, move_of(cx), move_of(cx), 0);
    }
  }
  // Y-side clusters must all be accounted for as well.
  for (std::size_t u = 0; u < m; ++u) {
    if (u == vs) continue;
    for (Color c : detail::proposal_colors(u, k, lists)) {
      if (c == pair.y[u]) continue;
      Cluster cy = compute_cluster(pair.y, g, u, c, limit);
      if (detail::cluster_prob(cy, fp, lists) == 0) continue;
      auto key = detail::key_of(cy);
      if (!shared.count(key) && !covered_y.count(key))
        throw std::logic_error("flip coupling: Y cluster missing from the table");
    }
  }

  std::sort(table.colors.begin(), table.colors.end(),
            [](const ColorDrift& a, const ColorDrift& b) { return a.color < b.color; });
  Rational total = 0;
  for (const auto& e : table.entries) total += e.mass;
  table.residual = 1 - total;
  if (table.residual < 0) throw std::logic_error("flip coupling: masses exceed 1");
  return table;
}

/// Exact E[ΔĤ] for one coupled flip step. `threshold` is the k/Δ ratio of the
/// contraction bound (W(v*)/(mk))·(−k + threshold·Δ); 1933/325 for the
/// standard parameters.
inline DriftReport flip_exact_drift(const AdjacentPair& pair, const UnionLineGraph& g, const FlipParams& fp,
                                    const Rational& threshold, const ListAssignment* lists = nullptr) {
  CouplingTable table = build_flip_coupling_table(pair, g, fp, lists);
  DriftReport rep;
  rep.vstar_weight = g.weight(pair.vstar);
  rep.per_color = table.colors;
  rep.merged = table.merged;
  rep.clamped = table.clamped;
  std::map<Color, std::size_t> slot;
  for (std::size_t i = 0; i < rep.per_color.size(); ++i) slot[rep.per_color[i].color] = i;
  for (const auto& e : table.entries) {
    Rational contrib = e.mass * e.delta_h;
    rep.exact_drift += contrib;
    if (e.color != 0) rep.per_color[slot.at(e.color)].contribution += contrib;
  }
  const long mk = static_cast<long>(table.m) * table.k;
  for (auto& cd : rep.per_color) {
    rep.dc_max = std::max(rep.dc_max, cd.dc);
    if (cd.dc >= 1) cd.k_gamma = (cd.contribution * mk - (cd.dc - 1) * rep.vstar_weight) / cd.wc;
  }
  rep.bound = make_rational(rep.vstar_weight, mk) * (threshold * g.delta() - table.k);
  rep.beta = 1 + rep.exact_drift / rep.vstar_weight;
  return rep;
}

/// Draws coupled flip steps from a fixed table. One uniform() per step.
class CouplingSampler {
 public:
  explicit CouplingSampler(const CouplingTable& table) : table_(&table) {
    double acc = 0;
    for (const auto& e : table.entries) {
      acc += to_double(e.mass);
      cumulative_.push_back(acc);
    }
  }

  /// Index of the drawn entry, or entries.size() for the joint null move.
  std::size_t draw(Rng& rng) const {
    double u = rng.uniform();
    return static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin());
  }

  const CouplingTable& table() const { return *table_; }

 private:
  const CouplingTable* table_;
  std::vector<double> cumulative_;
};

/// Sample one coupled flip step: draw an entry proportionally to its mass and apply it.
inline std::pair<Coloring, Coloring> coupled_flip_step(const AdjacentPair& pair, const UnionLineGraph& g,
                                                       const FlipParams& fp, Rng& rng) {
  CouplingTable table = build_flip_coupling_table(pair, g, fp);
  CouplingSampler sampler(table);
  Coloring x = pair.x, y = pair.y;
  std::size_t i = sampler.draw(rng);
  if (i < table.entries.size()) {
    const auto& e = table.entries[i];
    if (e.x) apply_flip(x, e.x->members, e.x->a, e.x->b);
    if (e.y) apply_flip(y, e.y->members, e.y->a, e.y->b);
  }
  return {std::move(x), std::move(y)};
}

// ---------------------------------------------------------------------------
// Contraction study

enum class ChainKind { kGlauber, kFlip };

struct PairRecord {
  std::size_t pair_id = 0;
  int vstar_weight = 0;
  Rational exact_drift;
  Rational bound;
  Rational beta;
  int dc_max = 0;
  bool merged = false;
  bool clamped = false;

  bool within_bound() const { return exact_drift <= bound; }
};

struct ContractionSummary {
  std::vector<PairRecord> pairs;
  std::size_t skipped_no_perturbation = 0;   // sampled states with no proper one-vertex change
  std::size_t excluded_high_dc = 0;          // pairs with d_c >= 3 somewhere
  std::size_t violations = 0;                // asserted pairs with drift above the bound
  Rational max_drift;
  double mean_drift = 0;
  Rational max_beta;
  Rational min_margin;                       // min over asserted pairs of bound − drift
};

/// A proper adjacent pair obtained by recoloring one vertex of x, trying
/// vertices in random order and a uniform available color.
inline std::optional<AdjacentPair> perturb(const Coloring& x, const UnionLineGraph& g, Rng& rng) {
  std::vector<std::size_t> order(g.m());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  for (std::size_t v : order) {
    std::vector<char> blocked(static_cast<std::size_t>(x.k) + 1, 0);
    blocked[x[v]] = 1;
    for (const Neighbor& nb : g.neighbors(v)) blocked[x[nb.id]] = 1;
    std::vector<Color> free;
    for (Color c = 1; c <= x.k; ++c)
      if (!blocked[c]) free.push_back(c);
    if (free.empty()) continue;
    Coloring y = x;
    y[v] = free[rng.below(free.size())];
    return AdjacentPair{x, std::move(y), v};
  }
  return std::nullopt;
}

/// Sample proper adjacent pairs from a long run and compute each exact drift.
///
/// The run starts from the greedy coloring and does 20·m·k burn-in steps of
/// the chosen chain, then m·k steps between consecutive pairs. Pairs whose
/// v* has a color with d_c >= 3 are recorded but not asserted against the
/// bound. For Glauber the asserted bound is −W(v*)/(mk) when k >= 6Δ+1 and the
/// per-pair Jerrum bound otherwise; for flip it is (W(v*)/(mk))(−k + threshold·Δ).
inline ContractionSummary estimate_contraction(const UnionLineGraph& g, int k, ChainKind kind, const FlipParams& fp,
                                               const Rational& threshold, std::size_t pairs, std::uint64_t seed) {
  ContractionSummary sum;
  if (g.m() == 0) return sum;
  auto start = greedy_coloring(g, k);
  if (!start) throw InvalidInput("estimate_contraction: greedy coloring failed, k too small");
  Rng rng(seed);
  Coloring x = *start;
  const std::size_t mk = g.m() * static_cast<std::size_t>(k);
  auto run = [&](std::size_t steps) {
    for (std::size_t s = 0; s < steps; ++s) {
      if (kind == ChainKind::kGlauber)
        glauber_step(x, g, rng);
      else
        flip_step(x, g, fp, rng);
    }
  };
  run(20 * mk);
  bool first = true;
  bool have_margin = false;
  double drift_total = 0;
  for (std::size_t id = 0; id < pairs; ++id) {
    if (!first) run(mk);
    first = false;
    auto pair = perturb(x, g, rng);
    if (!pair) {
      ++sum.skipped_no_perturbation;
      continue;
    }
    DriftReport rep = kind == ChainKind::kGlauber ? glauber_exact_drift(*pair, g)
                                                  : flip_exact_drift(*pair, g, fp, threshold);
    PairRecord rec;
    rec.pair_id = id;
    rec.vstar_weight = rep.vstar_weight;
    rec.exact_drift = rep.exact_drift;
    rec.beta = rep.beta;
    rec.dc_max = rep.dc_max;
    rec.merged = rep.merged;
    rec.clamped = rep.clamped;
    if (kind == ChainKind::kGlauber && k >= 6 * g.delta() + 1)
      rec.bound = make_rational(-rep.vstar_weight, static_cast<long>(mk));
    else
      rec.bound = rep.bound;
    if (sum.pairs.empty() || rec.exact_drift > sum.max_drift) sum.max_drift = rec.exact_drift;
    if (sum.pairs.empty() || rec.beta > sum.max_beta) sum.max_beta = rec.beta;
    drift_total += to_double(rec.exact_drift);
    if (rec.dc_max > 2) {
      ++sum.excluded_high_dc;
    } else {
      Rational margin = rec.bound - rec.exact_drift;
      if (!have_margin || margin < sum.min_margin) sum.min_margin = margin;
      have_margin = true;
      if (margin < 0) ++sum.violations;
    }
    sum.pairs.push_back(std::move(rec));
  }
  if (!sum.pairs.empty()) sum.mean_drift = drift_total / static_cast<double>(sum.pairs.size());
  return sum;
}

}  // namespace simcol
