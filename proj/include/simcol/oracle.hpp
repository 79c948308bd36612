#pragma once

// Ground truth on tiny instances: exhaustive counting of proper colorings,
// exact one-step kernels of the chains on [k]^m, stationarity, irreducibility
// and total-variation mixing times.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "simcol/dynamics.hpp"
#include "simcol/errors.hpp"
#include "simcol/graph.hpp"
#include "simcol/rational.hpp"

namespace simcol {

/// Mixed-radix bijection between [0, k^m) and colorings: vertex id v is digit
/// v (least significant first), digit value = color − 1.
class StateIndex {
 public:
  StateIndex(const UnionLineGraph& g, int k, std::uint64_t cap) : g_(&g), k_(k) {
    if (k < 1) throw InvalidInput("state index needs k >= 1");
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < g.m(); ++i) {
      if (total > cap / static_cast<std::uint64_t>(k))
        throw CapExceeded("state space k^m exceeds cap " + std::to_string(cap));
      total *= static_cast<std::uint64_t>(k);
    }
    size_ = total;
    proper_.resize(size_);
    for (std::uint64_t s = 0; s < size_; ++s) proper_[s] = is_proper(decode(s), g);
  }

  std::uint64_t size() const { return size_; }
  int k() const { return k_; }
  const UnionLineGraph& graph() const { return *g_; }

  Coloring decode(std::uint64_t s) const {
    std::vector<Color> colors(g_->m());
    for (auto& c : colors) {
      c = static_cast<Color>(s % static_cast<std::uint64_t>(k_)) + 1;
      s /= static_cast<std::uint64_t>(k_);
    }
    return Coloring(std::move(colors), k_);
  }

  std::uint64_t encode(const Coloring& sigma) const {
    std::uint64_t s = 0;
    for (std::size_t v = sigma.size(); v-- > 0;) s = s * static_cast<std::uint64_t>(k_) + static_cast<std::uint64_t>(sigma[v] - 1);
    return s;
  }

  bool proper(std::uint64_t s) const { return proper_[s]; }

  std::uint64_t proper_count() const { return static_cast<std::uint64_t>(std::count(proper_.begin(), proper_.end(), true)); }

 private:
  const UnionLineGraph* g_;
  int k_;
  std::uint64_t size_ = 0;
  std::vector<bool> proper_;
};

// ---------------------------------------------------------------------------
// Counting

/// Backtracking in vertex-id order, pruning on conflicts with earlier vertices.
/// `visit` is called with each complete proper coloring; returns the count.
template <class Visit>
std::uint64_t for_each_proper(const UnionLineGraph& g, int k, std::uint64_t cap, Visit&& visit) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < g.m(); ++i) {
    if (total > cap / static_cast<std::uint64_t>(std::max(k, 1))) throw CapExceeded("k^m exceeds cap " + std::to_string(cap));
    total *= static_cast<std::uint64_t>(std::max(k, 1));
  }
  const std::size_t m = g.m();
  std::vector<Color> colors(m, 0);
  std::uint64_t count = 0;
  if (m == 0) {
    visit(Coloring({}, std::max(k, 1)));
    return 1;
  }
  if (k < 1) return 0;
  std::size_t v = 0;
  while (true) {
    // Advance colors[v] to the next color consistent with lower ids.
    Color c = colors[v] + 1;
    for (; c <= k; ++c) {
      bool ok = true;
      for (const Neighbor& nb : g.neighbors(v))
        if (nb.id < v && colors[nb.id] == c) {
          ok = false;
          break;
        }
      if (ok) break;
    }
    if (c > k) {
      colors[v] = 0;
      if (v == 0) break;
      --v;
      continue;
    }
    colors[v] = c;
    if (v + 1 == m) {
      ++count;
      visit(Coloring(colors, k));
    } else {
      ++v;
    }
  }
  return count;
}

inline std::uint64_t count_proper(const UnionLineGraph& g, int k, std::uint64_t cap = 10'000'000) {
  return for_each_proper(g, k, cap, [](const Coloring&) {});
}

inline std::vector<Coloring> enumerate_proper(const UnionLineGraph& g, int k, std::uint64_t cap = 10'000'000) {
  std::vector<Coloring> out;
  for_each_proper(g, k, cap, [&](const Coloring& c) { out.push_back(c); });
  return out;
}

/// Smallest k ≤ kmax admitting a simultaneous k-edge-coloring, by depth-first
/// search for a single witness per k.
inline int simultaneous_chromatic_index(const GraphPair& gp, int kmax, std::uint64_t cap = 10'000'000) {
  UnionLineGraph g = build_union_line_graph(gp);
  if (g.m() == 0) return 0;
  for (int k = 1; k <= kmax; ++k) {
    struct Found {};
    try {
      for_each_proper(g, k, cap, [](const Coloring&) { throw Found{}; });
    } catch (const Found&) {
      return k;
    }
  }
  throw CapExceeded("no coloring with at most " + std::to_string(kmax) + " colors");
}

// ---------------------------------------------------------------------------
// Transition matrices

struct ChainSpec {
  enum class Kind { kGlauber, kFlip, kListFlip } kind = Kind::kGlauber;
  std::optional<FlipParams> fp;
  std::optional<ListAssignment> lists;

  static ChainSpec glauber() { return {}; }
  static ChainSpec flip(FlipParams p) { return {Kind::kFlip, std::move(p), std::nullopt}; }
  static ChainSpec list_flip(FlipParams p, ListAssignment l) { return {Kind::kListFlip, std::move(p), std::move(l)}; }
};

/// Row-stochastic kernel over a StateIndex, stored as sorted sparse rows.
/// Scalar is Rational (exact) or double.
template <class Scalar>
class TransitionMatrix {
 public:
  using Row = std::vector<std::pair<std::uint64_t, Scalar>>;

  explicit TransitionMatrix(std::uint64_t n) : rows_(n) {}

  std::uint64_t size() const { return rows_.size(); }
  const Row& row(std::uint64_t s) const { return rows_[s]; }
  Row& row(std::uint64_t s) { return rows_[s]; }

  Scalar at(std::uint64_t from, std::uint64_t to) const {
    const Row& r = rows_[from];
    auto it = std::lower_bound(r.begin(), r.end(), to, [](const auto& e, std::uint64_t key) { return e.first < key; });
    return (it != r.end() && it->first == to) ? it->second : Scalar(0);
  }

  /// One step of a distribution: returns dist · P.
  std::vector<double> step(const std::vector<double>& dist) const {
    std::vector<double> out(dist.size(), 0.0);
    for (std::uint64_t s = 0; s < rows_.size(); ++s) {
      if (dist[s] == 0.0) continue;
      for (const auto& [t, p] : rows_[s]) out[t] += dist[s] * as_double(p);
    }
    return out;
  }

  static double as_double(const Scalar& p) {
    if constexpr (std::is_same_v<Scalar, double>)
      return p;
    else
      return to_double(p);
  }

  friend bool operator==(const TransitionMatrix&, const TransitionMatrix&) = default;

 private:
  std::vector<Row> rows_;
};

inline constexpr std::uint64_t kDenseStateCap = 20'000;
inline constexpr std::uint64_t kRationalStateCap = 3'000;

/// Exact one-step kernel: every state, every proposal (v, c) or (v, i), each
/// with probability 1/(mk), plus the acceptance probability of the chain.
/// For list-flip, states outside the list assignment get a self-loop row.
template <class Scalar>
TransitionMatrix<Scalar> build_transition_matrix(const StateIndex& index, const ChainSpec& chain) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    if (index.size() > kRationalStateCap) throw CapExceeded("rational kernels are limited to 3000 states");
  }
  if (index.size() > kDenseStateCap) throw CapExceeded("transition matrices are limited to 20000 states");
  const UnionLineGraph& g = index.graph();
  const int k = chain.kind == ChainSpec::Kind::kListFlip ? chain.lists->k : index.k();
  const std::size_t m = g.m();
  TransitionMatrix<Scalar> P(index.size());
  if (m == 0) {
    for (std::uint64_t s = 0; s < index.size(); ++s) P.row(s).push_back({s, Scalar(1)});
    return P;
  }
  auto scalar = [](const Rational& r) {
    if constexpr (std::is_same_v<Scalar, double>)
      return to_double(r);
    else
      return r;
  };
  const Rational proposal = make_rational(1, static_cast<long>(m) * k);

  for (std::uint64_t s = 0; s < index.size(); ++s) {
    const Coloring sigma = index.decode(s);
    std::map<std::uint64_t, Rational> out;
    Rational moved = 0;
    if (chain.kind == ChainSpec::Kind::kListFlip && !chain.lists->admits(sigma)) {
      P.row(s).push_back({s, Scalar(1)});
      continue;
    }
    for (std::size_t v = 0; v < m; ++v) {
      for (int draw = 1; draw <= k; ++draw) {
        Color c = draw;
        if (chain.kind == ChainSpec::Kind::kListFlip) {
          const auto& list = chain.lists->lists[v];
          if (static_cast<std::size_t>(draw) > list.size()) continue;
          c = list[static_cast<std::size_t>(draw - 1)];
        }
        Coloring next = sigma;
        Rational prob = 0;
        if (chain.kind == ChainSpec::Kind::kGlauber) {
          bool blocked = false;
          for (const Neighbor& nb : g.neighbors(v)) blocked = blocked || sigma[nb.id] == c;
          if (blocked || c == sigma[v]) continue;
          next[v] = c;
          prob = proposal;
        } else {
          if (c == sigma[v]) continue;
          Cluster cl = compute_cluster(sigma, g, v, c, chain.fp->locality());
          if (cl.truncated) continue;
          if (chain.kind == ChainSpec::Kind::kListFlip && !chain.lists->flippable(cl.members, sigma[v], c)) continue;
          prob = proposal * (*chain.fp)(cl.size()) / static_cast<long>(cl.size());
          if (prob == 0) continue;
          apply_flip(next, cl.members, sigma[v], c);
        }
        out[index.encode(next)] += prob;
        moved += prob;
      }
    }
    out[s] += 1 - moved;
    auto& row = P.row(s);
    for (auto& [t, p] : out)
      if (p != 0) row.push_back({t, scalar(p)});
  }
  return P;
}

// ---------------------------------------------------------------------------
// Stationarity and mixing

struct StationaryReport {
  bool uniform_ok = false;          // uniform on Ω is stationary (exact / within tol)
  bool irreducible = false;         // restricted to Ω
  bool closed = false;              // no mass leaves Ω
  double max_deviation = 0;         // max |(uP)(y) − u(y)| over all states
  std::uint64_t proper_count = 0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> unreachable;  // (from, to) witness
};

/// Checks that u = uniform on Ω satisfies uP = u on all of [k]^m, and that the
/// chain restricted to Ω is strongly connected. `in_omega` overrides the
/// proper set (used for list colorings). Exact for Rational, tolerance for double.
template <class Scalar>
StationaryReport stationary_check(const TransitionMatrix<Scalar>& P, const std::vector<bool>& in_omega,
                                  double tol = 1e-10) {
  StationaryReport rep;
  const std::uint64_t n = P.size();
  for (bool b : in_omega) rep.proper_count += b ? 1 : 0;
  if (rep.proper_count == 0) return rep;

  std::vector<Scalar> flow(n, Scalar(0));
  for (std::uint64_t s = 0; s < n; ++s)
    if (in_omega[s])
      for (const auto& [t, p] : P.row(s)) flow[t] += p;
  // uP(y) = flow(y)/|Ω|; compare against 1/|Ω| on Ω and 0 off it.
  bool exact_ok = true;
  rep.closed = true;
  for (std::uint64_t t = 0; t < n; ++t) {
    Scalar want = in_omega[t] ? Scalar(1) : Scalar(0);
    double dev = std::abs(TransitionMatrix<Scalar>::as_double(flow[t]) - TransitionMatrix<Scalar>::as_double(want)) /
                 static_cast<double>(rep.proper_count);
    rep.max_deviation = std::max(rep.max_deviation, dev);
    if constexpr (std::is_same_v<Scalar, Rational>) exact_ok = exact_ok && flow[t] == want;
    if (!in_omega[t] && flow[t] != Scalar(0)) rep.closed = false;
  }
  if constexpr (std::is_same_v<Scalar, Rational>)
    rep.uniform_ok = exact_ok;
  else
    rep.uniform_ok = rep.max_deviation <= tol;

  // Strong connectivity of Ω: forward and backward reachability from one state.
  std::uint64_t root = 0;
  while (!in_omega[root]) ++root;
  std::vector<std::vector<std::uint64_t>> reverse(n);
  for (std::uint64_t s = 0; s < n; ++s)
    if (in_omega[s])
      for (const auto& [t, p] : P.row(s))
        if (in_omega[t] && p != Scalar(0)) reverse[t].push_back(s);
  auto reach = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<std::uint64_t> stack{root};
    seen[root] = 1;
    while (!stack.empty()) {
      std::uint64_t s = stack.back();
      stack.pop_back();
      auto visit = [&](std::uint64_t t) {
        if (in_omega[t] && !seen[t]) {
          seen[t] = 1;
          stack.push_back(t);
        }
      };
      if (forward) {
        for (const auto& [t, p] : P.row(s))
          if (p != Scalar(0)) visit(t);
      } else {
        for (std::uint64_t t : reverse[s]) visit(t);
      }
    }
    return seen;
  };
  auto fwd = reach(true);
  auto bwd = reach(false);
  rep.irreducible = true;
  for (std::uint64_t s = 0; s < n && rep.irreducible; ++s) {
    if (!in_omega[s]) continue;
    if (!fwd[s]) {
      rep.irreducible = false;
      rep.unreachable = std::make_pair(root, s);
    } else if (!bwd[s]) {
      rep.irreducible = false;
      rep.unreachable = std::make_pair(s, root);
    }
  }
  return rep;
}

inline std::vector<bool> proper_mask(const StateIndex& index) {
  std::vector<bool> mask(index.size());
  for (std::uint64_t s = 0; s < index.size(); ++s) mask[s] = index.proper(s);
  return mask;
}

struct MixingReport {
  std::uint64_t tmix = 0;
  std::vector<std::pair<std::uint64_t, double>> tv_curve;  // worst start over Ω, t = 0..tmix
};

/// Least t with max_{x∈Ω} d_TV(P^t(x,·), uniform on Ω) ≤ eps, by iterating
/// every start distribution in double precision. The caller is responsible
/// for irreducibility; max_steps bounds the search.
template <class Scalar>
MixingReport tv_mixing_time(const TransitionMatrix<Scalar>& P, const std::vector<bool>& in_omega, double eps,
                            std::uint64_t max_steps = 1'000'000) {
  if (!(eps > 0 && eps < 1)) throw InvalidInput("tv_mixing_time: eps must lie in (0,1)");
  const std::uint64_t n = P.size();
  std::uint64_t omega = 0;
  for (bool b : in_omega) omega += b ? 1 : 0;
  if (omega == 0) throw InvalidInput("tv_mixing_time: no proper states");
  const double pi = 1.0 / static_cast<double>(omega);

  std::vector<std::vector<double>> dists;
  for (std::uint64_t s = 0; s < n; ++s)
    if (in_omega[s]) {
      dists.emplace_back(n, 0.0);
      dists.back()[s] = 1.0;
    }
  auto tv = [&](const std::vector<double>& d) {
    double total = 0;
    for (std::uint64_t s = 0; s < n; ++s) total += std::abs(d[s] - (in_omega[s] ? pi : 0.0));
    return total / 2;
  };

  MixingReport rep;
  for (std::uint64_t t = 0;; ++t) {
    double worst = 0;
    for (const auto& d : dists) worst = std::max(worst, tv(d));
    rep.tv_curve.push_back({t, worst});
    if (worst <= eps) {
      rep.tmix = t;
      return rep;
    }
    if (t == max_steps) throw CapExceeded("tv_mixing_time: no mixing within " + std::to_string(max_steps) + " steps");
    for (auto& d : dists) d = P.step(d);
  }
}

}  // namespace simcol
