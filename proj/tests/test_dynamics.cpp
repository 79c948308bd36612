#include <gtest/gtest.h>

#include <deque>

#include "support.hpp"

using namespace simcol;
using namespace testing_support;

namespace {

Coloring col(std::vector<Color> c, int k) { return Coloring(std::move(c), k); }

}  // namespace

TEST(Coloring, RejectsOutOfRange) {
  EXPECT_THROW(col({0, 1}, 3), InvalidInput);
  EXPECT_THROW(col({4}, 3), InvalidInput);
  EXPECT_THROW(col({1}, 0), InvalidInput);
  EXPECT_NO_THROW(col({1, 1}, 1));
}

TEST(FlipParams, StandardValues) {
  FlipParams fp = FlipParams::standard();
  EXPECT_EQ(fp.locality(), 6u);
  EXPECT_EQ(fp(1), 1);
  EXPECT_EQ(fp(2), make_rational(137, 650));
  EXPECT_EQ(fp(3), make_rational(77, 650));
  EXPECT_EQ(fp(4), make_rational(47, 650));
  EXPECT_EQ(fp(5), make_rational(27, 650));
  EXPECT_EQ(fp(6), make_rational(12, 650));
  EXPECT_EQ(fp(7), 0);
  EXPECT_EQ(fp(0), 0);
}

TEST(FlipParams, Validation) {
  EXPECT_THROW(FlipParams({make_rational(1, 2)}), InvalidInput);
  EXPECT_THROW(FlipParams({make_rational(1), make_rational(3, 2)}), InvalidInput);
  EXPECT_THROW(FlipParams({make_rational(1), make_rational(-1, 2)}), InvalidInput);
  EXPECT_THROW(FlipParams({}), InvalidInput);
  FlipParams trimmed({make_rational(1), make_rational(1, 3), 0, 0});
  EXPECT_EQ(trimmed.locality(), 2u);
  EXPECT_EQ(FlipParams::glauber().locality(), 1u);
}

TEST(FlipParams, ParseFile) {
  FlipParams fp = parse_flip_params("# standard\n1/1\n137/650\n77/650\n\n47/650\n27/650\n12/650\n");
  EXPECT_EQ(fp, FlipParams::standard());
  EXPECT_EQ(parse_flip_params("1\n0\n"), FlipParams::glauber());
  try {
    parse_flip_params("1/1\nabc\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_flip_params("1/2\n"), ParseError);
  EXPECT_THROW(parse_flip_params("1/0\n"), ParseError);
}

TEST(Cluster, FullAlternatingPath) {
  UnionLineGraph g = build_union_line_graph(path3());
  Cluster cl = compute_cluster(col({1, 2, 1}, 3), g, 0, 2);
  EXPECT_EQ(cl.members, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_FALSE(cl.truncated);
}

TEST(Cluster, AbsentColorGivesSingleton) {
  UnionLineGraph g = build_union_line_graph(path3());
  EXPECT_EQ(compute_cluster(col({1, 2, 1}, 3), g, 0, 3).members, (std::vector<std::size_t>{0}));
}

TEST(Cluster, SameColorGivesSingleton) {
  UnionLineGraph g = build_union_line_graph(path3());
  EXPECT_EQ(compute_cluster(col({1, 2, 1}, 3), g, 1, 2).members, (std::vector<std::size_t>{1}));
}

TEST(Cluster, ImproperStrictAlternation) {
  UnionLineGraph g = build_union_line_graph(path3());
  EXPECT_EQ(compute_cluster(col({1, 1, 2}, 3), g, 0, 2).members, (std::vector<std::size_t>{0}));
}

TEST(Cluster, TruncatesBeyondLimit) {
  UnionLineGraph g = build_union_line_graph(path3());
  Cluster cl = compute_cluster(col({1, 2, 1}, 3), g, 0, 2, 2);
  EXPECT_TRUE(cl.truncated);
  EXPECT_EQ(cl.size(), 3u);
  EXPECT_FALSE(compute_cluster(col({1, 2, 1}, 3), g, 0, 2, 3).truncated);
}

// Every member seeds the same cluster; on proper colorings flipping twice is
// the identity (an improper start can pull a same-colored neighbor in).
TEST(ClusterProperty, SymmetryAndInvolution) {
  Rng rng(11);
  int involutions = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    GraphPair gp = random_graph_pair(6, 2 + static_cast<int>(seed % 2), 0.5, seed);
    UnionLineGraph g = build_union_line_graph(gp);
    if (g.m() == 0 || g.m() > 8) continue;
    for (const Coloring& sigma : {random_coloring(g.m(), 3, rng), random_proper(g, 9, rng, 200)}) {
      const int k = sigma.k;
      for (std::size_t v = 0; v < g.m(); ++v)
        for (Color c = 1; c <= k; ++c) {
          Cluster s = compute_cluster(sigma, g, v, c);
          ASSERT_TRUE(std::binary_search(s.members.begin(), s.members.end(), v));
          for (std::size_t w : s.members) {
            ASSERT_TRUE(sigma[w] == sigma[v] || sigma[w] == c);
            if (c == sigma[v]) continue;
            Color other = sigma[w] == sigma[v] ? c : sigma[v];
            ASSERT_EQ(compute_cluster(sigma, g, w, other).members, s.members);
          }
          if (!is_proper(sigma, g) || c == sigma[v]) continue;
          Coloring flipped = sigma;
          apply_flip(flipped, s.members, sigma[v], c);
          Cluster back = compute_cluster(flipped, g, v, sigma[v]);
          ASSERT_EQ(back.members, s.members);
          apply_flip(flipped, back.members, flipped[v], sigma[v]);
          ASSERT_EQ(flipped, sigma);
          ++involutions;
        }
    }
  }
  EXPECT_GT(involutions, 100);
}

TEST(Glauber, IsolatedVertexAlwaysRecolors) {
  UnionLineGraph g = build_union_line_graph(GraphPair(2, {{1, 2}}, {}));
  Coloring s = col({1}, 4);
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    StepOutcome r = glauber_step(s, g, rng);
    EXPECT_EQ(s[0], r.color);
  }
}

TEST(Glauber, BlockedMoveLeavesStateUnchanged) {
  UnionLineGraph g = build_union_line_graph(path3());
  Rng rng(5);
  Coloring s = col({1, 2, 3}, 3);
  for (int i = 0; i < 500; ++i) {
    Coloring before = s;
    StepOutcome r = glauber_step(s, g, rng);
    bool blocked = false;
    for (const Neighbor& nb : g.neighbors(r.vertex)) blocked = blocked || before[nb.id] == r.color;
    if (blocked) EXPECT_EQ(s, before);
    else EXPECT_EQ(s[r.vertex], r.color);
  }
}

// Single Ĝ-edge, start (c, c): enumerate the 2k proposals by hand and compare
// with the kernel; both must give at least (k−1)/(2k).
TEST(Glauber, ImproperEdgeResolvesWithProbability) {
  UnionLineGraph g = build_union_line_graph(GraphPair(3, {{1, 2}, {2, 3}}, {}));
  ASSERT_EQ(g.m(), 2u);
  for (int k = 2; k <= 6; ++k) {
    int good = 0;
    for (int v = 0; v < 2; ++v)
      for (int c = 1; c <= k; ++c) {
        // Neighbor keeps color 1; recoloring to c succeeds iff c != 1.
        std::vector<int> after{1, 1};
        if (c != 1) after[static_cast<std::size_t>(v)] = c;
        good += after[0] != after[1] ? 1 : 0;
      }
    Rational by_hand = make_rational(good, 2 * k);
    StateIndex index(g, k, 100);
    auto P = build_transition_matrix<Rational>(index, ChainSpec::glauber());
    Rational by_kernel = 0;
    for (const auto& [t, p] : P.row(index.encode(col({1, 1}, k))))
      if (index.proper(t)) by_kernel += p;
    EXPECT_EQ(by_kernel, by_hand);
    EXPECT_GE(by_kernel, make_rational(k - 1, 2 * k));
  }
}

TEST(Flip, PathExampleProbability) {
  UnionLineGraph g = build_union_line_graph(path3());
  FlipParams fp = FlipParams::standard();
  Coloring s = col({1, 2, 1}, 3);
  Cluster cl = compute_cluster(s, g, 0, 2);
  ASSERT_EQ(cl.size(), 3u);
  EXPECT_EQ(fp(cl.size()) / 3, make_rational(77, 1950));
  Coloring t = s;
  apply_flip(t, cl.members, 1, 2);
  EXPECT_EQ(t, col({2, 1, 2}, 3));
  // Three seeds reach the same cluster, each with probability (1/(mk))·P_3/3.
  StateIndex index(g, 3, 100);
  auto P = build_transition_matrix<Rational>(index, ChainSpec::flip(fp));
  EXPECT_EQ(P.at(index.encode(s), index.encode(t)), make_rational(77, 650) / 9);
}

TEST(Flip, SameColorIsIdentity) {
  UnionLineGraph g = build_union_line_graph(path3());
  Coloring s = col({1, 2, 1}, 3);
  Cluster cl = compute_cluster(s, g, 1, 2);
  Coloring t = s;
  apply_flip(t, cl.members, 2, 2);
  EXPECT_EQ(t, s);
}

// Non-identity mass out of σ: components from an independent union-find,
// each weighted P_|S|/(mk), against the kernel's off-diagonal mass.
TEST(FlipProperty, NonIdentityMassMatchesComponents) {
  Rng rng(17);
  FlipParams fp = FlipParams::standard();
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 30 && seed < 2000; ++seed) {
    GraphPair gp = random_graph_pair(4 + static_cast<int>(seed % 2), 2, 0.5, seed);
    UnionLineGraph g = build_union_line_graph(gp);
    if (g.m() == 0 || g.m() > 5) continue;
    const int k = 2 + static_cast<int>(seed % 3);
    StateIndex index(g, k, 100000);
    auto P = build_transition_matrix<Rational>(index, ChainSpec::flip(fp));
    for (int rep = 0; rep < 5; ++rep) {
      Coloring s = random_coloring(g.m(), k, rng);
      Rational want = 0;
      for (const auto& [a, b, members] : two_color_components(s, g, k))
        want += fp(members.size()) * make_rational(1, static_cast<long>(g.m()) * k);
      // Move-by-move enumeration as a second view.
      Rational moves = 0;
      for (std::size_t v = 0; v < g.m(); ++v)
        for (Color c = 1; c <= k; ++c) {
          if (c == s[v]) continue;
          Cluster cl = compute_cluster(s, g, v, c);
          moves += fp(cl.size()) / static_cast<long>(cl.size()) * make_rational(1, static_cast<long>(g.m()) * k);
        }
      EXPECT_EQ(moves, want);
      EXPECT_EQ(1 - P.at(index.encode(s), index.encode(s)), want);
    }
    ++checked;
  }
  EXPECT_EQ(checked, 30);
}

TEST(FlipProperty, PreservesProperness) {
  FlipParams fp = FlipParams::standard();
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    GraphPair gp = random_graph_pair(12, 3, 0.5, seed);
    UnionLineGraph g = build_union_line_graph(gp);
    const int k = 4 * gp.delta() - 2;
    Coloring s = *greedy_coloring(g, std::max(k, 2 * gp.delta() + 1));
    Rng rng(seed);
    for (int i = 0; i < 100000; ++i) {
      flip_step(s, g, fp, rng);
      if (i % 1000 == 0) {
        ASSERT_TRUE(is_proper(s, g));
      }
    }
    EXPECT_TRUE(is_proper(s, g));
  }
}

TEST(Flip, GlauberParamsGiveIdenticalTrajectories) {
  GraphPair gp = random_graph_pair(10, 3, 0.5, 4);
  UnionLineGraph g = build_union_line_graph(gp);
  Coloring a = *greedy_coloring(g, 12), b = a;
  Rng ra(9), rb(9);
  FlipParams fp = FlipParams::glauber();
  for (int i = 0; i < 20000; ++i) {
    glauber_step(a, g, ra);
    flip_step(b, g, fp, rb);
    ASSERT_EQ(a, b) << "step " << i;
  }
  EXPECT_EQ(ra.next(), rb.next());
}

TEST(Flip, GlauberParamsGiveIdenticalKernel) {
  GraphPair gp(4, {{1, 2}, {2, 3}, {3, 4}}, {{1, 3}});
  UnionLineGraph g = build_union_line_graph(gp);
  StateIndex index(g, 4, 10000);
  ASSERT_LE(index.size(), 10000u);
  auto glauber = build_transition_matrix<Rational>(index, ChainSpec::glauber());
  auto flip = build_transition_matrix<Rational>(index, ChainSpec::flip(FlipParams::glauber()));
  EXPECT_TRUE(glauber == flip);
}

// From every improper state some move sequence reaches a proper one; BFS on
// the support of the kernel.
TEST(Absorption, EveryImproperStateReachesProper) {
  std::vector<GraphPair> instances = {GraphPair(3, {{1, 2}, {2, 3}}, {}),
                                      GraphPair(4, {{1, 2}, {2, 3}}, {{2, 3}, {3, 4}}),
                                      GraphPair(4, {{1, 2}, {2, 3}, {3, 4}}, {{1, 2}})};
  for (const GraphPair& gp : instances) {
    UnionLineGraph g = build_union_line_graph(gp);
    const int k = std::max(4 * gp.delta() - 2, 2);
    StateIndex index(g, k, 20000);
    for (const ChainSpec& spec : {ChainSpec::glauber(), ChainSpec::flip(FlipParams::standard())}) {
      auto P = build_transition_matrix<double>(index, spec);
      // Backward BFS from Ω.
      std::vector<std::vector<std::uint64_t>> rev(index.size());
      for (std::uint64_t s = 0; s < index.size(); ++s)
        for (const auto& [t, p] : P.row(s))
          if (p > 0) rev[t].push_back(s);
      std::vector<char> reach(index.size(), 0);
      std::deque<std::uint64_t> q;
      for (std::uint64_t s = 0; s < index.size(); ++s)
        if (index.proper(s)) {
          reach[s] = 1;
          q.push_back(s);
        }
      while (!q.empty()) {
        auto s = q.front();
        q.pop_front();
        for (auto r : rev[s])
          if (!reach[r]) {
            reach[r] = 1;
            q.push_back(r);
          }
      }
      for (std::uint64_t s = 0; s < index.size(); ++s) ASSERT_TRUE(reach[s]) << "state " << s;
    }
  }
}

TEST(ListFlip, FullListsMatchFlip) {
  GraphPair gp(4, {{1, 2}, {2, 3}, {3, 4}}, {{2, 3}});
  UnionLineGraph g = build_union_line_graph(gp);
  const int k = 4;
  StateIndex index(g, k, 10000);
  FlipParams fp = FlipParams::standard();
  auto flip = build_transition_matrix<Rational>(index, ChainSpec::flip(fp));
  auto list = build_transition_matrix<Rational>(index, ChainSpec::list_flip(fp, ListAssignment::full(g.m(), k)));
  EXPECT_TRUE(flip == list);

  // Same seed, same trajectory.
  Coloring a = *greedy_coloring(g, k), b = a;
  Rng ra(2), rb(2);
  ListAssignment full = ListAssignment::full(g.m(), k);
  for (int i = 0; i < 5000; ++i) {
    flip_step(a, g, fp, ra);
    list_flip_step(b, g, full, fp, rb);
    ASSERT_EQ(a, b);
  }
}

TEST(ListFlip, UnflippableClusterIsNull) {
  UnionLineGraph g = build_union_line_graph(path3());
  // Vertex 2 lacks color 2, so the (1,2) cluster through it cannot flip.
  ListAssignment lists({{1, 2}, {1, 2}, {1, 3}}, 3);
  Coloring s = col({1, 2, 1}, 3);
  EXPECT_FALSE(lists.flippable(compute_cluster(s, g, 0, 2).members, 1, 2));
  StateIndex index(g, 3, 100);
  auto P = build_transition_matrix<Rational>(index, ChainSpec::list_flip(FlipParams::standard(), lists));
  EXPECT_EQ(P.at(index.encode(s), index.encode(col({2, 1, 2}, 3))), 0);
}

TEST(ListFlip, IndexBeyondListIsNull) {
  UnionLineGraph g = build_union_line_graph(GraphPair(2, {{1, 2}}, {}));
  ListAssignment lists({{1, 2}}, 3);
  StateIndex index(g, 3, 100);
  auto P = build_transition_matrix<Rational>(index, ChainSpec::list_flip(FlipParams::standard(), lists));
  Coloring s = col({1}, 3);
  // i = 1 proposes the current color, i = 2 proposes 2, i = 3 is null.
  EXPECT_EQ(P.at(index.encode(s), index.encode(col({2}, 3))), make_rational(1, 3));
  EXPECT_EQ(P.at(index.encode(s), index.encode(s)), make_rational(2, 3));
  EXPECT_EQ(P.at(index.encode(s), index.encode(col({3}, 3))), 0);

  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    StepOutcome r = list_flip_step(s, g, lists, FlipParams::standard(), rng);
    ASSERT_TRUE(lists.admits(s));
    if (r.color == 0) {
      EXPECT_EQ(r.cluster_size, 0u);
    }
  }
}

TEST(ListFlip, RejectsColoringOutsideLists) {
  UnionLineGraph g = build_union_line_graph(GraphPair(2, {{1, 2}}, {}));
  ListAssignment lists({{1, 2}}, 3);
  Coloring s = col({3}, 3);
  Rng rng(1);
  EXPECT_THROW(list_flip_step(s, g, lists, FlipParams::standard(), rng), InvalidInput);
}

TEST(ListAssignment, Validation) {
  EXPECT_THROW(ListAssignment({{}}, 3), InvalidInput);
  EXPECT_THROW(ListAssignment({{1, 2, 3, 4}}, 3), InvalidInput);
  EXPECT_THROW(ListAssignment({{0, 1}}, 3), InvalidInput);
  ListAssignment l({{5, 2, 2}}, 3);
  EXPECT_EQ(l.lists[0], (std::vector<Color>{2, 5}));
}

TEST(Multiplicity, IsolatedVertexIsEmpty) {
  UnionLineGraph g = build_union_line_graph(GraphPair(3, {{1, 2}}, {}));
  EXPECT_TRUE(measure_color_multiplicity(col({1}, 2), g, 0).empty());
}

TEST(Multiplicity, WeightOneVertexHasAtMostTwo) {
  Rng rng(8);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    GraphPair gp = random_graph_pair(12, 3, 0.5, seed);
    UnionLineGraph g = build_union_line_graph(gp);
    Coloring s = random_proper(g, 4 * gp.delta(), rng, 2000);
    ASSERT_TRUE(is_proper(s, g));
    for (std::size_t v = 0; v < g.m(); ++v) {
      if (g.weight(v) != 1) continue;
      for (const auto& [c, d] : measure_color_multiplicity(s, g, v)) ASSERT_LE(d, 2);
    }
  }
}

// v* = (1,2) in both graphs; (1,3),(2,4) in G1 and (1,5),(2,6) in G2 all
// carry color 1, which is proper and gives d_1 = 4.
TEST(Multiplicity, WeightTwoVertexCanSeeFourRepeats) {
  GraphPair gp(6, {{1, 2}, {1, 3}, {2, 4}}, {{1, 2}, {1, 5}, {2, 6}});
  UnionLineGraph g = build_union_line_graph(gp);
  ASSERT_EQ(g.m(), 5u);
  std::size_t vs = 0;
  ASSERT_EQ(g.edge(vs), Edge(1, 2));
  ASSERT_EQ(g.weight(vs), 2);
  std::vector<int> colors{2, 1, 1, 1, 1};
  Coloring s(colors, 2);
  ASSERT_TRUE(proper_by_pairs(gp, g.edges(), colors));
  EXPECT_TRUE(is_proper(s, g));
  auto d = measure_color_multiplicity(s, g, vs);
  EXPECT_EQ(d.at(1), 4);
}

TEST(Proper, AgreesWithPairOracle) {
  Rng rng(4);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GraphPair gp = random_graph_pair(7, 2, 0.5, seed);
    UnionLineGraph g = build_union_line_graph(gp);
    Coloring s = random_coloring(g.m(), 3, rng);
    EXPECT_EQ(is_proper(s, g), proper_by_pairs(gp, g.edges(), s.assign));
  }
}

TEST(Greedy, ProperWhenEnoughColors) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    GraphPair gp = random_graph_pair(15, 4, 0.5, seed);
    UnionLineGraph g = build_union_line_graph(gp);
    std::size_t maxdeg = 0;
    for (std::size_t v = 0; v < g.m(); ++v) maxdeg = std::max(maxdeg, g.degree(v));
    auto s = greedy_coloring(g, static_cast<int>(maxdeg) + 1);
    ASSERT_TRUE(s.has_value());
    EXPECT_TRUE(is_proper(*s, g));
  }
}

TEST(Rng, BelowIsInRangeAndDeterministic) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    auto x = a.below(7);
    EXPECT_LT(x, 7u);
    EXPECT_EQ(x, b.below(7));
  }
  std::mt19937_64 ref(42);
  Rng c(42);
  EXPECT_EQ(c.next(), ref());
}
