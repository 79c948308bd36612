#include <gtest/gtest.h>

#include <algorithm>

#include "simcol/certify.hpp"

using namespace simcol;

namespace {

Rational R(std::int64_t n, std::int64_t d = 1) { return make_rational(n, d); }

bool contains(const std::vector<ConfigCase>& cs, const ConfigCase& c) { return std::find(cs.begin(), cs.end(), c) != cs.end(); }

ConfigCase make_case(int wstar, std::vector<int> w, std::vector<int> a, std::vector<int> b) {
  ConfigCase c;
  c.wstar = wstar;
  c.w = std::move(w);
  c.a = std::move(a);
  c.b = std::move(b);
  return c;
}

}  // namespace

TEST(FlipProperties, DefaultParametersHold) {
  PropertyReport r = verify_flip_properties(FlipParams::standard());
  EXPECT_TRUE(r.all());
  EXPECT_TRUE(r.failures.empty());
}

TEST(FlipProperties, ConstructedViolation) {
  FlipParams fp({R(1), R(1, 2), R(1, 2)});
  PropertyReport r = verify_flip_properties(fp);
  EXPECT_FALSE(r.holds[3]);
  std::vector<int> witnesses;
  for (const PropertyWitness& w : r.failures)
    if (w.property == 4) witnesses.push_back(w.i);
  EXPECT_EQ(witnesses, std::vector<int>{2});
}

TEST(FlipProperties, PropertyOneIsTightAtTwo) {
  // (2−1)(P2 − P3) = P2 − P3 for any parameters, so i=2 never fails.
  for (const FlipParams& fp : {FlipParams::standard(), FlipParams::glauber(), FlipParams({R(1), R(1, 2), R(1, 2)}),
                               FlipParams({R(1), R(1, 3)})}) {
    for (const PropertyWitness& w : verify_flip_properties(fp).failures) EXPECT_FALSE(w.property == 1 && w.i == 2);
  }
}

TEST(FlipProperties, GlauberParametersHold) { EXPECT_TRUE(verify_flip_properties(FlipParams::glauber()).all()); }

TEST(ExpectedGamma, SingleNeighborClosedForm) {
  // d_c = 1: k E[α_c] = max(qa, qb) W(w) + 2 qa (a−1) + 2 qb (b−1), q_s = P_s − P_{s+1}.
  const FlipParams fp = FlipParams::standard();
  for (int wstar = 1; wstar <= 2; ++wstar)
    for (int w = 1; w <= 2; ++w)
      for (int a = 1; a <= 8; ++a)
        for (int b = 1; b <= 8; ++b) {
          auto P = [&](int i) { return fp(static_cast<std::size_t>(i)); };
          Rational qa = P(a) - P(a + 1), qb = P(b) - P(b + 1);
          Rational alpha = std::max(qa, qb) * w + 2 * qa * (a - 1) + 2 * qb * (b - 1);
          ConfigCase c = make_case(wstar, {w}, {a}, {b});
          ASSERT_EQ(expected_gamma(c, fp), alpha / w) << to_string(c);
        }
}

TEST(ExpectedGamma, UnitExample) {
  const FlipParams fp = FlipParams::standard();
  for (int w = 1; w <= 2; ++w) {
    ConfigCase c = make_case(1, {w}, {1}, {1});
    EXPECT_EQ(expected_gamma(c, fp), fp(1) - fp(2));
    EXPECT_EQ(expected_gamma(c, fp), R(513, 650));
  }
}

TEST(ExpectedGamma, BothEvaluationsAgree) {
  for (const FlipParams& fp : {FlipParams::standard(), FlipParams::glauber(),
                               FlipParams({R(1), R(1, 4), R(1, 8), R(1, 16)})}) {
    for (int wstar = 1; wstar <= 2; ++wstar)
      for (int w0 = 1; w0 <= 2; ++w0)
        for (int w1 = 1; w1 <= 2; ++w1)
          for (int a0 = 1; a0 <= 5; ++a0)
            for (int b1 = 1; b1 <= 5; ++b1) {
              ConfigCase c = make_case(wstar, {w0, w1}, {a0, 6 - a0}, {b1 % 3 + 1, b1});
              ASSERT_EQ(k_alpha_from_table(c, fp), k_alpha_closed_form(c, fp)) << to_string(c);
            }
  }
}

TEST(ExpectedGamma, RejectsMalformedCases) {
  EXPECT_THROW(expected_gamma(make_case(1, {}, {}, {}), FlipParams::standard()), InvalidInput);
  EXPECT_THROW(expected_gamma(make_case(1, {1}, {1, 2}, {1}), FlipParams::standard()), InvalidInput);
}

TEST(LemmaMaxima, SingleNeighbor) {
  const FlipParams fp = FlipParams::standard();
  LemmaMaxima lm = lemma_maxima(fp);
  EXPECT_EQ(lm.dc1.value, R(633, 650));
  EXPECT_EQ(lm.dc1.value, fp(1) + fp(2) - 2 * fp(3));
  bool found = false;
  for (const ConfigCase& c : lm.dc1.argmax) found = found || (c.a == std::vector<int>{3} && c.b == std::vector<int>{1});
  EXPECT_TRUE(found);
  // Independent maximum over the single-neighbor closed form.
  Rational best = 0;
  for (int w = 1; w <= 2; ++w)
    for (int a = 1; a <= 8; ++a)
      for (int b = 1; b <= 8; ++b) {
        Rational qa = fp(a) - fp(a + 1), qb = fp(b) - fp(b + 1);
        Rational alpha = std::max(qa, qb) * w + 2 * qa * (a - 1) + 2 * qb * (b - 1);
        best = std::max(best, Rational(alpha / w));
      }
  EXPECT_EQ(lm.dc1.value, best);
}

TEST(LemmaMaxima, WeightOneTwoNeighbors) {
  const FlipParams fp = FlipParams::standard();
  LemmaMaxima lm = lemma_maxima(fp);
  EXPECT_EQ(lm.w1dc2.value, R(1283, 1300));
  EXPECT_EQ(lm.w1dc2.value, R(3, 4) + 2 * fp(3));
  bool found = false;
  for (const ConfigCase& c : lm.w1dc2.argmax) {
    bool shape = (c.a == std::vector<int>{3, 3} && c.b == std::vector<int>{1, 1}) ||
                 (c.a == std::vector<int>{1, 1} && c.b == std::vector<int>{3, 3});
    found = found || shape;
  }
  EXPECT_TRUE(found);
}

TEST(LemmaMaxima, WeightTwoTwoNeighborsWithinBound) {
  const FlipParams fp = FlipParams::standard();
  LemmaMaxima lm = lemma_maxima(fp);
  EXPECT_LE(lm.w2dc2.value, 8 * fp(3));
  // The exhaustive maximum sits strictly below 8 P3.
  EXPECT_EQ(lm.w2dc2.value, R(479, 650));
  EXPECT_TRUE(contains(lm.w2dc2.argmax, make_case(2, {2, 2}, {1, 1}, {3, 3})));
}

TEST(LemmaMaxima, SizeCapIsSaturated) {
  // Cluster sizes beyond the locality carry zero mass, so raising the cap changes nothing.
  const FlipParams fp = FlipParams::standard();
  LemmaMaxima a = lemma_maxima(fp, 8);
  LemmaMaxima b = lemma_maxima(fp, 10);
  EXPECT_EQ(a.dc1.value, b.dc1.value);
  EXPECT_EQ(a.w1dc2.value, b.w1dc2.value);
  EXPECT_EQ(a.w2dc2.value, b.w2dc2.value);
}

TEST(Threshold, DefaultIdentities) {
  const FlipParams fp = FlipParams::standard();
  Threshold t = threshold(fp);
  EXPECT_EQ(t.value, R(1933, 325));
  EXPECT_EQ(4 + 2 * (fp(1) + fp(2) - 2 * fp(3)), R(1933, 325));
  EXPECT_EQ(2 + 4 * (R(3, 4) + 2 * fp(3)), R(1933, 325));
  EXPECT_EQ(t.weight1, R(1933, 325));
  EXPECT_EQ(t.weight2, R(1933, 325));
  EXPECT_LT(t.value, R(5948, 1000));
  EXPECT_EQ(to_string(t.value), "1933/325");
}

TEST(Threshold, GlauberIsSix) {
  Threshold t = threshold(FlipParams::glauber());
  EXPECT_EQ(t.value, 6);
  LemmaMaxima lm = lemma_maxima(FlipParams::glauber());
  EXPECT_EQ(lm.dc1.value, 1);
}

TEST(Threshold, BranchesFollowMaxima) {
  LemmaMaxima lm;
  lm.dc1.value = R(1, 2);
  lm.w1dc2.value = R(3, 4);
  lm.w2dc2.value = R(1, 4);
  Threshold t = threshold(lm);
  EXPECT_EQ(t.weight1, 5);
  EXPECT_EQ(t.weight2, 5);
  lm.w2dc2.value = 1;
  EXPECT_EQ(threshold(lm).value, 6);
}
