#pragma once

// Exact checks of the closed-form claims behind the flip-dynamics threshold:
// structural properties of the flip parameters, per-color worst cases of the
// coupling over abstract cluster-size configurations, and the k/Δ threshold.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "simcol/color_scheme.hpp"
#include "simcol/dynamics.hpp"
#include "simcol/rational.hpp"

namespace simcol {

// ---------------------------------------------------------------------------
// Flip-parameter properties

struct PropertyWitness {
  int property = 0;  // 1..4
  int i = 0;
  int weight = 0;    // property 2 only
  int ell = 0;       // property 2 only
};

struct PropertyReport {
  bool holds[4] = {true, true, true, true};
  std::vector<PropertyWitness> failures;

  bool all() const { return holds[0] && holds[1] && holds[2] && holds[3]; }
};

/// (1) (i−1)(P_i − P_{i+1}) ≤ P_2 − P_3,                     2 ≤ i ≤ 6
/// (2) (W + 2ℓ(i−1))(P_i − P_{i+1}) ≤ W(P_1 − P_2),          2 ≤ i ≤ 6, W, ℓ ∈ {1,2}
/// (3) P_i ≥ P_{i+1} + P_{i+2},                              1 ≤ i ≤ locality
/// (4) i P_i ≥ (i+1) P_{i+1},                                1 ≤ i ≤ locality
/// The upper end 6 of (1)-(2) extends to the locality when that is larger.
inline PropertyReport verify_flip_properties(const FlipParams& fp) {
  PropertyReport rep;
  auto fail = [&](PropertyWitness w) {
    rep.holds[w.property - 1] = false;
    rep.failures.push_back(w);
  };
  const int top = std::max<int>(6, static_cast<int>(fp.locality()));
  const int loc = std::max<int>(1, static_cast<int>(fp.locality()));
  auto P = [&](int i) -> const Rational& { return fp(static_cast<std::size_t>(i)); };

  for (int i = 2; i <= top; ++i)
    if ((i - 1) * (P(i) - P(i + 1)) > P(2) - P(3)) fail({1, i});
  for (int i = 2; i <= top; ++i)
    for (int w = 1; w <= 2; ++w)
      for (int ell = 1; ell <= 2; ++ell)
        if ((w + 2 * ell * (i - 1)) * (P(i) - P(i + 1)) > w * (P(1) - P(2))) fail({2, i, w, ell});
  for (int i = 1; i <= loc; ++i)
    if (P(i) < P(i + 1) + P(i + 2)) fail({3, i});
  for (int i = 1; i <= loc; ++i)
    if (i * P(i) < (i + 1) * P(i + 1)) fail({4, i});
  return rep;
}

// ---------------------------------------------------------------------------
// Abstract configurations

/// Cluster sizes around v* for one color c with d_c neighbors w_1..w_d:
/// a_i = |S_Y(w_i, X(v*))|, b_i = |S_X(w_i, Y(v*))|, and the neighbor weights.
/// Members other than the w_i are assumed to weigh 2 (the worst case).
struct ConfigCase {
  int wstar = 1;
  std::vector<int> w;
  std::vector<int> a;
  std::vector<int> b;

  std::size_t dc() const { return w.size(); }
  int big_a() const { return 1 + sum(a); }
  int big_b() const { return 1 + sum(b); }
  int wc() const { return sum(w); }
  int weight_a() const { return weighted(a); }  // Σ W(w_i) + 2(a_i − 1)
  int weight_b() const { return weighted(b); }

  friend bool operator==(const ConfigCase&, const ConfigCase&) = default;

 private:
  static int sum(const std::vector<int>& v) {
    int s = 0;
    for (int x : v) s += x;
    return s;
  }
  int weighted(const std::vector<int>& sizes) const {
    int s = 0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] + 2 * (sizes[i] - 1);
    return s;
  }
};

inline std::string to_string(const ConfigCase& c) {
  auto list = [](const std::vector<int>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
  };
  return "wstar=" + std::to_string(c.wstar) + " W=" + list(c.w) + " a=" + list(c.a) + " b=" + list(c.b);
}

namespace detail {

inline std::size_t config_argmax(const std::vector<int>& sizes, const std::vector<int>& w) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] > sizes[best] || (sizes[i] == sizes[best] && w[i] > w[best])) best = i;
  return best;
}

/// Shift applied to k·E[α_c] for the extra free color that d_c − 1 repeats buy.
inline int repeat_credit(const ConfigCase& c) { return c.dc() >= 2 ? static_cast<int>(c.dc() - 1) * c.wstar : 0; }

}  // namespace detail

/// k·E[α_c] from the coupling moves: run the shared per-color matching on the
/// configuration and evaluate each joint move on an explicit abstract vertex
/// set {v*, w_i, a_i − 1 extras per Y unit, b_i − 1 extras per X unit}.
inline Rational k_alpha_from_table(const ConfigCase& c, const FlipParams& fp) {
  const std::size_t d = c.dc();
  scheme::Input in;
  in.neighbor_count = d;
  in.big_x = fp(static_cast<std::size_t>(c.big_a()));
  in.big_y = fp(static_cast<std::size_t>(c.big_b()));
  for (std::size_t i = 0; i < d; ++i) {
    in.y_units.push_back({fp(static_cast<std::size_t>(c.a[i])), static_cast<std::size_t>(c.a[i]), c.w[i], {i}});
    in.x_units.push_back({fp(static_cast<std::size_t>(c.b[i])), static_cast<std::size_t>(c.b[i]), c.w[i], {i}});
  }
  scheme::Output out = scheme::match_color(in);

  Rational total = 0;
  for (const scheme::Entry& e : out.entries) {
    // Which abstract vertices each side changes.
    bool x_big = e.x && e.x->big, y_big = e.y && e.y->big;
    auto x_unit = [&](std::size_t i) { return e.x && !e.x->big && e.x->index == i; };
    auto y_unit = [&](std::size_t i) { return e.y && !e.y->big && e.y->index == i; };
    int delta = 0;
    // v*: disagrees before; agrees after only if both sides recolor it to c.
    if (x_big && y_big) delta -= c.wstar;
    for (std::size_t i = 0; i < d; ++i) {
      // w_i: X sends it to x* (big X) or y* (X unit); Y sends it to x* (Y unit) or y* (big Y).
      int xt = x_big ? 1 : (x_unit(i) ? 2 : 0);
      int yt = y_unit(i) ? 1 : (y_big ? 2 : 0);
      if (xt != yt) delta += c.w[i];
      // Extras of the Y unit: swapped by big X in X and by the unit in Y.
      if (x_big != y_unit(i)) delta += 2 * (c.a[i] - 1);
      // Extras of the X unit: swapped by big Y in Y and by the unit in X.
      if (y_big != x_unit(i)) delta += 2 * (c.b[i] - 1);
    }
    total += e.mass * delta;
  }
  return total - detail::repeat_credit(c);
}

/// k·E[α_c] from the closed forms
///   P_A (W(A) − W(w_{m_a}) − 2(a_{m_a} − 1)) + P_B (W(B) − W(w_{m_b}) − 2(b_{m_b} − 1))
///   + Σ_ℓ f(w_ℓ) − [d_c ≥ 2](d_c − 1) W(v*),
/// f(w_ℓ) = max(q_ℓ, q'_ℓ) W(w_ℓ) + 2 q_ℓ (a_ℓ − 1) + 2 q'_ℓ (b_ℓ − 1).
inline Rational k_alpha_closed_form(const ConfigCase& c, const FlipParams& fp) {
  auto P = [&](int i) -> const Rational& { return fp(static_cast<std::size_t>(i)); };
  const std::size_t ma = detail::config_argmax(c.a, c.w);
  const std::size_t mb = detail::config_argmax(c.b, c.w);
  const Rational pa = P(c.big_a()), pb = P(c.big_b());
  Rational total = pa * (c.weight_a() - c.w[ma] - 2 * (c.a[ma] - 1)) + pb * (c.weight_b() - c.w[mb] - 2 * (c.b[mb] - 1));
  for (std::size_t l = 0; l < c.dc(); ++l) {
    Rational q = P(c.a[l]) - (l == ma ? pa : Rational(0));
    Rational qq = P(c.b[l]) - (l == mb ? pb : Rational(0));
    if (q < 0) q = 0;
    if (qq < 0) qq = 0;
    total += std::max(q, qq) * c.w[l] + 2 * q * (c.a[l] - 1) + 2 * qq * (c.b[l] - 1);
  }
  return total - detail::repeat_credit(c);
}

/// k·E[γ_c] = k·E[α_c] / W_c, evaluated both ways; disagreement is a logic error.
inline Rational expected_gamma(const ConfigCase& c, const FlipParams& fp) {
  if (c.dc() == 0 || c.a.size() != c.dc() || c.b.size() != c.dc())
    throw InvalidInput("expected_gamma: configuration needs d_c >= 1 and matching size vectors");
  Rational via_table = k_alpha_from_table(c, fp);
  Rational closed = k_alpha_closed_form(c, fp);
  if (via_table != closed)
    throw std::logic_error("expected_gamma: table " + to_string(via_table) + " != closed form " + to_string(closed) +
                           " at " + to_string(c));
  return via_table / c.wc();
}

struct ClassMax {
  Rational value;
  std::vector<ConfigCase> argmax;
  std::size_t cases = 0;
};

struct LemmaMaxima {
  ClassMax dc1;     // d_c = 1, either W(v*)
  ClassMax w2dc2;   // W(v*) = 2, d_c = 2
  ClassMax w1dc2;   // W(v*) = 1, d_c = 2
};

/// Exhaustive maximum of k·E[γ_c] over configurations with d_c neighbors,
/// W(v*) = wstar, weights in {1,2} and sizes in [1..size_cap].
inline ClassMax enumerate_class(const FlipParams& fp, int wstar, std::size_t dc, int size_cap) {
  ClassMax best;
  ConfigCase c;
  c.wstar = wstar;
  c.w.assign(dc, 1);
  c.a.assign(dc, 1);
  c.b.assign(dc, 1);
  // Odometer over (w, a, b).
  auto bump = [&](std::vector<int>& v, int hi) {
    for (int& x : v) {
      if (x < hi) {
        ++x;
        return true;
      }
      x = 1;
    }
    return false;
  };
  do {
    do {
      do {
        Rational g = expected_gamma(c, fp);
        ++best.cases;
        if (best.argmax.empty() || g > best.value) {
          best.value = g;
          best.argmax = {c};
        } else if (g == best.value) {
          best.argmax.push_back(c);
        }
      } while (bump(c.b, size_cap));
    } while (bump(c.a, size_cap));
  } while (bump(c.w, 2));
  return best;
}

/// Sizes run over [1..size_cap]; 8 covers every size with nonzero P plus the
/// first zero one for 6-local parameters.
inline LemmaMaxima lemma_maxima(const FlipParams& fp, int size_cap = 8) {
  LemmaMaxima out;
  for (int wstar = 1; wstar <= 2; ++wstar) {
    ClassMax one = enumerate_class(fp, wstar, 1, size_cap);
    if (out.dc1.argmax.empty() || one.value > out.dc1.value) {
      out.dc1.value = one.value;
      out.dc1.argmax.clear();
    }
    if (one.value == out.dc1.value) out.dc1.argmax.insert(out.dc1.argmax.end(), one.argmax.begin(), one.argmax.end());
    out.dc1.cases += one.cases;
  }
  out.w2dc2 = enumerate_class(fp, 2, 2, size_cap);
  out.w1dc2 = enumerate_class(fp, 1, 2, size_cap);
  return out;
}

struct Threshold {
  Rational weight1;  // 2 + 4 max(w1dc2, dc1)
  Rational weight2;  // 4 + 2 max(w2dc2, dc1)
  Rational value;    // max of the two branches
};

inline Threshold threshold(const LemmaMaxima& lm) {
  Threshold t;
  t.weight1 = 2 + 4 * std::max(lm.w1dc2.value, lm.dc1.value);
  t.weight2 = 4 + 2 * std::max(lm.w2dc2.value, lm.dc1.value);
  t.value = std::max(t.weight1, t.weight2);
  return t;
}

inline Threshold threshold(const FlipParams& fp) { return threshold(lemma_maxima(fp)); }

}  // namespace simcol
