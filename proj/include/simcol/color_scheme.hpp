#pragma once

// Per-color cluster matching used by the flip coupling.
//
// Fix the disagreement vertex v* (colors x* in X, y* in Y) and a color c
// carried by d_c >= 1 neighbors w_1 < ... < w_d of v*. The clusters whose
// shape depends on the color at v* are
//
//   big X   S_X(v*, c)              size A
//   big Y   S_Y(v*, c)              size B
//   Y units S_Y(w_i, x*)            size a_i   (big X minus v*, split per neighbor)
//   X units S_X(w_i, y*)            size b_i   (big Y minus v*, split per neighbor)
//
// Units are the distinct clusters among the per-neighbor ones; on generic
// instances there is one unit per neighbor. The matching:
//   1. big X with the largest Y unit (index m_a), mass P_A;
//      big Y with the largest X unit (index m_b), mass P_B;
//   2. per neighbor in index order, its Y unit with its X unit, mass
//      min(q, q') of the remaining unit masses q = P_{a_i} - [i = m_a] P_A,
//      q' = P_{b_i} - [i = m_b] P_B;
//   3. leftover X units against leftover Y units greedily in neighbor order;
//   4. whatever remains as one-sided flips.
// Ties in the argmax go to the unit whose neighbors weigh more, then to the
// smaller neighbor index.
//
// Masses here are in units of 1/(mk): a cluster of size s with flip
// probability P_s appears with total mass P_s.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "simcol/rational.hpp"

namespace simcol::scheme {

struct Unit {
  Rational prob;                         // P_size, or 0 when not flippable
  std::size_t size = 0;
  int weight = 0;                        // total W over the neighbors it contains
  std::vector<std::size_t> neighbors;    // indices into the color's neighbor list, sorted
};

struct Input {
  Rational big_x;                        // P_A
  Rational big_y;                        // P_B
  std::vector<Unit> y_units;             // ordered by first neighbor
  std::vector<Unit> x_units;             // ordered by first neighbor
  std::size_t neighbor_count = 0;
};

/// A move on one side: the big cluster, or unit `index`.
struct Ref {
  bool big = false;
  std::size_t index = 0;

  friend bool operator==(const Ref&, const Ref&) = default;
};

struct Entry {
  Rational mass;
  std::optional<Ref> x;
  std::optional<Ref> y;
};

struct Output {
  std::vector<Entry> entries;
  std::size_t ma = 0;
  std::size_t mb = 0;
  bool clamped = false;  // some q or q' came out negative and was set to 0
};

inline std::size_t heaviest_largest(const std::vector<Unit>& units) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < units.size(); ++j) {
    const Unit& u = units[j];
    const Unit& b = units[best];
    if (u.size > b.size || (u.size == b.size && u.weight > b.weight)) best = j;
  }
  return best;
}

inline std::size_t unit_of(const std::vector<Unit>& units, std::size_t neighbor) {
  for (std::size_t j = 0; j < units.size(); ++j)
    if (std::binary_search(units[j].neighbors.begin(), units[j].neighbors.end(), neighbor)) return j;
  return units.size();
}

inline Output match_color(const Input& in) {
  Output out;
  if (in.x_units.empty() || in.y_units.empty()) return out;
  out.ma = heaviest_largest(in.y_units);
  out.mb = heaviest_largest(in.x_units);

  auto emit = [&](const Rational& mass, std::optional<Ref> x, std::optional<Ref> y) {
    if (mass > 0) out.entries.push_back({mass, x, y});
  };
  emit(in.big_x, Ref{true, 0}, Ref{false, out.ma});
  emit(in.big_y, Ref{false, out.mb}, Ref{true, 0});

  std::vector<Rational> qy, qx;
  for (std::size_t j = 0; j < in.y_units.size(); ++j) qy.push_back(in.y_units[j].prob - (j == out.ma ? in.big_x : Rational(0)));
  for (std::size_t j = 0; j < in.x_units.size(); ++j) qx.push_back(in.x_units[j].prob - (j == out.mb ? in.big_y : Rational(0)));
  for (auto* q : {&qy, &qx})
    for (Rational& r : *q)
      if (r < 0) {
        r = 0;
        out.clamped = true;
      }

  for (std::size_t i = 0; i < in.neighbor_count; ++i) {
    std::size_t jy = unit_of(in.y_units, i);
    std::size_t jx = unit_of(in.x_units, i);
    if (jy == in.y_units.size() || jx == in.x_units.size()) continue;
    Rational t = std::min(qy[jy], qx[jx]);
    if (t <= 0) continue;
    emit(t, Ref{false, jx}, Ref{false, jy});
    qy[jy] -= t;
    qx[jx] -= t;
  }

  std::size_t jx = 0, jy = 0;
  while (jx < qx.size() && jy < qy.size()) {
    if (qx[jx] <= 0) {
      ++jx;
      continue;
    }
    if (qy[jy] <= 0) {
      ++jy;
      continue;
    }
    Rational t = std::min(qx[jx], qy[jy]);
    emit(t, Ref{false, jx}, Ref{false, jy});
    qx[jx] -= t;
    qy[jy] -= t;
  }
  for (std::size_t j = 0; j < qx.size(); ++j) emit(qx[j], Ref{false, j}, std::nullopt);
  for (std::size_t j = 0; j < qy.size(); ++j) emit(qy[j], std::nullopt, Ref{false, j});
  return out;
}

}  // namespace simcol::scheme
