#pragma once

// JSON and CSV renderings of colorings, drift studies, oracle and
// certification results. Rationals are written as "num/den" strings.

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "simcol/certify.hpp"
#include "simcol/coupling.hpp"
#include "simcol/dynamics.hpp"
#include "simcol/graph.hpp"
#include "simcol/oracle.hpp"
#include "simcol/rational.hpp"

namespace simcol::report {

using nlohmann::json;

inline json coloring_json(const UnionLineGraph& g, const Coloring& sigma, std::uint64_t seed, std::uint64_t steps) {
  json colors = json::array();
  for (std::size_t v = 0; v < g.m(); ++v)
    colors.push_back({{"u", g.edge(v).u},
                      {"v", g.edge(v).v},
                      {"in_g1", g.in_g1(v)},
                      {"in_g2", g.in_g2(v)},
                      {"color", sigma[v]}});
  return {{"k", sigma.k}, {"colors", colors}, {"seed", seed}, {"steps", steps}};
}

/// Inverse of coloring_json: colors are matched to Ĝ-vertices by edge.
inline Coloring coloring_from_json(const UnionLineGraph& g, const json& j) {
  try {
    const int k = j.at("k").get<int>();
    std::vector<Color> colors(g.m(), 0);
    for (const auto& e : j.at("colors")) {
      Edge edge(e.at("u").get<int>(), e.at("v").get<int>());
      const auto& all = g.edges();
      auto it = std::lower_bound(all.begin(), all.end(), edge);
      if (it == all.end() || *it != edge)
        throw ParseError(0, "coloring: edge " + std::to_string(edge.u) + " " + std::to_string(edge.v) + " not in instance");
      colors[static_cast<std::size_t>(it - all.begin())] = e.at("color").get<Color>();
    }
    for (Color c : colors)
      if (c == 0) throw ParseError(0, "coloring: some instance edge has no color");
    return Coloring(std::move(colors), k);
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("coloring: ") + e.what());
  } catch (const InvalidInput& e) {
    throw ParseError(0, std::string("coloring: ") + e.what());
  }
}

inline std::string coloring_csv(const UnionLineGraph& g, const Coloring& sigma) {
  std::ostringstream out;
  out << "u,v,in_g1,in_g2,color\n";
  for (std::size_t v = 0; v < g.m(); ++v)
    out << g.edge(v).u << ',' << g.edge(v).v << ',' << g.in_g1(v) << ',' << g.in_g2(v) << ',' << sigma[v] << '\n';
  return out.str();
}

inline std::string drift_csv(const ContractionSummary& s) {
  std::ostringstream out;
  out << "pair_id,vstar_weight,exact_drift_num,exact_drift_den,bound_num,bound_den,beta,dc_max\n";
  for (const PairRecord& r : s.pairs)
    out << r.pair_id << ',' << r.vstar_weight << ',' << numerator(r.exact_drift) << ',' << denominator(r.exact_drift)
        << ',' << numerator(r.bound) << ',' << denominator(r.bound) << ',' << to_string(r.beta) << ',' << r.dc_max
        << '\n';
  return out.str();
}

inline json drift_json(const ContractionSummary& s) {
  json pairs = json::array();
  for (const PairRecord& r : s.pairs)
    pairs.push_back({{"pair_id", r.pair_id},
                     {"vstar_weight", r.vstar_weight},
                     {"exact_drift", to_string(r.exact_drift)},
                     {"bound", to_string(r.bound)},
                     {"beta", to_string(r.beta)},
                     {"dc_max", r.dc_max},
                     {"merged", r.merged},
                     {"clamped", r.clamped}});
  return {{"pairs", pairs},
          {"summary",
           {{"sampled", s.pairs.size()},
            {"skipped_no_perturbation", s.skipped_no_perturbation},
            {"excluded_high_dc", s.excluded_high_dc},
            {"violations", s.violations},
            {"max_drift", to_string(s.max_drift)},
            {"mean_drift", s.mean_drift},
            {"max_beta", to_string(s.max_beta)},
            {"min_margin", to_string(s.min_margin)}}}};
}

inline json oracle_json(std::uint64_t count, bool uniform_ok, const MixingReport& mix) {
  json curve = json::array();
  for (const auto& [t, d] : mix.tv_curve) curve.push_back({t, d});
  return {{"count", count}, {"uniform_ok", uniform_ok}, {"tv_curve", curve}, {"tmix", mix.tmix}};
}

inline json config_json(const ConfigCase& c) { return {{"wstar", c.wstar}, {"w", c.w}, {"a", c.a}, {"b", c.b}}; }

inline json certify_json(const PropertyReport& props, const LemmaMaxima& lm, const Threshold& t) {
  json failures = json::array();
  for (const PropertyWitness& w : props.failures) {
    json f = {{"property", w.property}, {"i", w.i}};
    if (w.property == 2) {
      f["weight"] = w.weight;
      f["ell"] = w.ell;
    }
    failures.push_back(f);
  }
  auto argmax = [](const ClassMax& cm) {
    json a = json::array();
    for (const ConfigCase& c : cm.argmax) a.push_back(config_json(c));
    return a;
  };
  return {{"properties",
           {{"1", props.holds[0]}, {"2", props.holds[1]}, {"3", props.holds[2]}, {"4", props.holds[3]},
            {"failures", failures}}},
          {"maxima", {{"dc1", to_string(lm.dc1.value)}, {"w2dc2", to_string(lm.w2dc2.value)},
                      {"w1dc2", to_string(lm.w1dc2.value)}}},
          {"argmax", {{"dc1", argmax(lm.dc1)}, {"w2dc2", argmax(lm.w2dc2)}, {"w1dc2", argmax(lm.w1dc2)}}},
          {"threshold", to_string(t.value)},
          {"branches", {{"weight1", to_string(t.weight1)}, {"weight2", to_string(t.weight2)}}}};
}

}  // namespace simcol::report
