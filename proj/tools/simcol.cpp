// simcol: command-line front end.
//
// Exit codes: 0 success, 1 usage, 2 parse error, 3 bound violation,
// 4 resource cap exceeded.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "simcol/report.hpp"
#include "simcol/simcol.hpp"

namespace {

using namespace simcol;
using report::json;

constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitBound = 3;
constexpr int kExitCap = 4;

struct Options {
  std::string graph;
  int k = 0;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "json";
  std::string chain = "flip";
  std::string fp_file;
  std::string lists_file;
  std::string init_file;
  std::uint64_t steps = 0;
  std::size_t pairs = 100;
  double eps = 0.25;
  bool count_only = false;
  bool chromatic = false;
  int n = 0;
  int delta = 0;
  double overlap = 0;
  std::uint64_t state_cap = kDenseStateCap;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + o.out);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

GraphPair load_graph(const Options& o) {
  if (o.graph.empty()) throw CLI::ValidationError("--graph", "an instance file is required");
  return read_instance(slurp(o.graph));
}

FlipParams load_fp(const Options& o) {
  if (o.chain == "glauber") return FlipParams::glauber();
  if (o.fp_file.empty()) return FlipParams::standard();
  return parse_flip_params(slurp(o.fp_file));
}

std::uint64_t require_seed(const Options& o) {
  if (!o.seed) throw CLI::ValidationError("--seed", "this subcommand requires an explicit seed");
  return *o.seed;
}

/// One line per Ĝ-vertex in id order, whitespace-separated colors.
ListAssignment load_lists(const Options& o, const UnionLineGraph& g) {
  if (o.lists_file.empty()) return ListAssignment::full(g.m(), o.k);
  std::istringstream in(slurp(o.lists_file));
  std::vector<std::vector<Color>> lists;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<Color> l;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        int c = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        l.push_back(c);
      } catch (const std::exception&) {
        throw ParseError(lineno, "lists: not a color '" + tok + "'");
      }
    }
    lists.push_back(std::move(l));
  }
  if (lists.size() != g.m()) throw ParseError(lineno, "lists: expected one line per vertex");
  try {
    return ListAssignment(std::move(lists), o.k);
  } catch (const InvalidInput& e) {
    throw ParseError(0, e.what());
  }
}

void check_k(const Options& o) {
  if (o.k < 1) throw CLI::ValidationError("--k", "k must be at least 1");
}

int cmd_gen(const Options& o) {
  GraphPair gp = random_graph_pair(o.n, o.delta, o.overlap, require_seed(o));
  UnionLineGraph g = build_union_line_graph(gp);
  std::ostream& info = o.out.empty() ? std::cerr : std::cout;
  emit(o, write_instance(gp));
  info << "n " << gp.n() << " m " << g.m() << " delta " << gp.delta() << " shared " << gp.shared_edge_count() << "\n";
  return 0;
}

int cmd_sample(const Options& o) {
  check_k(o);
  const std::uint64_t seed = require_seed(o);
  GraphPair gp = load_graph(o);
  UnionLineGraph g = build_union_line_graph(gp);
  if (o.chain != "glauber" && o.chain != "flip" && o.chain != "listflip")
    throw CLI::ValidationError("--chain", "expected glauber, flip or listflip");
  if (o.k < 4 * g.delta() - 2)
    std::cerr << "warning: k < 4*delta-2, the chain is not guaranteed to be ergodic\n";
  const FlipParams fp = load_fp(o);

  Coloring sigma;
  if (!o.init_file.empty()) {
    try {
      sigma = report::coloring_from_json(g, json::parse(slurp(o.init_file)));
    } catch (const json::exception& e) {
      throw ParseError(0, std::string("coloring: ") + e.what());
    }
    if (sigma.k != o.k) throw CLI::ValidationError("--init", "coloring k differs from --k");
  } else {
    auto start = greedy_coloring(g, o.k);
    if (!start) {
      std::cerr << "error: greedy coloring needs more colors; no proper start with k = " << o.k << "\n";
      return kExitUsage;
    }
    sigma = *start;
  }
  std::optional<ListAssignment> lists;
  if (o.chain == "listflip") {
    lists = load_lists(o, g);
    if (!lists->admits(sigma)) throw CLI::ValidationError("--lists", "initial coloring violates the lists");
  }

  Rng rng(seed);
  std::map<std::size_t, std::pair<std::uint64_t, std::uint64_t>> by_size;  // size -> (proposed, accepted)
  std::uint64_t accepted = 0;
  for (std::uint64_t s = 0; s < o.steps; ++s) {
    StepOutcome r = o.chain == "glauber" ? glauber_step(sigma, g, rng)
                    : o.chain == "flip"  ? flip_step(sigma, g, fp, rng)
                                         : list_flip_step(sigma, g, *lists, fp, rng);
    auto& slot = by_size[r.cluster_size];
    ++slot.first;
    if (r.changed) {
      ++slot.second;
      ++accepted;
    }
  }

  if (o.format == "csv") {
    emit(o, report::coloring_csv(g, sigma));
    return 0;
  }
  json j = report::coloring_json(g, sigma, seed, o.steps);
  j["chain"] = o.chain;
  j["proper"] = is_proper(sigma, g);
  j["accepted"] = accepted;
  json stats = json::array();
  for (const auto& [size, pa] : by_size)
    stats.push_back({{"cluster_size", size}, {"proposed", pa.first}, {"accepted", pa.second}});
  j["acceptance"] = stats;
  emit(o, dump(j));
  return 0;
}

int cmd_drift(const Options& o) {
  check_k(o);
  const std::uint64_t seed = require_seed(o);
  GraphPair gp = load_graph(o);
  UnionLineGraph g = build_union_line_graph(gp);
  if (o.chain != "glauber" && o.chain != "flip") throw CLI::ValidationError("--chain", "expected glauber or flip");
  const FlipParams fp = load_fp(o);
  const Threshold t = threshold(fp);
  ContractionSummary s = estimate_contraction(g, o.k, o.chain == "glauber" ? ChainKind::kGlauber : ChainKind::kFlip, fp,
                                              t.value, o.pairs, seed);
  emit(o, o.format == "csv" ? report::drift_csv(s) : dump(report::drift_json(s)));
  std::cerr << "pairs " << s.pairs.size() << " violations " << s.violations << " excluded_high_dc "
            << s.excluded_high_dc << " max_beta " << to_string(s.max_beta) << "\n";
  return s.violations == 0 ? 0 : kExitBound;
}

/// Properties plus each per-class maximum under its closed-form bound.
int cmd_certify(const Options& o) {
  const FlipParams fp = load_fp(o);
  PropertyReport props = verify_flip_properties(fp);
  LemmaMaxima lm = lemma_maxima(fp);
  Threshold t = threshold(lm);
  const Rational dc1_bound = fp(1) + fp(2) - 2 * fp(3);
  const Rational w2_bound = 8 * fp(3);
  const Rational w1_bound = make_rational(3, 4) + 2 * fp(3);
  const bool bounds = lm.dc1.value <= dc1_bound && lm.w2dc2.value <= w2_bound && lm.w1dc2.value <= w1_bound;
  json j = report::certify_json(props, lm, t);
  j["lemma_bounds_hold"] = bounds;
  if (o.format == "csv") {
    std::ostringstream out;
    out << "key,value\n";
    for (int p = 1; p <= 4; ++p) out << "property" << p << ',' << props.holds[p - 1] << '\n';
    out << "dc1," << to_string(lm.dc1.value) << "\nw2dc2," << to_string(lm.w2dc2.value) << "\nw1dc2,"
        << to_string(lm.w1dc2.value) << "\nthreshold," << to_string(t.value) << '\n';
    emit(o, out.str());
  } else {
    emit(o, dump(j));
  }
  return props.all() && bounds ? 0 : kExitBound;
}

int cmd_count(const Options& o) {
  GraphPair gp = load_graph(o);
  UnionLineGraph g = build_union_line_graph(gp);
  json j;
  if (o.chromatic) {
    j["chromatic_index"] = simultaneous_chromatic_index(gp, std::max(o.k, 2 * gp.delta() + 1));
  } else {
    check_k(o);
    j["count"] = count_proper(g, o.k);
  }
  if (o.format == "csv") {
    std::ostringstream out;
    for (auto it = j.begin(); it != j.end(); ++it) out << it.key() << '\n' << it.value() << '\n';
    emit(o, out.str());
  } else {
    emit(o, dump(j));
  }
  return 0;
}

int cmd_oracle(const Options& o) {
  check_k(o);
  if (!(o.eps > 0 && o.eps < 1)) throw CLI::ValidationError("--eps", "epsilon must lie in (0,1)");
  GraphPair gp = load_graph(o);
  UnionLineGraph g = build_union_line_graph(gp);
  if (o.count_only) {
    json j = {{"count", count_proper(g, o.k)}};
    emit(o, o.format == "csv" ? "count\n" + j["count"].dump() + "\n" : dump(j));
    return 0;
  }
  StateIndex index(g, o.k, o.state_cap);
  ChainSpec spec;
  const FlipParams fp = load_fp(o);
  std::vector<bool> omega = proper_mask(index);
  if (o.chain == "glauber") {
    spec = ChainSpec::glauber();
  } else if (o.chain == "flip") {
    spec = ChainSpec::flip(fp);
  } else if (o.chain == "listflip") {
    ListAssignment lists = load_lists(o, g);
    for (std::uint64_t s = 0; s < index.size(); ++s) omega[s] = omega[s] && lists.admits(index.decode(s));
    spec = ChainSpec::list_flip(fp, std::move(lists));
  } else {
    throw CLI::ValidationError("--chain", "expected glauber, flip or listflip");
  }

  std::uint64_t count = 0;
  for (bool b : omega) count += b ? 1 : 0;
  bool uniform_ok = false, irreducible = false;
  MixingReport mix;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> witness;
  auto run = [&](const auto& P) {
    StationaryReport rep = stationary_check(P, omega);
    uniform_ok = rep.uniform_ok;
    irreducible = rep.irreducible;
    witness = rep.unreachable;
    if (irreducible) mix = tv_mixing_time(P, omega, o.eps);
  };
  if (index.size() <= kRationalStateCap)
    run(build_transition_matrix<Rational>(index, spec));
  else
    run(build_transition_matrix<double>(index, spec));

  json j = report::oracle_json(count, uniform_ok, mix);
  j["irreducible"] = irreducible;
  if (witness) j["unreachable"] = {witness->first, witness->second};
  if (o.format == "csv") {
    std::ostringstream out;
    out << "t,d\n";
    for (const auto& [t, d] : mix.tv_curve) out << t << ',' << d << '\n';
    emit(o, out.str());
  } else {
    emit(o, dump(j));
  }
  if (!irreducible) std::cerr << "error: chain restricted to proper colorings is reducible\n";
  return uniform_ok && irreducible ? 0 : kExitBound;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Samplers, couplings and exact checks for simultaneous edge colorings"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--graph", o.graph, "instance file");
    sub->add_option("--k", o.k, "number of colors");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--out", o.out, "output path (default stdout)");
    sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  auto chain_opts = [&](CLI::App* sub) {
    sub->add_option("--chain", o.chain, "glauber, flip or listflip");
    sub->add_option("--fp", o.fp_file, "flip-parameter file, one num/den per line");
  };

  auto* gen = app.add_subcommand("gen", "generate a random graph pair");
  common(gen);
  gen->add_option("--n", o.n, "vertex count")->required();
  gen->add_option("--delta", o.delta, "maximum degree of each graph")->required();
  gen->add_option("--overlap", o.overlap, "fraction of E1 copied into E2")->default_val(0.0);

  auto* sample = app.add_subcommand("sample", "run a chain from a proper start");
  common(sample);
  chain_opts(sample);
  sample->add_option("--steps", o.steps, "number of proposals");
  sample->add_option("--lists", o.lists_file, "list file for listflip, one line per vertex");
  sample->add_option("--init", o.init_file, "initial coloring JSON");

  auto* drift = app.add_subcommand("drift", "exact one-step drift on sampled adjacent pairs");
  common(drift);
  chain_opts(drift);
  drift->add_option("--pairs", o.pairs, "number of pairs");

  auto* cert = app.add_subcommand("certify", "verify flip parameters, per-color maxima and threshold");
  common(cert);
  cert->add_option("--fp", o.fp_file, "flip-parameter file");

  auto* oracle = app.add_subcommand("oracle", "exact stationarity and mixing time on a tiny instance");
  common(oracle);
  chain_opts(oracle);
  oracle->add_option("--eps", o.eps, "total-variation target");
  oracle->add_option("--lists", o.lists_file, "list file for listflip");
  oracle->add_option("--state-cap", o.state_cap, "maximum k^m");
  oracle->add_flag("--count", o.count_only, "only count proper colorings");

  auto* count = app.add_subcommand("count", "count proper colorings");
  common(count);
  count->add_flag("--chromatic", o.chromatic, "report the smallest k with a proper coloring instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) return cmd_gen(o);
    if (*sample) return cmd_sample(o);
    if (*drift) return cmd_drift(o);
    if (*cert) return cmd_certify(o);
    if (*oracle) return cmd_oracle(o);
    if (*count) return cmd_count(o);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kExitCap;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
