#include "treesmith/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace treesmith {

using ordered_json = nlohmann::ordered_json;

void PipelineConfig::validate() const {
  if (rank < 4) throw std::invalid_argument("rank must be at least 4");
  if (depth_K < 0) throw std::invalid_argument("depth must be nonnegative");
  if (factor_budget < 0) throw std::invalid_argument("factor budget must be nonnegative");
  if (random_u_len < 8) throw std::invalid_argument("random_u_len must be at least 8");
  if (!(Rational(0) < radius0)) throw std::invalid_argument("radius0 must be positive");
  if (!(Rational(0) < radius_ratio) || !(radius_ratio < Rational(1)))
    throw std::invalid_argument("radius_ratio must be in (0,1)");
  if (k_max < 1) throw std::invalid_argument("k_max must be positive");
}

PipelineConfig parse_config(const std::string& text) {
  PipelineConfig cfg;
  std::istringstream in(text);
  std::string line;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto sep = line.find_first_of("=:");
    if (sep == std::string::npos)
      throw std::invalid_argument("bad config line: " + line);
    std::string key = trim(line.substr(0, sep));
    std::string val = trim(line.substr(sep + 1));
    if (key == "rank") cfg.rank = std::stoi(val);
    else if (key == "edge_word") cfg.edge_word = val;
    else if (key == "depth_K") cfg.depth_K = std::stoi(val);
    else if (key == "factor_budget") cfg.factor_budget = std::stoi(val);
    else if (key == "test_len_cap") cfg.test_len_cap = std::stoi(val);
    else if (key == "k_max") cfg.k_max = std::stoi(val);
    else if (key == "tol") cfg.tol = Rational::parse(val);
    else if (key == "radius0") cfg.radius0 = Rational::parse(val);
    else if (key == "radius_ratio") cfg.radius_ratio = Rational::parse(val);
    else if (key == "random_u_len") cfg.random_u_len = std::stoi(val);
    else if (key == "seed") cfg.seed = std::stoull(val);
    else if (key == "expansion_budget") cfg.expansion_budget = std::stoi(val);
    else if (key == "parking_rounds") cfg.parking_rounds = std::stoi(val);
    else throw std::invalid_argument("unknown config key: " + key);
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

// Expansion automorphism on the letters `xs` (in order): x1 -> x2, ...,
// x_{r-1} -> x_r, x_r -> x1 x2; identity elsewhere.
Automorphism expansion_on(const Basis& basis, const std::vector<int>& xs) {
  const std::size_t r = xs.size();
  if (r < 2) throw std::invalid_argument("expansion needs at least two letters");
  std::vector<Word> im, inv;
  for (int i = 0; i < basis.rank(); ++i)
    im.push_back(Word::from_reduced({make_lit(i, false)})),
        inv.push_back(Word::from_reduced({make_lit(i, false)}));
  for (std::size_t i = 0; i + 1 < r; ++i)
    im[static_cast<std::size_t>(xs[i])] =
        Word::from_reduced({make_lit(xs[i + 1], false)});
  im[static_cast<std::size_t>(xs[r - 1])] =
      reduce({make_lit(xs[0], false), make_lit(xs[1], false)});
  // inverse: x2 -> x1, ..., x_r -> x_{r-1}, x1 -> x_r x_1^{-1}
  inv[static_cast<std::size_t>(xs[0])] =
      reduce({make_lit(xs[r - 1], false), make_lit(xs[0], true)});
  for (std::size_t i = 1; i < r; ++i)
    inv[static_cast<std::size_t>(xs[i])] =
        Word::from_reduced({make_lit(xs[i - 1], false)});
  return Automorphism(basis, im, inv, "expand");
}

SubgroupGraph push_factor(const Basis& basis, const Automorphism& marking,
                          const FactorSpec& f) {
  std::vector<Word> gens;
  for (const Word& g : f.generators) gens.push_back(marking.apply(g));
  return SubgroupGraph::fold(basis, gens);
}

struct Freeness {
  int components = 0;
  bool all_empty = true;
};

Freeness check_freeness(const RunContext& ctx, const Automorphism& marking,
                        const std::vector<const FactorSpec*>& factors) {
  Freeness out;
  for (const FactorSpec* f : factors) {
    SubgroupGraph g = push_factor(ctx.pair.basis, marking, *f);
    for (const SubgroupGraph* vg : {&ctx.v_graph, &ctx.vp_graph}) {
      IntersectionReport rep = intersect_conjugates(ctx.pair.basis, g, *vg);
      out.components += static_cast<int>(rep.components.size());
      if (!rep.empty()) out.all_empty = false;
    }
  }
  return out;
}

// Letters of the vertex-group normal form of an element, per side.
// side=false: vertex group of T over {a.., w', t', W}; the forbidden
// subfactor is spanned by the a-letters and the formal letter, so a class is
// acceptable when it uses w' or t'. side=true is symmetric for T' (uses w'
// or t).
bool classes_avoid_subfactor(const RunContext& ctx, const SubgroupGraph& pushed,
                             bool primed) {
  const Basis& b = ctx.pair.basis;
  const int iw = b.rank() - 3, it = b.rank() - 2, iv = b.rank() - 1;
  const SplittingPresentation& pres =
      primed ? ctx.pair.t_prime.pres : ctx.pair.t_curve.pres;
  const SubgroupGraph& vg = primed ? ctx.vp_graph : ctx.v_graph;
  IntersectionReport rep = intersect_conjugates(b, pushed, vg);
  for (const IntersectionComponent& c : rep.components) {
    for (const Word& loop : c.loop_words) {
      Word elt = concat(c.access_k, concat(loop, inverse(c.access_k)));
      ExtWord e = pres.britton_linear(elt);
      if (pres.stable_count(e) != 0)
        throw std::logic_error("intersection class escaped the vertex group");
      bool ok = false;
      for (int l : e) {
        if (pres.is_formal_lit(l)) continue;
        int idx = lit_index(l);
        if (!primed && (idx == iw || idx == iv)) ok = true;
        if (primed && (idx == iw || idx == it)) ok = true;
      }
      if (!ok) return false;
    }
    if (c.loop_words.empty()) return false;
  }
  return true;
}

Rational side_distance(const RunContext& ctx, const Automorphism& marking,
                       bool primed) {
  const Curve& base = primed ? ctx.pair.t_prime : ctx.pair.t_curve;
  Curve cur{base.pres, marking};
  LengthVector v = length_vector(cur, ctx.prev_test);
  bool zero = true;
  for (auto x : v.values)
    if (x) zero = false;
  if (zero) return Rational(2);
  return normalized_distance(primed ? ctx.prev_center_tp : ctx.prev_center_t, v);
}

// Twist the given side toward its stage-entry position until the distance on
// the previous test set is within the gap. Returns the power or nullopt.
std::optional<int> park_side(const RunContext& ctx, Automorphism& marking,
                             bool primed) {
  const Curve& base = primed ? ctx.pair.t_prime : ctx.pair.t_curve;
  Curve ref{base.pres, ctx.ref_marking};
  DehnTwist tw = twist_of(ref);
  Curve cur{base.pres, marking};
  if (side_distance(ctx, marking, primed) <= ctx.gap) return 0;
  if (translation_length(cur, ConjClass(tw.twistor)) <= 0) return std::nullopt;
  Automorphism m = marking;
  for (int j = 1; j <= ctx.cfg.k_max; ++j) {
    m = compose(m, tw.automorphism);
    if (side_distance(ctx, m, primed) <= ctx.gap) {
      marking = m;
      return j;
    }
  }
  return std::nullopt;
}

// Alternate parking both sides until both distances sit inside the gap.
bool park_both(const RunContext& ctx, Automorphism& marking,
               std::vector<int>* powers) {
  for (int round = 0; round < ctx.cfg.parking_rounds; ++round) {
    auto jt = park_side(ctx, marking, false);
    if (!jt) return false;
    powers->push_back(*jt);
    auto jp = park_side(ctx, marking, true);
    if (!jp) return false;
    powers->push_back(*jp);
    if (side_distance(ctx, marking, false) <= ctx.gap &&
        side_distance(ctx, marking, true) <= ctx.gap)
      return true;
  }
  return false;
}

// Current-coordinates automorphism applied to the whole stage pair:
// left-composition of the marking.
void apply_move(Automorphism& marking, const Automorphism& move) {
  marking = compose(invert(move), marking);
}

std::vector<const FactorSpec*> with_factor(const PipelineState& state,
                                           const FactorSpec* extra) {
  std::vector<const FactorSpec*> out;
  for (const FactorSpec& f : state.processed) out.push_back(&f);
  if (extra) out.push_back(extra);
  return out;
}

}  // namespace

std::vector<FactorSpec> enumerate_factors(const Basis& basis, int budget,
                                          std::uint64_t seed) {
  (void)seed;  // enumeration is fully deterministic
  const int n = basis.rank();
  const int iw = n - 3, it = n - 2, iv = n - 1;

  std::vector<Automorphism> elementary;
  for (int i = 0; i + 1 < n; ++i) elementary.push_back(Automorphism::transposition(basis, i, i + 1));
  for (int i = 0; i + 1 < n; ++i)
    elementary.push_back(Automorphism::right_multiplier(
        basis, i, Word::from_reduced({make_lit(i + 1, false)}), "nielsen"));
  elementary.push_back(Automorphism::right_multiplier(
      basis, it, Word::from_reduced({make_lit(0, false)}), "twist"));
  elementary.push_back(Automorphism::right_multiplier(
      basis, iv, Word::from_reduced({make_lit(iw, false)}), "twist"));

  std::vector<Automorphism> autos = {Automorphism::identity(basis)};
  std::vector<Automorphism> frontier = autos;
  for (int b = 0; b < budget; ++b) {
    std::vector<Automorphism> next;
    for (const Automorphism& a : frontier)
      for (const Automorphism& e : elementary) next.push_back(compose(a, e));
    autos.insert(autos.end(), next.begin(), next.end());
    frontier = std::move(next);
  }

  std::vector<FactorSpec> out;
  std::set<std::string> seen;
  for (const Automorphism& a : autos) {
    for (int mask = 1; mask < (1 << n) - 1; ++mask) {
      std::vector<Word> gens;
      for (int i = 0; i < n; ++i)
        if (mask & (1 << i)) gens.push_back(a.image(i));
      SubgroupGraph g = SubgroupGraph::fold(basis, gens);
      if (g.rank() >= n) throw std::logic_error("factor rank too large");
      std::string key = g.canonical_string(false);
      if (!seen.insert(key).second) continue;
      FactorSpec f;
      f.generators = gens;
      f.provenance = a.name();
      f.graph = std::move(g);
      out.push_back(std::move(f));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const FactorSpec& x, const FactorSpec& y) {
    int lx = 0, ly = 0;
    for (const Word& w : x.generators) lx += w.length();
    for (const Word& w : y.generators) ly += w.length();
    if (lx != ly) return lx < ly;
    if (x.generators.size() != y.generators.size())
      return x.generators.size() < y.generators.size();
    return x.generators < y.generators;
  });
  return out;
}

std::vector<std::vector<ConjClass>> stage_test_sets(const Basis& basis,
                                                    const PipelineConfig& cfg) {
  const int cap = 64;
  std::vector<std::vector<ConjClass>> sets;
  std::vector<ConjClass> cur;
  int prev_len = 0;
  for (int k = 0; k <= cfg.depth_K; ++k) {
    int len = std::min(k == 0 ? 5 : k + 4, cfg.test_len_cap);
    if (len < 3) len = 3;
    if (len > prev_len && static_cast<int>(cur.size()) < cap) {
      std::vector<ConjClass> pool = default_test_classes(basis, len, cap, cfg.seed);
      for (const ConjClass& c : pool) {
        if (static_cast<int>(cur.size()) >= cap) break;
        if (std::find(cur.begin(), cur.end(), c) == cur.end()) cur.push_back(c);
      }
      prev_len = len;
    }
    sets.push_back(cur);
  }
  return sets;
}

StepReport force_arational_step(const RunContext& ctx, PipelineState& state,
                                const FactorSpec& factor) {
  const Basis& b = ctx.pair.basis;
  const int n = b.rank();
  const int iw = n - 3, it = n - 2, iv = n - 1;
  std::vector<int> aletters;
  for (int i = 0; i < iw; ++i) aletters.push_back(i);

  SubgroupGraph sub_t = SubgroupGraph::fold(b, [&] {
    std::vector<Word> g;
    for (int i : aletters) g.push_back(Word::from_reduced({make_lit(i, false)}));
    g.push_back(Word::from_reduced({make_lit(it, false)}));
    return g;
  }());
  SubgroupGraph sub_v = SubgroupGraph::fold(b, [&] {
    std::vector<Word> g;
    for (int i : aletters) g.push_back(Word::from_reduced({make_lit(i, false)}));
    g.push_back(Word::from_reduced({make_lit(iv, false)}));
    return g;
  }());

  StepReport best_fail;
  for (int m = 0; m <= ctx.cfg.expansion_budget; ++m) {
    Automorphism marking = state.marking;
    StepReport rep;
    rep.expansion_power = m;

    auto one_side = [&](bool primed) -> bool {
      const SubgroupGraph& sub = primed ? sub_v : sub_t;
      // Step 0: the factor may contain the whole plain subfactor; push it off
      // with a letter certified absent from the factor.
      SubgroupGraph pushed = push_factor(b, marking, factor);
      IntersectionReport r0 = intersect_conjugates(b, pushed, sub);
      bool contains_sub = false;
      for (const auto& c : r0.components)
        if (c.graph.rank() >= sub.rank()) contains_sub = true;
      if (contains_sub) {
        int eps = -1;
        for (int cand : primed ? std::vector<int>{iw, it} : std::vector<int>{iw, iv}) {
          SubgroupGraph lg = SubgroupGraph::fold(b, {Word::from_reduced({make_lit(cand, false)})});
          if (intersect_conjugates(b, pushed, lg).empty()) {
            eps = cand;
            break;
          }
        }
        if (eps < 0) {
          rep.failure = "no letter is absent from the factor";
          return false;
        }
        Automorphism f = Automorphism::right_multiplier(
            b, aletters.empty() ? iw : aletters[0],
            Word::from_reduced({make_lit(eps, false)}), "push-off");
        apply_move(marking, f);
      }
      // Step 1: expansion power, then the avoidance check.
      const Automorphism& phi = primed ? ctx.expansion_prime : ctx.expansion;
      if (m > 0) apply_move(marking, auto_power(phi, m));
      if (!classes_avoid_subfactor(ctx, push_factor(b, marking, factor), primed)) {
        rep.failure = primed ? "avoidance failed on the partner side"
                             : "avoidance failed";
        return false;
      }
      // Steps 2 and 3: multiply the complementary letters into the moved
      // part, in current coordinates.
      int iedge = lit_index(ctx.pair.t_curve.pres.rules()[0].edge_word.at(0));
      Word delta = auto_power(phi, m).image(primed ? iv : it);
      {
        std::vector<Word> im, inv;
        for (int i = 0; i < n; ++i) {
          Word x = Word::from_reduced({make_lit(i, false)});
          bool moved = primed ? (i == iedge || i == it) : (i == iw || i == iv);
          if (moved) {
            im.push_back(concat(x, delta));
            inv.push_back(concat(x, inverse(delta)));
          } else {
            im.push_back(x);
            inv.push_back(x);
          }
        }
        apply_move(marking, Automorphism(b, im, inv, "shift"));
      }
      {
        int moved = primed ? iv : it;
        int mult = primed ? it : iv;
        Automorphism g3 = Automorphism::right_multiplier(
            b, moved, Word::from_reduced({make_lit(mult, false)}), "shear");
        apply_move(marking, g3);
      }
      return true;
    };

    if (!one_side(false)) {
      best_fail = rep;
      continue;
    }
    if (!one_side(true)) {
      best_fail = rep;
      continue;
    }

    // Emptiness for this factor and everything already processed.
    Freeness fr = check_freeness(ctx, marking, with_factor(state, &factor));
    if (!fr.all_empty) {
      rep.failure = "factor intersections are nonempty";
      best_fail = rep;
      continue;
    }
    if (!park_both(ctx, marking, &rep.twist_powers)) {
      rep.failure = "parking failed";
      best_fail = rep;
      continue;
    }
    fr = check_freeness(ctx, marking, with_factor(state, &factor));
    if (!fr.all_empty) {
      rep.failure = "parking disturbed the factor certificates";
      best_fail = rep;
      continue;
    }
    state.marking = marking;
    rep.ok = true;
    return rep;
  }
  if (best_fail.failure.empty()) best_fail.failure = "expansion budget exhausted";
  return best_fail;
}

StepReport force_nongeometric_step(const RunContext& ctx, PipelineState& state,
                                   int scale,
                                   std::vector<std::pair<int, int>>* widths_out) {
  const Basis& b = ctx.pair.basis;
  const int n = b.rank();
  const int iw = n - 3, it = n - 2, iv = n - 1;

  StepReport best_fail;
  for (int p = 1; p <= ctx.cfg.expansion_budget; ++p) {
    for (int draw = 0; draw < 4; ++draw) {
      Automorphism marking = state.marking;
      StepReport rep;
      rep.expansion_power = p;
      Rng rng(ctx.cfg.seed ^ (0x5bd1e995ull * static_cast<std::uint64_t>(scale)) ^
              (0x9e3779b9ull * static_cast<std::uint64_t>(p)) ^
              static_cast<std::uint64_t>(draw));

      auto one_side = [&](bool primed) {
        // replace the stable letter s by s*u for a long random word in the
        // complementary pair of letters
        std::vector<int> alphabet =
            primed ? [&] {
              std::vector<int> a = {it};
              for (int i = 0; i < iw; ++i) a.push_back(i);
              return a;
            }()
                   : std::vector<int>{iw, iv};
        Word u = random_word(b, alphabet, ctx.cfg.random_u_len, rng);
        Automorphism nu = Automorphism::right_multiplier(b, primed ? iv : it, u, "stretch");
        apply_move(marking, nu);
        const Automorphism& phi = primed ? ctx.expansion_prime : ctx.expansion;
        apply_move(marking, auto_power(phi, p));
      };
      one_side(false);
      one_side(true);

      Curve t_cur{ctx.pair.t_curve.pres, marking};
      Curve tp_cur{ctx.pair.t_prime.pres, marking};
      if (stabilized_edge_scale(t_cur) <= scale ||
          stabilized_edge_scale(tp_cur) <= scale) {
        rep.failure = "stable letter not long enough";
        best_fail = rep;
        continue;
      }
      Freeness fr = check_freeness(ctx, marking, with_factor(state, nullptr));
      if (!fr.all_empty) {
        rep.failure = "stretch disturbed factor certificates";
        best_fail = rep;
        continue;
      }
      if (!park_both(ctx, marking, &rep.twist_powers)) {
        rep.failure = "parking failed";
        best_fail = rep;
        continue;
      }
      t_cur.marking = marking;
      tp_cur.marking = marking;
      if (stabilized_edge_scale(t_cur) <= scale ||
          stabilized_edge_scale(tp_cur) <= scale) {
        rep.failure = "parking shortened the stable letter";
        best_fail = rep;
        continue;
      }
      fr = check_freeness(ctx, marking, with_factor(state, nullptr));
      if (!fr.all_empty) {
        rep.failure = "parking disturbed factor certificates";
        best_fail = rep;
        continue;
      }
      // Width certificates at every scale up to the stage index.
      std::vector<std::pair<int, int>> widths;
      bool widths_ok = true;
      for (int l = 1; l <= scale && widths_ok; ++l) {
        int wmin = -1;
        for (const Curve* c : {&t_cur, &tp_cur}) {
          Decomposition d = imanishi_decompose(induce_system(*c, l));
          for (const Family& f : d.families)
            if (f.annular) widths_ok = false;
          auto w = min_nonannular_width(d);
          if (!w) {
            widths_ok = false;
            break;
          }
          wmin = wmin < 0 ? *w : std::min(wmin, *w);
        }
        if (widths_ok) widths.emplace_back(l, wmin);
      }
      if (!widths_ok) {
        rep.failure = "annular family below the stabilized scale";
        best_fail = rep;
        continue;
      }
      state.marking = marking;
      if (widths_out) *widths_out = widths;
      rep.ok = true;
      return rep;
    }
  }
  if (best_fail.failure.empty()) best_fail.failure = "expansion budget exhausted";
  return best_fail;
}

namespace {

std::string rational_str(const Rational& r) { return r.str(); }

ordered_json config_json(const PipelineConfig& cfg) {
  ordered_json j;
  j["rank"] = cfg.rank;
  j["edge_word"] = cfg.edge_word;
  j["depth_K"] = cfg.depth_K;
  j["factor_budget"] = cfg.factor_budget;
  j["test_len_cap"] = cfg.test_len_cap;
  j["k_max"] = cfg.k_max;
  j["tol"] = rational_str(cfg.tol);
  j["radius0"] = rational_str(cfg.radius0);
  j["radius_ratio"] = rational_str(cfg.radius_ratio);
  j["random_u_len"] = cfg.random_u_len;
  j["seed"] = cfg.seed;
  j["expansion_budget"] = cfg.expansion_budget;
  j["parking_rounds"] = cfg.parking_rounds;
  return j;
}

}  // namespace

RunResult run_construction(const PipelineConfig& cfg) {
  return run_construction(cfg, std::nullopt);
}

RunResult run_construction(const PipelineConfig& cfg,
                           const std::optional<PipelineState>& resume) {
  cfg.validate();
  StandardPair pair = [&] {
    Basis probe = standard_pair(cfg.rank).basis;
    Word w = parse_word(probe, cfg.edge_word);
    if (w.length() != 1)
      throw std::invalid_argument(
          "the construction needs a one-letter edge word");
    return standard_pair(cfg.rank, w);
  }();
  const Basis& b = pair.basis;
  const int n = b.rank();
  const int iw = n - 3, it = n - 2, iv = n - 1;

  RunResult result;
  result.final_state.marking = Automorphism::identity(b);

  std::vector<FactorSpec> factors = enumerate_factors(b, cfg.factor_budget, cfg.seed);
  if (static_cast<int>(factors.size()) < cfg.depth_K)
    throw std::runtime_error("factor enumeration too small for the requested depth");

  std::vector<std::vector<ConjClass>> sets = stage_test_sets(b, cfg);

  RunContext ctx;
  ctx.cfg = cfg;
  ctx.pair = pair;
  {
    std::vector<Word> vg, vpg;
    for (int i = 0; i < iw; ++i) vg.push_back(Word::from_reduced({make_lit(i, false)}));
    vpg = vg;
    vg.push_back(Word::from_reduced({make_lit(iw, false)}));
    vg.push_back(Word::from_reduced({make_lit(iv, false)}));
    vg.push_back(marked_stable_conjugate(pair.t_curve));
    vpg.push_back(Word::from_reduced({make_lit(iw, false)}));
    vpg.push_back(Word::from_reduced({make_lit(it, false)}));
    vpg.push_back(marked_stable_conjugate(pair.t_prime));
    ctx.v_graph = SubgroupGraph::fold(b, vg);
    ctx.vp_graph = SubgroupGraph::fold(b, vpg);
  }
  {
    std::vector<int> xs;
    for (int i = 0; i < iw; ++i) xs.push_back(i);
    std::vector<int> xsp = xs;
    xs.push_back(it);
    xsp.push_back(iv);
    ctx.expansion = expansion_on(b, xs);
    ctx.expansion_prime = expansion_on(b, xsp);
  }

  PipelineState state;
  state.k = 0;
  state.marking = Automorphism::identity(b);
  if (resume) state = *resume;

  bool all_pass = true;
  ordered_json stages = ordered_json::array();

  Rational r_old = cfg.radius0;
  for (int i = 1; i <= state.k; ++i) r_old = r_old * cfg.radius_ratio;

  for (int k = state.k + 1; k <= cfg.depth_K; ++k) {
    Rational r_new = r_old * cfg.radius_ratio;
    const FactorSpec& factor = factors[static_cast<std::size_t>(k - 1)];

    ctx.prev_test = sets[static_cast<std::size_t>(k - 1)];
    ctx.ref_marking = state.marking;
    Curve t_ref{pair.t_curve.pres, state.marking};
    Curve tp_ref{pair.t_prime.pres, state.marking};
    ctx.prev_center_t = normalize_vector(length_vector(t_ref, ctx.prev_test));
    ctx.prev_center_tp = normalize_vector(length_vector(tp_ref, ctx.prev_test));
    ctx.gap = r_old - r_new;
    ctx.scale = k;

    StageCertificate cert;
    cert.k = k;
    for (const Word& g : factor.generators)
      cert.factor_generators.push_back(format_word(b, g));
    cert.r_new = r_new;
    cert.r_old = r_old;

    StepReport arat = force_arational_step(ctx, state, factor);
    cert.twist_powers = arat.twist_powers;
    cert.expansion_power = arat.expansion_power;
    if (!arat.ok) {
      cert.failure = "arational step: " + arat.failure;
      cert.pass = false;
      all_pass = false;
      result.certificates.push_back(cert);
      break;
    }
    state.processed.push_back(factor);

    StepReport nong = force_nongeometric_step(ctx, state, k, &cert.widths);
    cert.twist_powers.insert(cert.twist_powers.end(), nong.twist_powers.begin(),
                             nong.twist_powers.end());
    if (!nong.ok) {
      cert.failure = "non-geometric step: " + nong.failure;
      cert.pass = false;
      all_pass = false;
      result.certificates.push_back(cert);
      break;
    }
    cert.widths_pass = !cert.widths.empty();
    for (auto [scale, width] : cert.widths)
      if (width <= 0) cert.widths_pass = false;

    // Certificates on the final stage state.
    Curve t_cur{pair.t_curve.pres, state.marking};
    Curve tp_cur{pair.t_prime.pres, state.marking};
    TwoEdgeRefinement y_cur{pair.refinement.pres, state.marking};

    Freeness fr = check_freeness(ctx, state.marking, with_factor(state, nullptr));
    cert.freeness_components = fr.components;
    cert.freeness_pass = fr.all_empty;

    const std::vector<ConjClass>& gk = sets[static_cast<std::size_t>(k)];
    DisjointnessCertificate dis = disjointness_certificate(t_cur, tp_cur, y_cur, gk);
    cert.disjoint_residuals = dis.residuals;
    cert.disjoint_pass = dis.pass;

    ConjClass edge_class(marked_edge_word(t_cur));
    cert.eta_zero = counting_current_intersection(t_cur, edge_class) == 0 &&
                    counting_current_intersection(tp_cur, edge_class) == 0;

    Rational dt = side_distance(ctx, state.marking, false);
    Rational dtp = side_distance(ctx, state.marking, true);
    cert.nesting_distance = dt < dtp ? dtp : dt;
    cert.nesting_pass = cert.nesting_distance + r_new <= r_old;

    cert.pass = cert.freeness_pass && cert.disjoint_pass && cert.eta_zero &&
                cert.widths_pass && cert.nesting_pass;
    if (!cert.pass) all_pass = false;
    result.certificates.push_back(cert);
    if (!cert.pass) break;

    state.k = k;
    r_old = r_new;
    result.stage_states.push_back(state);
  }

  for (const StageCertificate& c : result.certificates) {
    ordered_json s;
    s["k"] = c.k;
    s["factor"] = ordered_json{{"generators", c.factor_generators}};
    s["freeness"] = ordered_json{{"components", c.freeness_components},
                                 {"pass", c.freeness_pass}};
    s["disjoint_residuals"] = c.disjoint_residuals;
    s["eta_zero"] = c.eta_zero;
    ordered_json ws = ordered_json::array();
    for (auto [scale, width] : c.widths)
      ws.push_back(ordered_json{{"scale", scale}, {"width", width}});
    s["widths"] = ws;
    s["nesting"] = ordered_json{{"distance", c.nesting_distance.str()},
                                {"r_new", c.r_new.str()},
                                {"r_old", c.r_old.str()},
                                {"pass", c.nesting_pass}};
    s["twist_powers"] = c.twist_powers;
    if (!c.failure.empty()) s["failure"] = c.failure;
    stages.push_back(s);
  }

  ordered_json report;
  report["schema"] = "treesmith/1";
  report["config"] = config_json(cfg);
  report["stages"] = stages;
  result.report_json = report.dump(2) + "\n";
  result.all_pass = all_pass;
  result.final_state = state;
  return result;
}

std::string serialize_state(const PipelineState& state, const Basis& basis) {
  ordered_json j;
  j["k"] = state.k;
  ordered_json im = ordered_json::array(), inv = ordered_json::array();
  for (int i = 0; i < basis.rank(); ++i) {
    im.push_back(format_word(basis, state.marking.image(i)));
    inv.push_back(format_word(basis, state.marking.inverse_image(i)));
  }
  j["marking"] = ordered_json{{"images", im}, {"inverse_images", inv}};
  ordered_json procs = ordered_json::array();
  for (const FactorSpec& f : state.processed) {
    ordered_json gens = ordered_json::array();
    for (const Word& g : f.generators) gens.push_back(format_word(basis, g));
    procs.push_back(ordered_json{{"generators", gens}, {"provenance", f.provenance}});
  }
  j["processed"] = procs;
  return j.dump(2) + "\n";
}

PipelineState deserialize_state(const std::string& text, const Basis& basis) {
  ordered_json j = ordered_json::parse(text);
  PipelineState s;
  s.k = j.at("k").get<int>();
  std::vector<Word> im, inv;
  for (const auto& w : j.at("marking").at("images"))
    im.push_back(parse_word(basis, w.get<std::string>()));
  for (const auto& w : j.at("marking").at("inverse_images"))
    inv.push_back(parse_word(basis, w.get<std::string>()));
  s.marking = Automorphism(basis, im, inv, "resumed");
  for (const auto& p : j.at("processed")) {
    FactorSpec f;
    for (const auto& w : p.at("generators"))
      f.generators.push_back(parse_word(basis, w.get<std::string>()));
    f.provenance = p.value("provenance", std::string("resumed"));
    f.graph = SubgroupGraph::fold(basis, f.generators);
    s.processed.push_back(std::move(f));
  }
  return s;
}

}  // namespace treesmith
