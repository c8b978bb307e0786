#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "treesmith/pipeline.hpp"
#include "treesmith/resolution.hpp"
#include "treesmith/splittings.hpp"
#include "treesmith/stallings.hpp"
#include "treesmith/twistlab.hpp"

using namespace treesmith;
using ordered_json = nlohmann::ordered_json;

namespace {

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Curve load_curve(const std::string& path) {
  ordered_json j = ordered_json::parse(slurp(path));
  Basis basis(j.at("basis").get<std::string>());
  std::string stable = j.at("stable_letter").get<std::string>();
  if (stable.size() != 1) throw std::runtime_error("stable_letter must be one letter");
  EdgeRule rule{basis.index_of(stable[0]),
                parse_word(basis, j.at("edge_word").get<std::string>())};
  Automorphism marking = Automorphism::identity(basis);
  if (j.contains("marking")) {
    std::vector<Word> im, inv;
    const auto& jm = j.at("marking");
    for (int i = 0; i < basis.rank(); ++i) {
      std::string letter(1, basis.letter(i));
      im.push_back(parse_word(basis, jm.at("images").at(letter).get<std::string>()));
      inv.push_back(
          parse_word(basis, jm.at("inverse_images").at(letter).get<std::string>()));
    }
    marking = Automorphism(basis, im, inv, "loaded");
  }
  return Curve{SplittingPresentation(basis, {rule}), marking};
}

std::vector<ConjClass> load_classes(const Basis& basis, const std::string& spec) {
  if (spec == "default") return default_test_classes(basis, 4, 64, 0);
  if (spec == "convergence") return convergence_test_classes(basis);
  std::vector<ConjClass> out;
  std::string text = slurp(spec);
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    out.emplace_back(parse_word(basis, line));
  }
  return out;
}

int cmd_intersect(const std::string& basis_str, const std::string& left,
                  const std::string& right) {
  Basis basis(basis_str);
  std::vector<Word> lg, rg;
  for (const auto& s : split_csv(left)) lg.push_back(parse_word(basis, s));
  for (const auto& s : split_csv(right)) rg.push_back(parse_word(basis, s));
  SubgroupGraph h = SubgroupGraph::fold(basis, lg);
  SubgroupGraph k = SubgroupGraph::fold(basis, rg);
  IntersectionReport rep = intersect_conjugates(basis, h, k);
  ordered_json out;
  out["components"] = rep.components.size();
  ordered_json comps = ordered_json::array();
  for (const auto& c : rep.components) {
    ordered_json jc;
    jc["rank"] = c.graph.rank();
    std::string letters;
    for (int l : c.letters) letters.push_back(basis.letter(l));
    jc["letters"] = letters;
    comps.push_back(jc);
  }
  out["classes"] = comps;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_lengths(const std::string& curve_path, const std::string& words_csv) {
  Curve c = load_curve(curve_path);
  ordered_json out = ordered_json::array();
  for (const auto& s : split_csv(words_csv))
    out.push_back(translation_length(c, ConjClass(parse_word(c.pres.basis(), s))));
  std::cout << out.dump() << "\n";
  return 0;
}

int cmd_twist_lab(const std::string& moving, const std::string& source,
                  const std::string& target, const std::string& test_spec,
                  int k_max, const std::string& tol_str) {
  Curve s = load_curve(moving);
  Curve src = load_curve(source);
  Curve tgt = load_curve(target);
  std::vector<ConjClass> test = load_classes(s.pres.basis(), test_spec);
  Rational tol = Rational::parse(tol_str);
  ConvergenceTrace trace = twist_converge(s, twist_of(src), tgt, test, k_max, tol);
  ordered_json out;
  ordered_json tr = ordered_json::array();
  for (std::size_t k = 0; k < trace.distances.size(); ++k)
    tr.push_back(ordered_json::array({k, trace.distances[k].str()}));
  out["trace"] = tr;
  out["converged"] = trace.k_found.has_value();
  if (trace.k_found) out["k_found"] = *trace.k_found;
  std::cout << out.dump(2) << "\n";
  return trace.k_found ? 0 : 1;
}

int cmd_resolve(const std::string& curve_path, int n) {
  Curve c = load_curve(curve_path);
  Decomposition d = imanishi_decompose(induce_system(c, n));
  ordered_json out;
  ordered_json fams = ordered_json::array();
  for (const Family& f : d.families)
    fams.push_back(ordered_json{{"width", f.width},
                                {"annular", f.annular},
                                {"leaf_count", f.leaf_count}});
  out["families"] = fams;
  out["singular_count"] = d.singular_count;
  out["chart_volume"] = d.chart_volume;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_construct(const std::string& config_path, const std::string& out_path,
                  int stage, const std::string& state_path,
                  const std::string& state_out) {
  PipelineConfig cfg =
      config_path.empty() ? PipelineConfig{} : load_config(config_path);
  std::optional<PipelineState> resume;
  Basis basis = standard_pair(cfg.rank).basis;
  if (stage > 0) {
    if (state_path.empty())
      throw std::runtime_error("--stage needs --state with a serialized state");
    resume = deserialize_state(slurp(state_path), basis);
    resume->k = stage;
  }
  RunResult res = run_construction(cfg, resume);
  if (out_path.empty()) {
    std::cout << res.report_json;
  } else {
    std::ofstream out(out_path);
    out << res.report_json;
  }
  if (!state_out.empty()) {
    std::ofstream out(state_out);
    out << serialize_state(res.final_state, basis);
  }
  return res.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact certificates for one-edge splitting constructions"};
  app.require_subcommand(1);

  auto* intersect = app.add_subcommand("intersect", "intersection classes of two subgroups");
  std::string basis_str = "awtv", left, right;
  intersect->add_option("--basis", basis_str, "ordered basis letters");
  intersect->add_option("--left", left, "comma separated generators")->required();
  intersect->add_option("--right", right, "comma separated generators")->required();

  auto* lengths = app.add_subcommand("lengths", "translation lengths of conjugacy classes");
  std::string curve_path, words_csv;
  lengths->add_option("--curve", curve_path, "curve spec JSON")->required();
  lengths->add_option("--words", words_csv, "comma separated words")->required();

  auto* twistlab = app.add_subcommand("twist-lab", "twist convergence trace");
  std::string moving, source, target, test_spec = "default", tol_str = "1/1000";
  int k_max = 200;
  twistlab->add_option("--moving", moving, "curve being twisted")->required();
  twistlab->add_option("--twist-source", source, "curve whose twist is used")->required();
  twistlab->add_option("--target", target, "target curve")->required();
  twistlab->add_option("--test-set", test_spec, "default|convergence|path to word list");
  twistlab->add_option("--k-max", k_max, "iteration budget");
  twistlab->add_option("--tol", tol_str, "tolerance (rational)");

  auto* resolve = app.add_subcommand("resolve", "chart decomposition at a scale");
  std::string rcurve;
  int scale = 1;
  resolve->add_option("--curve", rcurve, "curve spec JSON")->required();
  resolve->add_option("--scale", scale, "ball radius")->required();

  auto* construct = app.add_subcommand("construct", "run the staged construction");
  std::string config_path, out_path, state_path, state_out;
  int stage = 0;
  construct->add_option("--config", config_path, "config file");
  construct->add_option("--out", out_path, "report output path");
  construct->add_option("--stage", stage, "resume after this stage index");
  construct->add_option("--state", state_path, "serialized state to resume from");
  construct->add_option("--state-out", state_out, "write the final state here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*intersect) return cmd_intersect(basis_str, left, right);
    if (*lengths) return cmd_lengths(curve_path, words_csv);
    if (*twistlab)
      return cmd_twist_lab(moving, source, target, test_spec, k_max, tol_str);
    if (*resolve) return cmd_resolve(rcurve, scale);
    if (*construct)
      return cmd_construct(config_path, out_path, stage, state_path, state_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
