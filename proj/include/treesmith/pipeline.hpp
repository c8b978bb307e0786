#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treesmith/rational.hpp"
#include "treesmith/resolution.hpp"
#include "treesmith/splittings.hpp"
#include "treesmith/stallings.hpp"
#include "treesmith/twistlab.hpp"

namespace treesmith {

struct PipelineConfig {
  int rank = 4;
  std::string edge_word = "a";
  int depth_K = 3;
  int factor_budget = 1;
  int test_len_cap = 6;  // stage test classes have length <= min(k+4, cap)
  int k_max = 200;       // twist power budget per parking run
  Rational tol{1, 1000};
  Rational radius0{1, 4};
  Rational radius_ratio{1, 2};
  int random_u_len = 32;
  std::uint64_t seed = 1;
  int expansion_budget = 8;  // power search bound for the expansion map
  int parking_rounds = 8;    // alternating re-parking bound per stage

  void validate() const;
};

PipelineConfig parse_config(const std::string& text);
PipelineConfig load_config(const std::string& path);

// Free factor given by construction: the image of a proper subset of the
// basis under a recorded automorphism.
struct FactorSpec {
  std::vector<Word> generators;
  std::string provenance;
  SubgroupGraph graph;
};

std::vector<FactorSpec> enumerate_factors(const Basis& basis, int budget,
                                          std::uint64_t seed);

// Shared pipeline state: one marking carried by T, T' and the refinement, so
// every stage pair is disjoint by construction and certified by evaluation.
struct PipelineState {
  int k = 0;
  Automorphism marking;
  std::vector<FactorSpec> processed;
};

struct StageCertificate {
  int k = 0;
  std::vector<std::string> factor_generators;
  int freeness_components = 0;
  bool freeness_pass = false;
  std::vector<std::int64_t> disjoint_residuals;
  bool disjoint_pass = false;
  bool eta_zero = false;
  std::vector<std::pair<int, int>> widths;  // (scale, min non-annular width)
  bool widths_pass = false;
  Rational nesting_distance;
  Rational r_new, r_old;
  bool nesting_pass = false;
  std::vector<int> twist_powers;
  int expansion_power = 0;
  bool pass = false;
  std::string failure;
};

// Execution context for one stage: base pair, fixed expansion maps, the
// previous neighborhoods and the radius schedule.
struct RunContext {
  PipelineConfig cfg;
  StandardPair pair;
  SubgroupGraph v_graph, vp_graph;
  Automorphism expansion, expansion_prime;
  std::vector<ConjClass> prev_test;
  std::vector<Rational> prev_center_t, prev_center_tp;
  Automorphism ref_marking;  // marking at stage entry (neighborhood centers)
  Rational gap;              // r_old - r_new, the parking target
  int scale = 1;             // stage index
};

struct StepReport {
  bool ok = false;
  std::vector<int> twist_powers;
  int expansion_power = 0;
  std::string failure;
};

// The arational pass for one factor: steps 0-3 on each side with an
// expansion power search, then alternating re-parking into the previous
// neighborhoods. Verifies emptiness for the factor and everything already
// processed before committing.
StepReport force_arational_step(const RunContext& ctx, PipelineState& state,
                                const FactorSpec& factor);

// The non-geometric pass at the given scale: long random stable-letter
// replacements plus an expansion power on each side, re-parked and verified
// (stabilized edge scale beyond the stage scale, positive non-annular
// widths, factor emptiness preserved).
StepReport force_nongeometric_step(const RunContext& ctx, PipelineState& state,
                                   int scale,
                                   std::vector<std::pair<int, int>>* widths_out);

struct RunResult {
  std::vector<StageCertificate> certificates;
  bool all_pass = false;
  std::string report_json;
  PipelineState final_state;
  std::vector<PipelineState> stage_states;  // state after each completed stage
};

RunResult run_construction(const PipelineConfig& cfg);
RunResult run_construction(const PipelineConfig& cfg,
                           const std::optional<PipelineState>& resume);

std::string serialize_state(const PipelineState& state, const Basis& basis);
PipelineState deserialize_state(const std::string& text, const Basis& basis);

// Deterministic nested stage test sets (cumulative under the class cap).
std::vector<std::vector<ConjClass>> stage_test_sets(const Basis& basis,
                                                    const PipelineConfig& cfg);

}  // namespace treesmith
