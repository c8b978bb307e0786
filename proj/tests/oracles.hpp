#pragma once

// Test-only oracles. These deliberately avoid the production Britton engine:
// crossing counts are computed by a stack scan whose pinch tests go through
// Stallings membership graphs and whose replacements splice literal words,
// and translation lengths come from the distance difference d(x, g^2 x) -
// d(x, g x) on the tree.

#include <numeric>
#include <set>
#include <vector>

#include "treesmith/splittings.hpp"
#include "treesmith/stallings.hpp"
#include "treesmith/words.hpp"

namespace treesmith::testing {

class BassSerreOracle {
 public:
  explicit BassSerreOracle(const SplittingPresentation& pres)
      : basis_(pres.basis()) {
    for (const EdgeRule& r : pres.rules()) {
      Rule rule;
      rule.stable = r.stable_index;
      rule.edge_in = SubgroupGraph::fold(basis_, {r.edge_word});
      Lit s = make_lit(r.stable_index, false);
      std::vector<Lit> raw;
      raw.push_back(lit_inverse(s));
      raw.insert(raw.end(), r.edge_word.lits().begin(), r.edge_word.lits().end());
      raw.push_back(s);
      rule.edge_out = SubgroupGraph::fold(basis_, {reduce(raw)});
      rules_.push_back(std::move(rule));
    }
  }

  // Edge-crossing count of the geodesic from the base vertex to g * base.
  std::int64_t distance(const Word& g) const {
    std::vector<std::pair<Lit, Word>> stack;  // (stable letter, chunk before it)
    Word cur;
    for (Lit l : g.lits()) {
      const Rule* rule = rule_of(l);
      if (!rule) {
        cur = concat(cur, Word::from_reduced({l}));
        continue;
      }
      if (!stack.empty() && stack.back().first == lit_inverse(l)) {
        Lit prev = stack.back().first;
        const SubgroupGraph& member =
            lit_is_inverse(prev) ? rule->edge_in : rule->edge_out;
        if (member.contains(cur)) {
          Word merged = stack.back().second;
          merged = concat(merged, Word::from_reduced({prev}));
          merged = concat(merged, cur);
          merged = concat(merged, Word::from_reduced({l}));
          stack.pop_back();
          cur = merged;
          continue;
        }
      }
      stack.emplace_back(l, cur);
      cur = Word();
    }
    return static_cast<std::int64_t>(stack.size());
  }

  std::int64_t translation_length(const Word& g) const {
    std::int64_t d1 = distance(g);
    std::int64_t d2 = distance(concat(g, g));
    return d2 - d1 > 0 ? d2 - d1 : 0;
  }

 private:
  struct Rule {
    int stable;
    SubgroupGraph edge_in;   // <w>
    SubgroupGraph edge_out;  // <s^-1 w s>
  };
  const Rule* rule_of(Lit l) const {
    for (const Rule& r : rules_)
      if (lit_index(l) == r.stable) return &r;
    return nullptr;
  }
  Basis basis_;
  std::vector<Rule> rules_;
};

// All freely reduced products of at most `factors` generators.
inline std::set<Word> subgroup_ball(const std::vector<Word>& gens, int factors) {
  std::set<Word> out;
  out.insert(Word());
  std::vector<Word> layer = {Word()};
  for (int i = 0; i < factors; ++i) {
    std::vector<Word> next;
    for (const Word& w : layer) {
      for (const Word& g : gens) {
        next.push_back(concat(w, g));
        next.push_back(concat(w, inverse(g)));
      }
    }
    for (const Word& w : next) out.insert(w);
    layer = std::move(next);
  }
  return out;
}

// gcd of the abelianized exponent vector; a primitive element must have 1.
inline int abelian_gcd(const Basis& basis, const Word& w) {
  std::vector<int> e(static_cast<std::size_t>(basis.rank()), 0);
  for (Lit l : w.lits()) e[static_cast<std::size_t>(lit_index(l))] += lit_is_inverse(l) ? -1 : 1;
  int g = 0;
  for (int x : e) g = std::gcd(g, x < 0 ? -x : x);
  return g;
}

}  // namespace treesmith::testing
