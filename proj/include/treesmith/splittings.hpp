#pragma once

#include <cstdint>
#include <vector>

#include "treesmith/automorphism.hpp"
#include "treesmith/words.hpp"

namespace treesmith {

// One loop edge of a graph-of-groups presentation: a stable letter s and the
// edge word w (over the non-stable letters). The relation s^-1 w s = W
// introduces a formal vertex-group letter W per rule; vertex-group elements
// are written over basis letters plus these formal letters.
struct EdgeRule {
  int stable_index = -1;  // basis letter index
  Word edge_word;         // cyclically reduced, avoids every stable letter
};

// Extended words: basis lits occupy 0..2N-1, the formal letter of rule i
// occupies 2N+2i (and its inverse 2N+2i+1).
using ExtWord = std::vector<int>;

class SplittingPresentation {
 public:
  SplittingPresentation() = default;
  SplittingPresentation(Basis basis, std::vector<EdgeRule> rules);

  const Basis& basis() const { return basis_; }
  const std::vector<EdgeRule>& rules() const { return rules_; }
  int formal_lit(int rule, bool inv) const {
    return 2 * basis_.rank() + 2 * rule + (inv ? 1 : 0);
  }
  bool is_stable_lit(int lit) const;
  int rule_of_stable(int lit) const;  // -1 if not stable
  bool is_formal_lit(int lit) const { return lit >= 2 * basis_.rank(); }

  ExtWord to_ext(const Word& w) const;
  Word ext_to_base(const ExtWord& e) const;  // expands formal letters

  // Linear Britton reduction: replaces pinches s^-1 u s (u a power of the
  // edge word) by formal powers and s u s^-1 (u a formal power) by edge-word
  // powers, until none remain.
  ExtWord britton_linear(const ExtWord& e) const;
  ExtWord britton_linear(const Word& w) const { return britton_linear(to_ext(w)); }

  // Stable-letter count of the fully (cyclically) Britton-reduced form: the
  // translation length on the corresponding tree.
  std::int64_t stable_count(const ExtWord& e) const;
  std::int64_t cyclic_reduced_count(const Word& w) const;

  // True iff w is elliptic at the base vertex (reduces to a vertex word).
  bool in_vertex_group(const Word& w) const;

 private:
  Basis basis_;
  std::vector<EdgeRule> rules_;
};

ExtWord ext_reduce(const ExtWord& raw);
ExtWord ext_concat(const ExtWord& a, const ExtWord& b);
ExtWord ext_inverse(const ExtWord& a);

// A curve: one-edge splitting with a marking. Lengths of a marked curve are
// computed by pushing words through the marking into base coordinates.
struct Curve {
  SplittingPresentation pres;
  Automorphism marking;
};

struct TwoEdgeRefinement {
  SplittingPresentation pres;  // two rules
  Automorphism marking;
};

// Standard disjoint pair in rank N >= 4 over the basis a..., w, t, v:
// T has stable letter t and edge word w_T (default: the first letter),
// T' has stable letter v and edge word the letter w. Both collapse from the
// one-vertex two-loop refinement Y.
struct StandardPair {
  Basis basis;
  Curve t_curve;
  Curve t_prime;
  TwoEdgeRefinement refinement;
};
StandardPair standard_pair(int rank);
StandardPair standard_pair(int rank, const Word& edge_word);

std::int64_t translation_length(const Curve& c, const ConjClass& g);
std::int64_t translation_length(const TwoEdgeRefinement& y, const ConjClass& g);

struct LengthVector {
  std::vector<ConjClass> test_set;
  std::vector<std::int64_t> values;
};
LengthVector length_vector(const Curve& c, const std::vector<ConjClass>& test_set);

Curve collapse(const TwoEdgeRefinement& y, int which);  // which in {1, 2}

struct DisjointnessCertificate {
  std::vector<std::int64_t> residuals;  // l_Y - l_T - l_T' per word
  bool pass = false;
};
DisjointnessCertificate disjointness_certificate(const Curve& t, const Curve& tp,
                                                 const TwoEdgeRefinement& y,
                                                 const std::vector<ConjClass>& test);

// Kapovich–Lustig pairing of the curve with the counting current of g.
std::int64_t counting_current_intersection(const Curve& c, const ConjClass& g);

// The edge word of the marked curve as an element of the ambient group.
Word marked_edge_word(const Curve& c);
Word marked_stable_conjugate(const Curve& c);  // marked pullback of s^-1 w s

}  // namespace treesmith
