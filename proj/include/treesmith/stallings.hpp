#pragma once

#include <set>
#include <string>
#include <vector>

#include "treesmith/words.hpp"

namespace treesmith {

// Folded core graph of a finitely generated subgroup. Folded means the
// labeled transitions are deterministic in both directions, so the graph is
// stored as a partial transition table: step(v, lit) follows the edge labeled
// lit out of v (traversing label-x edges forward on x and backward on X).
class SubgroupGraph {
 public:
  SubgroupGraph() = default;

  int vertex_count() const { return static_cast<int>(next_.size()); }
  int basepoint() const { return basepoint_; }
  int degree() const { return deg_; }
  // -1 when no transition
  int step(int v, Lit l) const { return next_[static_cast<std::size_t>(v)][static_cast<std::size_t>(l)]; }
  // Positive-letter edge count (each geometric edge counted once).
  int edge_count() const;
  int rank() const { return edge_count() - vertex_count() + 1; }

  bool contains(const Word& w) const;

  // Letters (generator indices) appearing on some edge.
  std::set<int> letters_seen() const;

  // Canonical serialization; with based=false the result is independent of
  // the basepoint (minimum over all starting vertices), which identifies
  // graphs up to label-preserving isomorphism and subgroups up to conjugacy.
  std::string canonical_string(bool based) const;

  static SubgroupGraph fold(const Basis& basis, const std::vector<Word>& generators);

 private:
  std::vector<std::vector<int>> next_;  // next_[v][lit], -1 absent
  int basepoint_ = 0;
  int deg_ = 0;  // 2 * rank of ambient basis

  friend SubgroupGraph build_from_table(std::vector<std::vector<int>> next, int bp, int deg);
};

struct IntersectionComponent {
  SubgroupGraph graph;          // folded core, basepoint at an arbitrary vertex
  std::set<int> letters;       // generator indices on its edges
  Word access_h;               // path in H from H's basepoint to the anchor
  Word access_k;               // path in K from K's basepoint to the anchor
  std::vector<Word> loop_words;  // basis of the component's loops at the anchor
};

struct IntersectionReport {
  std::vector<IntersectionComponent> components;
  bool empty() const { return components.empty(); }
};

IntersectionReport intersect_conjugates(const Basis& basis, const SubgroupGraph& h,
                                        const SubgroupGraph& k);

// True iff no intersection class lies inside the subfactor spanned by the
// given letters: every component must see a letter outside the set.
bool avoids_subfactor(const IntersectionReport& report,
                      const std::set<int>& subfactor_letters);

}  // namespace treesmith
