#pragma once

#include <map>
#include <optional>
#include <vector>

#include "treesmith/rational.hpp"
#include "treesmith/splittings.hpp"

namespace treesmith {

// Finite convex hull of the ball orbit of the base vertex in the tree of a
// curve. Vertices are cosets of the vertex group; the hull is stored as a
// rooted tree with canonical coset representatives.
class Chart {
 public:
  int vertex_count() const { return static_cast<int>(parent_.size()); }
  int basepoint() const { return 0; }
  int parent(int v) const { return parent_[static_cast<std::size_t>(v)]; }
  int depth(int v) const { return depth_[static_cast<std::size_t>(v)]; }
  int radius() const { return radius_; }
  int edge_count() const { return vertex_count() - 1; }
  int degree(int v) const { return degree_[static_cast<std::size_t>(v)]; }

  // Ball element -> marked vertex, in ball enumeration order.
  const std::vector<int>& orbit_marks() const { return orbit_marks_; }
  // Least ball witness of a vertex, if any (every marked vertex has one).
  const std::optional<Word>& witness(int v) const {
    return witness_[static_cast<std::size_t>(v)];
  }

  int tree_distance(int u, int v) const;

 private:
  std::vector<int> parent_;  // parent_[0] = -1
  std::vector<int> depth_;
  std::vector<int> degree_;
  std::vector<std::optional<Word>> witness_;
  std::vector<int> orbit_marks_;
  int radius_ = 0;
  friend class ChartBuilder;
};

// Partial simplicial isometry on a chart: the restriction of one basis
// letter's action to the witnessed part of the chart. Domain is the span
// (minimal subtree) of the witnessed vertices.
struct PartialMap {
  std::vector<int> span;            // sorted domain vertices
  std::map<int, int> vertex_image;  // defined on span
  bool defined_on(int v) const { return vertex_image.count(v) != 0; }
};

// A finite tree with unit edges plus partial simplicial isometries, the
// input of the decomposition. Charts produce one; tests may build synthetic
// systems directly.
struct IntervalSystem {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;  // tree edges
  std::vector<int> degree;                 // derived from edges when empty
  std::vector<PartialMap> maps;            // closed under inverses
};

struct PartialIsometrySystem {
  Chart chart;
  std::vector<PartialMap> maps;  // indexed by lit (2N entries)
  IntervalSystem as_interval_system() const;
};

struct Family {
  std::vector<int> representative_arc;  // edge ids of one component
  int width = 0;                        // arc length in unit edges
  bool annular = false;
  int leaf_count = 0;                    // number of arcs in the orbit
  std::vector<int> itinerary;            // lits of the orbit BFS tree edges
};

struct Decomposition {
  std::vector<Family> families;
  int singular_count = 0;
  std::int64_t covered_volume = 0;  // sum of width * leaf_count
  std::int64_t chart_volume = 0;    // total edge count
};

Chart build_chart(const Curve& t, int n);
PartialIsometrySystem induce_system(const Curve& t, int n);

Decomposition imanishi_decompose(const IntervalSystem& system,
                                 int orbit_cap = 1 << 20);
Decomposition imanishi_decompose(const PartialIsometrySystem& system,
                                 int orbit_cap = 1 << 20);

std::optional<int> min_nonannular_width(const Decomposition& d);

// Least ball radius at which the stabilized edge of the splitting becomes
// visible: the word lengths of the marked edge word and of the marked
// stable-letter conjugate of it.
int stabilized_edge_scale(const Curve& t);

struct StabilityReport {
  std::optional<int> width_a;
  std::optional<int> width_b;
  bool pass = false;  // width_b >= width_a - eps where both exist
  Rational distance; // projective test distance of the two curves
};
StabilityReport stability_probe(const Curve& a, const Curve& b, int n,
                                const Rational& eps);

}  // namespace treesmith
