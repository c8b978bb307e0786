#include "treesmith/resolution.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

#include "treesmith/stallings.hpp"
#include "treesmith/twistlab.hpp"

namespace treesmith {

int Chart::tree_distance(int u, int v) const {
  int d = 0;
  while (u != v) {
    if (depth(u) < depth(v)) std::swap(u, v);
    u = parent(u);
    ++d;
  }
  return d;
}

// Rooted hull of the ball orbit of the base vertex, with canonical coset
// representatives per node. Nodes are cosets of the vertex group; a child
// key is the crossing direction plus the canonical coset of the approach.
class ChartBuilder {
 public:
  struct Node {
    ExtWord rep;
    int parent = -1;
    int depth = 0;
    std::map<std::pair<int, ExtWord>, int> children;
  };

  ChartBuilder(const Curve& t, int n)
      : curve_(t), pres_(t.pres), edge_ext_(pres_.to_ext(pres_.rules()[0].edge_word)) {
    if (pres_.rules().size() != 1)
      throw std::invalid_argument("charts are built over one-edge splittings");
    nodes_.push_back(Node{});
    witness_.push_back(std::nullopt);
    ball_words_ = ball(pres_.basis(), n);
    for (const Word& g : ball_words_) {
      int v = walk(curve_.marking.apply(g), true);
      marks_.push_back(v);
      if (!witness_[static_cast<std::size_t>(v)]) witness_[static_cast<std::size_t>(v)] = g;
    }
    radius_ = n;
  }

  // Walks a base-coordinates group element from the root; returns the vertex
  // of its coset, or -1 when absent and create is false.
  int walk(const Word& h, bool create) {
    ExtWord e = pres_.britton_linear(h);
    std::vector<ExtWord> chunks;
    std::vector<int> stables;
    ExtWord cur;
    for (int l : e) {
      if (pres_.is_stable_lit(l)) {
        chunks.push_back(cur);
        cur.clear();
        stables.push_back(l);
      } else {
        cur.push_back(l);
      }
    }
    chunks.push_back(cur);
    int node = 0;
    ExtWord rel = chunks[0];
    for (std::size_t i = 0; i < stables.size(); ++i) {
      int sl = stables[i];
      bool inv = lit_is_inverse(sl);
      auto [vh, k] = coset_canonical(rel, inv);
      auto key = std::make_pair(sl, vh);
      auto it = nodes_[static_cast<std::size_t>(node)].children.find(key);
      int child;
      if (it != nodes_[static_cast<std::size_t>(node)].children.end()) {
        child = it->second;
      } else {
        if (!create) return -1;
        Node nn;
        ExtWord rep = nodes_[static_cast<std::size_t>(node)].rep;
        rep = ext_concat(rep, vh);
        rep.push_back(sl);
        nn.rep = ext_reduce(rep);
        nn.parent = node;
        nn.depth = nodes_[static_cast<std::size_t>(node)].depth + 1;
        child = static_cast<int>(nodes_.size());
        nodes_[static_cast<std::size_t>(node)].children[key] = child;
        nodes_.push_back(std::move(nn));
        witness_.push_back(std::nullopt);
      }
      node = child;
      ExtWord next_rel;
      if (!inv) {
        // rel = vh * w^k, so the carried part becomes the formal power W^k.
        int flit = pres_.formal_lit(0, k < 0);
        for (int c = 0; c < (k < 0 ? -k : k); ++c) next_rel.push_back(flit);
      } else {
        next_rel = pres_.to_ext(power(pres_.rules()[0].edge_word, k));
      }
      rel = ext_concat(next_rel, chunks[i + 1]);
    }
    return node;
  }

  Word rep_base(int v) const {
    return pres_.ext_to_base(nodes_[static_cast<std::size_t>(v)].rep);
  }

  Chart to_chart() const {
    Chart c;
    c.parent_.resize(nodes_.size());
    c.depth_.resize(nodes_.size());
    c.degree_.assign(nodes_.size(), 0);
    c.witness_ = witness_;
    c.orbit_marks_ = marks_;
    c.radius_ = radius_;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      c.parent_[i] = nodes_[i].parent;
      c.depth_[i] = nodes_[i].depth;
      if (nodes_[i].parent >= 0) {
        ++c.degree_[i];
        ++c.degree_[static_cast<std::size_t>(nodes_[i].parent)];
      }
    }
    return c;
  }

  const Curve& curve_;
  const SplittingPresentation& pres_;
  ExtWord edge_ext_;
  std::vector<Node> nodes_;
  std::vector<std::optional<Word>> witness_;
  std::vector<int> marks_;
  std::vector<Word> ball_words_;
  int radius_ = 0;

 private:
  // Canonical representative of rel modulo the edge group on the right:
  // the incoming side quotients by powers of the edge word (least length,
  // then lex), the outgoing side strips trailing formal letters.
  std::pair<ExtWord, int> coset_canonical(const ExtWord& rel, bool inv) const {
    if (inv) {
      int flit = pres_.formal_lit(0, false);
      std::size_t end = rel.size();
      int k = 0;
      while (end > 0) {
        int l = rel[end - 1];
        if (l == flit && k >= 0) {
          ++k;
          --end;
        } else if (l == (flit ^ 1) && k <= 0) {
          --k;
          --end;
        } else {
          break;
        }
      }
      return {ExtWord(rel.begin(), rel.begin() + static_cast<long>(end)), k};
    }
    int wl = static_cast<int>(edge_ext_.size());
    int bound = 2 * static_cast<int>(rel.size()) / wl + 2;
    ExtWord best = rel;
    int bestj = 0;
    ExtWord winv = ext_inverse(edge_ext_);
    ExtWord fwd = rel, bwd = rel;
    for (int j = 1; j <= bound; ++j) {
      fwd = ext_concat(fwd, edge_ext_);
      if (fwd.size() < best.size() || (fwd.size() == best.size() && fwd < best)) {
        best = fwd;
        bestj = j;
      }
      bwd = ext_concat(bwd, winv);
      if (bwd.size() < best.size() || (bwd.size() == best.size() && bwd < best)) {
        best = bwd;
        bestj = -j;
      }
    }
    return {best, -bestj};
  }
};

Chart build_chart(const Curve& t, int n) {
  if (n < 0) throw std::invalid_argument("radius must be nonnegative");
  return ChartBuilder(t, n).to_chart();
}

namespace {

std::vector<int> span_of(const ChartBuilder& cb, const std::vector<int>& verts) {
  if (verts.empty()) return {};
  std::set<int> span;
  int anchor = verts[0];
  for (int v : verts) {
    // path v .. anchor through ancestors
    int a = v, b = anchor;
    std::vector<int> pa, pb;
    while (a != b) {
      if (cb.nodes_[static_cast<std::size_t>(a)].depth <
          cb.nodes_[static_cast<std::size_t>(b)].depth) {
        pb.push_back(b);
        b = cb.nodes_[static_cast<std::size_t>(b)].parent;
      } else {
        pa.push_back(a);
        a = cb.nodes_[static_cast<std::size_t>(a)].parent;
      }
    }
    pa.push_back(a);
    for (int x : pa) span.insert(x);
    for (int x : pb) span.insert(x);
  }
  return std::vector<int>(span.begin(), span.end());
}

}  // namespace

PartialIsometrySystem induce_system(const Curve& t, int n) {
  ChartBuilder cb(t, n);
  const Basis& basis = t.pres.basis();

  // Scale-n visible part of the vertex group.
  std::vector<Word> vgens;
  for (const Word& g : cb.ball_words_) {
    Word h = t.marking.apply(g);
    if (!h.empty() && t.pres.in_vertex_group(h)) vgens.push_back(h);
  }
  SubgroupGraph visible = SubgroupGraph::fold(basis, vgens);

  PartialIsometrySystem sys;
  sys.maps.resize(static_cast<std::size_t>(2 * basis.rank()));
  for (int lit = 0; lit < 2 * basis.rank(); ++lit) {
    Word bw = t.marking.apply(
        Word::from_reduced({static_cast<Lit>(lit)}));
    std::vector<int> witnessed;
    std::map<int, int> image;
    for (int v = 0; v < static_cast<int>(cb.nodes_.size()); ++v) {
      const auto& wv = cb.witness_[static_cast<std::size_t>(v)];
      if (!wv) continue;
      int q = cb.walk(concat(bw, cb.rep_base(v)), false);
      if (q < 0) continue;
      const auto& wq = cb.witness_[static_cast<std::size_t>(q)];
      if (!wq) continue;
      // Visibility of the germ identification: the correction between the
      // canonical witnesses must lie in the ball-generated vertex group.
      Word c = concat(inverse(t.marking.apply(*wq)), concat(bw, t.marking.apply(*wv)));
      if (!visible.contains(c)) continue;
      witnessed.push_back(v);
      image[v] = q;
    }
    std::vector<int> span = span_of(cb, witnessed);
    for (int u : span) {
      if (image.count(u)) continue;
      int q = cb.walk(concat(bw, cb.rep_base(u)), false);
      if (q < 0) throw std::logic_error("span image escaped the chart");
      image[u] = q;
    }
    sys.maps[static_cast<std::size_t>(lit)] = PartialMap{std::move(span), std::move(image)};
  }
  sys.chart = cb.to_chart();
  return sys;
}

IntervalSystem PartialIsometrySystem::as_interval_system() const {
  IntervalSystem is;
  is.vertex_count = chart.vertex_count();
  for (int v = 1; v < chart.vertex_count(); ++v)
    is.edges.emplace_back(v, chart.parent(v));
  is.maps = maps;
  return is;
}

namespace {

struct Arc {
  std::vector<int> verts;  // ordered along the arc
  std::vector<int> edges;  // edge ids, edges.size() = verts.size() - 1
};

}  // namespace

Decomposition imanishi_decompose(const IntervalSystem& system, int orbit_cap) {
  const int nv = system.vertex_count;
  const int ne = static_cast<int>(system.edges.size());
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(nv));
  for (int e = 0; e < ne; ++e) {
    auto [a, b] = system.edges[static_cast<std::size_t>(e)];
    adj[static_cast<std::size_t>(a)].push_back({e, b});
    adj[static_cast<std::size_t>(b)].push_back({e, a});
  }

  // Singular seeds: vertices of tree degree != 2, and the extremal points of
  // every domain span (span vertices with at most one span neighbor).
  std::vector<bool> singular(static_cast<std::size_t>(nv), false);
  for (int v = 0; v < nv; ++v)
    if (adj[static_cast<std::size_t>(v)].size() != 2) singular[static_cast<std::size_t>(v)] = true;
  for (const PartialMap& m : system.maps) {
    std::set<int> span(m.span.begin(), m.span.end());
    for (int v : m.span) {
      int sd = 0;
      for (auto [e, u] : adj[static_cast<std::size_t>(v)])
        if (span.count(u)) ++sd;
      if (sd <= 1) singular[static_cast<std::size_t>(v)] = true;
    }
  }
  // Orbit closure of the singular set under the pseudo-group.
  {
    std::queue<int> q;
    for (int v = 0; v < nv; ++v)
      if (singular[static_cast<std::size_t>(v)]) q.push(v);
    int steps = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      if (++steps > orbit_cap) throw std::runtime_error("orbit cap exceeded");
      for (const PartialMap& m : system.maps) {
        auto it = m.vertex_image.find(v);
        if (it == m.vertex_image.end()) continue;
        if (!singular[static_cast<std::size_t>(it->second)]) {
          singular[static_cast<std::size_t>(it->second)] = true;
          q.push(it->second);
        }
      }
    }
  }

  // Components of the complement: maximal arcs of edges glued at
  // non-singular (degree-2) vertices.
  std::vector<int> comp_of_edge(static_cast<std::size_t>(ne), -1);
  std::vector<Arc> arcs;
  for (int e0 = 0; e0 < ne; ++e0) {
    if (comp_of_edge[static_cast<std::size_t>(e0)] >= 0) continue;
    // Gather the arc through e0 by walking both ways across non-singular
    // vertices.
    std::vector<int> edges_in = {e0};
    auto [a0, b0] = system.edges[static_cast<std::size_t>(e0)];
    std::vector<int> verts = {a0, b0};
    auto extend = [&](bool front) {
      for (;;) {
        int tip = front ? verts.front() : verts.back();
        if (singular[static_cast<std::size_t>(tip)]) return;
        int cur_edge = front ? edges_in.front() : edges_in.back();
        int next_edge = -1, next_v = -1;
        for (auto [e, u] : adj[static_cast<std::size_t>(tip)]) {
          if (e != cur_edge) {
            next_edge = e;
            next_v = u;
          }
        }
        if (next_edge < 0) return;
        if (front) {
          edges_in.insert(edges_in.begin(), next_edge);
          verts.insert(verts.begin(), next_v);
        } else {
          edges_in.push_back(next_edge);
          verts.push_back(next_v);
        }
      }
    };
    extend(true);
    extend(false);
    // Canonical orientation: lesser endpoint first.
    if (verts.back() < verts.front()) {
      std::reverse(verts.begin(), verts.end());
      std::reverse(edges_in.begin(), edges_in.end());
    }
    int id = static_cast<int>(arcs.size());
    for (int e : edges_in) comp_of_edge[static_cast<std::size_t>(e)] = id;
    arcs.push_back(Arc{std::move(verts), std::move(edges_in)});
  }

  // Arc image under a map, or -1 when not wholly inside the span.
  auto arc_image = [&](int arc_id, const PartialMap& m) -> int {
    const Arc& a = arcs[static_cast<std::size_t>(arc_id)];
    for (int v : a.verts)
      if (!m.defined_on(v)) return -1;
    int w0 = m.vertex_image.at(a.verts[0]);
    int w1 = m.vertex_image.at(a.verts[1]);
    // Locate the image arc through the image of the first edge.
    int img = -1;
    for (auto [e, u] : adj[static_cast<std::size_t>(w0)]) {
      if (u == w1) {
        img = comp_of_edge[static_cast<std::size_t>(e)];
        break;
      }
    }
    if (img < 0) throw std::logic_error("arc image is not an edge path");
    const Arc& b = arcs[static_cast<std::size_t>(img)];
    if (b.verts.size() != a.verts.size())
      throw std::logic_error("arc image splits a component");
    return img;
  };

  Decomposition d;
  d.chart_volume = ne;
  d.singular_count = static_cast<int>(std::count(singular.begin(), singular.end(), true));

  std::vector<bool> seen(arcs.size(), false);
  for (int a0 = 0; a0 < static_cast<int>(arcs.size()); ++a0) {
    if (seen[static_cast<std::size_t>(a0)]) continue;
    // Orbit BFS.
    std::vector<int> orbit = {a0};
    seen[static_cast<std::size_t>(a0)] = true;
    std::set<std::tuple<int, int, int>> band_edges;  // canonical undirected
    std::vector<int> itinerary;
    for (std::size_t qi = 0; qi < orbit.size(); ++qi) {
      int c = orbit[qi];
      for (int lit = 0; lit < static_cast<int>(system.maps.size()); ++lit) {
        int img = arc_image(c, system.maps[static_cast<std::size_t>(lit)]);
        if (img < 0) continue;
        std::tuple<int, int, int> key =
            c < img ? std::make_tuple(c, img, lit)
                    : (c > img ? std::make_tuple(img, c, lit ^ 1)
                               : std::make_tuple(c, c, lit & ~1));
        band_edges.insert(key);
        if (!seen[static_cast<std::size_t>(img)]) {
          seen[static_cast<std::size_t>(img)] = true;
          orbit.push_back(img);
          itinerary.push_back(lit);
        }
      }
    }
    Family f;
    f.representative_arc = arcs[static_cast<std::size_t>(a0)].edges;
    f.width = static_cast<int>(f.representative_arc.size());
    f.leaf_count = static_cast<int>(orbit.size());
    // torsion-free holonomy: any nontrivial return closes leaves into
    // circles, so a cycle in the orbit graph means a pseudo-annulus.
    f.annular = band_edges.size() >= orbit.size();
    f.itinerary = std::move(itinerary);
    d.covered_volume += static_cast<std::int64_t>(f.width) * f.leaf_count;
    d.families.push_back(std::move(f));
  }
  if (d.covered_volume != d.chart_volume)
    throw std::logic_error("decomposition volume mismatch");
  return d;
}

Decomposition imanishi_decompose(const PartialIsometrySystem& system, int orbit_cap) {
  return imanishi_decompose(system.as_interval_system(), orbit_cap);
}

std::optional<int> min_nonannular_width(const Decomposition& d) {
  std::optional<int> best;
  for (const Family& f : d.families)
    if (!f.annular && (!best || f.width < *best)) best = f.width;
  return best;
}

int stabilized_edge_scale(const Curve& t) {
  int a = marked_edge_word(t).length();
  int b = marked_stable_conjugate(t).length();
  return std::max(a, b);
}

StabilityReport stability_probe(const Curve& a, const Curve& b, int n,
                                const Rational& eps) {
  StabilityReport r;
  Decomposition da = imanishi_decompose(induce_system(a, n));
  Decomposition db = imanishi_decompose(induce_system(b, n));
  r.width_a = min_nonannular_width(da);
  r.width_b = min_nonannular_width(db);
  if (r.width_a && r.width_b)
    r.pass = Rational(*r.width_b) >= Rational(*r.width_a) - eps;
  std::vector<ConjClass> test =
      default_test_classes(a.pres.basis(), 4, 64, 0);
  r.distance = projective_distance(length_vector(a, test), length_vector(b, test));
  return r;
}

}  // namespace treesmith
