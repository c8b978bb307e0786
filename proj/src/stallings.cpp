#include "treesmith/stallings.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>

namespace treesmith {

namespace {

// Union-find
struct Uf {
  std::vector<int> p;
  explicit Uf(int n) : p(static_cast<std::size_t>(n)) {
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  }
  int find(int x) {
    while (p[static_cast<std::size_t>(x)] != x) {
      p[static_cast<std::size_t>(x)] = p[static_cast<std::size_t>(p[static_cast<std::size_t>(x)])];
      x = p[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { p[static_cast<std::size_t>(find(a))] = find(b); }
};

struct RawEdge {
  int src, dst, letter;
};

// Fold a raw labeled graph, then trim to the core relative to the basepoint
// (if keep_base) or to the cyclic core (every vertex of degree >= 2).
// Returns the transition table plus the surviving-vertex map.
struct FoldResult {
  std::vector<std::vector<int>> next;
  int basepoint;
};

FoldResult fold_raw(int nv, const std::vector<RawEdge>& edges, int basepoint, int deg,
                    bool keep_base) {
  Uf uf(nv);
  std::vector<RawEdge> cur = edges;
  bool changed = true;
  while (changed) {
    changed = false;
    // Group edges by (source class, letter) and (target class, letter).
    std::map<std::pair<int, int>, int> by_src, by_dst;
    by_src.clear();
    by_dst.clear();
    for (const RawEdge& e : cur) {
      int s = uf.find(e.src), d = uf.find(e.dst);
      auto ks = std::make_pair(s, e.letter);
      auto it = by_src.find(ks);
      if (it == by_src.end()) {
        by_src[ks] = d;
      } else if (it->second != d) {
        uf.unite(it->second, d);
        changed = true;
        break;
      }
      auto kd = std::make_pair(d, e.letter);
      auto jt = by_dst.find(kd);
      if (jt == by_dst.end()) {
        by_dst[kd] = s;
      } else if (jt->second != s) {
        uf.unite(jt->second, s);
        changed = true;
        break;
      }
    }
  }
  // Compact vertex ids.
  std::map<int, int> id;
  for (int v = 0; v < nv; ++v) {
    int r = uf.find(v);
    if (!id.count(r)) id[r] = static_cast<int>(id.size());
  }
  std::vector<std::vector<int>> next(id.size(), std::vector<int>(static_cast<std::size_t>(deg), -1));
  for (const RawEdge& e : cur) {
    int s = id[uf.find(e.src)], d = id[uf.find(e.dst)];
    next[static_cast<std::size_t>(s)][static_cast<std::size_t>(make_lit(e.letter, false))] = d;
    next[static_cast<std::size_t>(d)][static_cast<std::size_t>(make_lit(e.letter, true))] = s;
  }
  int bp = id[uf.find(basepoint)];

  // Trim degree-1 vertices (never the basepoint when keep_base).
  std::vector<bool> dead(next.size(), false);
  bool trimmed = true;
  while (trimmed) {
    trimmed = false;
    for (std::size_t v = 0; v < next.size(); ++v) {
      if (dead[v]) continue;
      if (keep_base && static_cast<int>(v) == bp) continue;
      int d = 0;
      for (int l = 0; l < deg; ++l)
        if (next[v][static_cast<std::size_t>(l)] >= 0 &&
            !dead[static_cast<std::size_t>(next[v][static_cast<std::size_t>(l)])])
          ++d;
      if (d <= 1) {
        dead[v] = true;
        trimmed = true;
      }
    }
  }
  // If everything died (trivial subgroup), keep the basepoint alone.
  if (keep_base) dead[static_cast<std::size_t>(bp)] = false;

  std::map<int, int> id2;
  for (std::size_t v = 0; v < next.size(); ++v)
    if (!dead[v]) id2[static_cast<int>(v)] = static_cast<int>(id2.size());
  std::vector<std::vector<int>> out(id2.size(), std::vector<int>(static_cast<std::size_t>(deg), -1));
  for (std::size_t v = 0; v < next.size(); ++v) {
    if (dead[v]) continue;
    for (int l = 0; l < deg; ++l) {
      int w = next[v][static_cast<std::size_t>(l)];
      if (w >= 0 && !dead[static_cast<std::size_t>(w)])
        out[static_cast<std::size_t>(id2[static_cast<int>(v)])][static_cast<std::size_t>(l)] = id2[w];
    }
  }
  FoldResult r;
  r.next = std::move(out);
  r.basepoint = keep_base ? id2[bp] : 0;
  return r;
}

}  // namespace

SubgroupGraph build_from_table(std::vector<std::vector<int>> next, int bp, int deg) {
  SubgroupGraph g;
  g.next_ = std::move(next);
  g.basepoint_ = bp;
  g.deg_ = deg;
  return g;
}

int SubgroupGraph::edge_count() const {
  int c = 0;
  for (const auto& row : next_)
    for (int l = 0; l < deg_; l += 2)
      if (row[static_cast<std::size_t>(l)] >= 0) ++c;
  return c;
}

bool SubgroupGraph::contains(const Word& w) const {
  int v = basepoint_;
  for (Lit l : w.lits()) {
    if (l >= deg_) return false;
    v = step(v, l);
    if (v < 0) return false;
  }
  return v == basepoint_;
}

std::set<int> SubgroupGraph::letters_seen() const {
  std::set<int> out;
  for (const auto& row : next_)
    for (int l = 0; l < deg_; l += 2)
      if (row[static_cast<std::size_t>(l)] >= 0) out.insert(l >> 1);
  return out;
}

std::string SubgroupGraph::canonical_string(bool based) const {
  auto serialize_from = [&](int start) {
    // BFS relabeling from `start`; transitions explored in letter order give
    // a canonical id assignment for a connected folded graph.
    std::vector<int> id(next_.size(), -1);
    std::vector<int> order;
    id[static_cast<std::size_t>(start)] = 0;
    order.push_back(start);
    for (std::size_t qi = 0; qi < order.size(); ++qi) {
      int v = order[qi];
      for (int l = 0; l < deg_; ++l) {
        int w = step(v, l);
        if (w >= 0 && id[static_cast<std::size_t>(w)] < 0) {
          id[static_cast<std::size_t>(w)] = static_cast<int>(order.size());
          order.push_back(w);
        }
      }
    }
    std::string s;
    for (int v : order) {
      for (int l = 0; l < deg_; ++l) {
        int w = step(v, l);
        s += (w < 0 ? std::string("-") : std::to_string(id[static_cast<std::size_t>(w)]));
        s += ',';
      }
      s += ';';
    }
    return s;
  };
  if (based || next_.empty()) return serialize_from(basepoint_);
  std::string best;
  for (std::size_t v = 0; v < next_.size(); ++v) {
    std::string s = serialize_from(static_cast<int>(v));
    if (best.empty() || s < best) best = s;
  }
  return best;
}

SubgroupGraph SubgroupGraph::fold(const Basis& basis, const std::vector<Word>& generators) {
  const int deg = 2 * basis.rank();
  int nv = 1;
  std::vector<RawEdge> edges;
  for (const Word& g : generators) {
    int prev = 0;
    for (int i = 0; i < g.length(); ++i) {
      Lit l = g.at(i);
      int nextv = (i + 1 == g.length()) ? 0 : nv++;
      if (!lit_is_inverse(l)) {
        edges.push_back({prev, nextv, lit_index(l)});
      } else {
        edges.push_back({nextv, prev, lit_index(l)});
      }
      prev = nextv;
    }
  }
  FoldResult r = fold_raw(nv, edges, 0, deg, true);
  return build_from_table(std::move(r.next), r.basepoint, deg);
}

namespace {

// Connected components of the product graph whose vertices are pairs (u, v)
// with matching transitions.
struct ProductGraph {
  std::vector<std::pair<int, int>> verts;
  std::map<std::pair<int, int>, int> index;
  std::vector<std::vector<int>> next;  // [vid][lit]
  int deg;
};

ProductGraph fiber_product(const SubgroupGraph& h, const SubgroupGraph& k) {
  ProductGraph p;
  p.deg = h.degree();
  for (int u = 0; u < h.vertex_count(); ++u)
    for (int v = 0; v < k.vertex_count(); ++v) {
      p.index[{u, v}] = static_cast<int>(p.verts.size());
      p.verts.push_back({u, v});
    }
  p.next.assign(p.verts.size(), std::vector<int>(static_cast<std::size_t>(p.deg), -1));
  for (std::size_t i = 0; i < p.verts.size(); ++i) {
    auto [u, v] = p.verts[i];
    for (int l = 0; l < p.deg; ++l) {
      int u2 = h.step(u, l), v2 = k.step(v, l);
      if (u2 >= 0 && v2 >= 0) p.next[i][static_cast<std::size_t>(l)] = p.index[{u2, v2}];
    }
  }
  return p;
}

Word graph_path_word(const SubgroupGraph& g, int from, int to) {
  // BFS path, returned as the word read along it.
  std::vector<int> par(static_cast<std::size_t>(g.vertex_count()), -1);
  std::vector<int> parl(static_cast<std::size_t>(g.vertex_count()), -1);
  std::vector<bool> seen(static_cast<std::size_t>(g.vertex_count()), false);
  std::queue<int> q;
  q.push(from);
  seen[static_cast<std::size_t>(from)] = true;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    if (v == to) break;
    for (int l = 0; l < g.degree(); ++l) {
      int w = g.step(v, l);
      if (w >= 0 && !seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        par[static_cast<std::size_t>(w)] = v;
        parl[static_cast<std::size_t>(w)] = l;
        q.push(w);
      }
    }
  }
  std::vector<Lit> lits;
  for (int v = to; v != from; v = par[static_cast<std::size_t>(v)]) {
    if (v < 0) throw std::logic_error("disconnected path query");
    lits.push_back(parl[static_cast<std::size_t>(v)]);
  }
  std::reverse(lits.begin(), lits.end());
  return reduce(lits);
}

}  // namespace

IntersectionReport intersect_conjugates(const Basis& basis, const SubgroupGraph& h,
                                        const SubgroupGraph& k) {
  if (h.degree() != 2 * basis.rank() || k.degree() != h.degree())
    throw std::invalid_argument("graphs over different bases");
  ProductGraph p = fiber_product(h, k);

  // Component split.
  std::vector<int> comp(p.verts.size(), -1);
  int ncomp = 0;
  for (std::size_t s = 0; s < p.verts.size(); ++s) {
    if (comp[s] >= 0) continue;
    std::queue<std::size_t> q;
    q.push(s);
    comp[s] = ncomp;
    while (!q.empty()) {
      std::size_t v = q.front();
      q.pop();
      for (int l = 0; l < p.deg; ++l) {
        int w = p.next[v][static_cast<std::size_t>(l)];
        if (w >= 0 && comp[static_cast<std::size_t>(w)] < 0) {
          comp[static_cast<std::size_t>(w)] = comp[v];
          q.push(static_cast<std::size_t>(w));
        }
      }
    }
    ++ncomp;
  }

  IntersectionReport report;
  for (int c = 0; c < ncomp; ++c) {
    // Re-index this component and take its cyclic core.
    std::map<int, int> id;
    std::vector<int> members;
    for (std::size_t v = 0; v < p.verts.size(); ++v)
      if (comp[v] == c) {
        id[static_cast<int>(v)] = static_cast<int>(members.size());
        members.push_back(static_cast<int>(v));
      }
    std::vector<RawEdge> edges;
    for (int v : members)
      for (int l = 0; l < p.deg; l += 2) {
        int w = p.next[static_cast<std::size_t>(v)][static_cast<std::size_t>(l)];
        if (w >= 0) edges.push_back({id[v], id[w], l >> 1});
      }
    FoldResult r = fold_raw(static_cast<int>(members.size()), edges, 0, p.deg, false);
    SubgroupGraph g = build_from_table(r.next, 0, p.deg);
    if (g.vertex_count() == 0 || g.rank() < 1) continue;

    // Anchor: a product vertex on the cyclic core of this component, found
    // by peeling valence-1 vertices of the component directly.
    std::vector<bool> dead(members.size(), false);
    bool again = true;
    while (again) {
      again = false;
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (dead[i]) continue;
        int d = 0;
        for (int l = 0; l < p.deg; ++l) {
          int w = p.next[static_cast<std::size_t>(members[i])][static_cast<std::size_t>(l)];
          if (w >= 0 && !dead[static_cast<std::size_t>(id[w])]) ++d;
        }
        if (d <= 1) {
          dead[i] = true;
          again = true;
        }
      }
    }
    int anchor = -1;
    for (std::size_t i = 0; i < members.size(); ++i)
      if (!dead[i]) {
        anchor = members[i];
        break;
      }
    if (anchor < 0) continue;  // no cycles survive

    IntersectionComponent ic;
    ic.letters = g.letters_seen();
    ic.access_h = graph_path_word(h, h.basepoint(), p.verts[static_cast<std::size_t>(anchor)].first);
    ic.access_k = graph_path_word(k, k.basepoint(), p.verts[static_cast<std::size_t>(anchor)].second);

    // Loop basis at the anchor within the (un-cored) component restricted to
    // live vertices: spanning tree + one loop word per extra edge.
    {
      std::vector<int> par(members.size(), -2), parl(members.size(), -1);
      std::vector<Word> to_anchor(members.size());
      std::queue<int> q;
      int a_local = id[anchor];
      par[static_cast<std::size_t>(a_local)] = -1;
      q.push(a_local);
      std::vector<int> order;
      while (!q.empty()) {
        int v = q.front();
        q.pop();
        order.push_back(v);
        for (int l = 0; l < p.deg; ++l) {
          int w = p.next[static_cast<std::size_t>(members[static_cast<std::size_t>(v)])][static_cast<std::size_t>(l)];
          if (w < 0) continue;
          int wl = id[w];
          if (dead[static_cast<std::size_t>(wl)]) continue;
          if (par[static_cast<std::size_t>(wl)] == -2 && wl != a_local) {
            par[static_cast<std::size_t>(wl)] = v;
            parl[static_cast<std::size_t>(wl)] = l;
            std::vector<Lit> lits = to_anchor[static_cast<std::size_t>(v)].lits();
            lits.push_back(l);
            to_anchor[static_cast<std::size_t>(wl)] = reduce(lits);
            q.push(wl);
          }
        }
      }
      for (int v : order) {
        if (dead[static_cast<std::size_t>(v)]) continue;
        for (int l = 0; l < p.deg; l += 2) {
          int w = p.next[static_cast<std::size_t>(members[static_cast<std::size_t>(v)])][static_cast<std::size_t>(l)];
          if (w < 0) continue;
          int wl = id[w];
          if (dead[static_cast<std::size_t>(wl)]) continue;
          bool tree_edge = (par[static_cast<std::size_t>(wl)] == v && parl[static_cast<std::size_t>(wl)] == l) ||
                           (par[static_cast<std::size_t>(v)] == wl && parl[static_cast<std::size_t>(v)] == lit_inverse(l));
          if (tree_edge) continue;
          Word loop = concat(concat(to_anchor[static_cast<std::size_t>(v)], Word::from_reduced({l})),
                             inverse(to_anchor[static_cast<std::size_t>(wl)]));
          if (!loop.empty()) ic.loop_words.push_back(loop);
        }
      }
    }
    ic.graph = g;
    report.components.push_back(std::move(ic));
  }
  return report;
}

bool avoids_subfactor(const IntersectionReport& report,
                      const std::set<int>& subfactor_letters) {
  for (const auto& c : report.components) {
    bool outside = false;
    for (int l : c.letters)
      if (!subfactor_letters.count(l)) {
        outside = true;
        break;
      }
    if (!outside) return false;
  }
  return true;
}

}  // namespace treesmith
