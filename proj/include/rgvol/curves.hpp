#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rgvol/linalg.hpp"
#include "rgvol/rational.hpp"
#include "rgvol/ribbon.hpp"

namespace rgvol {

struct CurveError : std::runtime_error {
  std::string code;
  CurveError(std::string c, const std::string& what)
      : std::runtime_error(c + ": " + what), code(std::move(c)) {}
};

// One admissible closed word: darts[i] is a positive dart and the step to
// darts[i+1] (cyclically) is s2 when tags[i. ] = +1 and s1∘s0 when -1. Both
// steps stay on positive darts, so a word crosses each edge rectangle from
// left to right; +1 steps travel along the positive face above the edge, -1
// steps along the negative face below it.
struct CurveComponent {
  std::vector<int> darts;
  std::vector<int> tags;  // +1 / -1
  size_t size() const { return darts.size(); }
  int arrival_tag(size_t i) const { return tags[(i + size() - 1) % size()]; }
  bool operator==(const CurveComponent& o) const { return darts == o.darts && tags == o.tags; }
  bool operator<(const CurveComponent& o) const {
    return std::tie(darts, tags) < std::tie(o.darts, o.tags);
  }
};

struct MultiCurve {
  std::vector<CurveComponent> components;
  std::vector<rational> weights;
  bool empty() const { return components.empty(); }
};

inline int curve_step(const RibbonGraph& g, int dart, int tag) {
  return tag > 0 ? g.s2[dart] : g.s1[g.s0[dart]];
}

namespace detail {

inline CurveComponent canonical_rotation(CurveComponent c) {
  const size_t n = c.size();
  CurveComponent best = c;
  for (size_t shift = 1; shift < n; ++shift) {
    CurveComponent rot;
    rot.darts.reserve(n);
    rot.tags.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      rot.darts.push_back(c.darts[(i + shift) % n]);
      rot.tags.push_back(c.tags[(i + shift) % n]);
    }
    if (rot < best) best = rot;
  }
  return best;
}

inline bool is_primitive(const CurveComponent& c) {
  const size_t n = c.size();
  for (size_t p = 1; p < n; ++p) {
    if (n % p) continue;
    bool periodic = true;
    for (size_t i = 0; i < n && periodic; ++i)
      periodic = c.darts[i] == c.darts[(i + p) % n] && c.tags[i] == c.tags[(i + p) % n];
    if (periodic) return false;
  }
  return true;
}

}  // namespace detail

// Validates, canonicalizes and merges duplicate components into weights.
inline MultiCurve make_multicurve(const RibbonGraph& g, const Orientation& eps,
                                  std::vector<CurveComponent> comps,
                                  std::vector<rational> weights = {}) {
  if (weights.empty()) weights.assign(comps.size(), rational(1));
  if (weights.size() != comps.size())
    throw CurveError("InvalidStep", "weight/component count mismatch");
  std::map<CurveComponent, rational> merged;
  for (size_t k = 0; k < comps.size(); ++k) {
    auto& c = comps[k];
    if (c.darts.empty() || c.darts.size() != c.tags.size())
      throw CurveError("InvalidStep", "empty or ragged word");
    if (weights[k] <= 0) throw CurveError("InvalidStep", "weights must be positive");
    for (size_t i = 0; i < c.size(); ++i) {
      int d = c.darts[i];
      if (d < 0 || d >= g.n_darts || eps[d] != 1)
        throw CurveError("InvalidStep", "word must run over positive darts");
      if (c.tags[i] != 1 && c.tags[i] != -1)
        throw CurveError("InvalidStep", "bad step tag");
      if (curve_step(g, d, c.tags[i]) != c.darts[(i + 1) % c.size()])
        throw CurveError("InvalidStep", "word violates the step relation");
    }
    if (!detail::is_primitive(c))
      throw CurveError("InvalidStep", "component word is a proper power; use a weight");
    merged[detail::canonical_rotation(std::move(c))] += weights[k];
  }
  MultiCurve mc;
  for (auto& [c, w] : merged) {
    mc.components.push_back(c);
    mc.weights.push_back(w);
  }
  return mc;
}

inline bool is_boundary_parallel(const CurveComponent& c) {
  return std::all_of(c.tags.begin(), c.tags.end(), [&](int t) { return t == c.tags[0]; });
}

// ---------------------------------------------------------------------------
// Strand realization: place one strand per component position in its edge
// rectangle and determine a consistent top-to-bottom order. Two strands that
// share a rectangle are compared by following them forward (departure side:
// +1 above -1) and backward (arrival side: +1 above -1); a disagreement means
// the strands cross and the multi-curve is not embedded.

struct StrandOrder {
  bool simple = false;
  std::string reason;
  // per edge: positions (component, index), top to bottom
  std::vector<std::vector<std::pair<int, int>>> by_edge;
  // rank[k][i]: 1-based index from the top within its rectangle
  std::vector<std::vector<int>> rank;
};

inline StrandOrder realize_strands(const RibbonGraph& g, const MultiCurve& mc) {
  StrandOrder out;
  out.by_edge.assign(g.n_edges(), {});
  size_t total = 0;
  for (const auto& c : mc.components) total += c.size();
  for (size_t k = 0; k < mc.components.size(); ++k)
    for (size_t i = 0; i < mc.components[k].size(); ++i)
      out.by_edge[g.edge_of[mc.components[k].darts[i]]].push_back(
          {static_cast<int>(k), static_cast<int>(i)});

  auto advance = [&](int k, int i, int dir) {
    const auto& c = mc.components[k];
    return static_cast<int>((i + dir + c.size()) % c.size());
  };
  // -1: p below q, +1: p above q, 0: never separates
  auto separate = [&](std::pair<int, int> p, std::pair<int, int> q, int dir) {
    for (size_t steps = 0; steps <= total; ++steps) {
      const auto& cp = mc.components[p.first];
      const auto& cq = mc.components[q.first];
      int tp = dir > 0 ? cp.tags[p.second] : cp.arrival_tag(p.second);
      int tq = dir > 0 ? cq.tags[q.second] : cq.arrival_tag(q.second);
      if (tp != tq) return tp > tq ? +1 : -1;
      p.second = advance(p.first, p.second, dir);
      q.second = advance(q.first, q.second, dir);
    }
    return 0;
  };
  auto above = [&](std::pair<int, int> p, std::pair<int, int> q, bool* crossing) {
    int fwd = separate(p, q, +1);
    int bwd = separate(p, q, -1);
    if (fwd == 0 && bwd == 0)
      throw CurveError("NotSimple", "indistinguishable parallel strands");
    if (fwd != 0 && bwd != 0 && fwd != bwd) {
      *crossing = true;
      return false;
    }
    return (fwd != 0 ? fwd : bwd) > 0;
  };

  out.rank.resize(mc.components.size());
  for (size_t k = 0; k < mc.components.size(); ++k)
    out.rank[k].assign(mc.components[k].size(), 0);
  for (int e = 0; e < g.n_edges(); ++e) {
    auto& ps = out.by_edge[e];
    bool crossing = false;
    std::stable_sort(ps.begin(), ps.end(), [&](const auto& a, const auto& b) {
      if (crossing || a == b) return false;
      return above(a, b, &crossing);
    });
    if (crossing) {
      out.simple = false;
      out.reason = "strands cross in an edge rectangle";
      return out;
    }
    for (size_t a = 0; a < ps.size(); ++a)
      for (size_t b = a + 1; b < ps.size(); ++b)
        if (above(ps[b], ps[a], &crossing) || crossing) {
          out.simple = false;
          out.reason = "strand order is inconsistent";
          return out;
        }
    for (size_t a = 0; a < ps.size(); ++a)
      out.rank[ps[a].first][ps[a].second] = static_cast<int>(a) + 1;
  }
  out.simple = true;
  return out;
}

// ---------------------------------------------------------------------------
// Coordinate vectors.

// Twist vector over edges: a position contributes +1 when it arrives along
// the negative face and leaves along the positive one, -1 in the opposite
// corner, 0 when it keeps its side. Equivalently x_e = z_{s2 e} - z_e.
inline QVec twist_vector(const RibbonGraph& g, const MultiCurve& mc) {
  QVec x(g.n_edges(), rational(0));
  for (size_t k = 0; k < mc.components.size(); ++k) {
    const auto& c = mc.components[k];
    for (size_t i = 0; i < c.size(); ++i) {
      int corner = 0;
      if (c.arrival_tag(i) < 0 && c.tags[i] > 0) corner = +1;
      if (c.arrival_tag(i) > 0 && c.tags[i] < 0) corner = -1;
      if (corner) x[g.edge_of[c.darts[i]]] += corner * mc.weights[k];
    }
  }
  return x;
}

// Traversal vector over edges: weighted crossing counts.
inline QVec traversal_vector(const RibbonGraph& g, const MultiCurve& mc) {
  QVec y(g.n_edges(), rational(0));
  for (size_t k = 0; k < mc.components.size(); ++k)
    for (int d : mc.components[k].darts) y[g.edge_of[d]] += mc.weights[k];
  return y;
}

// Corner vector over darts: z_e counts the strands crossing the corner
// between the vertex of e and the face of e. For a positive dart that is the
// number of arrivals from the positive side of its rectangle.
inline QVec corner_vector(const RibbonGraph& g, const Orientation& eps, const MultiCurve& mc) {
  QVec z(g.n_darts, rational(0));
  for (size_t k = 0; k < mc.components.size(); ++k) {
    const auto& c = mc.components[k];
    for (size_t i = 0; i < c.size(); ++i) {
      int e = c.darts[i];
      if (c.arrival_tag(i) > 0) {
        z[e] += mc.weights[k];  // upper-left corner of rect e
      } else {
        z[g.s2[g.s1[e]]] += mc.weights[k];  // lower-left corner of rect e
      }
    }
  }
  (void)eps;
  return z;
}

// Boundary-length differentials as covectors over edges (rows per face).
inline QMat boundary_differentials(const RibbonGraph& g) {
  QMat dl(g.n_faces(), QVec(g.n_edges(), rational(0)));
  for (int f = 0; f < g.n_faces(); ++f)
    for (int d : g.faces[f]) dl[f][g.edge_of[d]] += 1;
  return dl;
}

inline bool in_length_kernel(const RibbonGraph& g, const QVec& x) {
  auto dl = boundary_differentials(g);
  for (const auto& row : dl)
    if (dot(row, x) != 0) return false;
  return true;
}

struct CurveVectors {
  QVec x, y;
  bool simple = false;
  std::string reason;
};

inline CurveVectors curve_vectors(const RibbonGraph& g, const Orientation& eps,
                                  const MultiCurve& mc) {
  CurveVectors cv;
  cv.x = twist_vector(g, mc);
  cv.y = traversal_vector(g, mc);
  auto so = realize_strands(g, mc);
  cv.simple = so.simple;
  cv.reason = so.reason;
  if (cv.simple && !in_length_kernel(g, cv.x))
    throw std::logic_error("embedded multi-curve with twist vector outside the kernel");
  (void)eps;
  return cv;
}

inline rational component_length(const RibbonGraph& g, const Metric& m,
                                 const CurveComponent& c) {
  rational l = 0;
  for (int d : c.darts) l += m[g.edge_of[d]];
  return l;
}

inline rational curve_length(const RibbonGraph& g, const Metric& m, const MultiCurve& mc) {
  rational l = 0;
  for (size_t k = 0; k < mc.components.size(); ++k)
    l += mc.weights[k] * component_length(g, m, mc.components[k]);
  return l;
}

// ---------------------------------------------------------------------------
// Corner weights -> multi-curve. Nonnegative integer corner vectors that
// satisfy z_{s2 s1 e} + z_e = z_{s2 e} + z_{s1 e} are exactly the embedded
// integral multi-curves (boundary-parallel components included); the strands
// in each rectangle are recovered top to bottom and matched across seams.
inline bool corner_constraints_hold(const RibbonGraph& g, const QVec& z) {
  for (int e = 0; e < g.n_darts; ++e)
    if (z[g.s2[g.s1[e]]] + z[e] != z[g.s2[e]] + z[g.s1[e]]) return false;
  return true;
}

inline MultiCurve decode_corner_vector(const RibbonGraph& g, const Orientation& eps,
                                       const std::vector<long>& z) {
  if (static_cast<int>(z.size()) != g.n_darts)
    throw CurveError("InvalidStep", "corner vector has wrong length");
  for (long v : z)
    if (v < 0) throw CurveError("InvalidStep", "corner weights must be nonnegative");
  {
    QVec zq(z.begin(), z.end());
    if (!corner_constraints_hold(g, zq))
      throw CurveError("InvalidStep", "corner weights violate the switch conditions");
  }
  // strands per rectangle, indexed by the positive dart
  std::map<std::pair<int, long>, std::pair<int, long>> next;
  for (int e = 0; e < g.n_darts; ++e) {
    if (eps[e] != 1) continue;
    long upper_in = z[e], lower_in = z[g.s2[g.s1[e]]];
    long upper_out = z[g.s2[e]], lower_out = z[g.s1[e]];
    long y = upper_in + lower_in;
    if (y != upper_out + lower_out)
      throw CurveError("InvalidStep", "switch conditions violated");
    for (long k = 1; k <= y; ++k) {
      if (k <= upper_out) {
        next[{e, k}] = {g.s2[e], k};
      } else {
        int f = g.s1[g.s0[e]];  // rectangle entered below the edge
        next[{e, k}] = {f, z[f] + (k - upper_out)};
      }
    }
  }
  std::set<std::pair<int, long>> seen;
  std::vector<CurveComponent> comps;
  for (const auto& [start, ignored] : next) {
    if (seen.count(start)) continue;
    CurveComponent c;
    auto cur = start;
    do {
      seen.insert(cur);
      long upper_out = z[g.s2[cur.first]];
      c.darts.push_back(cur.first);
      c.tags.push_back(cur.second <= upper_out ? +1 : -1);
      cur = next.at(cur);
    } while (cur != start);
    comps.push_back(std::move(c));
  }
  // split k-fold covers of primitive words into weights
  std::vector<CurveComponent> prim;
  std::vector<rational> weights;
  for (auto& c : comps) {
    size_t n = c.size(), p = n;
    for (size_t q = 1; q < n; ++q) {
      if (n % q) continue;
      bool periodic = true;
      for (size_t i = 0; i < n && periodic; ++i)
        periodic = c.darts[i] == c.darts[(i + q) % n] && c.tags[i] == c.tags[(i + q) % n];
      if (periodic) { p = q; break; }
    }
    CurveComponent base;
    base.darts.assign(c.darts.begin(), c.darts.begin() + p);
    base.tags.assign(c.tags.begin(), c.tags.begin() + p);
    prim.push_back(std::move(base));
    weights.push_back(rational(1));
    (void)p;
  }
  return make_multicurve(g, eps, std::move(prim), std::move(weights));
}

// ---------------------------------------------------------------------------
// Vertex vectors and the canonical curve separating a vertex.

// Alternating sum of the edges around v, starting from its least positive
// dart. Lies in the kernel of every boundary differential.
inline QVec vertex_twist(const RibbonGraph& g, const Orientation& eps, int v) {
  const auto& cyc = g.vertices[v];
  if (cyc.size() % 2 != 0) throw CurveError("OddDegree", "vertex of odd degree");
  int start = -1;
  for (int d : cyc)
    if (eps[d] == 1 && (start == -1 || d < start)) start = d;
  if (start < 0) throw CurveError("OddDegree", "no positive dart at vertex");
  QVec xi(g.n_edges(), rational(0));
  int d = start;
  for (size_t i = 0; i < cyc.size(); ++i) {
    xi[g.edge_of[d]] += (i % 2 == 0) ? 1 : -1;
    d = g.s0[d];
  }
  return xi;
}

// The unique admissible multi-curve whose twist vector is vertex_twist(v),
// for graphs with at least two vertices: walk the positive darts, stepping
// along the positive face at v and along the negative face elsewhere;
// components that never leave their positive face are boundary-parallel and
// are dropped.
inline MultiCurve vertex_curve(const RibbonGraph& g, const Orientation& eps, int v) {
  if (g.n_vertices() < 2)
    throw CurveError("SingleVertex", "minimal graph carries no separating curve");
  std::vector<char> done(g.n_darts, 0);
  std::vector<CurveComponent> comps;
  for (int start : g.vertices[v]) {
    if (eps[start] != 1 || done[start]) continue;
    CurveComponent c;
    int d = start;
    size_t guard = 0;
    do {
      if (++guard > static_cast<size_t>(g.n_darts) * g.n_darts)
        throw std::logic_error("vertex curve walk failed to close");
      int tag = g.vertex_of[d] == v ? +1 : -1;
      if (g.vertex_of[d] == v) done[d] = 1;
      c.darts.push_back(d);
      c.tags.push_back(tag);
      d = curve_step(g, d, tag);
    } while (d != start);
    if (!is_boundary_parallel(c)) comps.push_back(std::move(c));
  }
  auto mc = make_multicurve(g, eps, std::move(comps));
  auto x = twist_vector(g, mc);
  auto xi = vertex_twist(g, eps, v);
  if (x != xi) throw std::logic_error("vertex curve has unexpected twist vector");
  return mc;
}

}  // namespace rgvol
