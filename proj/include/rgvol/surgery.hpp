#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rgvol/curves.hpp"
#include "rgvol/ribbon.hpp"
#include "rgvol/stable_graph.hpp"

namespace rgvol {

// Where a face of a cut component came from.
struct FaceRegion {
  enum Kind { OriginalFace, CurveSide } kind = OriginalFace;
  int id = -1;   // original face index, or multi-curve component index
  int side = 0;  // curve sides: +1 below the strand, -1 above it
};

// How an edge of a cut component threads through the original rectangles:
// the positive darts crossed, starting from the edge's positive end, and the
// step tag between consecutive crossings.
struct EdgeLift {
  int pos_end_dart = -1;  // component dart at the positive end
  std::vector<int> rect_darts;
  std::vector<int> join_tags;
};

struct CutComponent {
  RibbonGraph graph;
  Orientation eps;
  Metric metric;
  std::vector<int> orig_vertex;     // per vertex
  std::vector<EdgeLift> lifts;      // per edge
  std::vector<FaceRegion> regions;  // per face
};

struct CutResult {
  std::vector<CutComponent> components;
  DirectedStableGraph stable;  // slot i of component c = face i; legs carry labels
  std::vector<int> component_of_vertex;  // original vertex -> component index
  struct CurveEnds {
    int neg_comp = -1, neg_face = -1, pos_comp = -1, pos_face = -1;
  };
  std::vector<CurveEnds> ends;  // per multi-curve component
};

// Cut an oriented metric ribbon graph along a simple essential multi-curve.
// Every edge rectangle splits into y+1 parallel strips along its strands;
// strips are rejoined across the seam segments between consecutive strand
// crossings and the chains so formed are the edges of the cut components.
inline CutResult cut_along(const RibbonGraph& g, const Orientation& eps, const Metric& m,
                           const MultiCurve& mc, const FaceLabels& labels) {
  CutResult out;
  if (mc.empty()) {
    CutComponent c;
    c.graph = g;
    c.eps = eps;
    c.metric = m;
    c.orig_vertex.resize(g.n_vertices());
    std::iota(c.orig_vertex.begin(), c.orig_vertex.end(), 0);
    c.lifts.resize(g.n_edges());
    for (int e = 0; e < g.n_edges(); ++e) {
      c.lifts[e].pos_end_dart = eps[g.edges[e].first] > 0 ? g.edges[e].first : g.edges[e].second;
      c.lifts[e].rect_darts = {c.lifts[e].pos_end_dart};
    }
    c.regions.resize(g.n_faces());
    for (int f = 0; f < g.n_faces(); ++f) c.regions[f] = {FaceRegion::OriginalFace, f, 0};
    out.components.push_back(std::move(c));
    out.component_of_vertex.assign(g.n_vertices(), 0);
    StableComponent node;
    node.genus = topology(g).genus;
    for (int f = 0; f < g.n_faces(); ++f)
      node.slots.push_back({face_sign(g, eps, f), true, labels[f]});
    out.stable.components.push_back(std::move(node));
    return out;
  }

  for (const auto& c : mc.components)
    if (is_boundary_parallel(c))
      throw CurveError("NotAdmissible", "boundary-parallel component cannot be cut along");
  auto order = realize_strands(g, mc);
  if (!order.simple) throw CurveError("NotSimple", order.reason);

  // unweighted strand counts
  std::vector<int> y(g.n_edges(), 0);
  for (const auto& c : mc.components)
    for (int d : c.darts) y[g.edge_of[d]]++;
  std::vector<int> zc(g.n_darts, 0);
  for (const auto& c : mc.components)
    for (size_t i = 0; i < c.size(); ++i) {
      int e = c.darts[i];
      if (c.arrival_tag(i) > 0)
        zc[e]++;
      else
        zc[g.s2[g.s1[e]]]++;
    }
  auto kappa = [&](int d) { return eps[d] > 0 ? zc[d] : zc[g.s2[g.s1[d]]]; };

  // half-dart ids: strip ends (d, s), s = 0..y
  std::vector<int> offset(g.n_darts + 1, 0);
  for (int d = 0; d < g.n_darts; ++d) offset[d + 1] = offset[d] + y[g.edge_of[d]] + 1;
  auto hid = [&](int d, int s) { return offset[d] + s; };
  const int H = offset[g.n_darts];
  std::vector<int> dart_of(H), strip_of(H);
  for (int d = 0; d < g.n_darts; ++d)
    for (int s = 0; s <= y[g.edge_of[d]]; ++s) {
      dart_of[hid(d, s)] = d;
      strip_of[hid(d, s)] = s;
    }

  std::vector<int> bond(H, -1);
  auto tie_bond = [&](int a, int b) {
    if (bond[a] != -1 || bond[b] != -1) throw std::logic_error("double seam join");
    bond[a] = b;
    bond[b] = a;
  };
  for (int e = 0; e < g.n_darts; ++e) {
    if (eps[e] != 1) continue;
    int A = zc[e], B = y[g.edge_of[e]] - A;
    int upper_partner = g.s1[g.s2_inv[e]];
    for (int j = 0; j < A; ++j) tie_bond(hid(e, j), hid(upper_partner, j));
    int gpos = g.s0_inv[g.s1[e]];
    int lower_partner = g.s1[gpos];
    int yg = y[g.edge_of[gpos]];
    for (int j = 1; j <= B; ++j) tie_bond(hid(e, A + j), hid(lower_partner, yg - B + j));
  }
  for (int d = 0; d < g.n_darts; ++d)
    for (int s = 0; s <= y[g.edge_of[d]]; ++s)
      if ((s == kappa(d)) != (bond[hid(d, s)] == -1))
        throw std::logic_error("seam bookkeeping is inconsistent");

  // chains of strips = edges of the cut surface
  struct Chain {
    int end_pos, end_neg;  // half-dart ids at the two vertex-attached ends
    EdgeLift lift;
    rational length;
  };
  std::vector<Chain> chains;
  std::vector<int> chain_of_end(H, -1);
  for (int d = 0; d < g.n_darts; ++d) {
    if (eps[d] != 1) continue;
    Chain ch;
    ch.end_pos = hid(d, kappa(d));
    ch.lift.pos_end_dart = -1;  // filled later with component dart ids
    ch.length = 0;
    int cur = d, s = kappa(d);
    size_t guard = 0;
    for (;;) {
      if (++guard > static_cast<size_t>(H) + 1)
        throw CurveError("NotAdmissible", "strip chain failed to terminate");
      ch.lift.rect_darts.push_back(cur);
      ch.length += m[g.edge_of[cur]];
      int other = hid(g.s1[cur], s);
      if (bond[other] == -1) {
        ch.end_neg = other;
        break;
      }
      int nxt = bond[other];
      int nd = dart_of[nxt], ns = strip_of[nxt];
      if (eps[nd] != 1) throw std::logic_error("chain stepped onto a negative end");
      ch.lift.join_tags.push_back(ns < kappa(nd) ? +1 : -1);
      int expect = curve_step(g, cur, ch.lift.join_tags.back());
      if (expect != nd) throw std::logic_error("chain join violates the step relation");
      cur = nd;
      s = ns;
    }
    if (kappa(dart_of[ch.end_neg]) != strip_of[ch.end_neg])
      throw std::logic_error("chain ended off the vertex level");
    chain_of_end[ch.end_pos] = static_cast<int>(chains.size());
    chain_of_end[ch.end_neg] = static_cast<int>(chains.size());
    chains.push_back(std::move(ch));
  }

  // new darts = vertex-attached half-darts
  std::vector<int> new_id(H, -1);
  std::vector<int> host;  // new dart -> half-dart id
  for (int d = 0; d < g.n_darts; ++d) {
    int h = hid(d, kappa(d));
    new_id[h] = static_cast<int>(host.size());
    host.push_back(h);
  }
  const int ND = static_cast<int>(host.size());
  std::vector<int> ns0(ND), ns1(ND);
  // The strip complex is indexed through the edge involution, so the vertex
  // rotation of the cut graph is the s1-conjugate of the inverse rotation.
  // For oriented graphs it stays at the vertex.
  for (int i = 0; i < ND; ++i) {
    int d = dart_of[host[i]];
    int r = g.s1[g.s0_inv[g.s1[d]]];
    if (g.vertex_of[r] != g.vertex_of[d])
      throw std::logic_error("vertex rotation left its vertex");
    ns0[i] = new_id[hid(r, kappa(r))];
    const Chain& ch = chains[chain_of_end[host[i]]];
    ns1[i] = new_id[host[i] == ch.end_pos ? ch.end_neg : ch.end_pos];
  }

  // split into connected components
  std::vector<int> comp_of(ND, -1);
  int n_comps = 0;
  for (int i = 0; i < ND; ++i) {
    if (comp_of[i] != -1) continue;
    std::vector<int> stack = {i};
    comp_of[i] = n_comps;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int nb : {ns0[x], ns1[x]})
        if (comp_of[nb] == -1) {
          comp_of[nb] = n_comps;
          stack.push_back(nb);
        }
    }
    ++n_comps;
  }
  std::vector<std::vector<int>> members(n_comps);  // new dart ids, increasing
  for (int i = 0; i < ND; ++i) members[comp_of[i]].push_back(i);

  out.component_of_vertex.assign(g.n_vertices(), -1);
  out.ends.resize(mc.components.size());
  for (int c = 0; c < n_comps; ++c) {
    std::vector<int> local(ND, -1);
    for (size_t i = 0; i < members[c].size(); ++i) local[members[c][i]] = static_cast<int>(i);
    int n = static_cast<int>(members[c].size());
    std::vector<int> cs0(n), cs1(n);
    for (int i = 0; i < n; ++i) {
      cs0[i] = local[ns0[members[c][i]]];
      cs1[i] = local[ns1[members[c][i]]];
    }
    CutComponent cc;
    cc.graph = make_graph(n, cs0, cs1);
    cc.eps.assign(n, 0);
    for (int i = 0; i < n; ++i) cc.eps[i] = eps[dart_of[host[members[c][i]]]];
    for (int i = 0; i < n; ++i) {
      if (cc.eps[cc.graph.s1[i]] != -cc.eps[i] || cc.eps[cc.graph.s2[i]] != cc.eps[i])
        throw std::logic_error("cut component lost its orientation");
    }
    cc.metric.assign(cc.graph.n_edges(), rational(0));
    cc.lifts.resize(cc.graph.n_edges());
    for (int e = 0; e < cc.graph.n_edges(); ++e) {
      int da = cc.graph.edges[e].first;
      int dp = cc.eps[da] > 0 ? da : cc.graph.edges[e].second;
      const Chain& ch = chains[chain_of_end[host[members[c][dp]]]];
      cc.metric[e] = ch.length;
      cc.lifts[e] = ch.lift;
      cc.lifts[e].pos_end_dart = dp;
      if (host[members[c][dp]] != ch.end_pos)
        throw std::logic_error("positive end of a chain is misoriented");
    }
    cc.orig_vertex.resize(cc.graph.n_vertices());
    for (int v = 0; v < cc.graph.n_vertices(); ++v) {
      int d = dart_of[host[members[c][cc.graph.vertices[v][0]]]];
      cc.orig_vertex[v] = g.vertex_of[d];
      out.component_of_vertex[g.vertex_of[d]] = c;
    }
    cc.regions.resize(cc.graph.n_faces());
    for (int f = 0; f < cc.graph.n_faces(); ++f) {
      std::optional<FaceRegion> region;
      for (int i : cc.graph.faces[f]) {
        int h = host[members[c][i]];
        int d = dart_of[h], s = strip_of[h];
        FaceRegion r;
        if (eps[d] > 0) {
          if (s == 0)
            r = {FaceRegion::OriginalFace, g.face_of[d], 0};
          else
            r = {FaceRegion::CurveSide, order.by_edge[g.edge_of[d]][s - 1].first, +1};
        } else {
          if (s == y[g.edge_of[d]])
            r = {FaceRegion::OriginalFace, g.face_of[d], 0};
          else
            r = {FaceRegion::CurveSide, order.by_edge[g.edge_of[d]][s].first, -1};
        }
        if (!region) {
          region = r;
        } else if (region->kind != r.kind || region->id != r.id || region->side != r.side) {
          throw std::logic_error("face region tracking disagrees around a face");
        }
      }
      cc.regions[f] = *region;
      int sign = face_sign(cc.graph, cc.eps, f);
      if (cc.regions[f].kind == FaceRegion::CurveSide) {
        if (sign != cc.regions[f].side)
          throw std::logic_error("curve side has the wrong induced sign");
        auto& ends = out.ends[cc.regions[f].id];
        if (sign > 0) {
          ends.pos_comp = c;
          ends.pos_face = f;
        } else {
          ends.neg_comp = c;
          ends.neg_face = f;
        }
      } else if (sign != face_sign(g, eps, cc.regions[f].id)) {
        throw std::logic_error("boundary remnant changed sign");
      }
    }
    out.components.push_back(std::move(cc));
  }

  // decoration and Euler characteristic are preserved by an admissible cut
  {
    std::map<int, int> mu0 = decoration(g), mu1;
    int chi0 = 2 - 2 * topology(g).genus - g.n_faces(), chi1 = 0;
    for (const auto& cc : out.components) {
      for (auto [deg, k] : decoration(cc.graph)) mu1[deg] += k;
      chi1 += 2 - 2 * topology(cc.graph).genus - cc.graph.n_faces();
    }
    if (mu0 != mu1) throw CurveError("NotAdmissible", "cut split a vertex");
    if (chi0 != chi1) throw std::logic_error("cut changed the Euler characteristic");
  }

  for (size_t k = 0; k < mc.components.size(); ++k)
    if (out.ends[k].neg_comp < 0 || out.ends[k].pos_comp < 0)
      throw std::logic_error("curve side faces not found");

  for (int c = 0; c < n_comps; ++c) {
    StableComponent node;
    node.genus = topology(out.components[c].graph).genus;
    for (int f = 0; f < out.components[c].graph.n_faces(); ++f) {
      const auto& r = out.components[c].regions[f];
      Slot s;
      s.sign = face_sign(out.components[c].graph, out.components[c].eps, f);
      s.is_leg = r.kind == FaceRegion::OriginalFace;
      s.label = s.is_leg ? labels[r.id] : r.id;
      node.slots.push_back(s);
    }
    out.stable.components.push_back(std::move(node));
  }
  for (size_t k = 0; k < mc.components.size(); ++k)
    out.stable.edges.push_back({SlotRef{out.ends[k].neg_comp, out.ends[k].neg_face},
                                SlotRef{out.ends[k].pos_comp, out.ends[k].pos_face}});
  return out;
}

// Rewrites a word on a cut component as a word on the parent graph by
// expanding every component edge into the original rectangles it crosses.
inline CurveComponent lift_word(const CutComponent& cc, const CurveComponent& word) {
  CurveComponent out;
  for (size_t i = 0; i < word.size(); ++i) {
    int h = word.darts[i];
    const EdgeLift& lift = cc.lifts[cc.graph.edge_of[h]];
    if (lift.pos_end_dart != h)
      throw std::logic_error("lift must enter an edge at its positive end");
    for (size_t j = 0; j < lift.rect_darts.size(); ++j) {
      out.darts.push_back(lift.rect_darts[j]);
      out.tags.push_back(j + 1 < lift.rect_darts.size() ? lift.join_tags[j]
                                                        : word.tags[i]);
    }
  }
  return out;
}

struct Decomposition {
  MultiCurve curve;
  DirectedStableGraph stable;
};

namespace detail {

// Stable graph with legs labelled by parent face indices.
struct RawDecomposition {
  MultiCurve curve;
  DirectedStableGraph stable;
};

inline RawDecomposition decompose_rec(const RibbonGraph& g, const Orientation& eps,
                                      const std::vector<int>& order) {
  RawDecomposition out;
  if (g.n_vertices() == 1) {
    StableComponent node;
    node.genus = topology(g).genus;
    for (int f = 0; f < g.n_faces(); ++f) node.slots.push_back({face_sign(g, eps, f), true, f});
    out.stable.components.push_back(std::move(node));
    out.curve = MultiCurve{};
    return out;
  }
  int v = order.back();
  auto mc = vertex_curve(g, eps, v);
  Metric unit(g.n_edges(), rational(1));
  FaceLabels face_ids(g.n_faces());
  std::iota(face_ids.begin(), face_ids.end(), 0);
  auto cut = cut_along(g, eps, unit, mc, face_ids);

  int c0 = cut.component_of_vertex[v];
  if (cut.components[c0].graph.n_vertices() != 1)
    throw std::logic_error("vertex curve did not separate its vertex");

  // recurse on every component, peeled ones included (they are single-vertex)
  std::vector<RawDecomposition> subs(cut.components.size());
  for (size_t c = 0; c < cut.components.size(); ++c) {
    std::vector<int> sub_order;
    for (int u : order) {
      for (size_t w = 0; w < cut.components[c].orig_vertex.size(); ++w)
        if (cut.components[c].orig_vertex[w] == u) sub_order.push_back(static_cast<int>(w));
    }
    subs[c] = decompose_rec(cut.components[c].graph, cut.components[c].eps, sub_order);
    // lift the recursive curves to this level
    for (size_t k = 0; k < subs[c].curve.components.size(); ++k)
      out.curve.components.push_back(lift_word(cut.components[c], subs[c].curve.components[k]));
  }
  for (const auto& c : mc.components) out.curve.components.push_back(c);
  out.curve = make_multicurve(g, eps, std::move(out.curve.components));

  // compose: nodes of all sub-decompositions, legs reconnected through the
  // cut; remaining legs are relabelled by this level's face indices
  std::vector<int> node_base(cut.components.size(), 0);
  for (size_t c = 0; c < cut.components.size(); ++c) {
    node_base[c] = out.stable.n_components();
    for (const auto& node : subs[c].stable.components) out.stable.components.push_back(node);
    for (auto e : subs[c].stable.edges) {
      e.first.comp += node_base[c];
      e.second.comp += node_base[c];
      out.stable.edges.push_back(e);
    }
  }
  auto find_leg = [&](int c, int face) {
    for (int n = 0; n < subs[c].stable.n_components(); ++n) {
      const auto& slots = subs[c].stable.components[n].slots;
      for (size_t s = 0; s < slots.size(); ++s)
        if (slots[s].is_leg && slots[s].label == face) return SlotRef{node_base[c] + n, (int)s};
    }
    throw std::logic_error("sub-decomposition lost a boundary leg");
  };
  for (size_t k = 0; k < mc.components.size(); ++k) {
    const auto& e = cut.ends[k];
    SlotRef neg = find_leg(e.neg_comp, e.neg_face);
    SlotRef pos = find_leg(e.pos_comp, e.pos_face);
    int id = static_cast<int>(out.stable.edges.size());
    auto& ns = out.stable.components[neg.comp].slots[neg.slot];
    auto& ps = out.stable.components[pos.comp].slots[pos.slot];
    ns.is_leg = false;
    ns.label = id;
    ps.is_leg = false;
    ps.label = id;
    out.stable.edges.push_back({neg, pos});
  }
  // remaining legs: component face -> parent face
  for (size_t c = 0; c < cut.components.size(); ++c) {
    for (int n = 0; n < subs[c].stable.n_components(); ++n) {
      auto& slots = out.stable.components[node_base[c] + n].slots;
      for (auto& s : slots) {
        if (!s.is_leg) continue;
        const auto& r = cut.components[c].regions[s.label];
        if (r.kind != FaceRegion::OriginalFace)
          throw std::logic_error("unconsumed curve-side leg");
        s.label = r.id;
      }
    }
  }
  return out;
}

}  // namespace detail

// Canonical decomposition into one-vertex components: peel the vertex curve
// of the last vertex in the order and recurse. The resulting stable graph is
// acyclic and reading the vertex order backwards gives a topological order
// of its components.
inline Decomposition acyclic_decompose(const RibbonGraph& g, const Orientation& eps,
                                       const FaceLabels& labels,
                                       const std::vector<int>& order) {
  {
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expect(g.n_vertices());
    std::iota(expect.begin(), expect.end(), 0);
    if (sorted != expect) throw std::invalid_argument("order must list each vertex once");
  }
  auto raw = detail::decompose_rec(g, eps, order);
  Decomposition out;
  out.curve = std::move(raw.curve);
  out.stable = std::move(raw.stable);
  for (auto& node : out.stable.components)
    for (auto& s : node.slots)
      if (s.is_leg) s.label = labels[s.label];
  return out;
}

struct PantClassification {
  int type = 0;                               // 1..4 per gluing shape
  std::vector<std::pair<int, int>> legs;      // (sign, label) on the pant
  int n_curves = 0;
};

// Classifies the gluing shape of the bounded pair of pants separating v.
inline PantClassification bounded_pants_classify(const RibbonGraph& g, const Orientation& eps,
                                                 const FaceLabels& labels, int v) {
  if (!is_four_valent(g)) throw CurveError("NotFourValent", "pants require a 4-valent graph");
  auto mc = vertex_curve(g, eps, v);
  Metric unit(g.n_edges(), rational(1));
  auto cut = cut_along(g, eps, unit, mc, labels);
  int c0 = cut.component_of_vertex[v];
  const auto& pant = cut.components[c0];
  if (pant.graph.n_vertices() != 1 || pant.graph.n_faces() != 3 ||
      topology(pant.graph).genus != 0)
    throw std::logic_error("separated component is not a pair of pants");
  PantClassification pc;
  for (int f = 0; f < pant.graph.n_faces(); ++f) {
    int sign = face_sign(pant.graph, pant.eps, f);
    if (pant.regions[f].kind == FaceRegion::OriginalFace) {
      pc.legs.push_back({sign, labels[pant.regions[f].id]});
    } else {
      if (sign != -1)
        throw std::logic_error("bounded pant glued along a positive boundary");
      pc.n_curves++;
    }
  }
  std::sort(pc.legs.begin(), pc.legs.end(),
            [](const auto& a, const auto& b) { return a > b; });
  if (pc.n_curves == 1 && pc.legs.size() == 2) {
    pc.type = pc.legs[1].first > 0 ? 1 : 2;
  } else if (pc.n_curves == 2 && pc.legs.size() == 1 && pc.legs[0].first > 0) {
    pc.type = cut.components.size() == 2 ? 3 : 4;
  } else {
    throw std::logic_error("unrecognized pant shape");
  }
  return pc;
}

}  // namespace rgvol
