#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rgvol/rational.hpp"

namespace rgvol {

// Half-edge (dart) model of a combinatorial ribbon graph. s0 cycles darts
// around vertices, s1 pairs the two darts of an edge, and the face
// permutation is s2 = s1 ∘ s0^{-1}, so that s0 ∘ s1 ∘ s2 = id.
struct RibbonGraph {
  int n_darts = 0;
  std::vector<int> s0, s1;
  // derived
  std::vector<int> s0_inv, s2, s2_inv;
  std::vector<int> vertex_of, edge_of, face_of;
  std::vector<std::vector<int>> vertices, faces;  // cycles, from least dart
  std::vector<std::pair<int, int>> edges;         // (dart, s1 dart), dart minimal

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int n_faces() const { return static_cast<int>(faces.size()); }
  int degree(int v) const { return static_cast<int>(vertices[v].size()); }
};

enum class GraphError {
  NotPermutation,
  NotInvolution,
  FixedPoint,
  Disconnected,
  OddEuler,
};

struct Violation {
  GraphError kind;
  std::string detail;
};

inline const char* to_string(GraphError e) {
  switch (e) {
    case GraphError::NotPermutation: return "NotPermutation";
    case GraphError::NotInvolution: return "NotInvolution";
    case GraphError::FixedPoint: return "FixedPoint";
    case GraphError::Disconnected: return "Disconnected";
    case GraphError::OddEuler: return "OddEuler";
  }
  return "?";
}

inline std::vector<Violation> validate_graph(int n_darts, const std::vector<int>& s0,
                                             const std::vector<int>& s1) {
  std::vector<Violation> out;
  if (n_darts <= 0 || n_darts % 2 != 0)
    out.push_back({GraphError::NotPermutation, "dart count must be positive and even"});
  auto check_perm = [&](const std::vector<int>& p, const std::string& name) {
    if (static_cast<int>(p.size()) != n_darts) {
      out.push_back({GraphError::NotPermutation, name + " has wrong length"});
      return false;
    }
    std::vector<char> seen(n_darts, 0);
    for (int x : p) {
      if (x < 0 || x >= n_darts || seen[x]) {
        out.push_back({GraphError::NotPermutation, name + " is not a permutation"});
        return false;
      }
      seen[x] = 1;
    }
    return true;
  };
  bool p0 = check_perm(s0, "s0");
  bool p1 = check_perm(s1, "s1");
  if (p1) {
    for (int d = 0; d < n_darts; ++d) {
      if (s1[d] == d) {
        out.push_back({GraphError::FixedPoint, "s1 fixes dart " + std::to_string(d)});
        break;
      }
    }
    for (int d = 0; d < n_darts; ++d) {
      if (s1[s1[d]] != d) {
        out.push_back({GraphError::NotInvolution, "s1 is not an involution"});
        break;
      }
    }
  }
  if (p0 && p1 && n_darts > 0) {
    std::vector<char> seen(n_darts, 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int d = stack.back();
      stack.pop_back();
      for (int x : {s0[d], s1[d]}) {
        if (!seen[x]) {
          seen[x] = 1;
          ++count;
          stack.push_back(x);
        }
      }
    }
    if (count != n_darts)
      out.push_back({GraphError::Disconnected, "darts split into several components"});
  }
  return out;
}

namespace detail {
inline std::vector<std::vector<int>> cycles_of(const std::vector<int>& p) {
  const int n = static_cast<int>(p.size());
  std::vector<char> seen(n, 0);
  std::vector<std::vector<int>> out;
  for (int d = 0; d < n; ++d) {
    if (seen[d]) continue;
    std::vector<int> cyc;
    int x = d;
    do {
      seen[x] = 1;
      cyc.push_back(x);
      x = p[x];
    } while (x != d);
    out.push_back(std::move(cyc));
  }
  return out;
}
}  // namespace detail

// Requires a valid (possibly non-4-valent) permutation pair.
inline RibbonGraph make_graph(int n_darts, std::vector<int> s0, std::vector<int> s1) {
  {
    auto bad = validate_graph(n_darts, s0, s1);
    if (!bad.empty())
      throw std::invalid_argument(std::string("invalid ribbon graph: ") + bad.front().detail);
  }
  RibbonGraph g;
  g.n_darts = n_darts;
  g.s0 = std::move(s0);
  g.s1 = std::move(s1);
  g.s0_inv.assign(n_darts, 0);
  for (int d = 0; d < n_darts; ++d) g.s0_inv[g.s0[d]] = d;
  g.s2.assign(n_darts, 0);
  g.s2_inv.assign(n_darts, 0);
  for (int d = 0; d < n_darts; ++d) g.s2[d] = g.s1[g.s0_inv[d]];
  for (int d = 0; d < n_darts; ++d) g.s2_inv[g.s2[d]] = d;
  for (int d = 0; d < n_darts; ++d)
    if (g.s0[g.s1[g.s2[d]]] != d) throw std::logic_error("s0*s1*s2 != id");
  g.vertices = detail::cycles_of(g.s0);
  g.faces = detail::cycles_of(g.s2);
  g.vertex_of.assign(n_darts, -1);
  g.face_of.assign(n_darts, -1);
  for (size_t i = 0; i < g.vertices.size(); ++i)
    for (int d : g.vertices[i]) g.vertex_of[d] = static_cast<int>(i);
  for (size_t i = 0; i < g.faces.size(); ++i)
    for (int d : g.faces[i]) g.face_of[d] = static_cast<int>(i);
  g.edge_of.assign(n_darts, -1);
  for (int d = 0; d < n_darts; ++d) {
    if (d < g.s1[d]) {
      g.edge_of[d] = static_cast<int>(g.edges.size());
      g.edges.emplace_back(d, g.s1[d]);
    }
  }
  for (int d = 0; d < n_darts; ++d)
    if (g.edge_of[d] < 0) g.edge_of[d] = g.edge_of[g.s1[d]];
  return g;
}

struct Topology {
  int V, E, F, genus, n;
};

inline Topology topology(const RibbonGraph& g) {
  Topology t;
  t.V = g.n_vertices();
  t.E = g.n_edges();
  t.F = g.n_faces();
  int chi = t.V - t.E + t.F;
  if ((2 - chi) % 2 != 0) throw std::runtime_error("OddEuler: V-E+F has wrong parity");
  t.genus = (2 - chi) / 2;
  if (t.genus < 0) throw std::runtime_error("OddEuler: negative genus");
  t.n = t.F;
  return t;
}

// Dart sign map: constant on faces, flipped by s1. At most two exist for a
// connected graph; the returned one is normalized by eps[0] = +1.
using Orientation = std::vector<int>;

inline std::optional<Orientation> detect_orientation(const RibbonGraph& g) {
  Orientation eps(g.n_darts, 0);
  std::vector<int> stack = {0};
  eps[0] = 1;
  while (!stack.empty()) {
    int d = stack.back();
    stack.pop_back();
    auto push = [&](int x, int sign) {
      if (eps[x] == 0) {
        eps[x] = sign;
        stack.push_back(x);
        return true;
      }
      return eps[x] == sign;
    };
    if (!push(g.s2[d], eps[d])) return std::nullopt;
    if (!push(g.s1[d], -eps[d])) return std::nullopt;
  }
  bool pos = false, neg = false;
  for (int d = 0; d < g.n_darts; ++d) {
    if (eps[d] == 0) return std::nullopt;  // unreachable for connected graphs
    (eps[d] > 0 ? pos : neg) = true;
  }
  if (!pos || !neg) return std::nullopt;
  return eps;
}

inline int face_sign(const RibbonGraph& g, const Orientation& eps, int face) {
  return eps[g.faces[face][0]];
}

// Positive rational edge lengths, indexed like RibbonGraph::edges.
using Metric = std::vector<rational>;

// mu[i] = number of vertices of degree i.
inline std::map<int, int> decoration(const RibbonGraph& g) {
  std::map<int, int> mu;
  for (const auto& v : g.vertices) mu[static_cast<int>(v.size())]++;
  return mu;
}

inline bool is_four_valent(const RibbonGraph& g) {
  for (const auto& v : g.vertices)
    if (v.size() != 4) return false;
  return true;
}

// Labels of boundary faces, 1..n+ over positive faces and 1..n- over
// negative ones.
using FaceLabels = std::vector<int>;

inline FaceLabels default_labels(const RibbonGraph& g, const Orientation& eps) {
  FaceLabels lab(g.n_faces(), 0);
  int p = 0, n = 0;
  for (int f = 0; f < g.n_faces(); ++f)
    lab[f] = face_sign(g, eps, f) > 0 ? ++p : ++n;
  return lab;
}

struct BoundaryFace {
  std::vector<int> darts;
  int sign;
  int label;
  rational length;
};

struct BoundaryProfile {
  std::vector<BoundaryFace> faces;  // in face-index order
  int n_plus = 0, n_minus = 0;
};

inline BoundaryProfile boundary_lengths(const RibbonGraph& g, const Orientation& eps,
                                        const Metric& m, const FaceLabels* labels = nullptr) {
  BoundaryProfile out;
  rational residue = 0;
  for (int f = 0; f < g.n_faces(); ++f) {
    BoundaryFace b;
    b.darts = g.faces[f];
    b.sign = face_sign(g, eps, f);
    b.label = labels ? (*labels)[f] : 0;
    b.length = 0;
    for (int d : b.darts) b.length += m[g.edge_of[d]];
    residue += b.sign * b.length;
    (b.sign > 0 ? out.n_plus : out.n_minus)++;
    out.faces.push_back(std::move(b));
  }
  if (residue != 0)
    throw std::runtime_error("ResidueViolation: signed boundary lengths do not cancel");
  return out;
}

namespace detail {
// Propagate a dart bijection commuting with s0 and s1 from image_of_zero.
// Returns the full map, or nothing when propagation conflicts.
inline std::optional<std::vector<int>> propagate_iso(const RibbonGraph& a, const RibbonGraph& b,
                                                     int image_of_zero) {
  std::vector<int> phi(a.n_darts, -1);
  phi[0] = image_of_zero;
  std::vector<int> stack = {0};
  while (!stack.empty()) {
    int d = stack.back();
    stack.pop_back();
    auto follow = [&](int x, int fx) {
      if (phi[x] == -1) {
        phi[x] = fx;
        stack.push_back(x);
        return true;
      }
      return phi[x] == fx;
    };
    if (!follow(a.s0[d], b.s0[phi[d]])) return std::nullopt;
    if (!follow(a.s1[d], b.s1[phi[d]])) return std::nullopt;
  }
  std::vector<char> hit(a.n_darts, 0);
  for (int x : phi) {
    if (x < 0 || hit[x]) return std::nullopt;
    hit[x] = 1;
  }
  return phi;
}
}  // namespace detail

// Order of the group of dart bijections commuting with s0, s1 and fixing
// every labelled boundary setwise (hence sign-preserving). The action on
// darts is free, so each automorphism is determined by the image of dart 0.
inline int automorphism_order(const RibbonGraph& g, const Orientation& eps,
                              const FaceLabels& labels) {
  int count = 0;
  for (int c = 0; c < g.n_darts; ++c) {
    auto phi = detail::propagate_iso(g, g, c);
    if (!phi) continue;
    bool ok = true;
    for (int d = 0; d < g.n_darts && ok; ++d) {
      int fd = g.face_of[d], fi = g.face_of[(*phi)[d]];
      ok = eps[d] == eps[(*phi)[d]] && labels[fd] == labels[fi] &&
           face_sign(g, eps, fd) == face_sign(g, eps, fi);
    }
    if (ok) ++count;
  }
  return count;
}

// Canonical byte string: equal iff two oriented labelled graphs are related
// by a sign- and label-preserving dart bijection. Minimizes the relabelled
// encoding over all base darts; the relabelling is the breadth-first visit
// order under (s0, s1) from the base dart.
inline std::string canonical_key(const RibbonGraph& g, const Orientation& eps,
                                 const FaceLabels& labels) {
  std::string best;
  for (int b = 0; b < g.n_darts; ++b) {
    std::vector<int> order, pos(g.n_darts, -1);
    order.reserve(g.n_darts);
    order.push_back(b);
    pos[b] = 0;
    for (size_t i = 0; i < order.size(); ++i) {
      for (int x : {g.s0[order[i]], g.s1[order[i]]}) {
        if (pos[x] == -1) {
          pos[x] = static_cast<int>(order.size());
          order.push_back(x);
        }
      }
    }
    std::string key;
    key.reserve(4 * g.n_darts);
    for (int i = 0; i < g.n_darts; ++i) {
      int d = order[i];
      key.push_back(static_cast<char>(pos[g.s0[d]]));
      key.push_back(static_cast<char>(pos[g.s1[d]]));
      key.push_back(static_cast<char>(eps[d] > 0 ? 1 : 0));
      key.push_back(static_cast<char>(labels[g.face_of[d]]));
    }
    if (best.empty() || key < best) best = std::move(key);
  }
  return best;
}

}  // namespace rgvol
