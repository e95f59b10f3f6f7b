#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "rgvol/curves.hpp"
#include "rgvol/linalg.hpp"
#include "rgvol/ribbon.hpp"

namespace rgvol {

// Linear structure attached to an oriented ribbon graph: boundary length
// differentials, their kernel K, the span of the vertex twist vectors, and
// the corner-coordinate space W cut out by the switch conditions.
struct LinearData {
  QMat dl;                        // faces x edges
  int dl_rank = 0;
  std::vector<QVec> kernel_basis;  // K, integer vectors over edges
  std::vector<QVec> vertex_vectors;  // one twist vector per vertex
  int vertex_span_rank = 0;          // dim of their span
  int corner_dim = 0;                // dim W
};

inline LinearData linear_data(const RibbonGraph& g, const Orientation& eps) {
  LinearData ld;
  ld.dl = boundary_differentials(g);
  ld.dl_rank = rank(ld.dl);
  ld.kernel_basis = nullspace(ld.dl);
  for (int v = 0; v < g.n_vertices(); ++v) ld.vertex_vectors.push_back(vertex_twist(g, eps, v));
  {
    QMat m = ld.vertex_vectors;
    ld.vertex_span_rank = m.empty() ? 0 : rank(m);
  }
  {
    QMat c(g.n_darts, QVec(g.n_darts, rational(0)));
    for (int e = 0; e < g.n_darts; ++e) {
      c[e][g.s2[g.s1[e]]] += 1;
      c[e][e] += 1;
      c[e][g.s2[e]] -= 1;
      c[e][g.s1[e]] -= 1;
    }
    ld.corner_dim = g.n_darts - rank(c);
  }
  return ld;
}

inline bool is_irreducible(const RibbonGraph& g, const Orientation& eps) {
  return linear_data(g, eps).kernel_basis.empty();
}

// Corner-coordinate lift: z with x_E = z_{s2 p} - z_p on every edge (p the
// positive dart) and the switch conditions. Exists for every x in K.
inline QVec lift_to_corner(const RibbonGraph& g, const Orientation& eps, const QVec& x) {
  QMat a;
  QVec b;
  for (int e = 0; e < g.n_darts; ++e) {
    QVec row(g.n_darts, rational(0));
    row[g.s2[g.s1[e]]] += 1;
    row[e] += 1;
    row[g.s2[e]] -= 1;
    row[g.s1[e]] -= 1;
    a.push_back(std::move(row));
    b.push_back(rational(0));
  }
  for (int en = 0; en < g.n_edges(); ++en) {
    int p = eps[g.edges[en].first] > 0 ? g.edges[en].first : g.edges[en].second;
    QVec row(g.n_darts, rational(0));
    row[g.s2[p]] += 1;
    row[p] -= 1;
    a.push_back(std::move(row));
    b.push_back(x[en]);
  }
  auto z = solve(a, b);
  if (!z) throw std::logic_error("twist vector admits no corner lift");
  return *z;
}

// The antisymmetric pairing on K. All expressions below agree; the global
// sign is pinned by the Hamiltonian identity (twisting along a curve pairs
// to its length differential).
namespace pairing_detail {

// face expression, directly in edge coordinates
inline rational omega_face(const RibbonGraph& g, const QVec& u, const QVec& v) {
  rational s = 0;
  for (const auto& face : g.faces) {
    const int r = static_cast<int>(face.size());
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j) {
        int a = g.edge_of[face[i]], b = g.edge_of[face[j]];
        s += u[a] * v[b] - u[b] * v[a];
      }
  }
  return s / 2;
}

// corner expression over darts, z ^ z_{s0 d}
inline rational omega_corner_s0(const RibbonGraph& g, const QVec& zu, const QVec& zv) {
  rational s = 0;
  for (int d = 0; d < g.n_darts; ++d) s += zu[d] * zv[g.s0[d]] - zu[g.s0[d]] * zv[d];
  return -s / 2;
}

// corner expression over darts, z ^ z_{s2 d}
inline rational omega_corner_s2(const RibbonGraph& g, const QVec& zu, const QVec& zv) {
  rational s = 0;
  for (int d = 0; d < g.n_darts; ++d) s += zu[d] * zv[g.s2[d]] - zu[g.s2[d]] * zv[d];
  return s / 2;
}

// vertex expression: alternating traversal wedges around each vertex, with
// y_e = z_e + z_{s2 s1 e} on positive darts
inline rational omega_vertex(const RibbonGraph& g, const Orientation& eps, const QVec& zu,
                             const QVec& zv) {
  auto edge_y = [&](const QVec& z, int dart) {
    int p = eps[dart] > 0 ? dart : g.s1[dart];
    return z[p] + z[g.s2[g.s1[p]]];
  };
  rational s = 0;
  for (const auto& cyc : g.vertices) {
    const int r = static_cast<int>(cyc.size());
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j) {
        rational ui = edge_y(zu, cyc[i]), uj = edge_y(zu, cyc[j]);
        rational vi = edge_y(zv, cyc[i]), vj = edge_y(zv, cyc[j]);
        int sign = ((i + j) % 2 == 0) ? 1 : -1;
        s += sign * (ui * vj - uj * vi);
      }
  }
  return s / 2;
}

}  // namespace pairing_detail

inline rational omega_pairing(const RibbonGraph& g, const QVec& u, const QVec& v) {
  return pairing_detail::omega_face(g, u, v);
}

struct PairingData {
  QMat omega;                      // in kernel-basis coordinates
  std::vector<QVec> kernel_of_omega;  // edge-space vectors spanning ker(Omega|K)
};

inline PairingData pairing(const RibbonGraph& g, const Orientation& eps, const LinearData& ld) {
  PairingData pd;
  const auto& B = ld.kernel_basis;
  const int k = static_cast<int>(B.size());
  pd.omega.assign(k, QVec(k, rational(0)));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) pd.omega[i][j] = omega_pairing(g, B[i], B[j]);
  for (const auto& coeffs : nullspace(pd.omega)) {
    QVec vec(g.n_edges(), rational(0));
    for (int i = 0; i < k; ++i)
      for (int e = 0; e < g.n_edges(); ++e) vec[e] += coeffs[i] * B[i][e];
    pd.kernel_of_omega.push_back(std::move(vec));
  }
  (void)eps;
  return pd;
}

// Twist flow along an embedded multi-curve is Hamiltonian for its length:
// Omega(x(c), k) equals sum_e y_e(c) k_e for every k in K. Exact check.
inline bool hamiltonian_check(const RibbonGraph& g, const Orientation& eps, const Metric& m,
                              const MultiCurve& mc) {
  auto cv = curve_vectors(g, eps, mc);
  if (!cv.simple) throw CurveError("NotSimple", cv.reason);
  auto ld = linear_data(g, eps);
  for (const auto& k : ld.kernel_basis) {
    rational lhs = omega_pairing(g, cv.x, k);
    rational rhs = dot(cv.y, k);
    if (lhs != rhs) return false;
  }
  (void)m;
  return true;
}

}  // namespace rgvol
