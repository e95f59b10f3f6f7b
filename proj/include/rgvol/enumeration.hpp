#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <future>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "rgvol/linalg.hpp"
#include "rgvol/poly.hpp"
#include "rgvol/rational.hpp"
#include "rgvol/ribbon.hpp"

namespace rgvol {

struct EnumError : std::runtime_error {
  std::string code;
  EnumError(std::string c, const std::string& what)
      : std::runtime_error(c + ": " + what), code(std::move(c)) {}
};

struct CatalogEntry {
  RibbonGraph graph;
  Orientation eps;
  FaceLabels labels;
  int aut_order = 1;
  // edge counts of the positive / negative boundaries, by label
  std::vector<int> pos_degrees, neg_degrees;
};

struct GraphCatalog {
  int genus = 0, n_plus = 0, n_minus = 0;
  std::vector<CatalogEntry> entries;
  rational weighted_count() const {
    rational s = 0;
    for (const auto& e : entries) s += rational(1, e.aut_order);
    return s;
  }
};

namespace enum_detail {

inline void collect_labelled(const RibbonGraph& g, const Orientation& eps, int genus,
                             int n_plus, int n_minus,
                             std::map<std::string, CatalogEntry>& out) {
  auto t = topology(g);
  if (t.genus != genus) return;
  int pos = 0, neg = 0;
  for (int f = 0; f < g.n_faces(); ++f) (face_sign(g, eps, f) > 0 ? pos : neg)++;
  if (pos != n_plus || neg != n_minus) return;
  std::vector<int> pos_faces, neg_faces;
  for (int f = 0; f < g.n_faces(); ++f)
    (face_sign(g, eps, f) > 0 ? pos_faces : neg_faces).push_back(f);
  std::vector<int> pperm(n_plus), nperm(n_minus);
  std::iota(pperm.begin(), pperm.end(), 1);
  std::iota(nperm.begin(), nperm.end(), 1);
  std::sort(pperm.begin(), pperm.end());
  do {
    auto nperm2 = nperm;
    do {
      FaceLabels lab(g.n_faces(), 0);
      for (int k = 0; k < n_plus; ++k) lab[pos_faces[k]] = pperm[k];
      for (int k = 0; k < n_minus; ++k) lab[neg_faces[k]] = nperm2[k];
      std::string key = canonical_key(g, eps, lab);
      if (out.count(key)) continue;
      CatalogEntry e;
      e.graph = g;
      e.eps = eps;
      e.labels = lab;
      e.pos_degrees.assign(n_plus, 0);
      e.neg_degrees.assign(n_minus, 0);
      for (int f = 0; f < g.n_faces(); ++f) {
        if (face_sign(g, eps, f) > 0)
          e.pos_degrees[lab[f] - 1] = static_cast<int>(g.faces[f].size());
        else
          e.neg_degrees[lab[f] - 1] = static_cast<int>(g.faces[f].size());
      }
      out.emplace(std::move(key), std::move(e));
    } while (std::next_permutation(nperm2.begin(), nperm2.end()));
  } while (std::next_permutation(pperm.begin(), pperm.end()));
}

inline void search(std::vector<int>& s1, std::vector<char>& used, int n_darts,
                   const std::vector<int>& s0, int genus, int n_plus, int n_minus,
                   std::map<std::string, CatalogEntry>& out) {
  int a = -1;
  for (int d = 0; d < n_darts; ++d)
    if (!used[d]) { a = d; break; }
  if (a < 0) {
    if (!validate_graph(n_darts, s0, s1).empty()) return;
    auto g = make_graph(n_darts, s0, s1);
    auto eps = detect_orientation(g);
    if (!eps) return;
    collect_labelled(g, *eps, genus, n_plus, n_minus, out);
    for (auto& e : *eps) e = -e;
    collect_labelled(g, *eps, genus, n_plus, n_minus, out);
    return;
  }
  for (int b = a + 1; b < n_darts; ++b) {
    if (used[b]) continue;
    used[a] = used[b] = 1;
    s1[a] = b;
    s1[b] = a;
    search(s1, used, n_darts, s0, genus, n_plus, n_minus, out);
    used[a] = used[b] = 0;
    s1[a] = s1[b] = -1;
  }
}

}  // namespace enum_detail

// All oriented 4-valent ribbon graphs of the directed type (g, n+, n-), with
// labelled boundaries, up to label- and sign-preserving isomorphism. The
// vertex rotation is fixed as a product of disjoint 4-cycles and the search
// runs over fixed-point-free pairings; the first pairing choice splits the
// work across threads.
inline GraphCatalog enumerate_graphs(int genus, int n_plus, int n_minus, int threads = 1) {
  if (n_plus < 1 || n_minus < 1 || 2 * genus - 2 + n_plus + n_minus <= 0)
    throw EnumError("UnstableType", "need n+ >= 1, n- >= 1 and 2g-2+n > 0");
  const int V = 2 * genus - 2 + n_plus + n_minus;
  const int n_darts = 4 * V;
  std::vector<int> s0(n_darts);
  for (int v = 0; v < V; ++v)
    for (int k = 0; k < 4; ++k) s0[4 * v + k] = 4 * v + (k + 1) % 4;

  std::vector<std::map<std::string, CatalogEntry>> partial(n_darts - 1);
  auto run_branch = [&](int b) {
    std::vector<int> s1(n_darts, -1);
    std::vector<char> used(n_darts, 0);
    used[0] = used[b + 1] = 1;
    s1[0] = b + 1;
    s1[b + 1] = 0;
    enum_detail::search(s1, used, n_darts, s0, genus, n_plus, n_minus, partial[b]);
  };
  if (threads <= 1) {
    for (int b = 0; b < n_darts - 1; ++b) run_branch(b);
  } else {
    std::vector<std::future<void>> fs;
    std::atomic<int> next{0};
    int workers = std::min(threads, n_darts - 1);
    for (int w = 0; w < workers; ++w)
      fs.push_back(std::async(std::launch::async, [&]() {
        for (int b = next.fetch_add(1); b < n_darts - 1; b = next.fetch_add(1)) run_branch(b);
      }));
    for (auto& f : fs) f.get();
  }
  std::map<std::string, CatalogEntry> merged;
  for (auto& p : partial)
    for (auto& [k, e] : p) merged.emplace(k, std::move(e));

  GraphCatalog cat;
  cat.genus = genus;
  cat.n_plus = n_plus;
  cat.n_minus = n_minus;
  for (auto& [k, e] : merged) {
    e.aut_order = automorphism_order(e.graph, e.eps, e.labels);
    if (e.graph.n_darts % e.aut_order != 0)
      throw std::logic_error("automorphism group does not act freely");
    cat.entries.push_back(std::move(e));
  }
  return cat;
}

// Cache of catalogs, since enumeration is pure in its type.
class CatalogStore {
 public:
  const GraphCatalog& get(int genus, int n_plus, int n_minus, int threads = 1) {
    auto key = std::make_tuple(genus, n_plus, n_minus);
    auto it = cache_.find(key);
    if (it == cache_.end())
      it = cache_.emplace(key, enumerate_graphs(genus, n_plus, n_minus, threads)).first;
    return it->second;
  }

 private:
  std::map<std::tuple<int, int, int>, GraphCatalog> cache_;
};

// Automorphism-weighted count of oriented 4-valent graphs with one negative
// boundary whose positive boundary i carries alpha[i] edges; equivalently a
// labelled dessin / Hurwitz count.
inline rational hurwitz_count(CatalogStore& store, int genus, const std::vector<int>& alpha) {
  const int n = static_cast<int>(alpha.size());
  int total = 0;
  for (int a : alpha) {
    if (a < 1) throw EnumError("ProfileMismatch", "parts must be positive");
    total += a;
  }
  if (total != 4 * genus - 2 + 2 * n)
    throw EnumError("ProfileMismatch", "profile must sum to the edge count");
  rational s = 0;
  for (const auto& e : store.get(genus, n, 1).entries)
    if (e.pos_degrees == alpha) s += rational(1, e.aut_order);
  return s;
}

struct HurwitzTable {
  int genus = 0, n = 0;
  std::map<std::vector<int>, rational> counts;  // by composition
};

inline HurwitzTable hurwitz_table(CatalogStore& store, int genus, int n) {
  HurwitzTable t;
  t.genus = genus;
  t.n = n;
  for (const auto& e : store.get(genus, n, 1).entries) t.counts[e.pos_degrees] += rational(1, e.aut_order);
  return t;
}

// Cell volume for one negative boundary: the metric space is a product of
// simplices, one per positive boundary.
inline rational cell_volume_one_negative(const CatalogEntry& e, const std::vector<rational>& x) {
  rational v = 1;
  for (size_t i = 0; i < e.pos_degrees.size(); ++i)
    v *= pow_rational(x[i], e.pos_degrees[i] - 1) / rational(factorial(e.pos_degrees[i] - 1));
  return v;
}

inline RationalPoly cell_volume_one_negative_poly(const CatalogEntry& e) {
  const int n = static_cast<int>(e.pos_degrees.size());
  RationalPoly p = RationalPoly::constant(n, 1);
  RationalPoly::Exponents exps(n, 0);
  rational c = 1;
  for (int i = 0; i < n; ++i) {
    exps[i] = e.pos_degrees[i] - 1;
    c /= rational(factorial(e.pos_degrees[i] - 1));
  }
  RationalPoly out(n);
  out.add_term(exps, c);
  return out;
}

namespace enum_detail {

// integer metrics m >= 1 with prescribed boundary sums
inline long count_lattice_metrics(const RibbonGraph& g, const std::vector<long>& target) {
  const int E = g.n_edges();
  std::vector<long> rem(target);
  std::vector<std::vector<int>> slots_after(E + 1, std::vector<int>(g.n_faces(), 0));
  for (int e = E - 1; e >= 0; --e) {
    slots_after[e] = slots_after[e + 1];
    slots_after[e][g.face_of[g.edges[e].first]]++;
    slots_after[e][g.face_of[g.edges[e].second]]++;
  }
  std::function<long(int)> rec = [&](int e) -> long {
    if (e == E) {
      for (long r : rem)
        if (r != 0) return 0;
      return 1;
    }
    int f1 = g.face_of[g.edges[e].first];
    int f2 = g.face_of[g.edges[e].second];
    long hi = f1 == f2 ? (rem[f1] - slots_after[e + 1][f1]) / 2
                       : std::min(rem[f1] - slots_after[e + 1][f1],
                                  rem[f2] - slots_after[e + 1][f2]);
    long total = 0;
    for (long v = 1; v <= hi; ++v) {
      rem[f1] -= v;
      rem[f2] -= v;
      total += rec(e + 1);
      rem[f1] += v;
      rem[f2] += v;
    }
    return total;
  };
  return rec(0);
}

}  // namespace enum_detail

// Lattice-normalized cell volume by Ehrhart counting: count integer metrics
// with boundary sums t*L for t = 1..d+3, fit the degree-d polynomial on the
// first d+1 counts, verify it on the last two, and return its leading
// coefficient.
inline rational cell_volume_ehrhart(const CatalogEntry& e, const std::vector<long>& L_by_face) {
  const auto& g = e.graph;
  {
    long res = 0;
    for (int f = 0; f < g.n_faces(); ++f)
      res += face_sign(g, e.eps, f) * L_by_face[f];
    if (res != 0) throw EnumError("NonIntegralInput", "boundary lengths violate the residue");
    for (long l : L_by_face)
      if (l <= 0) throw EnumError("NonIntegralInput", "boundary lengths must be positive");
  }
  const int d = g.n_edges() - (g.n_faces() - 1);
  QVec ts, counts;
  bool any = false;
  for (int t = 1; t <= d + 3; ++t) {
    std::vector<long> target(g.n_faces());
    for (int f = 0; f < g.n_faces(); ++f) target[f] = t * L_by_face[f];
    long c = enum_detail::count_lattice_metrics(g, target);
    any |= c > 0;
    ts.push_back(rational(t));
    counts.push_back(rational(c));
  }
  if (!any) throw EnumError("EmptyCell", "no positive integer metric matches");
  QVec fit_x(ts.begin(), ts.begin() + d + 1), fit_y(counts.begin(), counts.begin() + d + 1);
  QVec coeff = interpolate(fit_x, fit_y);
  for (int k = d + 1; k <= d + 2; ++k)
    if (eval_poly(coeff, ts[k]) != counts[k])
      throw std::logic_error("lattice counts are not polynomial over the sampled range");
  return coeff.size() > static_cast<size_t>(d) ? coeff[d] : rational(0);
}

// Exhaustive volume of the moduli space at an integral boundary point:
// sum of cell volumes over the catalog weighted by automorphisms. Uses the
// simplex product formula when there is one negative boundary.
inline rational volume_oracle(CatalogStore& store, int genus, int n_plus, int n_minus,
                              const std::vector<long>& L_plus,
                              const std::vector<long>& L_minus) {
  const auto& cat = store.get(genus, n_plus, n_minus);
  long sp = std::accumulate(L_plus.begin(), L_plus.end(), 0L);
  long sm = std::accumulate(L_minus.begin(), L_minus.end(), 0L);
  if (sp != sm) throw EnumError("NonIntegralInput", "residue condition fails");
  rational total = 0;
  for (const auto& e : cat.entries) {
    rational cell;
    if (n_minus == 1) {
      std::vector<rational> x(L_plus.begin(), L_plus.end());
      cell = cell_volume_one_negative(e, x);
    } else {
      std::vector<long> by_face(e.graph.n_faces());
      for (int f = 0; f < e.graph.n_faces(); ++f) {
        int lab = e.labels[f];
        by_face[f] = face_sign(e.graph, e.eps, f) > 0 ? L_plus[lab - 1] : L_minus[lab - 1];
      }
      try {
        cell = cell_volume_ehrhart(e, by_face);
      } catch (const EnumError& err) {
        if (err.code == "EmptyCell") continue;
        throw;
      }
    }
    total += cell / e.aut_order;
  }
  return total;
}

}  // namespace rgvol
