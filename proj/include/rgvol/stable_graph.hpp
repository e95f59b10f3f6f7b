#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rgvol/linalg.hpp"
#include "rgvol/rational.hpp"

namespace rgvol {

// A component boundary slot: either a labelled leg of the glued surface or
// one end of a gluing edge. Edge ends carry the edge index.
struct Slot {
  int sign = 0;       // +1 entry, -1 exit
  bool is_leg = true;
  int label = 0;      // legs: 1..n within the sign class; edge ends: edge id
};

struct StableComponent {
  int genus = 0;
  std::vector<Slot> slots;
};

struct SlotRef {
  int comp = -1;
  int slot = -1;
  bool operator==(const SlotRef& o) const { return comp == o.comp && slot == o.slot; }
};

// Directed stable graph: components with signed slots, edge ends paired with
// opposite signs. Edges are listed as (negative end, positive end); flux runs
// along that direction, entering a component through its positive slots and
// leaving through the negative ones.
struct DirectedStableGraph {
  std::vector<StableComponent> components;
  std::vector<std::pair<SlotRef, SlotRef>> edges;  // (neg end, pos end)

  int n_components() const { return static_cast<int>(components.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  std::vector<std::pair<int, int>> legs(int sign) const {  // (comp, slot)
    std::vector<std::pair<int, int>> out;
    for (int c = 0; c < n_components(); ++c)
      for (int s = 0; s < static_cast<int>(components[c].slots.size()); ++s)
        if (components[c].slots[s].is_leg && components[c].slots[s].sign == sign)
          out.emplace_back(c, s);
    return out;
  }
};

enum class StableError {
  SignViolation,
  DirectionViolation,
  UnstableComponent,
  Disconnected,
  BadPairing,
};

struct StableViolation {
  StableError kind;
  std::string detail;
};

inline const char* to_string(StableError e) {
  switch (e) {
    case StableError::SignViolation: return "SignViolation";
    case StableError::DirectionViolation: return "DirectionViolation";
    case StableError::UnstableComponent: return "UnstableComponent";
    case StableError::Disconnected: return "Disconnected";
    case StableError::BadPairing: return "BadPairing";
  }
  return "?";
}

inline std::vector<StableViolation> validate_stable(const DirectedStableGraph& sg) {
  std::vector<StableViolation> out;
  for (size_t i = 0; i < sg.edges.size(); ++i) {
    auto [a, b] = sg.edges[i];
    auto ok_ref = [&](const SlotRef& r) {
      return r.comp >= 0 && r.comp < sg.n_components() && r.slot >= 0 &&
             r.slot < static_cast<int>(sg.components[r.comp].slots.size()) &&
             !sg.components[r.comp].slots[r.slot].is_leg;
    };
    if (!ok_ref(a) || !ok_ref(b)) {
      out.push_back({StableError::BadPairing, "edge " + std::to_string(i) + " has a bad end"});
      continue;
    }
    int sa = sg.components[a.comp].slots[a.slot].sign;
    int sb = sg.components[b.comp].slots[b.slot].sign;
    if (sa != -1 || sb != +1)
      out.push_back({StableError::SignViolation,
                     "edge " + std::to_string(i) + " ends must be (-,+)"});
  }
  for (int c = 0; c < sg.n_components(); ++c) {
    const auto& comp = sg.components[c];
    bool pos = false, neg = false;
    for (const auto& s : comp.slots) (s.sign > 0 ? pos : neg) = true;
    if (!pos || !neg)
      out.push_back({StableError::DirectionViolation,
                     "component " + std::to_string(c) + " has constant sign"});
    if (2 * comp.genus - 2 + static_cast<int>(comp.slots.size()) <= 0)
      out.push_back({StableError::UnstableComponent,
                     "component " + std::to_string(c) + " is unstable"});
  }
  if (sg.n_components() > 1) {
    std::vector<int> parent(sg.n_components());
    for (int i = 0; i < sg.n_components(); ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (const auto& [a, b] : sg.edges) parent[find(a.comp)] = find(b.comp);
    for (int c = 1; c < sg.n_components(); ++c)
      if (find(c) != find(0)) {
        out.push_back({StableError::Disconnected, "underlying graph not connected"});
        break;
      }
  }
  return out;
}

enum class EdgeClass { Degenerate, Constant, Bounded, UnboundedNonconstant };

inline const char* to_string(EdgeClass c) {
  switch (c) {
    case EdgeClass::Degenerate: return "degenerate";
    case EdgeClass::Constant: return "constant";
    case EdgeClass::Bounded: return "bounded";
    case EdgeClass::UnboundedNonconstant: return "unbounded-nonconstant";
  }
  return "?";
}

// Length cone of a directed stable graph. Coordinates are the internal edges
// followed by the legs (positive legs first, then negative, each by label).
struct ConeReport {
  int dim = 0;
  int expected_dim = 0;
  bool non_degenerate = false;
  std::vector<std::vector<int>> extremal_rays;  // over edges + legs
  std::vector<EdgeClass> edge_class;
  std::vector<std::string> leg_names;
};

namespace detail {

struct FlowDigraph {
  // arcs: 0..E-1 internal edges, then legs, then the sink->source return arc
  struct Arc {
    int from, to;
  };
  std::vector<Arc> arcs;
  int n_nodes = 0;  // components + source + sink
  int source = 0, sink = 0;
  int n_edge_arcs = 0;
  int n_coord_arcs = 0;  // edges + legs
  std::vector<std::string> leg_names;
};

inline FlowDigraph flow_digraph(const DirectedStableGraph& sg) {
  FlowDigraph d;
  int C = sg.n_components();
  d.n_nodes = C + 2;
  d.source = C;
  d.sink = C + 1;
  for (const auto& [neg, pos] : sg.edges) d.arcs.push_back({neg.comp, pos.comp});
  d.n_edge_arcs = static_cast<int>(d.arcs.size());
  for (int sign : {+1, -1}) {
    auto legs = sg.legs(sign);
    std::sort(legs.begin(), legs.end(), [&](auto a, auto b) {
      return sg.components[a.first].slots[a.second].label <
             sg.components[b.first].slots[b.second].label;
    });
    for (auto [c, s] : legs) {
      if (sign > 0)
        d.arcs.push_back({d.source, c});
      else
        d.arcs.push_back({c, d.sink});
      d.leg_names.push_back((sign > 0 ? "L+" : "L-") +
                            std::to_string(sg.components[c].slots[s].label));
    }
  }
  d.n_coord_arcs = static_cast<int>(d.arcs.size());
  d.arcs.push_back({d.sink, d.source});
  return d;
}

// All node-simple directed cycles, as sorted arc-id lists.
inline std::vector<std::vector<int>> simple_cycles(const FlowDigraph& d) {
  std::vector<std::vector<int>> out;
  std::set<std::vector<int>> seen;
  const int A = static_cast<int>(d.arcs.size());
  std::vector<std::vector<int>> arcs_from(d.n_nodes);
  for (int a = 0; a < A; ++a) arcs_from[d.arcs[a].from].push_back(a);
  std::vector<char> on_path(d.n_nodes, 0);
  std::vector<int> path;
  int root_node = -1;
  std::function<void(int)> dfs = [&](int node) {
    for (int a : arcs_from[node]) {
      int to = d.arcs[a].to;
      if (to == root_node) {
        std::vector<int> cyc = path;
        cyc.push_back(a);
        std::sort(cyc.begin(), cyc.end());
        if (seen.insert(cyc).second) out.push_back(cyc);
        continue;
      }
      if (to < root_node || on_path[to]) continue;  // root is the least node in a cycle
      on_path[to] = 1;
      path.push_back(a);
      dfs(to);
      path.pop_back();
      on_path[to] = 0;
    }
  };
  for (root_node = 0; root_node < d.n_nodes; ++root_node) {
    on_path.assign(d.n_nodes, 0);
    on_path[root_node] = 1;
    path.clear();
    dfs(root_node);
  }
  return out;
}

}  // namespace detail

inline ConeReport cone_analysis(const DirectedStableGraph& sg) {
  auto d = detail::flow_digraph(sg);
  auto cycles = detail::simple_cycles(d);
  ConeReport rep;
  rep.leg_names = d.leg_names;
  const int E = d.n_edge_arcs;
  const int coords = d.n_coord_arcs;
  std::vector<char> on_any_cycle(E, 0), on_absolute_cycle(E, 0);
  for (const auto& cyc : cycles) {
    bool absolute = true;
    for (int a : cyc)
      if (a >= coords) absolute = false;
    std::vector<int> ray(coords, 0);
    for (int a : cyc)
      if (a < coords) ray[a] = 1;
    rep.extremal_rays.push_back(ray);
    for (int a : cyc)
      if (a < E) {
        on_any_cycle[a] = 1;
        if (absolute) on_absolute_cycle[a] = 1;
      }
  }
  // bridges of the underlying component/edge multigraph
  std::vector<char> bridge(E, 0);
  {
    int C = sg.n_components();
    for (int e = 0; e < E; ++e) {
      std::vector<int> parent(C);
      for (int i = 0; i < C; ++i) parent[i] = i;
      std::function<int(int)> find = [&](int x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
      };
      for (int f = 0; f < E; ++f) {
        if (f == e) continue;
        parent[find(d.arcs[f].from)] = find(d.arcs[f].to);
      }
      bridge[e] = find(d.arcs[e].from) != find(d.arcs[e].to);
    }
  }
  rep.edge_class.resize(E);
  for (int e = 0; e < E; ++e) {
    if (!on_any_cycle[e])
      rep.edge_class[e] = EdgeClass::Degenerate;
    else if (bridge[e])
      rep.edge_class[e] = EdgeClass::Constant;
    else if (!on_absolute_cycle[e])
      rep.edge_class[e] = EdgeClass::Bounded;
    else
      rep.edge_class[e] = EdgeClass::UnboundedNonconstant;
  }
  if (!rep.extremal_rays.empty()) {
    QMat m;
    for (const auto& r : rep.extremal_rays) m.emplace_back(r.begin(), r.end());
    rep.dim = rank(m);
  }
  rep.expected_dim = E + (coords - E) - sg.n_components() + 1;
  rep.non_degenerate = rep.dim == rep.expected_dim;
  return rep;
}

struct AcyclicityReport {
  bool acyclic = false;
  std::vector<int> component_order;  // a topological order when acyclic
};

// Acyclic = no directed cycle among internal edges alone. The order extends
// the edge direction (tails before heads).
inline AcyclicityReport is_acyclic(const DirectedStableGraph& sg) {
  AcyclicityReport rep;
  int C = sg.n_components();
  std::vector<std::vector<int>> succ(C);
  std::vector<int> indeg(C, 0);
  for (const auto& [neg, pos] : sg.edges) {
    succ[neg.comp].push_back(pos.comp);
    indeg[pos.comp]++;
  }
  std::vector<int> queue;
  for (int c = 0; c < C; ++c)
    if (indeg[c] == 0) queue.push_back(c);
  std::sort(queue.begin(), queue.end());
  while (!queue.empty()) {
    int c = queue.front();
    queue.erase(queue.begin());
    rep.component_order.push_back(c);
    for (int s : succ[c])
      if (--indeg[s] == 0) queue.push_back(s);
  }
  rep.acyclic = static_cast<int>(rep.component_order.size()) == C;
  if (!rep.acyclic) rep.component_order.clear();
  return rep;
}

// Brute-force isomorphism respecting genus, slot signs/kinds, leg labels and
// the edge pairing. Sizes here are a handful of components.
inline bool stable_isomorphic(const DirectedStableGraph& a, const DirectedStableGraph& b) {
  if (a.n_components() != b.n_components() || a.n_edges() != b.n_edges()) return false;
  const int C = a.n_components();
  std::vector<int> perm(C, -1);
  std::vector<char> used(C, 0);
  auto comp_compatible = [&](int ca, int cb) {
    const auto& A = a.components[ca];
    const auto& B = b.components[cb];
    if (A.genus != B.genus || A.slots.size() != B.slots.size()) return false;
    auto profile = [](const StableComponent& c) {
      std::multiset<std::tuple<int, bool, int>> p;
      for (const auto& s : c.slots) p.insert({s.sign, s.is_leg, s.is_leg ? s.label : -1});
      return p;
    };
    return profile(A) == profile(B);
  };
  auto edges_match = [&]() {
    auto key = [](const DirectedStableGraph& g, const std::pair<SlotRef, SlotRef>& e,
                  const std::vector<int>* p) {
      int cn = p ? (*p)[e.first.comp] : e.first.comp;
      int cp = p ? (*p)[e.second.comp] : e.second.comp;
      return std::make_pair(cn, cp);
    };
    std::multiset<std::pair<int, int>> ka, kb;
    for (const auto& e : a.edges) ka.insert(key(a, e, &perm));
    for (const auto& e : b.edges) kb.insert(key(b, e, nullptr));
    return ka == kb;
  };
  std::function<bool(int)> go = [&](int ca) {
    if (ca == C) return edges_match();
    for (int cb = 0; cb < C; ++cb) {
      if (used[cb] || !comp_compatible(ca, cb)) continue;
      used[cb] = 1;
      perm[ca] = cb;
      if (go(ca + 1)) return true;
      used[cb] = 0;
      perm[ca] = -1;
    }
    return false;
  };
  return go(0);
}

inline std::string stable_to_dot(const DirectedStableGraph& sg) {
  std::ostringstream os;
  os << "digraph stable {\n";
  for (int c = 0; c < sg.n_components(); ++c) {
    const auto& comp = sg.components[c];
    std::string pos, neg;
    for (const auto& s : comp.slots) {
      if (!s.is_leg) continue;
      auto& dst = s.sign > 0 ? pos : neg;
      if (!dst.empty()) dst += ",";
      dst += std::to_string(s.label);
    }
    os << "  c" << c << " [label=\"(" << comp.genus << "; +" << pos << "; -" << neg
       << ")\"];\n";
  }
  for (size_t e = 0; e < sg.edges.size(); ++e)
    os << "  c" << sg.edges[e].first.comp << " -> c" << sg.edges[e].second.comp
       << " [label=\"g" << e << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace rgvol
