// Copyright 2026 The Toastlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TOASTLAB_ORIENTATION_HPP_
#define TOASTLAB_ORIENTATION_HPP_

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "toastlab/error.hpp"
#include "toastlab/graph.hpp"
#include "toastlab/metric.hpp"
#include "toastlab/report.hpp"
#include "toastlab/toast.hpp"

namespace toastlab {

/// Closed walk; vertices.front() == vertices.back().
struct Cycle {
  std::vector<Vertex> vertices;

  std::size_t length() const { return vertices.empty() ? 0 : vertices.size() - 1; }
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
      out.emplace_back(vertices[i], vertices[i + 1]);
    }
    return out;
  }
  friend bool operator==(const Cycle&, const Cycle&) = default;
};

struct Arc {
  Vertex tail = 0;
  Vertex head = 0;
  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Oriented edges, sorted by the underlying undirected edge.
struct Orientation {
  std::vector<Arc> arcs;
  friend bool operator==(const Orientation&, const Orientation&) = default;
};

/// One extracted cycle of a balanced_orientation run.
struct OrientationStep {
  Cycle cycle;
  int owner_tile = -1;   // id of the innermost tile holding the seed edge
  int region_tile = -1;  // id of the region searched; -1 is the whole graph
  int layer = 0;
  std::string method;    // "direct" or "stitch"
};

namespace detail {

// Spanning subgraph of (n, edges) with odd degree exactly on `p`, as a
// per-edge selection. BFS forest, consecutive pairing of P inside each
// component, symmetric difference of the tree paths. nullopt when some
// component holds an odd number of P vertices.
inline std::optional<std::vector<char>> parity_on_edges(int n, const std::vector<Edge>& edges,
                                                         std::vector<Vertex> p) {
  std::vector<std::vector<std::pair<Vertex, int>>> adj(static_cast<std::size_t>(n));
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    adj[edges[i].u].emplace_back(edges[i].v, i);
    adj[edges[i].v].emplace_back(edges[i].u, i);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  std::vector<int> depth(static_cast<std::size_t>(n), 0);
  std::vector<int> up_edge(static_cast<std::size_t>(n), -1);
  std::vector<Vertex> up(static_cast<std::size_t>(n), -1);
  int count = 0;
  for (Vertex s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = count;
    std::vector<Vertex> queue{s};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex v = queue[head];
      for (const auto& [w, id] : adj[v]) {
        if (comp[w] >= 0) continue;
        comp[w] = count;
        depth[w] = depth[v] + 1;
        up[w] = v;
        up_edge[w] = id;
        queue.push_back(w);
      }
    }
    ++count;
  }
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  std::vector<std::vector<Vertex>> by_comp(static_cast<std::size_t>(count));
  for (Vertex v : p) by_comp[comp[v]].push_back(v);
  std::vector<char> chosen(edges.size(), 0);
  for (const auto& members : by_comp) {
    if (members.size() % 2 != 0) return std::nullopt;
    for (std::size_t i = 0; i < members.size(); i += 2) {
      Vertex a = members[i];
      Vertex b = members[i + 1];
      while (a != b) {
        if (depth[a] < depth[b]) std::swap(a, b);
        chosen[up_edge[a]] ^= 1;
        a = up[a];
      }
    }
  }
  return chosen;
}

// Least-neighbor trail from e.v back to e.u over unused available edges
// inside the region, loop-erased to a simple cycle through e. Requires even
// degrees in the available subgraph; returns nullopt if the walk sticks.
inline std::optional<Cycle> trail_cycle(const Graph& g, const std::vector<char>& avail,
                                        const Mask& in_region, EdgeId seed) {
  const Edge e = g.edge(seed);
  std::map<EdgeId, bool> used{{seed, true}};
  std::vector<Vertex> walk{e.v};
  Vertex cur = e.v;
  while (cur != e.u) {
    std::optional<Neighbor> next;
    for (const Neighbor& n : g.neighbors(cur)) {
      if (!avail[n.edge] || !in_region[n.vertex] || used.count(n.edge)) continue;
      next = n;
      break;
    }
    if (!next) return std::nullopt;
    used[next->edge] = true;
    cur = next->vertex;
    walk.push_back(cur);
  }
  // Loop erasure of the walk e.v -> e.u.
  std::vector<Vertex> path;
  std::map<Vertex, std::size_t> pos;
  for (Vertex v : walk) {
    const auto it = pos.find(v);
    if (it != pos.end()) {
      for (std::size_t k = it->second + 1; k < path.size(); ++k) pos.erase(path[k]);
      path.resize(it->second + 1);
      continue;
    }
    pos[v] = path.size();
    path.push_back(v);
  }
  Cycle c;
  c.vertices.push_back(e.u);
  c.vertices.insert(c.vertices.end(), path.begin(), path.end());
  return c;
}

// Shortest path e.v -> e.u in (available - e) inside the region, closed
// into a cycle with e.
inline std::optional<Cycle> bfs_cycle(const Graph& g, const std::vector<char>& avail,
                                      const Mask& in_region, EdgeId seed) {
  const Edge e = g.edge(seed);
  std::map<Vertex, Vertex> prev{{e.v, e.v}};
  std::vector<Vertex> queue{e.v};
  bool found = false;
  for (std::size_t head = 0; head < queue.size() && !found; ++head) {
    const Vertex v = queue[head];
    for (const Neighbor& n : g.neighbors(v)) {
      if (n.edge == seed || !avail[n.edge] || !in_region[n.vertex]) continue;
      if (prev.count(n.vertex)) continue;
      prev[n.vertex] = v;
      if (n.vertex == e.u) {
        found = true;
        break;
      }
      queue.push_back(n.vertex);
    }
  }
  if (!found) return std::nullopt;
  Cycle c;
  for (Vertex v = e.u;; v = prev[v]) {
    c.vertices.push_back(v);
    if (v == e.v) break;
  }
  std::reverse(c.vertices.begin(), c.vertices.end());  // e.v ... e.u
  c.vertices.insert(c.vertices.begin(), e.u);
  return c;
}

// Trail from s inside the region until it first reaches the target set.
inline std::optional<std::vector<EdgeId>> trail_to(const Graph& g, const std::vector<char>& avail,
                                                   const Mask& in_region, const Mask& target,
                                                   Vertex s, std::vector<char>& used) {
  std::vector<EdgeId> out;
  Vertex cur = s;
  while (!target[cur]) {
    std::optional<Neighbor> next;
    for (const Neighbor& n : g.neighbors(cur)) {
      if (!avail[n.edge] || used[n.edge] || !in_region[n.vertex]) continue;
      next = n;
      break;
    }
    if (!next) return std::nullopt;
    used[next->edge] = 1;
    out.push_back(next->edge);
    cur = next->vertex;
  }
  return out;
}

// Parity stitch: walk from both endpoints of e into the target set, join
// the two landing points by a parity subgraph of the target's available
// edges, and peel a cycle through e out of the resulting even subgraph.
inline std::optional<Cycle> stitch_cycle(const Graph& g, const std::vector<char>& avail,
                                         const Mask& in_region, const Mask& target,
                                         EdgeId seed) {
  const Edge e = g.edge(seed);
  std::vector<char> used(static_cast<std::size_t>(g.edge_count()), 0);
  used[seed] = 1;
  const auto wu = trail_to(g, avail, in_region, target, e.u, used);
  if (!wu) return std::nullopt;
  const auto wv = trail_to(g, avail, in_region, target, e.v, used);
  if (!wv) return std::nullopt;
  auto landing = [&](Vertex s, const std::vector<EdgeId>& w) {
    Vertex cur = s;
    for (EdgeId id : w) cur = g.edge(id).other(cur);
    return cur;
  };
  const Vertex pu = landing(e.u, *wu);
  const Vertex pv = landing(e.v, *wv);

  std::map<Vertex, Vertex> local;
  std::vector<Vertex> global;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (target[v] && in_region[v]) {
      local[v] = static_cast<Vertex>(global.size());
      global.push_back(v);
    }
  }
  std::vector<Edge> sub;
  std::vector<EdgeId> sub_ids;
  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    const Edge& x = g.edge(id);
    if (!avail[id] || used[id] || !local.count(x.u) || !local.count(x.v)) continue;
    sub.emplace_back(local[x.u], local[x.v]);
    sub_ids.push_back(id);
  }
  std::vector<Vertex> p;
  if (pu != pv) p = {local[pu], local[pv]};
  const auto h = parity_on_edges(static_cast<int>(global.size()), sub, p);
  if (!h) return std::nullopt;

  std::vector<char> even(static_cast<std::size_t>(g.edge_count()), 0);
  even[seed] = 1;
  for (EdgeId id : *wu) even[id] = 1;
  for (EdgeId id : *wv) even[id] = 1;
  for (std::size_t i = 0; i < sub_ids.size(); ++i) {
    if ((*h)[i]) even[sub_ids[i]] = 1;
  }
  return trail_cycle(g, even, in_region, seed);
}

inline std::vector<char> edge_mask(const Graph& g, const EdgeSet& s, const char* what) {
  std::vector<char> m(static_cast<std::size_t>(g.edge_count()), 0);
  for (const Edge& e : s) {
    const auto id = g.find_edge(e.u, e.v);
    if (!id) {
      throw Error(ErrorCode::kNoCycle, std::string(what) + " holds a non-edge {" +
                                           std::to_string(e.u) + "," + std::to_string(e.v) + "}");
    }
    m[*id] = 1;
  }
  return m;
}

inline EdgeId seed_edge(const Graph& g, const std::vector<char>& avail, const Mask& in_region,
                        const Edge& e) {
  const auto id = g.find_edge(e.u, e.v);
  if (!id || !avail[*id]) throw Error(ErrorCode::kNoCycle, "seed edge is not available");
  if (!in_region[e.u] || !in_region[e.v]) {
    throw Error(ErrorCode::kNoCycle, "seed edge leaves the region");
  }
  return *id;
}

}  // namespace detail

/// Edge set with odd degree exactly on P.
inline EdgeSet parity_subgraph(const Graph& g, const VertexSet& p) {
  check_members(g, p);
  if (p.size() % 2 != 0) {
    throw Error(ErrorCode::kNoSolution, "|P| = " + std::to_string(p.size()) + " is odd");
  }
  const auto chosen = detail::parity_on_edges(g.vertex_count(), g.edges(), p.ids());
  if (!chosen) {
    throw Error(ErrorCode::kNoSolution, "a component holds an odd number of P vertices");
  }
  std::vector<Edge> out;
  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    if ((*chosen)[id]) out.push_back(g.edge(id));
  }
  return EdgeSet(std::move(out));
}

/// Simple cycle through e using available edges inside the region. The
/// available subgraph restricted to the region must have even degrees.
inline Cycle extract_cycle(const Graph& g, const EdgeSet& available, const Edge& e,
                           const VertexSet& region) {
  check_members(g, region);
  const auto avail = detail::edge_mask(g, available, "available");
  const Mask in_region = region.mask(static_cast<std::size_t>(g.vertex_count()));
  const EdgeId seed = detail::seed_edge(g, avail, in_region, e);
  for (Vertex v : region) {
    int deg = 0;
    for (const Neighbor& n : g.neighbors(v)) deg += avail[n.edge] && in_region[n.vertex];
    if (deg % 2 != 0) {
      throw Error(ErrorCode::kNoCycle, "vertex " + std::to_string(v) +
                                           " has odd available degree " + std::to_string(deg));
    }
  }
  auto c = detail::trail_cycle(g, avail, in_region, seed);
  if (!c) throw Error(ErrorCode::kNoCycle, "trail got stuck");
  return *c;
}

/// Cycle through e built by the parity stitch toward `target` (typically the
/// region tile's residual). No even-degree precondition; no-cycle if the
/// walks stick or the landing points cannot be paired.
inline Cycle stitch_cycle(const Graph& g, const EdgeSet& available, const Edge& e,
                          const VertexSet& region, const VertexSet& target) {
  check_members(g, region);
  check_members(g, target);
  const auto nv = static_cast<std::size_t>(g.vertex_count());
  const auto avail = detail::edge_mask(g, available, "available");
  const Mask in_region = region.mask(nv);
  const EdgeId seed = detail::seed_edge(g, avail, in_region, e);
  auto c = detail::stitch_cycle(g, avail, in_region, target.mask(nv), seed);
  if (!c) throw Error(ErrorCode::kNoCycle, "stitch failed");
  return *c;
}

/// Balanced orientation of an even-degree graph driven by a connected
/// toast. Edges are seeded by (layer of innermost tile, edge id); each seed
/// is closed into a cycle inside the innermost tile, then its ancestors,
/// then the whole graph, and the cycle is oriented along its walk.
inline Orientation balanced_orientation(const Graph& g, const Toast& toast,
                                        std::vector<OrientationStep>* log = nullptr) {
  std::vector<Vertex> odd;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (g.degree(v) % 2 != 0) odd.push_back(v);
  }
  if (!odd.empty()) {
    throw Error(ErrorCode::kNotEvenDegree,
                std::to_string(odd.size()) + " odd-degree vertices, first " +
                    std::to_string(odd.front()));
  }
  const Report check = verify_toast(g, toast);
  if (!check.passed("T1") || !check.passed("T2") || !check.passed("T3")) {
    throw Error(ErrorCode::kInvalidToast, "orientation needs T1-T3: " + check.summary());
  }
  const TileHierarchy h(g, toast);
  const auto nv = static_cast<std::size_t>(g.vertex_count());
  std::vector<int> owner(static_cast<std::size_t>(g.edge_count()));
  std::vector<EdgeId> order;
  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    owner[id] = h.edge_owner(g.edge(id));
    if (owner[id] < 0) {
      throw Error(ErrorCode::kInvalidToast, "edge {" + std::to_string(g.edge(id).u) + "," +
                                                std::to_string(g.edge(id).v) +
                                                "} lies in no tile");
    }
    order.push_back(id);
  }
  std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
    return h.layer(owner[a]) < h.layer(owner[b]);
  });

  std::vector<std::optional<Mask>> tile_mask(static_cast<std::size_t>(h.size()));
  std::vector<std::optional<Mask>> residual_mask(static_cast<std::size_t>(h.size()));
  const Mask everything(nv, 1);
  auto region_of = [&](int i) -> const Mask& {
    if (i < 0) return everything;
    if (!tile_mask[i]) tile_mask[i] = h.tile(i).vertices.mask(nv);
    return *tile_mask[i];
  };

  std::vector<char> avail(static_cast<std::size_t>(g.edge_count()), 1);
  std::vector<Arc> arcs(static_cast<std::size_t>(g.edge_count()));
  std::vector<int> balance(nv, 0);
  auto assert_balanced = [&](int layer) {
    for (std::size_t v = 0; v < nv; ++v) {
      if (balance[v] != 0) {
        throw std::logic_error("orientation unbalanced at vertex " + std::to_string(v) +
                               " after layer " + std::to_string(layer));
      }
    }
  };
  int current_layer = order.empty() ? 0 : h.layer(owner[order.front()]);
  for (EdgeId id : order) {
    const int layer = h.layer(owner[id]);
    if (layer != current_layer) {
      assert_balanced(current_layer);
      current_layer = layer;
    }
    if (!avail[id]) continue;
    std::vector<int> regions{owner[id]};
    for (int a : h.ancestors(owner[id])) regions.push_back(a);
    regions.push_back(-1);
    std::optional<Cycle> cycle;
    OrientationStep step;
    step.owner_tile = h.tile(owner[id]).id;
    step.layer = layer;
    for (int r : regions) {
      const Mask& in_region = region_of(r);
      cycle = detail::bfs_cycle(g, avail, in_region, id);
      step.method = "direct";
      if (!cycle && r >= 0) {
        if (!residual_mask[r]) residual_mask[r] = h.residual(r).mask(nv);
        cycle = detail::stitch_cycle(g, avail, in_region, *residual_mask[r], id);
        step.method = "stitch";
      }
      if (cycle) {
        step.region_tile = r < 0 ? -1 : h.tile(r).id;
        break;
      }
    }
    if (!cycle) {
      throw Error(ErrorCode::kNoCycle, "no cycle through edge " + std::to_string(id));
    }
    for (std::size_t k = 0; k + 1 < cycle->vertices.size(); ++k) {
      const Vertex a = cycle->vertices[k];
      const Vertex b = cycle->vertices[k + 1];
      const EdgeId eid = *g.find_edge(a, b);
      avail[eid] = 0;
      arcs[eid] = Arc{a, b};
      ++balance[a];
      --balance[b];
    }
    if (log) {
      step.cycle = std::move(*cycle);
      log->push_back(std::move(step));
    }
  }
  assert_balanced(current_layer);
  return Orientation{std::move(arcs)};
}

/// Every edge oriented exactly once, and indeg = outdeg everywhere.
inline Report verify_balanced(const Graph& g, const Orientation& o) {
  Report report;
  const auto nv = static_cast<std::size_t>(g.vertex_count());
  std::vector<int> times(static_cast<std::size_t>(g.edge_count()), 0);
  std::vector<int> in(nv, 0), out(nv, 0);
  std::vector<Json> invalid;
  for (const Arc& a : o.arcs) {
    const bool ids_ok = a.tail >= 0 && a.head >= 0 && a.tail < g.vertex_count() &&
                        a.head < g.vertex_count();
    const auto id = ids_ok ? g.find_edge(a.tail, a.head) : std::nullopt;
    if (!id) {
      invalid.push_back(Json::array({a.tail, a.head}));
      continue;
    }
    ++times[*id];
    ++out[a.tail];
    ++in[a.head];
  }
  report.add("edges_valid", invalid.empty(),
             invalid.empty() ? Json(nullptr) : Json{{"arcs", capped(invalid)}});
  std::vector<Json> twice, uncovered;
  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    const Edge& e = g.edge(id);
    if (times[id] > 1) twice.push_back(Json::array({e.u, e.v}));
    if (times[id] == 0) uncovered.push_back(Json::array({e.u, e.v}));
  }
  const bool once = twice.empty() && uncovered.empty();
  Json w = nullptr;
  if (!once) w = Json{{"duplicated", capped(twice)}, {"uncovered", capped(uncovered)}};
  report.add("oriented_once", once, w,
             Json{{"edges", g.edge_count()}, {"uncovered", uncovered.size()},
                  {"duplicated", twice.size()}});
  std::vector<Json> unbalanced;
  for (std::size_t v = 0; v < nv; ++v) {
    if (in[v] != out[v]) {
      unbalanced.push_back(Json{{"vertex", v}, {"in", in[v]}, {"out", out[v]}});
    }
  }
  report.add("balanced", unbalanced.empty(),
             unbalanced.empty() ? Json(nullptr) : Json{{"vertices", capped(unbalanced)}},
             Json{{"unbalanced", unbalanced.size()}});
  return report;
}

}  // namespace toastlab

#endif  // TOASTLAB_ORIENTATION_HPP_
