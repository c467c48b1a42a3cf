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

#ifndef TOASTLAB_TREE_HPP_
#define TOASTLAB_TREE_HPP_

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "toastlab/error.hpp"
#include "toastlab/graph.hpp"
#include "toastlab/metric.hpp"
#include "toastlab/report.hpp"
#include "toastlab/toast.hpp"

namespace toastlab {

/// Parent marker for a vertex that escapes directly (no outside neighbor).
inline constexpr Vertex kExteriorMarker = -1;

/// Spanning forest of the toast's union with one exit edge per tile, plus
/// the escape orientation (vertex -> parent). Parents outside the union, or
/// kExteriorMarker, terminate the escape walk.
struct TreeCertificate {
  EdgeSet tree_edges;
  std::map<int, Vertex> exit_vertices;  // tile id -> v_K
  EdgeSet exit_edges;
  std::map<Vertex, Vertex> escape_orientation;

  friend bool operator==(const TreeCertificate&, const TreeCertificate&) = default;
};

namespace detail {

// Breadth-first spanning tree of the induced subgraph on `s` from its least
// vertex, as (child, parent) links.
inline std::vector<std::pair<Vertex, Vertex>> bfs_tree(const Graph& g, const VertexSet& s,
                                                       const Mask& in_s) {
  std::vector<std::pair<Vertex, Vertex>> links;
  if (s.empty()) return links;
  std::map<Vertex, bool> seen;
  std::vector<Vertex> queue{s.front()};
  seen[s.front()] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex v = queue[head];
    for (const Neighbor& n : g.neighbors(v)) {
      if (!in_s[n.vertex] || seen.count(n.vertex)) continue;
      seen[n.vertex] = true;
      links.emplace_back(n.vertex, v);
      queue.push_back(n.vertex);
    }
  }
  return links;
}

}  // namespace detail

/// Spanning tree per residual (breadth-first from the least vertex), one
/// exit edge {v_K, u} per tile with v_K in K and u outside K, and the escape
/// orientation pointing every vertex of a residual toward its exit.
/// Non-maximal tiles exit into the parent's residual; maximal tiles exit to
/// a vertex outside the union that reaches the exterior.
inline TreeCertificate build_tree(const Graph& g, const Toast& toast) {
  const Report check = verify_toast(g, toast);
  if (!check.passed("T2") || !check.passed("T3")) {
    throw Error(ErrorCode::kInvalidToast, "tree needs T2 and T3: " + check.summary());
  }
  if (!g.has_escape()) {
    throw Error(ErrorCode::kNoEscape, g.describe() + " has no exterior to escape to");
  }
  const TileHierarchy h(g, toast);
  const std::size_t nv = static_cast<std::size_t>(g.vertex_count());
  const Mask in_union = toast.support().mask(nv);
  const Mask escapes = detail::escaping(g, in_union);

  TreeCertificate cert;
  std::vector<Edge> tree_edges;
  std::vector<Edge> exit_edges;
  for (int i = 0; i < h.size(); ++i) {
    const Tile& tile = h.tile(i);
    const VertexSet res = h.residual(i);
    const Mask in_res = res.mask(nv);
    const Mask in_tile = tile.vertices.mask(nv);
    const auto links = detail::bfs_tree(g, res, in_res);
    for (const auto& [child, parent] : links) tree_edges.emplace_back(child, parent);

    const int p = h.parent(i);
    Mask preferred(nv, 0);
    if (p >= 0) preferred = h.residual(p).mask(nv);
    auto eligible = [&](Vertex u, bool strict) {
      if (in_tile[u]) return false;
      if (p < 0) return !in_union[u] && escapes[u] != 0;
      return !strict || preferred[u] != 0;
    };
    Vertex exit_v = -1;
    Vertex exit_u = -1;
    for (bool strict : {true, false}) {
      for (Vertex v : tile.vertices) {
        for (const Neighbor& n : g.neighbors(v)) {
          if (eligible(n.vertex, strict)) {
            exit_v = v;
            exit_u = n.vertex;
            break;
          }
        }
        if (exit_v >= 0) break;
      }
      if (exit_v >= 0 || p < 0) break;
    }
    if (exit_v < 0) {
      throw Error(ErrorCode::kNoEscape,
                  "tile " + std::to_string(tile.id) + " has no eligible outside neighbor");
    }
    cert.exit_vertices[tile.id] = exit_v;
    exit_edges.emplace_back(exit_v, exit_u);

    // Re-root the residual tree at the exit vertex.
    std::map<Vertex, std::vector<Vertex>> adj;
    for (const auto& [child, parent] : links) {
      adj[child].push_back(parent);
      adj[parent].push_back(child);
    }
    cert.escape_orientation[exit_v] = exit_u;
    std::vector<Vertex> stack{exit_v};
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : adj[v]) {
        if (cert.escape_orientation.count(w)) continue;
        cert.escape_orientation[w] = v;
        stack.push_back(w);
      }
    }
  }
  cert.tree_edges = EdgeSet(std::move(tree_edges));
  cert.exit_edges = EdgeSet(std::move(exit_edges));
  return cert;
}

/// Checks (a) every vertex of the union is spanned, (b) tree and exit edges
/// form a forest, (c) each vertex of the union has exactly one parent along
/// a certificate edge and parent walks leave the union, and (d) the
/// one-end proxy: deleting any single vertex of the union leaves exactly one
/// of its pieces attached to an escaping terminal. Terminals are exterior
/// vertices and vertices outside the union that reach the exterior.
inline Report verify_tree(const Graph& g, const Toast& toast, const TreeCertificate& cert) {
  Report report;
  const std::size_t nv = static_cast<std::size_t>(g.vertex_count());
  const VertexSet support = toast.support();
  const Mask in_union = support.mask(nv);

  std::vector<Edge> all_edges(cert.tree_edges.begin(), cert.tree_edges.end());
  all_edges.insert(all_edges.end(), cert.exit_edges.begin(), cert.exit_edges.end());
  {
    std::vector<Json> bad;
    for (const Edge& e : all_edges) {
      if (e.u < 0 || e.v >= g.vertex_count() || !g.adjacent(e.u, e.v)) {
        bad.push_back(Json::array({e.u, e.v}));
      }
    }
    report.add("edges_valid", bad.empty(), bad.empty() ? Json(nullptr) : Json{{"edges", capped(bad)}});
    if (!bad.empty()) return report;
  }

  // (a)
  {
    Mask touched(nv, 0);
    for (const Edge& e : all_edges) touched[e.u] = touched[e.v] = 1;
    std::vector<Vertex> missing;
    for (Vertex v : support) {
      if (!touched[v]) missing.push_back(v);
    }
    report.add("spanning", missing.empty(),
               missing.empty() ? Json(nullptr) : Json{{"vertices", capped(missing)}},
               Json{{"union_size", support.size()}});
  }

  // (b)
  bool acyclic = true;
  {
    std::vector<int> root(nv);
    std::iota(root.begin(), root.end(), 0);
    std::function<int(int)> find = [&](int x) {
      while (root[x] != x) x = root[x] = root[root[x]];
      return x;
    };
    Json witness = nullptr;
    // An edge listed both as tree and exit edge is a 2-cycle.
    std::vector<Edge> sorted = all_edges;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const Edge& e = sorted[i];
      const int a = find(e.u), b = find(e.v);
      if (a == b || (i > 0 && sorted[i - 1] == e)) {
        acyclic = false;
        witness = Json{{"closing_edge", Json::array({e.u, e.v})}};
        break;
      }
      root[a] = b;
    }
    report.add("acyclic", acyclic, witness,
               Json{{"tree_edges", cert.tree_edges.size()}, {"exit_edges", cert.exit_edges.size()}});
  }

  // (c)
  {
    std::vector<Json> bad;
    for (Vertex v : support) {
      const auto it = cert.escape_orientation.find(v);
      if (it == cert.escape_orientation.end()) {
        bad.push_back(Json{{"vertex", v}, {"reason", "no parent"}});
        continue;
      }
      const Vertex p = it->second;
      if (p != kExteriorMarker && !cert.tree_edges.contains(Edge(v, p)) &&
          !cert.exit_edges.contains(Edge(v, p))) {
        bad.push_back(Json{{"vertex", v}, {"reason", "parent link is not a certificate edge"}});
      }
    }
    for (const auto& [v, p] : cert.escape_orientation) {
      if (v < 0 || v >= g.vertex_count() || !in_union[v]) {
        bad.push_back(Json{{"vertex", v}, {"reason", "oriented vertex outside the union"}});
      }
    }
    if (bad.empty()) {
      // Parent walks must leave the union within |union| steps.
      std::vector<int> state(nv, 0);  // 0 new, 1 on path, 2 done
      for (Vertex start : support) {
        std::vector<Vertex> path;
        Vertex v = start;
        while (v >= 0 && in_union[v] && state[v] == 0) {
          state[v] = 1;
          path.push_back(v);
          v = cert.escape_orientation.at(v);
        }
        if (v >= 0 && in_union[v] && state[v] == 1) {
          bad.push_back(Json{{"vertex", v}, {"reason", "parent walk cycles"}});
        }
        for (Vertex w : path) state[w] = 2;
        if (!bad.empty()) break;
      }
    }
    report.add("out_degree", bad.empty(), bad.empty() ? Json(nullptr) : Json{{"problems", capped(bad)}});
  }

  // Each tile is left by exactly one exit edge.
  {
    std::vector<Json> bad;
    for (const Tile& t : toast.tiles) {
      int crossing = 0;
      for (const Edge& e : cert.exit_edges) {
        crossing += t.vertices.contains(e.u) != t.vertices.contains(e.v);
      }
      if (crossing != 1) bad.push_back(Json{{"tile", t.id}, {"exit_edges", crossing}});
    }
    report.add("exit_per_tile", bad.empty(), bad.empty() ? Json(nullptr) : Json{{"tiles", capped(bad)}});
  }

  // (d)
  {
    if (!acyclic) {
      report.add("one_end", false, Json{{"reason", "forest check failed"}});
      return report;
    }
    Mask terminal(nv, 0);
    if (g.has_escape()) {
      const Mask escapes = detail::escaping(g, in_union);
      for (std::size_t v = 0; v < nv; ++v) {
        terminal[v] = g.exterior().contains(static_cast<Vertex>(v)) ||
                      (!in_union[v] && escapes[v]);
      }
    }
    std::vector<std::vector<Vertex>> adj(nv);
    for (const Edge& e : all_edges) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    // Root every forest component, count terminals per subtree.
    std::vector<Vertex> parent(nv, -2);
    std::vector<int> below(nv, 0);
    std::vector<int> total(nv, 0);
    std::vector<Vertex> order;
    for (std::size_t s = 0; s < nv; ++s) {
      if (parent[s] != -2 || adj[s].empty()) continue;
      const std::size_t first = order.size();
      parent[s] = -1;
      order.push_back(static_cast<Vertex>(s));
      for (std::size_t head = first; head < order.size(); ++head) {
        const Vertex v = order[head];
        for (Vertex w : adj[v]) {
          if (parent[w] != -2) continue;
          parent[w] = v;
          order.push_back(w);
        }
      }
      for (std::size_t k = order.size(); k-- > first;) {
        const Vertex v = order[k];
        below[v] += terminal[v];
        if (parent[v] >= 0) below[parent[v]] += below[v];
      }
      for (std::size_t k = first; k < order.size(); ++k) total[order[k]] = below[s];
    }
    std::vector<Vertex> bad;
    long long checked = 0;
    for (Vertex v : support) {
      ++checked;
      int pieces = 0;
      for (Vertex w : adj[v]) {
        const int count = (w == parent[v]) ? total[v] - below[v] : below[w];
        if (count > 0) ++pieces;
      }
      if (pieces != 1) bad.push_back(v);
    }
    report.add("one_end", bad.empty(), bad.empty() ? Json(nullptr) : Json{{"vertices", capped(bad)}},
               Json{{"checked", checked}, {"failing", bad.size()}});
  }
  return report;
}

}  // namespace toastlab

#endif  // TOASTLAB_TREE_HPP_
