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

#ifndef TOASTLAB_GRAPH_HPP_
#define TOASTLAB_GRAPH_HPP_

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "toastlab/error.hpp"

namespace toastlab {

using Vertex = std::int32_t;
using EdgeId = std::int32_t;

/// Undirected edge, normalized so that `u < v`.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  Edge() = default;
  Edge(Vertex a, Vertex b) : u(std::min(a, b)), v(std::max(a, b)) {}

  bool touches(Vertex x) const { return u == x || v == x; }
  Vertex other(Vertex x) const { return x == u ? v : u; }

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Sorted, duplicate-free set of vertex ids.
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(std::initializer_list<Vertex> ids) : VertexSet(std::vector<Vertex>(ids)) {}
  explicit VertexSet(std::vector<Vertex> ids) : ids_(std::move(ids)) {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  }

  static VertexSet from_mask(const std::vector<char>& mask) {
    VertexSet s;
    for (std::size_t v = 0; v < mask.size(); ++v) {
      if (mask[v]) s.ids_.push_back(static_cast<Vertex>(v));
    }
    return s;
  }

  bool contains(Vertex v) const {
    return std::binary_search(ids_.begin(), ids_.end(), v);
  }
  bool empty() const { return ids_.empty(); }
  std::size_t size() const { return ids_.size(); }
  Vertex front() const { return ids_.front(); }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }
  const std::vector<Vertex>& ids() const { return ids_; }

  std::vector<char> mask(std::size_t vertex_count) const {
    std::vector<char> m(vertex_count, 0);
    for (Vertex v : ids_) m[static_cast<std::size_t>(v)] = 1;
    return m;
  }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<Vertex> ids_;
};

inline VertexSet unite(const VertexSet& a, const VertexSet& b) {
  std::vector<Vertex> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VertexSet(std::move(out));
}

inline VertexSet subtract(const VertexSet& a, const VertexSet& b) {
  std::vector<Vertex> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return VertexSet(std::move(out));
}

inline VertexSet intersect(const VertexSet& a, const VertexSet& b) {
  std::vector<Vertex> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return VertexSet(std::move(out));
}

/// True iff `inner` is a subset of `outer`.
inline bool includes(const VertexSet& outer, const VertexSet& inner) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

inline bool intersects(const VertexSet& a, const VertexSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return false;
}

/// Sorted, duplicate-free set of undirected edges.
class EdgeSet {
 public:
  EdgeSet() = default;
  EdgeSet(std::initializer_list<Edge> edges) : EdgeSet(std::vector<Edge>(edges)) {}
  explicit EdgeSet(std::vector<Edge> edges) : edges_(std::move(edges)) {
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  }

  bool contains(const Edge& e) const {
    return std::binary_search(edges_.begin(), edges_.end(), e);
  }
  bool empty() const { return edges_.empty(); }
  std::size_t size() const { return edges_.size(); }
  auto begin() const { return edges_.begin(); }
  auto end() const { return edges_.end(); }
  const std::vector<Edge>& edges() const { return edges_; }

  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

 private:
  std::vector<Edge> edges_;
};

enum class Topology { kWindow, kTorus, kExplicit };

constexpr std::string_view topology_name(Topology t) {
  switch (t) {
    case Topology::kWindow: return "window";
    case Topology::kTorus: return "torus";
    case Topology::kExplicit: return "explicit";
  }
  return "explicit";
}

inline Topology parse_topology(std::string_view name) {
  if (name == "window") return Topology::kWindow;
  if (name == "torus") return Topology::kTorus;
  if (name == "explicit") return Topology::kExplicit;
  throw Error(ErrorCode::kInvalidParameter,
              "unknown topology '" + std::string(name) + "'");
}

struct Neighbor {
  Vertex vertex;
  EdgeId edge;
};

/// Immutable finite simple graph. Lattice graphs (windows and tori of Z^d)
/// number their vertices row-major, last coordinate fastest. Edge ids follow
/// the lexicographic order of normalized edges.
class Graph {
 public:
  Graph() = default;

  static Graph grid(std::vector<int> dims, Topology topology);

  /// `exterior` marks the vertices that count as "escaped" for visibility,
  /// filling and tree verification. Leave it empty for graphs without an
  /// escape notion.
  static Graph from_edges(int vertex_count, std::vector<Edge> edges,
                          VertexSet exterior = {});

  int vertex_count() const { return static_cast<int>(offsets_.size()) - 1; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  std::span<const Neighbor> neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v],
            adjacency_.data() + offsets_[v + 1]};
  }
  int degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::optional<EdgeId> find_edge(Vertex a, Vertex b) const {
    const auto adj = neighbors(a);
    const auto it = std::lower_bound(
        adj.begin(), adj.end(), b,
        [](const Neighbor& n, Vertex x) { return n.vertex < x; });
    if (it == adj.end() || it->vertex != b) return std::nullopt;
    return it->edge;
  }
  bool adjacent(Vertex a, Vertex b) const { return find_edge(a, b).has_value(); }

  Topology topology() const { return topology_; }
  const std::vector<int>& dims() const { return dims_; }
  int dimension() const { return static_cast<int>(dims_.size()); }
  bool is_lattice() const { return topology_ != Topology::kExplicit; }

  /// Rim vertices (window) or declared exterior (explicit graphs).
  const VertexSet& exterior() const { return exterior_; }
  bool has_escape() const { return !exterior_.empty(); }

  std::vector<int> coords(Vertex v) const {
    std::vector<int> c(dims_.size());
    for (std::size_t i = dims_.size(); i-- > 0;) {
      c[i] = v % dims_[i];
      v /= dims_[i];
    }
    return c;
  }

  /// Vertex at lattice coordinates; torus coordinates wrap, window
  /// coordinates outside the box yield nullopt.
  std::optional<Vertex> at(std::span<const int> c) const {
    Vertex v = 0;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      int x = c[i];
      if (topology_ == Topology::kTorus) {
        x = ((x % dims_[i]) + dims_[i]) % dims_[i];
      } else if (x < 0 || x >= dims_[i]) {
        return std::nullopt;
      }
      v = v * dims_[i] + x;
    }
    return v;
  }

  /// Graph distance for lattice graphs, computed from coordinates.
  int lattice_distance(Vertex a, Vertex b) const {
    int total = 0;
    for (int i = dimension(); i-- > 0;) {
      const int side = dims_[i];
      int diff = std::abs(a % side - b % side);
      if (topology_ == Topology::kTorus) diff = std::min(diff, side - diff);
      total += diff;
      a /= side;
      b /= side;
    }
    return total;
  }

  std::string describe() const {
    std::string s(topology_name(topology_));
    s += " [";
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (i) s += "x";
      s += std::to_string(dims_[i]);
    }
    return s + "]";
  }

 private:
  void build_adjacency(int vertex_count, std::vector<Edge> edges);

  Topology topology_ = Topology::kExplicit;
  std::vector<int> dims_;
  std::vector<int> offsets_{0};
  std::vector<Neighbor> adjacency_;
  std::vector<Edge> edges_;
  VertexSet exterior_;
};

inline void Graph::build_adjacency(int vertex_count, std::vector<Edge> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::vector<int> degree(static_cast<std::size_t>(vertex_count), 0);
  for (const Edge& e : edges) {
    if (e.u == e.v) throw Error(ErrorCode::kInvalidInput, "self-loop");
    if (e.u < 0 || e.v >= vertex_count) {
      throw Error(ErrorCode::kInvalidInput, "edge endpoint out of range");
    }
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(static_cast<std::size_t>(vertex_count) + 1, 0);
  for (int v = 0; v < vertex_count; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  adjacency_.assign(static_cast<std::size_t>(offsets_.back()), Neighbor{0, 0});
  std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
  for (EdgeId id = 0; id < static_cast<EdgeId>(edges.size()); ++id) {
    const Edge& e = edges[id];
    adjacency_[cursor[e.u]++] = Neighbor{e.v, id};
    adjacency_[cursor[e.v]++] = Neighbor{e.u, id};
  }
  for (int v = 0; v < vertex_count; ++v) {
    std::sort(adjacency_.begin() + offsets_[v], adjacency_.begin() + offsets_[v + 1],
              [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
  }
  edges_ = std::move(edges);
}

inline Graph Graph::grid(std::vector<int> dims, Topology topology) {
  if (dims.empty()) throw Error(ErrorCode::kInvalidParameter, "no dimensions");
  if (topology == Topology::kExplicit) {
    throw Error(ErrorCode::kInvalidParameter, "grid needs window or torus");
  }
  long long count = 1;
  for (int side : dims) {
    if (side <= 0) {
      throw Error(ErrorCode::kInvalidParameter,
                  "dimension " + std::to_string(side) + " is not positive");
    }
    if (topology == Topology::kTorus && side < 3) {
      throw Error(ErrorCode::kInvalidParameter, "torus sides must be >= 3");
    }
    count *= side;
    if (count > (1LL << 30)) {
      throw Error(ErrorCode::kInvalidParameter, "grid too large");
    }
  }
  Graph g;
  g.topology_ = topology;
  g.dims_ = std::move(dims);
  const int n = static_cast<int>(count);
  const int d = g.dimension();
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * d);
  std::vector<char> rim(static_cast<std::size_t>(n), 0);
  std::vector<int> c;
  for (Vertex v = 0; v < n; ++v) {
    c = g.coords(v);
    for (int axis = 0; axis < d; ++axis) {
      const int side = g.dims_[axis];
      if (topology == Topology::kWindow && (c[axis] == 0 || c[axis] == side - 1)) {
        rim[v] = 1;
      }
      // Forward neighbor only; each lattice edge is generated once.
      auto next = c;
      ++next[axis];
      if (auto w = g.at(next)) edges.emplace_back(v, *w);
    }
  }
  g.build_adjacency(n, std::move(edges));
  if (topology == Topology::kWindow) g.exterior_ = VertexSet::from_mask(rim);
  return g;
}

inline Graph Graph::from_edges(int vertex_count, std::vector<Edge> edges,
                               VertexSet exterior) {
  if (vertex_count < 0) {
    throw Error(ErrorCode::kInvalidParameter, "negative vertex count");
  }
  for (Vertex v : exterior) {
    if (v < 0 || v >= vertex_count) {
      throw Error(ErrorCode::kInvalidInput, "exterior vertex out of range");
    }
  }
  Graph g;
  g.topology_ = Topology::kExplicit;
  g.dims_ = {vertex_count};
  g.build_adjacency(vertex_count, std::move(edges));
  g.exterior_ = std::move(exterior);
  return g;
}

inline Graph build_grid(std::vector<int> dims, Topology topology) {
  return Graph::grid(std::move(dims), topology);
}

/// Edges of the induced subgraph on `s`.
inline EdgeSet induced_edges(const Graph& g, const VertexSet& s) {
  const auto mask = s.mask(static_cast<std::size_t>(g.vertex_count()));
  std::vector<Edge> out;
  for (Vertex v : s) {
    for (const Neighbor& n : g.neighbors(v)) {
      if (n.vertex > v && mask[n.vertex]) out.emplace_back(v, n.vertex);
    }
  }
  return EdgeSet(std::move(out));
}

inline void check_members(const Graph& g, const VertexSet& s) {
  if (!s.empty() && (s.front() < 0 || s.ids().back() >= g.vertex_count())) {
    throw Error(ErrorCode::kInvalidInput, "vertex id outside the graph");
  }
}

}  // namespace toastlab

#endif  // TOASTLAB_GRAPH_HPP_
