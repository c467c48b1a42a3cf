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

#ifndef TOASTLAB_METRIC_HPP_
#define TOASTLAB_METRIC_HPP_

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "toastlab/error.hpp"
#include "toastlab/graph.hpp"

namespace toastlab {

using Mask = std::vector<char>;

namespace detail {

inline Mask empty_mask(const Graph& g) {
  return Mask(static_cast<std::size_t>(g.vertex_count()), 0);
}

// Multi-source breadth-first distances, truncated at `limit`. Unreached
// vertices (and vertices beyond the limit) get -1. Vertices with
// `blocked[v]` set are never entered.
inline std::vector<int> bfs_distances(const Graph& g, const std::vector<Vertex>& sources,
                                      int limit, const Mask* blocked = nullptr) {
  std::vector<int> dist(static_cast<std::size_t>(g.vertex_count()), -1);
  std::vector<Vertex> queue;
  queue.reserve(sources.size());
  for (Vertex s : sources) {
    if (blocked && (*blocked)[s]) continue;
    if (dist[s] == 0) continue;
    dist[s] = 0;
    queue.push_back(s);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex v = queue[head];
    if (dist[v] == limit) continue;
    for (const Neighbor& n : g.neighbors(v)) {
      if (dist[n.vertex] != -1) continue;
      if (blocked && (*blocked)[n.vertex]) continue;
      dist[n.vertex] = dist[v] + 1;
      queue.push_back(n.vertex);
    }
  }
  return dist;
}

inline Mask ball_mask(const Graph& g, const Mask& set, int radius) {
  std::vector<Vertex> sources;
  for (std::size_t v = 0; v < set.size(); ++v) {
    if (set[v]) sources.push_back(static_cast<Vertex>(v));
  }
  const auto dist = bfs_distances(g, sources, radius);
  Mask out = empty_mask(g);
  for (std::size_t v = 0; v < dist.size(); ++v) out[v] = dist[v] >= 0;
  return out;
}

inline Mask complement(const Mask& m) {
  Mask out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = !m[i];
  return out;
}

// Component labels of the subgraph induced on `members`; -1 outside.
// Labels are assigned in order of least vertex.
inline std::vector<int> component_labels(const Graph& g, const Mask& members,
                                         int* count = nullptr) {
  std::vector<int> label(members.size(), -1);
  int next = 0;
  std::vector<Vertex> stack;
  for (std::size_t start = 0; start < members.size(); ++start) {
    if (!members[start] || label[start] != -1) continue;
    label[start] = next;
    stack.assign(1, static_cast<Vertex>(start));
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (const Neighbor& n : g.neighbors(v)) {
        if (members[n.vertex] && label[n.vertex] == -1) {
          label[n.vertex] = next;
          stack.push_back(n.vertex);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

inline std::vector<VertexSet> group_labels(const std::vector<int>& label, int count) {
  std::vector<std::vector<Vertex>> groups(static_cast<std::size_t>(count));
  for (std::size_t v = 0; v < label.size(); ++v) {
    if (label[v] >= 0) groups[label[v]].push_back(static_cast<Vertex>(v));
  }
  std::vector<VertexSet> out;
  out.reserve(groups.size());
  for (auto& grp : groups) out.emplace_back(std::move(grp));
  return out;
}

// Vertices outside `blocked` that reach the exterior without entering it.
inline Mask escaping(const Graph& g, const Mask& blocked) {
  const auto dist = bfs_distances(g, g.exterior().ids(),
                                  std::numeric_limits<int>::max(), &blocked);
  Mask out = empty_mask(g);
  for (std::size_t v = 0; v < dist.size(); ++v) out[v] = dist[v] >= 0;
  return out;
}

inline void require_escape(const Graph& g, const char* what) {
  if (!g.has_escape()) {
    throw Error(ErrorCode::kUnsupportedTopology,
                std::string(what) + " needs a window (or an explicit exterior); got " +
                    g.describe());
  }
}

}  // namespace detail

/// B_n(C): all vertices within graph distance n of C.
inline VertexSet ball(const Graph& g, const VertexSet& c, int n) {
  check_members(g, c);
  if (n < 0) throw Error(ErrorCode::kInvalidParameter, "negative radius");
  const auto dist = detail::bfs_distances(g, c.ids(), n);
  std::vector<Vertex> out;
  for (std::size_t v = 0; v < dist.size(); ++v) {
    if (dist[v] >= 0) out.push_back(static_cast<Vertex>(v));
  }
  return VertexSet(std::move(out));
}

enum class BoundaryMode { kOuter, kVisible };

/// Outer mode: B_n(C) - C. Visible mode: the part of that set from which a
/// path avoiding C reaches the exterior.
inline VertexSet boundary(const Graph& g, const VertexSet& c, int n,
                          BoundaryMode mode = BoundaryMode::kOuter) {
  if (n < 1) throw Error(ErrorCode::kInvalidParameter, "boundary radius must be >= 1");
  if (mode == BoundaryMode::kVisible) detail::require_escape(g, "visible boundary");
  const VertexSet outer = subtract(ball(g, c, n), c);
  if (mode == BoundaryMode::kOuter) return outer;
  const auto seen = detail::escaping(g, c.mask(static_cast<std::size_t>(g.vertex_count())));
  std::vector<Vertex> out;
  for (Vertex v : outer) {
    if (seen[v]) out.push_back(v);
  }
  return VertexSet(std::move(out));
}

/// Connected components of the induced subgraph on `s`, ordered by least
/// vertex.
inline std::vector<VertexSet> connected_components(const Graph& g, const VertexSet& s) {
  check_members(g, s);
  int count = 0;
  const auto label = detail::component_labels(
      g, s.mask(static_cast<std::size_t>(g.vertex_count())), &count);
  return detail::group_labels(label, count);
}

/// True iff `s` is non-empty and induces a connected subgraph.
inline bool is_connected(const Graph& g, const VertexSet& s) {
  if (s.empty()) return false;
  int count = 0;
  detail::component_labels(g, s.mask(static_cast<std::size_t>(g.vertex_count())),
                           &count);
  return count == 1;
}

/// Classes of the equivalence relation generated by "both in B and within
/// graph distance n".
inline std::vector<VertexSet> n_components(const Graph& g, const VertexSet& b, int n) {
  check_members(g, b);
  if (n < 1) throw Error(ErrorCode::kInvalidParameter, "n must be positive");
  const auto mask = b.mask(static_cast<std::size_t>(g.vertex_count()));
  std::vector<int> parent(static_cast<std::size_t>(g.vertex_count()));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<int> dist(static_cast<std::size_t>(g.vertex_count()), -1);
  std::vector<Vertex> touched;
  std::vector<Vertex> queue;
  for (Vertex s : b) {
    // Bounded BFS from s; reset only what we touched.
    queue.assign(1, s);
    dist[s] = 0;
    touched.assign(1, s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex v = queue[head];
      if (mask[v]) {
        const int a = find(s), c = find(v);
        if (a != c) parent[std::max(a, c)] = std::min(a, c);
      }
      if (dist[v] == n) continue;
      for (const Neighbor& nb : g.neighbors(v)) {
        if (dist[nb.vertex] != -1) continue;
        dist[nb.vertex] = dist[v] + 1;
        touched.push_back(nb.vertex);
        queue.push_back(nb.vertex);
      }
    }
    for (Vertex t : touched) dist[t] = -1;
  }
  std::vector<int> label(static_cast<std::size_t>(g.vertex_count()), -1);
  std::vector<int> root_label(static_cast<std::size_t>(g.vertex_count()), -1);
  int count = 0;
  for (Vertex v : b) {
    const int r = find(v);
    if (root_label[r] == -1) root_label[r] = count++;
    label[v] = root_label[r];
  }
  return detail::group_labels(label, count);
}

/// Full: the complement is non-empty and connected.
inline bool is_full(const Graph& g, const VertexSet& c) {
  check_members(g, c);
  if (static_cast<int>(c.size()) == g.vertex_count()) {
    throw Error(ErrorCode::kDegenerateInput, "set is the whole graph");
  }
  int count = 0;
  detail::component_labels(
      g, detail::complement(c.mask(static_cast<std::size_t>(g.vertex_count()))),
      &count);
  return count == 1;
}

/// C together with every component of its complement that does not meet
/// the exterior. Exactly one complement component may meet the exterior.
inline VertexSet fill(const Graph& g, const VertexSet& c) {
  check_members(g, c);
  detail::require_escape(g, "filling");
  const auto in_c = c.mask(static_cast<std::size_t>(g.vertex_count()));
  int count = 0;
  const auto label = detail::component_labels(g, detail::complement(in_c), &count);
  std::vector<char> meets(static_cast<std::size_t>(count), 0);
  for (Vertex v : g.exterior()) {
    if (label[v] >= 0) meets[label[v]] = 1;
  }
  const auto escaping_count = std::count(meets.begin(), meets.end(), 1);
  if (escaping_count != 1) {
    throw Error(ErrorCode::kNotFillable,
                std::to_string(escaping_count) +
                    " complement components meet the exterior (need exactly 1)");
  }
  std::vector<Vertex> out;
  for (std::size_t v = 0; v < in_c.size(); ++v) {
    if (in_c[v] || !meets[label[v]]) out.push_back(static_cast<Vertex>(v));
  }
  return VertexSet(std::move(out));
}

/// Largest graph distance between two members of `s` (0 for |s| <= 1).
inline int diameter(const Graph& g, const VertexSet& s) {
  if (s.size() <= 1) return 0;
  if (static_cast<int>(s.size()) == g.vertex_count() && g.is_lattice()) {
    int d = 0;
    for (int side : g.dims()) {
      d += g.topology() == Topology::kTorus ? side / 2 : side - 1;
    }
    return d;
  }
  int best = 0;
  if (g.is_lattice()) {
    const auto& ids = s.ids();
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        best = std::max(best, g.lattice_distance(ids[i], ids[j]));
      }
    }
    return best;
  }
  for (Vertex v : s) {
    const auto dist = detail::bfs_distances(g, {v}, std::numeric_limits<int>::max());
    for (Vertex w : s) {
      if (dist[w] < 0) return std::numeric_limits<int>::max();
      best = std::max(best, dist[w]);
    }
  }
  return best;
}

/// Two-coloring (0/1 per vertex), or nullopt if some component has an odd
/// cycle.
inline std::optional<std::vector<int>> bipartition(const Graph& g) {
  std::vector<int> color(static_cast<std::size_t>(g.vertex_count()), -1);
  for (Vertex s = 0; s < g.vertex_count(); ++s) {
    if (color[s] >= 0) continue;
    color[s] = 0;
    std::vector<Vertex> queue{s};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex v = queue[head];
      for (const Neighbor& n : g.neighbors(v)) {
        if (color[n.vertex] < 0) {
          color[n.vertex] = 1 - color[v];
          queue.push_back(n.vertex);
        } else if (color[n.vertex] == color[v]) {
          return std::nullopt;
        }
      }
    }
  }
  return color;
}

}  // namespace toastlab

#endif  // TOASTLAB_METRIC_HPP_
