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

#ifndef TOASTLAB_TOAST_HPP_
#define TOASTLAB_TOAST_HPP_

#include <algorithm>
#include <cstddef>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "toastlab/error.hpp"
#include "toastlab/graph.hpp"
#include "toastlab/metric.hpp"
#include "toastlab/rational.hpp"
#include "toastlab/report.hpp"

namespace toastlab {

struct Tile {
  int id = 0;
  int level = 1;
  VertexSet vertices;

  friend bool operator==(const Tile&, const Tile&) = default;
};

struct ToastFlags {
  bool claims_connected = false;
  bool claims_layered = false;

  friend bool operator==(const ToastFlags&, const ToastFlags&) = default;
};

/// A leveled family of finite vertex sets. Nothing is enforced on
/// construction; use verify_toast.
struct Toast {
  std::vector<Tile> tiles;
  ToastFlags flags;

  const Tile* find(int id) const {
    for (const Tile& t : tiles) {
      if (t.id == id) return &t;
    }
    return nullptr;
  }

  /// Union of all tiles.
  VertexSet support() const {
    std::vector<Vertex> all;
    for (const Tile& t : tiles) all.insert(all.end(), t.vertices.begin(), t.vertices.end());
    return VertexSet(std::move(all));
  }

  friend bool operator==(const Toast&, const Toast&) = default;
};

struct VerifyOptions {
  int threads = 1;
};

namespace detail {

template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += threads) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

/// Containment structure of a toast. Tile `a` lies strictly inside `b` when
/// its vertex set is a proper subset, or when the sets are equal and `a`
/// comes first by (level, id). The tie rule turns duplicate tiles into a
/// chain so the outer copy has an empty residual.
class TileHierarchy {
 public:
  TileHierarchy(const Graph& g, const Toast& toast) : graph_(&g), toast_(&toast) {
    const int n = static_cast<int>(toast.tiles.size());
    tiles_at_.assign(static_cast<std::size_t>(g.vertex_count()), {});
    for (int i = 0; i < n; ++i) {
      check_members(g, toast.tiles[i].vertices);
      for (Vertex v : toast.tiles[i].vertices) tiles_at_[v].push_back(i);
    }
    inside_.assign(static_cast<std::size_t>(n), {});
    std::vector<int> overlap(static_cast<std::size_t>(n), 0);
    std::vector<int> seen;
    for (int i = 0; i < n; ++i) {
      seen.clear();
      for (Vertex v : toast.tiles[i].vertices) {
        for (int j : tiles_at_[v]) {
          if (j == i) continue;
          if (overlap[j]++ == 0) seen.push_back(j);
        }
      }
      for (int j : seen) {
        const std::size_t size_j = toast.tiles[j].vertices.size();
        const std::size_t size_i = toast.tiles[i].vertices.size();
        const bool subset = static_cast<std::size_t>(overlap[j]) == size_j;
        const bool superset = static_cast<std::size_t>(overlap[j]) == size_i;
        if (subset && (size_j < size_i || key(j) < key(i))) {
          inside_[i].push_back(j);
        } else if (!subset && !superset) {
          overlapping_.emplace_back(std::min(i, j), std::max(i, j));
        }
        overlap[j] = 0;
      }
      std::sort(inside_[i].begin(), inside_[i].end());
    }
    std::sort(overlapping_.begin(), overlapping_.end());
    overlapping_.erase(std::unique(overlapping_.begin(), overlapping_.end()),
                       overlapping_.end());

    // Parent: the smallest container. Containers form a chain when the
    // family is laminar.
    parent_.assign(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
      for (int j : inside_[i]) {
        const int p = parent_[j];
        if (p == -1 || precedes_or_smaller(i, p)) parent_[j] = i;
      }
    }
    children_.assign(static_cast<std::size_t>(n), {});
    for (int j = 0; j < n; ++j) {
      if (parent_[j] >= 0) children_[parent_[j]].push_back(j);
    }

    // Layer = height in the containment order, which is what iterated
    // minimality computes.
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return inside_[a].size() < inside_[b].size();
    });
    layer_.assign(static_cast<std::size_t>(n), 1);
    for (int i : order) {
      for (int j : inside_[i]) layer_[i] = std::max(layer_[i], layer_[j] + 1);
    }
    layer_count_ = n == 0 ? 0 : *std::max_element(layer_.begin(), layer_.end());
  }

  int size() const { return static_cast<int>(toast_->tiles.size()); }
  const Tile& tile(int i) const { return toast_->tiles[i]; }
  const std::vector<int>& inside(int i) const { return inside_[i]; }
  const std::vector<int>& children(int i) const { return children_[i]; }
  int parent(int i) const { return parent_[i]; }
  int layer(int i) const { return layer_[i]; }
  int layer_count() const { return layer_count_; }
  const std::vector<int>& tiles_at(Vertex v) const { return tiles_at_[v]; }
  bool laminar() const { return overlapping_.empty(); }
  const std::vector<std::pair<int, int>>& overlapping() const { return overlapping_; }

  int index_of(int id) const {
    for (int i = 0; i < size(); ++i) {
      if (tile(i).id == id) return i;
    }
    return -1;
  }

  /// Parent chain of tile i, innermost first, excluding i.
  std::vector<int> ancestors(int i) const {
    std::vector<int> out;
    for (int p = parent_[i]; p != -1; p = parent_[p]) {
      out.push_back(p);
      if (static_cast<int>(out.size()) > size()) break;
    }
    return out;
  }

  VertexSet residual(int i) const {
    std::vector<char> removed(static_cast<std::size_t>(graph_->vertex_count()), 0);
    for (int j : inside_[i]) {
      for (Vertex v : tile(j).vertices) removed[v] = 1;
    }
    std::vector<Vertex> out;
    for (Vertex v : tile(i).vertices) {
      if (!removed[v]) out.push_back(v);
    }
    return VertexSet(std::move(out));
  }

  /// Innermost tile containing v, or -1.
  int innermost(Vertex v) const {
    int best = -1;
    for (int i : tiles_at_[v]) {
      if (best == -1 || precedes_or_smaller(i, best)) best = i;
    }
    return best;
  }

  /// Innermost tile containing both endpoints of e, or -1.
  int edge_owner(const Edge& e) const {
    int best = -1;
    const auto& b = tiles_at_[e.v];
    for (int i : tiles_at_[e.u]) {
      if (std::find(b.begin(), b.end(), i) == b.end()) continue;
      if (best == -1 || precedes_or_smaller(i, best)) best = i;
    }
    return best;
  }

 private:
  std::tuple<int, int, int> key(int i) const {
    return {tile(i).level, tile(i).id, i};
  }
  bool precedes_or_smaller(int a, int b) const {
    const auto sa = tile(a).vertices.size();
    const auto sb = tile(b).vertices.size();
    if (sa != sb) return sa < sb;
    return key(a) < key(b);
  }

  const Graph* graph_;
  const Toast* toast_;
  std::vector<std::vector<int>> tiles_at_;
  std::vector<std::vector<int>> inside_;
  std::vector<std::vector<int>> children_;
  std::vector<int> parent_;
  std::vector<int> layer_;
  int layer_count_ = 0;
  std::vector<std::pair<int, int>> overlapping_;
};

namespace detail {

inline VertexSet closed_neighborhood(const Graph& g, const VertexSet& s) {
  std::vector<Vertex> out(s.begin(), s.end());
  for (Vertex v : s) {
    for (const Neighbor& n : g.neighbors(v)) out.push_back(n.vertex);
  }
  return VertexSet(std::move(out));
}

// Pairs (i, j), i < j, of tiles at distance <= 1, i.e. B_1(K_i) meets K_j.
inline std::vector<std::pair<int, int>> nearby_pairs(const Graph& g,
                                                     const TileHierarchy& h,
                                                     std::vector<VertexSet>& balls) {
  const int n = h.size();
  balls.assign(static_cast<std::size_t>(n), {});
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> stamp(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    balls[i] = closed_neighborhood(g, h.tile(i).vertices);
    for (Vertex v : balls[i]) {
      for (int j : h.tiles_at(v)) {
        if (j == i || stamp[j] == i) continue;
        stamp[j] = i;
        pairs.emplace_back(std::min(i, j), std::max(i, j));
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

inline bool trichotomy(const VertexSet& ball_k, const VertexSet& k,
                       const VertexSet& ball_l, const VertexSet& l) {
  return !intersects(ball_k, l) || includes(l, ball_k) || includes(k, ball_l);
}

inline Json tile_pair(const TileHierarchy& h, int i, int j) {
  return Json::array({h.tile(i).id, h.tile(j).id});
}

}  // namespace detail

/// Tile ids grouped by iterated minimality (first entry = minimal tiles).
/// Throws invalid-toast when the trichotomy axiom fails.
inline std::vector<std::vector<int>> layers(const Graph& g, const Toast& toast) {
  const TileHierarchy h(g, toast);
  std::vector<VertexSet> balls;
  for (const auto& [i, j] : detail::nearby_pairs(g, h, balls)) {
    if (!detail::trichotomy(balls[i], h.tile(i).vertices, balls[j], h.tile(j).vertices)) {
      throw Error(ErrorCode::kInvalidToast,
                  "tiles " + std::to_string(h.tile(i).id) + " and " +
                      std::to_string(h.tile(j).id) + " violate T2");
    }
  }
  std::vector<std::vector<int>> out(static_cast<std::size_t>(h.layer_count()));
  for (int i = 0; i < h.size(); ++i) out[h.layer(i) - 1].push_back(h.tile(i).id);
  for (auto& layer : out) std::sort(layer.begin(), layer.end());
  return out;
}

/// Tile minus every tile strictly inside it.
inline VertexSet residual(const Graph& g, const Toast& toast, int tile_id) {
  const TileHierarchy h(g, toast);
  const int i = h.index_of(tile_id);
  if (i < 0) throw Error(ErrorCode::kNotFound, "no tile with id " + std::to_string(tile_id));
  return h.residual(i);
}

/// Checks T1 (edge exhaustion), T2 (trichotomy), laminarity, T3 (connected,
/// non-empty residuals) and T4 (layering). On graphs with an exterior, T1 is
/// required only for edges inside the union of the tiles; edges leaving it
/// are counted in the T1 info.
inline Report verify_toast(const Graph& g, const Toast& toast, VerifyOptions opts = {}) {
  Report report;
  for (const Tile& t : toast.tiles) {
    if (!t.vertices.empty() &&
        (t.vertices.front() < 0 || t.vertices.ids().back() >= g.vertex_count())) {
      report.add("ids", false, Json{{"tile", t.id}});
      return report;
    }
  }
  const TileHierarchy h(g, toast);
  const auto in_support = toast.support().mask(static_cast<std::size_t>(g.vertex_count()));

  // T1
  {
    std::vector<Json> uncovered;
    long long uncovered_count = 0;
    long long outside = 0;
    for (const Edge& e : g.edges()) {
      if (g.has_escape() && !(in_support[e.u] && in_support[e.v])) {
        ++outside;
        continue;
      }
      const auto& a = h.tiles_at(e.u);
      const auto& b = h.tiles_at(e.v);
      bool covered = false;
      for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
        if (a[i] == b[j]) {
          covered = true;
          break;
        }
        if (a[i] < b[j]) {
          ++i;
        } else {
          ++j;
        }
      }
      if (!covered) {
        if (uncovered.size() < kMaxWitnesses) uncovered.push_back(Json::array({e.u, e.v}));
        ++uncovered_count;
      }
    }
    Json info{{"uncovered", uncovered_count}};
    if (g.has_escape()) info["edges_outside_union"] = outside;
    report.add("T1", uncovered_count == 0,
               uncovered_count ? Json{{"edges", uncovered}} : Json(nullptr), info);
  }

  // T2 and laminarity
  {
    std::vector<VertexSet> balls;
    const auto pairs = detail::nearby_pairs(g, h, balls);
    std::vector<Json> bad;
    long long bad_count = 0;
    for (const auto& [i, j] : pairs) {
      if (!detail::trichotomy(balls[i], h.tile(i).vertices, balls[j], h.tile(j).vertices)) {
        ++bad_count;
        if (bad.size() < kMaxWitnesses) bad.push_back(detail::tile_pair(h, i, j));
      }
    }
    report.add("T2", bad_count == 0, bad_count ? Json{{"pairs", bad}} : Json(nullptr),
               Json{{"violations", bad_count}, {"pairs_checked", pairs.size()}});
    std::vector<Json> overlaps;
    for (const auto& [i, j] : h.overlapping()) {
      if (overlaps.size() < kMaxWitnesses) overlaps.push_back(detail::tile_pair(h, i, j));
    }
    report.add("laminar", h.laminar(),
               h.laminar() ? Json(nullptr) : Json{{"pairs", overlaps}},
               Json{{"proper_overlaps", h.overlapping().size()}});
  }

  // T3
  {
    std::vector<int> components(static_cast<std::size_t>(h.size()), 0);
    detail::parallel_for(h.size(), opts.threads, [&](int i) {
      const VertexSet r = h.residual(i);
      components[i] = r.empty() ? 0 : static_cast<int>(connected_components(g, r).size());
    });
    Json empty = Json::array();
    Json split = Json::array();
    long long bad = 0;
    for (int i = 0; i < h.size(); ++i) {
      if (components[i] == 1) continue;
      ++bad;
      if (components[i] == 0 && empty.size() < kMaxWitnesses) {
        empty.push_back(h.tile(i).id);
      } else if (components[i] > 1 && split.size() < kMaxWitnesses) {
        split.push_back(Json{{"tile", h.tile(i).id}, {"components", components[i]}});
      }
    }
    report.add("T3", bad == 0,
               bad ? Json{{"empty_residual", empty}, {"disconnected_residual", split}}
                   : Json(nullptr),
               Json{{"violations", bad}});
  }

  // T4
  {
    const int layers_n = h.layer_count();
    std::vector<std::vector<char>> in_layer(
        static_cast<std::size_t>(layers_n),
        std::vector<char>(static_cast<std::size_t>(g.vertex_count()), 0));
    for (int i = 0; i < h.size(); ++i) {
      for (Vertex v : h.tile(i).vertices) in_layer[h.layer(i) - 1][v] = 1;
    }
    Json witness = nullptr;
    for (int layer = 0; layer + 1 < layers_n && witness.is_null(); ++layer) {
      for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (in_layer[layer][v] && !in_layer[layer + 1][v]) {
          witness = Json{{"layer", layer + 1}, {"vertex", v}};
          break;
        }
      }
    }
    report.add("T4", witness.is_null(), witness, Json{{"layers", layers_n}});
  }
  return report;
}

/// True when the report certifies a toast (T1, T2) and, if requested, a
/// connected toast (T3).
inline bool toast_ok(const Report& r, bool connected = true) {
  return r.passed("T1") && r.passed("T2") && (!connected || r.passed("T3"));
}

struct RefinedToast {
  Toast toast;
  Rational coverage;
  int passes = 0;
};

/// Selects a sub-family satisfying T2 and T3. Each pass picks, inside every
/// maximal tile, the first unselected tile L (by level, then id) that some
/// tile K covers: B_1(L) is inside K and K minus L and the already selected
/// tiles inside K stays connected. Adding L must keep the residuals of the
/// selected tiles containing it connected. Maximal tiles that contain a
/// selection are added last when their own residual is connected.
inline RefinedToast refine_to_connected(const Graph& g, const Toast& toast) {
  const TileHierarchy h(g, toast);
  const int n = h.size();
  const std::size_t nv = static_cast<std::size_t>(g.vertex_count());
  std::vector<char> selected(static_cast<std::size_t>(n), 0);
  std::vector<VertexSet> balls(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) balls[i] = detail::closed_neighborhood(g, h.tile(i).vertices);

  // Residual of tile k when `extra` (may be -1) is selected in addition.
  auto residual_ok = [&](int k, int extra) {
    Mask removed(nv, 0);
    for (int j : h.inside(k)) {
      if (selected[j] || j == extra) {
        for (Vertex v : h.tile(j).vertices) removed[v] = 1;
      }
    }
    std::vector<Vertex> rest;
    for (Vertex v : h.tile(k).vertices) {
      if (!removed[v]) rest.push_back(v);
    }
    return is_connected(g, VertexSet(std::move(rest)));
  };

  auto containers = [&](int l) {
    std::vector<int> out;
    for (int k = 0; k < n; ++k) {
      if (std::binary_search(h.inside(k).begin(), h.inside(k).end(), l)) out.push_back(k);
    }
    return out;
  };

  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::tuple(h.layer(a), h.tile(a).level, h.tile(a).id) <
           std::tuple(h.layer(b), h.tile(b).level, h.tile(b).id);
  });
  std::vector<int> maximal;
  for (int i : order) {
    if (h.parent(i) == -1) maximal.push_back(i);
  }
  std::sort(maximal.begin(), maximal.end(),
            [&](int a, int b) { return h.tile(a).id < h.tile(b).id; });

  int passes = 0;
  for (bool changed = true; changed;) {
    changed = false;
    ++passes;
    for (int region : maximal) {
      for (int l : order) {
        if (selected[l] || l == region) continue;
        if (!std::binary_search(h.inside(region).begin(), h.inside(region).end(), l)) continue;
        if (!residual_ok(l, -1)) continue;
        const auto above = containers(l);
        bool keeps = true;
        for (int k : above) {
          if (selected[k] && !residual_ok(k, l)) {
            keeps = false;
            break;
          }
        }
        if (!keeps) continue;
        bool covered = false;
        for (int k : above) {
          if (includes(h.tile(k).vertices, balls[l]) && residual_ok(k, l)) {
            covered = true;
            break;
          }
        }
        if (!covered) continue;
        selected[l] = 1;
        changed = true;
        break;
      }
    }
  }
  for (int region : maximal) {
    if (selected[region]) continue;
    const bool has_selection = std::any_of(h.inside(region).begin(), h.inside(region).end(),
                                           [&](int j) { return selected[j] != 0; });
    if (has_selection && residual_ok(region, -1)) selected[region] = 1;
  }

  RefinedToast out;
  out.passes = passes;
  out.toast.flags = toast.flags;
  for (int i = 0; i < n; ++i) {
    if (selected[i]) out.toast.tiles.push_back(h.tile(i));
  }
  out.coverage = Rational(static_cast<std::int64_t>(out.toast.support().size()),
                          std::max(1, g.vertex_count()));
  return out;
}

}  // namespace toastlab

#endif  // TOASTLAB_TOAST_HPP_
