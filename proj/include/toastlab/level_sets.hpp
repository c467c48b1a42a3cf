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

#ifndef TOASTLAB_LEVEL_SETS_HPP_
#define TOASTLAB_LEVEL_SETS_HPP_

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "toastlab/error.hpp"
#include "toastlab/graph.hpp"
#include "toastlab/metric.hpp"
#include "toastlab/report.hpp"
#include "toastlab/toast.hpp"

namespace toastlab {

/// Level sets V_1, V_2, ... together with the separation radius r and the
/// diameter bounds c_n for the 3r-components of each level. `domain`, when
/// set, restricts the exhaustion check to those vertices (used for level
/// sets embedded in a larger window).
struct LevelSets {
  std::vector<VertexSet> levels;
  int r = 1;
  std::vector<int> component_bounds;
  std::optional<VertexSet> domain;

  friend bool operator==(const LevelSets&, const LevelSets&) = default;
};

struct GenerateOptions {
  int r = 1;
  int num_levels = 2;
  int scale = 8;
  std::uint64_t seed = 0;
  int max_attempts = 64;
};

/// Result of a successful generation: the level sets plus the per-level
/// cell offsets that produced them.
struct GeneratedLevels {
  LevelSets sets;
  std::vector<std::vector<int>> offsets;
  int attempts = 0;
};

namespace detail {

// Vertices whose 4r-ball meets both `level` and its complement.
inline Mask straddle_zone(const Graph& g, const Mask& level, int radius) {
  const Mask near_in = ball_mask(g, level, radius);
  const Mask near_out = ball_mask(g, complement(level), radius);
  Mask out(level.size(), 0);
  for (std::size_t v = 0; v < level.size(); ++v) out[v] = near_in[v] && near_out[v];
  return out;
}

inline std::int64_t cell_side(int scale, int level) {
  std::int64_t side = 1;
  for (int i = 0; i < level; ++i) {
    side *= scale;
    if (side > (1LL << 40)) break;
  }
  return side;
}

// Separation margin that keeps cores of neighboring cells more than 3r apart.
inline int core_margin(int r) { return (3 * r + 1) / 2; }

// Per-axis test: is coordinate x inside the core of its cell?
inline bool in_core(int x, int side_len, std::int64_t cell, int offset, int margin,
                    bool torus) {
  if (torus) {
    const std::int64_t pos = ((x - offset) % cell + cell) % cell;
    return pos >= margin && pos < cell - margin;
  }
  const std::int64_t k = (x - offset) >= 0 ? (x - offset) / cell
                                           : -(((offset - x) + cell - 1) / cell);
  const std::int64_t lo = offset + k * cell;
  const std::int64_t hi = lo + cell;  // exclusive
  const bool lo_inner = lo > 0;
  const bool hi_inner = hi < side_len;
  if (lo_inner && x < lo + margin) return false;
  if (hi_inner && x >= hi - margin) return false;
  return true;
}

}  // namespace detail

/// Checks (P1) every 3r-component of V_n has diameter < c_n, (P2) every
/// vertex has B_r(x) inside some V_n, and (P3) for n < m and x in V_n the
/// 4r-ball of x is inside V_m or disjoint from it. Vertices closer than r to
/// the window rim are exempt from P2 and counted.
inline Report verify_level_sets(const Graph& g, const LevelSets& ls) {
  Report report;
  const int levels = static_cast<int>(ls.levels.size());
  const std::size_t nv = static_cast<std::size_t>(g.vertex_count());
  for (const VertexSet& v : ls.levels) check_members(g, v);

  // P1
  {
    Json worst = Json::array();
    Json bad = Json::array();
    const bool have_bounds = static_cast<int>(ls.component_bounds.size()) == levels;
    for (int n = 0; n < levels; ++n) {
      int max_diameter = 0;
      Json offender = nullptr;
      for (const VertexSet& comp : n_components(g, ls.levels[n], 3 * ls.r)) {
        const int d = diameter(g, comp);
        max_diameter = std::max(max_diameter, d);
        if (have_bounds && d >= ls.component_bounds[n] && offender.is_null()) {
          offender = Json{{"level", n + 1}, {"vertex", comp.front()}, {"diameter", d}};
        }
      }
      worst.push_back(max_diameter);
      if (!offender.is_null()) bad.push_back(offender);
    }
    const bool ok = have_bounds && bad.empty();
    Json witness = nullptr;
    if (!have_bounds) {
      witness = Json{{"reason", "component_bounds missing or wrong length"}};
    } else if (!ok) {
      witness = Json{{"components", bad}};
    }
    report.add("P1", ok, witness,
               Json{{"max_diameter", worst}, {"bounds", ls.component_bounds}});
  }

  // P2
  {
    Mask covered(nv, 0);
    for (const VertexSet& level : ls.levels) {
      const Mask outside = detail::complement(level.mask(nv));
      const Mask near_outside = detail::ball_mask(g, outside, ls.r);
      for (std::size_t v = 0; v < nv; ++v) {
        if (!near_outside[v]) covered[v] = 1;
      }
    }
    std::vector<int> rim_dist;
    if (g.has_escape()) {
      rim_dist = detail::bfs_distances(g, g.exterior().ids(), std::numeric_limits<int>::max());
    }
    const Mask in_domain =
        ls.domain ? ls.domain->mask(nv) : Mask(nv, 1);
    std::vector<Vertex> failing;
    long long exempt = 0;
    for (std::size_t v = 0; v < nv; ++v) {
      if (!in_domain[v] || covered[v]) continue;
      if (!rim_dist.empty() && rim_dist[v] >= 0 && rim_dist[v] < ls.r) {
        ++exempt;
        continue;
      }
      failing.push_back(static_cast<Vertex>(v));
    }
    report.add("P2", failing.empty(),
               failing.empty() ? Json(nullptr) : Json{{"vertices", capped(failing)}},
               Json{{"uncovered", failing.size()}, {"rim_exemptions", exempt}});
  }

  // P3
  {
    Json witness = nullptr;
    long long violations = 0;
    for (int m = 1; m < levels; ++m) {
      const Mask zone = detail::straddle_zone(g, ls.levels[m].mask(nv), 4 * ls.r);
      for (int n = 0; n < m; ++n) {
        for (Vertex x : ls.levels[n]) {
          if (!zone[x]) continue;
          ++violations;
          if (witness.is_null()) witness = Json{{"n", n + 1}, {"m", m + 1}, {"x", x}};
        }
      }
    }
    report.add("P3", violations == 0, witness, Json{{"violations", violations}});
  }
  return report;
}

/// Shifted-cell scheme: level-n cells are axis boxes of side scale^n with a
/// seeded per-level offset. V_n is the union of cell cores (cells shrunk so
/// distinct cores are more than 3r apart) minus every vertex whose 4r-ball
/// straddles a higher level. When scale^L reaches every side, the top level
/// is the whole graph. Offsets are redrawn until verify_level_sets passes.
inline GeneratedLevels generate_level_sets(const Graph& g, const GenerateOptions& opts) {
  if (!g.is_lattice()) {
    throw Error(ErrorCode::kUnsupportedTopology, "level sets need a lattice graph");
  }
  if (opts.r < 1 || opts.num_levels < 1 || opts.scale < 2 || opts.max_attempts < 1) {
    throw Error(ErrorCode::kInvalidParameter, "need r >= 1, levels >= 1, scale >= 2");
  }
  const bool torus = g.topology() == Topology::kTorus;
  const int d = g.dimension();
  const int levels = opts.num_levels;
  const int margin = detail::core_margin(opts.r);
  const std::size_t nv = static_cast<std::size_t>(g.vertex_count());

  std::vector<bool> whole(static_cast<std::size_t>(levels), false);
  std::vector<int> bounds(static_cast<std::size_t>(levels), 0);
  for (int n = 1; n <= levels; ++n) {
    const std::int64_t cell = detail::cell_side(opts.scale, n);
    const bool covers = std::all_of(g.dims().begin(), g.dims().end(),
                                    [&](int side) { return cell >= side; });
    if (covers && n < levels) {
      throw Error(ErrorCode::kGenerationFailed,
                  "level " + std::to_string(n) + " cells (side " + std::to_string(cell) +
                      ") already cover " + g.describe());
    }
    whole[n - 1] = covers;
    if (covers) {
      bounds[n - 1] = diameter(g, VertexSet::from_mask(Mask(nv, 1))) + 1;
      continue;
    }
    if (cell - 2 * margin <= 0) {
      throw Error(ErrorCode::kGenerationFailed,
                  "separation margin " + std::to_string(margin) + " swallows level " +
                      std::to_string(n) + " cells of side " + std::to_string(cell));
    }
    if (torus) {
      for (int side : g.dims()) {
        if (side % cell != 0) {
          throw Error(ErrorCode::kGenerationFailed,
                      "torus side " + std::to_string(side) +
                          " is not a multiple of the level " + std::to_string(n) +
                          " cell side " + std::to_string(cell));
        }
      }
    }
    bounds[n - 1] = static_cast<int>(d * (cell - 2 * margin - 1) + 1);
  }

  std::mt19937_64 rng(opts.seed);
  std::string last_failure;
  for (int attempt = 1; attempt <= opts.max_attempts; ++attempt) {
    std::vector<std::vector<int>> offsets(static_cast<std::size_t>(levels));
    for (int n = 1; n <= levels; ++n) {
      const std::int64_t cell = detail::cell_side(opts.scale, n);
      for (int axis = 0; axis < d; ++axis) {
        const std::int64_t span = whole[n - 1] ? 1 : cell;
        offsets[n - 1].push_back(static_cast<int>(rng() % static_cast<std::uint64_t>(span)));
      }
    }
    LevelSets ls;
    ls.r = opts.r;
    ls.component_bounds = bounds;
    ls.levels.resize(static_cast<std::size_t>(levels));
    Mask removed(nv, 0);
    bool empty_level = false;
    for (int n = levels; n >= 1; --n) {
      Mask level(nv, 0);
      if (whole[n - 1]) {
        std::fill(level.begin(), level.end(), 1);
      } else {
        const std::int64_t cell = detail::cell_side(opts.scale, n);
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
          if (removed[v]) continue;
          const auto c = g.coords(v);
          bool core = true;
          for (int axis = 0; axis < d && core; ++axis) {
            core = detail::in_core(c[axis], g.dims()[axis], cell, offsets[n - 1][axis],
                                   margin, torus);
          }
          level[v] = core;
        }
      }
      for (std::size_t v = 0; v < nv; ++v) {
        if (removed[v]) level[v] = 0;
      }
      const Mask zone = detail::straddle_zone(g, level, 4 * opts.r);
      for (std::size_t v = 0; v < nv; ++v) {
        if (zone[v]) removed[v] = 1;
      }
      ls.levels[n - 1] = VertexSet::from_mask(level);
      if (ls.levels[n - 1].empty()) empty_level = true;
    }
    if (empty_level) {
      last_failure = "a level came out empty";
      continue;
    }
    const Report check = verify_level_sets(g, ls);
    if (check.passed()) return GeneratedLevels{std::move(ls), std::move(offsets), attempt};
    last_failure = check.summary();
    if (const Check* p2 = check.find("P2")) {
      last_failure += " (uncovered " + p2->info["uncovered"].dump() + ")";
    }
  }
  throw Error(ErrorCode::kGenerationFailed,
              "no offsets found in " + std::to_string(opts.max_attempts) +
                  " attempts; last: " + last_failure);
}

/// W_n: each 3r-component of V_n replaced by its filling. Components lying
/// in a hole of an already filled component are skipped. On graphs without
/// an exterior a component must already be full (or be the whole graph).
inline std::vector<VertexSet> fill_levels(const Graph& g, const LevelSets& ls) {
  const std::size_t nv = static_cast<std::size_t>(g.vertex_count());
  std::vector<VertexSet> out;
  out.reserve(ls.levels.size());
  for (std::size_t n = 0; n < ls.levels.size(); ++n) {
    auto comps = n_components(g, ls.levels[n], 3 * ls.r);
    std::stable_sort(comps.begin(), comps.end(), [](const VertexSet& a, const VertexSet& b) {
      return a.size() > b.size();
    });
    Mask filled(nv, 0);
    for (const VertexSet& comp : comps) {
      if (std::all_of(comp.begin(), comp.end(), [&](Vertex v) { return filled[v] != 0; })) {
        continue;
      }
      const auto where = "level " + std::to_string(n + 1) + " component at vertex " +
                         std::to_string(comp.front());
      VertexSet hat;
      if (static_cast<int>(comp.size()) == g.vertex_count()) {
        hat = comp;
      } else if (g.has_escape()) {
        try {
          hat = fill(g, comp);
        } catch (const Error& e) {
          throw Error(ErrorCode::kNotFillable, where + ": " + e.what());
        }
      } else if (is_full(g, comp)) {
        hat = comp;
      } else {
        throw Error(ErrorCode::kNotFillable,
                    where + " is not full and the graph has no exterior to fill against");
      }
      for (Vertex v : hat) filled[v] = 1;
    }
    out.push_back(VertexSet::from_mask(filled));
  }
  return out;
}

/// Tiles are the connected components of every W_n, tagged with level n.
/// Ids run in (level, least vertex) order. The result is not certified.
inline Toast levels_to_toast(const Graph& g, const std::vector<VertexSet>& filled) {
  Toast toast;
  toast.flags.claims_connected = true;
  int next_id = 0;
  for (std::size_t n = 0; n < filled.size(); ++n) {
    for (VertexSet& comp : connected_components(g, filled[n])) {
      toast.tiles.push_back(Tile{next_id++, static_cast<int>(n) + 1, std::move(comp)});
    }
  }
  return toast;
}

/// Vertex map from a lattice graph into a larger window, shifting by
/// `offset`. Throws when the shifted box does not fit.
inline std::vector<Vertex> lattice_embedding(const Graph& src, const Graph& dst,
                                             const std::vector<int>& offset) {
  if (!src.is_lattice() || !dst.is_lattice() || src.dimension() != dst.dimension() ||
      static_cast<int>(offset.size()) != src.dimension()) {
    throw Error(ErrorCode::kInvalidParameter, "embedding needs lattices of equal dimension");
  }
  std::vector<Vertex> map(static_cast<std::size_t>(src.vertex_count()));
  for (Vertex v = 0; v < src.vertex_count(); ++v) {
    auto c = src.coords(v);
    for (std::size_t i = 0; i < c.size(); ++i) {
      c[i] += offset[i];
      if (c[i] < 0 || c[i] >= dst.dims()[i]) {
        throw Error(ErrorCode::kInvalidParameter, "embedded box leaves the target");
      }
    }
    map[v] = *dst.at(c);
  }
  return map;
}

inline VertexSet map_set(const VertexSet& s, const std::vector<Vertex>& map) {
  std::vector<Vertex> out;
  out.reserve(s.size());
  for (Vertex v : s) out.push_back(map[v]);
  return VertexSet(std::move(out));
}

inline Toast embed_toast(const Toast& toast, const std::vector<Vertex>& map) {
  Toast out = toast;
  for (Tile& t : out.tiles) t.vertices = map_set(t.vertices, map);
  return out;
}

/// Embedded level sets. The exhaustion domain shrinks to the image vertices
/// whose r-ball stays inside the image, the embedded analogue of the rim
/// exemption.
inline LevelSets embed_level_sets(const Graph& dst, const LevelSets& ls,
                                  const std::vector<Vertex>& map) {
  LevelSets out = ls;
  for (VertexSet& level : out.levels) level = map_set(level, map);
  const VertexSet image(std::vector<Vertex>(map.begin(), map.end()));
  const std::size_t nv = static_cast<std::size_t>(dst.vertex_count());
  const Mask near_outside =
      detail::ball_mask(dst, detail::complement(image.mask(nv)), ls.r);
  std::vector<Vertex> domain;
  for (Vertex v : ls.domain ? map_set(*ls.domain, map) : image) {
    if (!near_outside[v]) domain.push_back(v);
  }
  out.domain = VertexSet(std::move(domain));
  return out;
}

/// Re-applies the separation rule top-down: every vertex of a lower level
/// whose 4r-ball straddles a higher (already trimmed) level is dropped.
/// Needed after embedding, where a top level that was the whole graph
/// acquires a boundary.
inline LevelSets separate_levels(const Graph& g, LevelSets ls) {
  const std::size_t nv = static_cast<std::size_t>(g.vertex_count());
  Mask removed(nv, 0);
  for (std::size_t n = ls.levels.size(); n-- > 0;) {
    Mask level = ls.levels[n].mask(nv);
    for (std::size_t v = 0; v < nv; ++v) {
      if (removed[v]) level[v] = 0;
    }
    const Mask zone = detail::straddle_zone(g, level, 4 * ls.r);
    for (std::size_t v = 0; v < nv; ++v) {
      if (zone[v]) removed[v] = 1;
    }
    ls.levels[n] = VertexSet::from_mask(level);
  }
  return ls;
}

}  // namespace toastlab

#endif  // TOASTLAB_LEVEL_SETS_HPP_
