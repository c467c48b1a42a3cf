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

#ifndef TOASTLAB_MATCHING_HPP_
#define TOASTLAB_MATCHING_HPP_

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toastlab/error.hpp"
#include "toastlab/graph.hpp"
#include "toastlab/metric.hpp"
#include "toastlab/orientation.hpp"
#include "toastlab/report.hpp"
#include "toastlab/toast.hpp"

namespace toastlab {

/// Edge weights num/d, indexed by edge id.
struct FractionalMatching {
  int d = 1;
  std::vector<int> num;
  friend bool operator==(const FractionalMatching&, const FractionalMatching&) = default;
};

struct Matching {
  EdgeSet edges;
  friend bool operator==(const Matching&, const Matching&) = default;
};

/// One applied circuit: +eps at even distance from e_prime along the cycle,
/// -eps at odd distance.
struct Circuit {
  Cycle cycle;
  Edge e_prime;
  int eps = 1;
  std::vector<int> signs;  // per cycle edge, in walk order
  int tile_id = -1;        // tile being rounded
  int region_depth = 0;    // 0 = the tile itself, chain length = whole graph
};

struct MatchingRun {
  Matching matching;
  FractionalMatching final_state;
  std::vector<Circuit> circuits;
  int deepest_region = 0;
};

struct RoundOptions {
  bool whole_graph_fallback = false;
};

/// Uniform 1/d on a d-regular graph.
inline FractionalMatching init_fractional(const Graph& g, int d) {
  if (d < 1) throw Error(ErrorCode::kInvalidParameter, "d must be positive");
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (g.degree(v) != d) {
      throw Error(ErrorCode::kInvalidInput, "vertex " + std::to_string(v) + " has degree " +
                                                std::to_string(g.degree(v)) + ", expected " +
                                                std::to_string(d));
    }
  }
  return FractionalMatching{d, std::vector<int>(static_cast<std::size_t>(g.edge_count()), 1)};
}

namespace detail {

inline std::vector<EdgeId> cycle_edge_ids(const Graph& g, const Cycle& c) {
  if (c.vertices.size() < 3 || c.vertices.front() != c.vertices.back()) {
    throw Error(ErrorCode::kInvalidInput, "cycle must be closed with at least two edges");
  }
  std::vector<EdgeId> ids;
  for (std::size_t i = 0; i + 1 < c.vertices.size(); ++i) {
    const Vertex a = c.vertices[i], b = c.vertices[i + 1];
    const bool ok = a >= 0 && b >= 0 && a < g.vertex_count() && b < g.vertex_count();
    const auto id = ok ? g.find_edge(a, b) : std::nullopt;
    if (!id) {
      throw Error(ErrorCode::kInvalidInput,
                  "cycle step {" + std::to_string(a) + "," + std::to_string(b) + "} is not an edge");
    }
    ids.push_back(*id);
  }
  std::vector<EdgeId> sorted = ids;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::kInvalidInput, "cycle repeats an edge");
  }
  return ids;
}

inline std::vector<int> circuit_signs(const std::vector<EdgeId>& ids, EdgeId e_prime) {
  const auto it = std::find(ids.begin(), ids.end(), e_prime);
  if (it == ids.end()) throw Error(ErrorCode::kInvalidParameter, "e' is not on the cycle");
  const std::size_t start = static_cast<std::size_t>(it - ids.begin());
  std::vector<int> signs(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const std::size_t dist = (i + ids.size() - start) % ids.size();
    signs[i] = dist % 2 == 0 ? 1 : -1;
  }
  return signs;
}

}  // namespace detail

/// Alternating circuit update. Vertex sums are unchanged because every
/// vertex on an even cycle sees one + and one - step.
inline FractionalMatching apply_circuit(const Graph& g, const FractionalMatching& f,
                                        const Cycle& c, const Edge& e_prime, int eps_num,
                                        std::vector<int>* signs_out = nullptr) {
  if (c.length() % 2 != 0) {
    throw Error(ErrorCode::kParityError,
                "cycle of odd length " + std::to_string(c.length()));
  }
  if (f.num.size() != static_cast<std::size_t>(g.edge_count())) {
    throw Error(ErrorCode::kInvalidInput, "fractional matching does not fit the graph");
  }
  const auto ids = detail::cycle_edge_ids(g, c);
  const auto ep = g.find_edge(e_prime.u, e_prime.v);
  if (!ep) throw Error(ErrorCode::kInvalidParameter, "e' is not an edge");
  const auto signs = detail::circuit_signs(ids, *ep);
  FractionalMatching out = f;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const int value = f.num[ids[i]] + signs[i] * eps_num;
    if (value < 0 || value > f.d) {
      const Edge& e = g.edge(ids[i]);
      throw Error(ErrorCode::kOutOfRange, "edge {" + std::to_string(e.u) + "," +
                                              std::to_string(e.v) + "} would become " +
                                              std::to_string(value) + "/" +
                                              std::to_string(f.d));
    }
    out.num[ids[i]] = value;
  }
  if (signs_out) *signs_out = signs;
  return out;
}

/// Sum range and per-vertex sums.
inline Report verify_fractional(const Graph& g, const FractionalMatching& f) {
  Report report;
  const bool sized = f.d >= 1 && f.num.size() == static_cast<std::size_t>(g.edge_count());
  report.add("shape", sized, sized ? Json(nullptr) : Json{{"d", f.d}, {"entries", f.num.size()}},
             Json{{"d", f.d}, {"edges", g.edge_count()}});
  if (!sized) return report;
  std::vector<Json> range;
  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    if (f.num[id] < 0 || f.num[id] > f.d) {
      range.push_back(Json{{"edge", Json::array({g.edge(id).u, g.edge(id).v})}, {"num", f.num[id]}});
    }
  }
  report.add("range", range.empty(), range.empty() ? Json(nullptr) : Json{{"edges", capped(range)}});
  std::vector<Json> sums;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    long long s = 0;
    for (const Neighbor& n : g.neighbors(v)) s += f.num[n.edge];
    if (s != f.d) sums.push_back(Json{{"vertex", v}, {"sum", s}});
  }
  report.add("vertex_sums", sums.empty(), sums.empty() ? Json(nullptr) : Json{{"vertices", capped(sums)}},
             Json{{"bad", sums.size()}});
  return report;
}

/// Matching edges are real, pairwise disjoint, and cover every vertex.
inline Report verify_matching(const Graph& g, const Matching& m) {
  Report report;
  const auto nv = static_cast<std::size_t>(g.vertex_count());
  std::vector<Json> invalid;
  std::vector<int> hits(nv, 0);
  for (const Edge& e : m.edges) {
    if (e.u < 0 || e.v >= g.vertex_count() || !g.adjacent(e.u, e.v)) {
      invalid.push_back(Json::array({e.u, e.v}));
      continue;
    }
    ++hits[e.u];
    ++hits[e.v];
  }
  report.add("edges_valid", invalid.empty(),
             invalid.empty() ? Json(nullptr) : Json{{"edges", capped(invalid)}});
  std::vector<Vertex> shared, uncovered;
  for (std::size_t v = 0; v < nv; ++v) {
    if (hits[v] > 1) shared.push_back(static_cast<Vertex>(v));
    if (hits[v] == 0) uncovered.push_back(static_cast<Vertex>(v));
  }
  report.add("disjoint", shared.empty(), shared.empty() ? Json(nullptr) : Json{{"vertices", capped(shared)}});
  report.add("perfect", uncovered.empty(),
             uncovered.empty() ? Json(nullptr) : Json{{"uncovered", capped(uncovered)}},
             Json{{"size", m.edges.size()}, {"vertices", nv}, {"uncovered", uncovered.size()}});
  return report;
}

namespace detail {

inline void require_bipartite(const Graph& g) {
  if (!bipartition(g)) throw Error(ErrorCode::kInvalidInput, "graph has an odd cycle");
}

// Rounds every edge inside tile chain[0] to 0 or d. Cycles are searched in
// the non-integral support, inside the smallest chain region that has one.
inline void round_chain(const Graph& g, FractionalMatching& f, const TileHierarchy& h,
                        const std::vector<int>& chain, bool whole_graph_fallback,
                        std::vector<Circuit>* log, int* deepest) {
  const auto nv = static_cast<std::size_t>(g.vertex_count());
  const Mask first = h.tile(chain.front()).vertices.mask(nv);
  std::vector<EdgeId> inner;
  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    if (first[g.edge(id).u] && first[g.edge(id).v]) inner.push_back(id);
  }
  const std::size_t limit =
      std::max<std::size_t>(1, static_cast<std::size_t>(f.d) * inner.size());
  std::vector<Mask> regions;
  for (std::size_t j = 0; j < chain.size() && j < limit; ++j) {
    regions.push_back(j == 0 ? first : h.tile(chain[j]).vertices.mask(nv));
  }
  if (whole_graph_fallback) regions.emplace_back(nv, 1);

  std::vector<char> support(static_cast<std::size_t>(g.edge_count()));
  for (EdgeId id = 0; id < g.edge_count(); ++id) support[id] = f.num[id] > 0 && f.num[id] < f.d;

  for (EdgeId id : inner) {
    while (support[id]) {
      std::optional<Cycle> cycle;
      int depth = 0;
      for (std::size_t j = 0; j < regions.size() && !cycle; ++j) {
        cycle = bfs_cycle(g, support, regions[j], id);
        depth = static_cast<int>(j);
      }
      if (!cycle) {
        const Edge& e = g.edge(id);
        throw Error(ErrorCode::kChainTooShort,
                    "edge {" + std::to_string(e.u) + "," + std::to_string(e.v) + "} at " +
                        std::to_string(f.num[id]) + "/" + std::to_string(f.d) +
                        " has no support cycle within " + std::to_string(regions.size()) +
                        " regions");
      }
      const bool up = 2 * f.num[id] > f.d;
      const Edge e_prime = up ? g.edge(id) : Edge(cycle->vertices[1], cycle->vertices[2]);
      std::vector<int> signs;
      f = apply_circuit(g, f, *cycle, e_prime, 1, &signs);
      for (std::size_t k = 0; k + 1 < cycle->vertices.size(); ++k) {
        const EdgeId c = *g.find_edge(cycle->vertices[k], cycle->vertices[k + 1]);
        support[c] = f.num[c] > 0 && f.num[c] < f.d;
      }
      if (deepest) *deepest = std::max(*deepest, depth);
      if (log) {
        log->push_back(Circuit{std::move(*cycle), e_prime, 1, std::move(signs),
                               h.tile(chain.front()).id, depth});
      }
    }
  }
}

}  // namespace detail

/// Makes every edge of the first chain tile integral, using only the chain
/// regions (plus the whole graph when allowed). `chain` lists tile ids,
/// innermost first, each strictly inside the next.
inline FractionalMatching round_tile(const Graph& g, const FractionalMatching& f,
                                     const std::vector<int>& chain, const Toast& toast,
                                     RoundOptions opts = {}, std::vector<Circuit>* log = nullptr) {
  detail::require_bipartite(g);
  if (!verify_fractional(g, f).passed()) {
    throw Error(ErrorCode::kInvalidInput, "input is not a fractional perfect matching");
  }
  if (chain.empty()) throw Error(ErrorCode::kInvalidParameter, "empty chain");
  const TileHierarchy h(g, toast);
  std::vector<int> idx;
  for (int id : chain) {
    const int i = h.index_of(id);
    if (i < 0) throw Error(ErrorCode::kNotFound, "tile " + std::to_string(id) + " not in toast");
    if (!idx.empty()) {
      const VertexSet& inner = h.tile(idx.back()).vertices;
      const VertexSet& outer = h.tile(i).vertices;
      if (!includes(outer, inner) || outer.size() <= inner.size()) {
        throw Error(ErrorCode::kInvalidParameter,
                    "chain tile " + std::to_string(id) + " does not strictly contain its predecessor");
      }
    }
    idx.push_back(i);
  }
  FractionalMatching out = f;
  detail::round_chain(g, out, h, idx, opts.whole_graph_fallback, log, nullptr);
  return out;
}

/// Rounds every tile in (layer, index) order along its ancestor chain with a
/// whole-graph fallback, then collects the edges at d/d.
inline MatchingRun run_perfect_matching(const Graph& g, const Toast& toast, int d) {
  detail::require_bipartite(g);
  FractionalMatching f = init_fractional(g, d);
  const Report check = verify_toast(g, toast);
  if (!check.passed("T1") || !check.passed("T2") || !check.passed("T3")) {
    throw Error(ErrorCode::kInvalidToast, "matching needs T1-T3: " + check.summary());
  }
  const TileHierarchy h(g, toast);
  std::vector<int> order(static_cast<std::size_t>(h.size()));
  for (int i = 0; i < h.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return h.layer(a) < h.layer(b); });
  MatchingRun run;
  for (int i : order) {
    std::vector<int> chain{i};
    for (int a : h.ancestors(i)) chain.push_back(a);
    detail::round_chain(g, f, h, chain, true, &run.circuits, &run.deepest_region);
  }
  std::vector<Edge> chosen;
  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    if (f.num[id] == f.d) chosen.push_back(g.edge(id));
  }
  run.matching = Matching{EdgeSet(std::move(chosen))};
  run.final_state = std::move(f);
  return run;
}

inline Matching perfect_matching(const Graph& g, const Toast& toast, int d) {
  return run_perfect_matching(g, toast, d).matching;
}

/// Replays a circuit log from the uniform start and reports the first edge
/// that changes after reaching 0 or d, plus per-step vertex sums.
inline Report verify_circuit_log(const Graph& g, int d, const std::vector<Circuit>& log) {
  Report report;
  FractionalMatching f = init_fractional(g, d);
  std::vector<char> frozen(static_cast<std::size_t>(g.edge_count()), 0);
  Json thawed = nullptr;
  Json sums = nullptr;
  std::size_t step = 0;
  for (const Circuit& c : log) {
    const FractionalMatching next = apply_circuit(g, f, c.cycle, c.e_prime, c.eps);
    for (EdgeId id = 0; id < g.edge_count() && thawed.is_null(); ++id) {
      if (frozen[id] && next.num[id] != f.num[id]) {
        thawed = Json{{"step", step}, {"edge", Json::array({g.edge(id).u, g.edge(id).v})}};
      }
    }
    if (sums.is_null() && !verify_fractional(g, next).passed("vertex_sums")) {
      sums = Json{{"step", step}};
    }
    f = next;
    for (EdgeId id = 0; id < g.edge_count(); ++id) {
      if (f.num[id] == 0 || f.num[id] == f.d) frozen[id] = 1;
    }
    ++step;
  }
  report.add("monotone_integrality", thawed.is_null(), thawed, Json{{"circuits", log.size()}});
  report.add("sums_preserved", sums.is_null(), sums);
  return report;
}

}  // namespace toastlab

#endif  // TOASTLAB_MATCHING_HPP_
