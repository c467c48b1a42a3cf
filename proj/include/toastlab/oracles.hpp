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

#ifndef TOASTLAB_ORACLES_HPP_
#define TOASTLAB_ORACLES_HPP_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "toastlab/error.hpp"
#include "toastlab/graph.hpp"
#include "toastlab/matching.hpp"
#include "toastlab/metric.hpp"

namespace toastlab {

struct OracleMatching {
  Matching matching;
  bool perfect = false;
};

/// Maximum matching by augmenting paths (Kuhn).
inline OracleMatching oracle_matching(const Graph& g) {
  const auto color = bipartition(g);
  if (!color) throw Error(ErrorCode::kInvalidInput, "graph has an odd cycle");
  const int n = g.vertex_count();
  std::vector<Vertex> mate(static_cast<std::size_t>(n), -1);
  std::vector<int> visited(static_cast<std::size_t>(n), -1);
  std::function<bool(Vertex, int)> augment = [&](Vertex left, int round) -> bool {
    for (const Neighbor& nb : g.neighbors(left)) {
      const Vertex right = nb.vertex;
      if (visited[right] == round) continue;
      visited[right] = round;
      if (mate[right] < 0 || augment(mate[right], round)) {
        mate[right] = left;
        mate[left] = right;
        return true;
      }
    }
    return false;
  };
  int round = 0;
  for (Vertex v = 0; v < n; ++v) {
    if ((*color)[v] == 0 && mate[v] < 0) augment(v, round++);
  }
  std::vector<Edge> edges;
  for (Vertex v = 0; v < n; ++v) {
    if (mate[v] > v) edges.emplace_back(v, mate[v]);
  }
  OracleMatching out;
  out.perfect = 2 * edges.size() == static_cast<std::size_t>(n);
  out.matching = Matching{EdgeSet(std::move(edges))};
  return out;
}

/// Exhaustive search for a spanning subgraph with odd degree exactly on P.
/// Edges are grouped by their smaller endpoint; the last edge of a group is
/// forced by that endpoint's parity, which is final once its group closes.
inline bool oracle_parity_exists(const Graph& g, const VertexSet& p) {
  if (g.vertex_count() > 20) {
    throw Error(ErrorCode::kInvalidParameter, "parity oracle is limited to 20 vertices");
  }
  check_members(g, p);
  const int n = g.vertex_count();
  std::vector<std::vector<Vertex>> group(static_cast<std::size_t>(n));
  for (const Edge& e : g.edges()) group[e.u].push_back(e.v);
  std::vector<int> want(static_cast<std::size_t>(n), 0);
  for (Vertex v : p) want[v] = 1;
  std::vector<int> parity(static_cast<std::size_t>(n), 0);

  std::function<bool(Vertex, std::size_t)> search = [&](Vertex a, std::size_t k) -> bool {
    if (a == n) return true;
    const auto& grp = group[a];
    if (grp.empty()) {
      return parity[a] == want[a] && search(a + 1, 0);
    }
    if (k + 1 == grp.size()) {
      const int take = parity[a] ^ want[a];
      parity[a] ^= take;
      parity[grp[k]] ^= take;
      const bool ok = search(a + 1, 0);
      parity[a] ^= take;
      parity[grp[k]] ^= take;
      return ok;
    }
    for (int take : {0, 1}) {
      parity[a] ^= take;
      parity[grp[k]] ^= take;
      const bool ok = search(a, k + 1);
      parity[a] ^= take;
      parity[grp[k]] ^= take;
      if (ok) return true;
    }
    return false;
  };
  return search(0, 0);
}

struct KappaOptions {
  std::vector<int> anchor_offset;  // shifts the placement center
  std::int64_t budget = 5'000'000;  // canonical sets enumerated
};

struct KappaReport {
  int d = 0;
  std::vector<int> window;
  int max_set_size = 0;
  int kappa_max = 0;
  int kappa = -1;  // -1 when no radius up to kappa_max works
  long long witness_sets_checked = 0;
  long long enumerated = 0;
  bool budget_exceeded = false;
  std::vector<int> center;
  VertexSet failing_set_at_kappa_minus_1;
  std::vector<std::vector<int>> failing_cells;  // relative to the placement center
};

namespace detail {

using Cells = std::vector<std::vector<int>>;

inline Cells normalize(Cells cells) {
  const std::size_t d = cells.front().size();
  for (std::size_t a = 0; a < d; ++a) {
    int lo = cells.front()[a];
    for (const auto& c : cells) lo = std::min(lo, c[a]);
    for (auto& c : cells) c[a] -= lo;
  }
  std::sort(cells.begin(), cells.end());
  return cells;
}

// Fixed polyominoes (lattice animals up to translation) by size, grown one
// cell at a time from the previous size.
inline std::vector<Cells> lattice_animals(int d, int max_size, std::int64_t budget,
                                          bool* exceeded) {
  std::vector<Cells> all;
  if (max_size <= 0) return all;
  std::set<Cells> layer{Cells{std::vector<int>(static_cast<std::size_t>(d), 0)}};
  for (int size = 1;; ++size) {
    all.insert(all.end(), layer.begin(), layer.end());
    if (size == max_size) break;
    std::set<Cells> next;
    for (const Cells& shape : layer) {
      for (const auto& cell : shape) {
        for (int a = 0; a < d; ++a) {
          for (int step : {-1, 1}) {
            auto c = cell;
            c[a] += step;
            if (std::binary_search(shape.begin(), shape.end(), c)) continue;
            Cells grown = shape;
            grown.push_back(c);
            next.insert(normalize(std::move(grown)));
            if (static_cast<std::int64_t>(all.size() + next.size()) > budget) {
              *exceeded = true;
              all.insert(all.end(), next.begin(), next.end());
              return all;
            }
          }
        }
      }
    }
    layer = std::move(next);
  }
  return all;
}

}  // namespace detail

/// Smallest radius k <= kappa_max such that B_k(C) minus C is connected for
/// every connected full set C of at most max_set_size cells, placed at the
/// window center (shifted by the anchor offset).
inline KappaReport kappa_search(const std::vector<int>& window_dims, int max_set_size,
                                int kappa_max, const KappaOptions& opts = {}) {
  if (max_set_size < 0 || kappa_max < 1) {
    throw Error(ErrorCode::kInvalidParameter, "need max_set_size >= 0 and kappa_max >= 1");
  }
  const Graph g = Graph::grid(window_dims, Topology::kWindow);
  KappaReport report;
  report.d = g.dimension();
  report.window = window_dims;
  report.max_set_size = max_set_size;
  report.kappa_max = kappa_max;
  report.center.resize(window_dims.size());
  for (std::size_t a = 0; a < window_dims.size(); ++a) {
    const int shift = a < opts.anchor_offset.size() ? opts.anchor_offset[a] : 0;
    report.center[a] = window_dims[a] / 2 + shift;
    const int span = std::max(max_set_size, 1) - 1;
    if (report.center[a] < kappa_max + 1 ||
        report.center[a] + span > window_dims[a] - 2 - kappa_max) {
      throw Error(ErrorCode::kInvalidParameter,
                  "window too small: placed sets must keep distance " +
                      std::to_string(kappa_max + 1) + " from the rim");
    }
  }
  const auto animals =
      detail::lattice_animals(report.d, max_set_size, opts.budget, &report.budget_exceeded);
  report.enumerated = static_cast<long long>(animals.size());

  std::vector<std::pair<detail::Cells, VertexSet>> full;
  for (const auto& cells : animals) {
    std::vector<Vertex> ids;
    for (const auto& c : cells) {
      std::vector<int> at = c;
      for (std::size_t a = 0; a < at.size(); ++a) at[a] += report.center[a];
      ids.push_back(*g.at(at));
    }
    VertexSet s(std::move(ids));
    if (is_full(g, s)) full.emplace_back(cells, std::move(s));
  }
  report.witness_sets_checked = static_cast<long long>(full.size());
  if (full.empty()) {
    report.kappa = 1;
    return report;
  }
  for (int k = 1; k <= kappa_max; ++k) {
    const std::pair<detail::Cells, VertexSet>* failing = nullptr;
    for (const auto& entry : full) {
      if (!is_connected(g, boundary(g, entry.second, k))) {
        failing = &entry;
        break;
      }
    }
    if (!failing) {
      report.kappa = k;
      return report;
    }
    report.failing_cells = failing->first;
    report.failing_set_at_kappa_minus_1 = failing->second;
  }
  return report;
}

}  // namespace toastlab

#endif  // TOASTLAB_ORACLES_HPP_
