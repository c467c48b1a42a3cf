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

#ifndef TOASTLAB_FOLNER_HPP_
#define TOASTLAB_FOLNER_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "toastlab/error.hpp"
#include "toastlab/graph.hpp"
#include "toastlab/metric.hpp"
#include "toastlab/rational.hpp"
#include "toastlab/report.hpp"

namespace toastlab {

/// F inside the ball B = B_n(center).
struct FolnerPair {
  int n = 0;
  VertexSet inner;  // F
  VertexSet ball;   // B
};

/// A Følner pair together with the window it lives in.
struct FolnerSetup {
  Graph graph;
  Vertex center = 0;
  FolnerPair pair;
};

/// Centered window of radius `radius` (side 2*radius + 1) in Z^d.
inline Graph centered_window(int d, int radius, Vertex* center = nullptr) {
  const Graph g = build_grid(std::vector<int>(static_cast<std::size_t>(d), 2 * radius + 1),
                             Topology::kWindow);
  if (center) {
    *center = *g.at(std::vector<int>(static_cast<std::size_t>(d), radius));
  }
  return g;
}

/// F_n = B_{n - thickness} inside B_n on a window of radius n + 1. The
/// canonical family uses thickness 2; thickness 1 is the thin-shell variant
/// whose shell is disconnected.
inline FolnerSetup folner_sets(int d, int n, int thickness = 2) {
  if (d < 2) throw Error(ErrorCode::kInvalidParameter, "need d >= 2");
  if (thickness < 0) throw Error(ErrorCode::kInvalidParameter, "negative thickness");
  if (n < 2 || n < thickness) throw Error(ErrorCode::kInvalidParameter, "need n >= 2");
  FolnerSetup s;
  s.graph = centered_window(d, n + 1, &s.center);
  s.pair.n = n;
  s.pair.ball = ball(s.graph, VertexSet{s.center}, n);
  s.pair.inner = ball(s.graph, VertexSet{s.center}, n - thickness);
  return s;
}

/// Shell-to-core ratio |B - F| / |F|; throws undefined-ratio when F is empty.
inline Rational folner_ratio(const FolnerPair& p) {
  if (p.inner.empty()) throw Error(ErrorCode::kUndefinedRatio, "F is empty");
  return Rational(static_cast<std::int64_t>(subtract(p.ball, p.inner).size()),
                  static_cast<std::int64_t>(p.inner.size()));
}

/// Checks F inside B, the boundary of F inside the shell B - F, the shell
/// inducing a connected subgraph, and the ratio |B - F| / |F| < epsilon.
inline Report verify_folner(const Graph& g, const FolnerPair& p, Rational epsilon) {
  Report report;
  report.add("F_in_B", includes(p.ball, p.inner));
  const VertexSet shell = subtract(p.ball, p.inner);
  const VertexSet edge = boundary(g, p.inner, 1);
  const VertexSet escaped = subtract(edge, shell);
  report.add("boundary_in_shell", escaped.empty(),
             escaped.empty() ? Json(nullptr)
                             : Json{{"vertices", capped(escaped.ids())}},
             Json{{"boundary", edge.size()}, {"shell", shell.size()}});
  const auto pieces = connected_components(g, shell);
  report.add("shell_connected", pieces.size() == 1,
             pieces.size() == 1 ? Json(nullptr)
                                : Json{{"components", pieces.size()}},
             Json{{"components", pieces.size()}});
  if (p.inner.empty()) {
    report.add("ratio", false, Json{{"reason", "F is empty"}});
  } else {
    const Rational ratio = folner_ratio(p);
    report.add("ratio", ratio < epsilon, nullptr,
               Json{{"ratio", ratio.str()},
                    {"value", ratio.to_double()},
                    {"epsilon", epsilon.str()}});
  }
  return report;
}

struct IsoMember {
  VertexSet inner;     // F
  VertexSet envelope;  // B_F
};

struct IsoFamily {
  std::vector<IsoMember> members;
};

struct IsoVerdict {
  Report report;
  Rational ratio;
};

/// Checks the four conditions on a finite family of pairs F inside B_F:
/// (1) visible boundary of F inside B_F - F, (2) B_F - F connected,
/// (3) B_F disjoint from every other F', (4) every complement component of
/// the union of the F that misses the exterior lies in the union of the B_F.
/// Members whose B_F reaches within one step of the rim are flagged.
inline IsoVerdict verify_iso_family(const Graph& g, const IsoFamily& fam) {
  detail::require_escape(g, "the isoperimetric family check");
  if (fam.members.empty()) throw Error(ErrorCode::kUndefinedRatio, "empty family");
  const std::size_t nv = static_cast<std::size_t>(g.vertex_count());
  IsoVerdict out;
  Report& report = out.report;

  Json nested = Json::array();
  Json c1 = Json::array();
  Json c2 = Json::array();
  Json rim = Json::array();
  const Mask rim_mask = g.exterior().mask(nv);
  for (std::size_t i = 0; i < fam.members.size(); ++i) {
    const IsoMember& m = fam.members[i];
    check_members(g, m.inner);
    check_members(g, m.envelope);
    if (!includes(m.envelope, m.inner)) nested.push_back(i);
    const VertexSet shell = subtract(m.envelope, m.inner);
    if (!includes(shell, boundary(g, m.inner, 1, BoundaryMode::kVisible))) c1.push_back(i);
    if (!is_connected(g, shell)) c2.push_back(i);
    for (Vertex v : ball(g, m.envelope, 1)) {
      if (rim_mask[v]) {
        rim.push_back(i);
        break;
      }
    }
  }
  report.add("F_in_B_F", nested.empty(), nested.empty() ? Json(nullptr) : Json{{"members", nested}});
  report.add("visible_boundary", c1.empty(), c1.empty() ? Json(nullptr) : Json{{"members", c1}});
  report.add("shell_connected", c2.empty(), c2.empty() ? Json(nullptr) : Json{{"members", c2}});

  Json c3 = Json::array();
  for (std::size_t i = 0; i < fam.members.size(); ++i) {
    for (std::size_t j = 0; j < fam.members.size(); ++j) {
      if (i != j && intersects(fam.members[i].envelope, fam.members[j].inner)) {
        c3.push_back(Json::array({i, j}));
      }
    }
  }
  report.add("separated", c3.empty(), c3.empty() ? Json(nullptr) : Json{{"pairs", capped(std::vector<Json>(c3.begin(), c3.end()))}});

  Mask union_inner(nv, 0);
  Mask union_env(nv, 0);
  Mask union_shell(nv, 0);
  for (const IsoMember& m : fam.members) {
    for (Vertex v : m.inner) union_inner[v] = 1;
    for (Vertex v : m.envelope) union_env[v] = 1;
  }
  for (const IsoMember& m : fam.members) {
    for (Vertex v : m.envelope) {
      if (!m.inner.contains(v)) union_shell[v] = 1;
    }
  }
  int count = 0;
  const auto label = detail::component_labels(g, detail::complement(union_inner), &count);
  std::vector<char> escapes(static_cast<std::size_t>(count), 0);
  for (Vertex v : g.exterior()) {
    if (label[v] >= 0) escapes[label[v]] = 1;
  }
  std::vector<char> contained(static_cast<std::size_t>(count), 1);
  for (std::size_t v = 0; v < nv; ++v) {
    if (label[v] >= 0 && !union_env[v]) contained[label[v]] = 0;
  }
  Json c4 = Json::array();
  for (int c = 0; c < count; ++c) {
    if (!escapes[c] && !contained[c]) {
      for (std::size_t v = 0; v < nv; ++v) {
        if (label[v] == c) {
          c4.push_back(v);
          break;
        }
      }
    }
  }
  report.add("finite_components_covered", c4.empty(),
             c4.empty() ? Json(nullptr) : Json{{"component_at", c4}});

  const auto shell_size = std::count(union_shell.begin(), union_shell.end(), 1);
  const auto inner_size = std::count(union_inner.begin(), union_inner.end(), 1);
  if (inner_size == 0) throw Error(ErrorCode::kUndefinedRatio, "union of F is empty");
  out.ratio = Rational(shell_size, inner_size);
  report.add("rim", true, nullptr, Json{{"members_near_rim", rim}, {"ratio", out.ratio.str()}});
  return out;
}

}  // namespace toastlab

#endif  // TOASTLAB_FOLNER_HPP_
