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

#include <gtest/gtest.h>

#include <random>

#include "reference.hpp"
#include "toastlab.hpp"

namespace toastlab {
namespace {

using ref::Box;

std::vector<int> degrees(const Graph& g, const EdgeSet& h) {
  std::vector<int> d(static_cast<std::size_t>(g.vertex_count()), 0);
  for (const Edge& e : h) {
    ++d[e.u];
    ++d[e.v];
  }
  return d;
}

void expect_parity(const Graph& g, const VertexSet& p, const EdgeSet& h) {
  const auto d = degrees(g, h);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    EXPECT_EQ(d[v] % 2, p.contains(v) ? 1 : 0) << "vertex " << v;
  }
  for (const Edge& e : h) EXPECT_TRUE(g.adjacent(e.u, e.v));
}

// Every edge subset, checked for the parity pattern.
bool exhaustive_parity(const Graph& g, const VertexSet& p) {
  const int m = g.edge_count();
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> d(static_cast<std::size_t>(g.vertex_count()), 0);
    for (int i = 0; i < m; ++i) {
      if ((mask >> i) & 1u) {
        ++d[g.edge(i).u];
        ++d[g.edge(i).v];
      }
    }
    bool ok = true;
    for (Vertex v = 0; v < g.vertex_count(); ++v) ok = ok && (d[v] % 2 == (p.contains(v) ? 1 : 0));
    if (ok) return true;
  }
  return false;
}

EdgeSet all_edges(const Graph& g) { return EdgeSet(g.edges()); }

VertexSet all_vertices(const Graph& g) {
  std::vector<Vertex> v(static_cast<std::size_t>(g.vertex_count()));
  std::iota(v.begin(), v.end(), 0);
  return VertexSet(v);
}

void expect_simple_cycle_through(const Graph& g, const Cycle& c, const Edge& e,
                                 const EdgeSet& available, const VertexSet& region) {
  ASSERT_GE(c.vertices.size(), 4u);
  EXPECT_EQ(c.vertices.front(), c.vertices.back());
  std::set<Vertex> seen(c.vertices.begin(), c.vertices.end() - 1);
  EXPECT_EQ(seen.size(), c.length());
  bool has_e = false;
  for (const Edge& x : c.edges()) {
    EXPECT_TRUE(g.adjacent(x.u, x.v));
    EXPECT_TRUE(available.contains(x));
    EXPECT_TRUE(region.contains(x.u) && region.contains(x.v));
    has_e = has_e || x == e;
  }
  EXPECT_TRUE(has_e);
}

TEST(ParitySubgraph, PathEndpoints) {
  const Graph g = ref::path_graph(3);
  EXPECT_EQ(parity_subgraph(g, VertexSet{0, 2}), (EdgeSet{Edge(0, 1), Edge(1, 2)}));
}

TEST(ParitySubgraph, Triangle) {
  const Graph g = ref::cycle_graph(3);
  expect_parity(g, VertexSet{0, 1}, parity_subgraph(g, VertexSet{0, 1}));
}

TEST(ParitySubgraph, FourCycleAllOdd) {
  const Graph g = ref::cycle_graph(4);
  const VertexSet p{0, 1, 2, 3};
  EXPECT_TRUE(exhaustive_parity(g, p));
  expect_parity(g, p, parity_subgraph(g, p));
}

TEST(ParitySubgraph, Obstructions) {
  const Graph g = ref::cycle_graph(5);
  try {
    parity_subgraph(g, VertexSet{0, 1, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoSolution);
  }
  const Graph split = Graph::from_edges(4, {Edge(0, 1), Edge(2, 3)});
  try {
    parity_subgraph(split, VertexSet{0, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoSolution);
  }
}

TEST(ParitySubgraph, RandomConnectedGraphs) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 12)(rng);
    const Graph g = ref::random_connected(n, 0.25, rng);
    std::vector<Vertex> p;
    for (Vertex v = 0; v < n; ++v) {
      if (rng() % 2) p.push_back(v);
    }
    if (p.size() % 2) p.pop_back();
    const VertexSet ps(p);
    expect_parity(g, ps, parity_subgraph(g, ps));
  }
}

TEST(ParitySubgraph, AgreesWithOracleOnSmallCorpus) {
  const auto corpus = ref::connected_graphs(6);
  long long instances = 0;
  for (const auto& adj : corpus) {
    const Graph g = ref::to_graph(adj);
    const int n = g.vertex_count();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<Vertex> p;
      for (int v = 0; v < n; ++v) {
        if ((mask >> v) & 1u) p.push_back(v);
      }
      const VertexSet ps(p);
      const bool exists = oracle_parity_exists(g, ps);
      bool built = true;
      try {
        expect_parity(g, ps, parity_subgraph(g, ps));
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kNoSolution);
        built = false;
      }
      EXPECT_EQ(built, exists);
      EXPECT_EQ(exists, p.size() % 2 == 0);
      if (g.edge_count() <= 12) {
        EXPECT_EQ(exhaustive_parity(g, ps), exists);
      }
      ++instances;
    }
  }
  EXPECT_GT(instances, 4000);
}

TEST(ExtractCycle, FourCycle) {
  const Graph g = ref::cycle_graph(4);
  for (const Edge& e : g.edges()) {
    const Cycle c = extract_cycle(g, all_edges(g), e, all_vertices(g));
    EXPECT_EQ(c.length(), 4u);
    expect_simple_cycle_through(g, c, e, all_edges(g), all_vertices(g));
  }
}

TEST(ExtractCycle, BowTiePicksOwnTriangle) {
  const Graph g = Graph::from_edges(5, {Edge(0, 1), Edge(1, 2), Edge(0, 2), Edge(2, 3), Edge(3, 4), Edge(2, 4)});
  for (const Edge& e : {Edge(0, 1), Edge(0, 2), Edge(1, 2)}) {
    const Cycle c = extract_cycle(g, all_edges(g), e, all_vertices(g));
    const auto edges = c.edges();
    // The only simple cycle through an edge of the first triangle.
    EXPECT_EQ(EdgeSet(edges), (EdgeSet{Edge(0, 1), Edge(1, 2), Edge(0, 2)}));
  }
}

TEST(ExtractCycle, Preconditions) {
  const Graph g = ref::cycle_graph(4);
  const EdgeSet without{Edge(1, 2), Edge(2, 3), Edge(0, 3)};
  try {
    extract_cycle(g, without, Edge(0, 1), all_vertices(g));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoCycle);
  }
  const Graph star = Graph::from_edges(4, {Edge(0, 1), Edge(0, 2), Edge(0, 3)});
  EXPECT_THROW(extract_cycle(star, all_edges(star), Edge(0, 1), all_vertices(star)), Error);
}

TEST(ExtractCycle, PeelingKeepsDegreesEven) {
  const Graph g = build_grid({6, 6}, Topology::kTorus);
  std::vector<Edge> left = g.edges();
  const VertexSet region = all_vertices(g);
  std::size_t removed = 0;
  while (!left.empty()) {
    const EdgeSet avail(left);
    const Cycle c = extract_cycle(g, avail, left.front(), region);
    expect_simple_cycle_through(g, c, left.front(), avail, region);
    const EdgeSet used(c.edges());
    std::vector<Edge> next;
    for (const Edge& e : left) {
      if (!used.contains(e)) next.push_back(e);
    }
    removed += left.size() - next.size();
    EXPECT_EQ(left.size() - next.size(), c.length());
    left = next;
    for (int d : degrees(g, EdgeSet(left))) EXPECT_EQ(d % 2, 0);
  }
  EXPECT_EQ(removed, static_cast<std::size_t>(g.edge_count()));
}

TEST(StitchCycle, ThroughResidualOfCoveringTile) {
  const Graph g = build_grid({12, 12}, Topology::kTorus);
  const Toast t = ref::box_toast(g, {Box{{4, 4}, 3, 1}, Box{{2, 2}, 8, 2}});
  const VertexSet region = t.tiles[1].vertices;
  const VertexSet target = residual(g, t, 1);
  const EdgeSet avail = all_edges(g);
  for (const Edge& e : induced_edges(g, t.tiles[0].vertices)) {
    const Cycle c = stitch_cycle(g, avail, e, region, target);
    expect_simple_cycle_through(g, c, e, avail, region);
  }
}

TEST(StitchCycle, FailsWhenWalksStick) {
  const Graph g = ref::path_graph(4);
  EXPECT_THROW(stitch_cycle(g, all_edges(g), Edge(1, 2), all_vertices(g), VertexSet{3}), Error);
}

TEST(BalancedOrientation, SingleCycle) {
  const Graph g = ref::cycle_graph(7);
  Toast t;
  t.tiles.push_back(Tile{0, 1, all_vertices(g)});
  const Orientation o = balanced_orientation(g, t);
  EXPECT_TRUE(verify_balanced(g, o).passed());
  EXPECT_EQ(ref::directed_cycle_count(g, o), 1);
}

TEST(BalancedOrientation, OddDegreesRejected) {
  const Graph star = Graph::from_edges(4, {Edge(0, 1), Edge(0, 2), Edge(0, 3)});
  Toast t;
  t.tiles.push_back(Tile{0, 1, all_vertices(star)});
  try {
    balanced_orientation(star, t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotEvenDegree);
  }
  const Graph w = build_grid({6, 6}, Topology::kWindow);
  EXPECT_THROW(balanced_orientation(w, ref::box_toast(w, {Box{{0, 0}, 6, 1}})), Error);
}

TEST(BalancedOrientation, RejectsBrokenToast) {
  const Graph g = build_grid({8, 8}, Topology::kTorus);
  const Toast partial = ref::box_toast(g, {Box{{1, 1}, 3, 1}});
  try {
    balanced_orientation(g, partial);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidToast);
  }
}

class OrientTorus : public ::testing::TestWithParam<std::tuple<int, int>> {};

TEST_P(OrientTorus, GeneratedToast) {
  const auto [side, seed] = GetParam();
  const Graph g = build_grid({side, side}, Topology::kTorus);
  GenerateOptions opts;
  opts.seed = static_cast<std::uint64_t>(seed);
  opts.num_levels = side <= 8 ? 1 : 2;
  const auto gen = generate_level_sets(g, opts);
  const Toast t = levels_to_toast(g, fill_levels(g, gen.sets));
  std::vector<OrientationStep> log;
  const Orientation o = balanced_orientation(g, t, &log);
  const Report r = verify_balanced(g, o);
  EXPECT_TRUE(r.passed()) << r.summary();
  // Cycles from the log are edge-disjoint and cover E(G).
  std::vector<int> hits(static_cast<std::size_t>(g.edge_count()), 0);
  for (const auto& step : log) {
    for (const Edge& e : step.cycle.edges()) ++hits[*g.find_edge(e.u, e.v)];
  }
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_GT(ref::directed_cycle_count(g, o), 0);
  std::vector<int> in(static_cast<std::size_t>(g.vertex_count()), 0);
  for (const Arc& a : o.arcs) ++in[a.head];
  for (int x : in) EXPECT_EQ(x, 2);
}

INSTANTIATE_TEST_SUITE_P(Tori, OrientTorus,
                         ::testing::Combine(::testing::Values(8, 16, 24), ::testing::Values(1, 7)));

TEST(BalancedOrientation, ThreeDimensionalTorus) {
  const Graph g = build_grid({8, 8, 8}, Topology::kTorus);
  GenerateOptions opts;
  opts.num_levels = 1;
  const auto gen = generate_level_sets(g, opts);
  const Toast t = levels_to_toast(g, fill_levels(g, gen.sets));
  EXPECT_TRUE(verify_balanced(g, balanced_orientation(g, t)).passed());
}

TEST(VerifyBalanced, Examples) {
  const Graph g = ref::cycle_graph(4);
  Orientation o{{Arc{0, 1}, Arc{1, 2}, Arc{2, 3}, Arc{3, 0}}};
  std::sort(o.arcs.begin(), o.arcs.end(), [](const Arc& a, const Arc& b) {
    return Edge(a.tail, a.head) < Edge(b.tail, b.head);
  });
  EXPECT_TRUE(verify_balanced(g, o).passed());

  Orientation flipped = o;
  flipped.arcs[0] = Arc{flipped.arcs[0].head, flipped.arcs[0].tail};
  const Report r = verify_balanced(g, flipped);
  EXPECT_FALSE(r.passed("balanced"));
  EXPECT_EQ(r.find("balanced")->witness["vertices"].size(), 2u);

  Orientation partial = o;
  partial.arcs.pop_back();
  const Report p = verify_balanced(g, partial);
  EXPECT_FALSE(p.passed("oriented_once"));
  EXPECT_EQ(p.find("oriented_once")->witness["uncovered"].size(), 1u);
}

}  // namespace
}  // namespace toastlab
