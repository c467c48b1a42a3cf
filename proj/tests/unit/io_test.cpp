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

#include <filesystem>

#include "reference.hpp"
#include "toastlab.hpp"

namespace toastlab {
namespace {

template <typename T, typename F>
T via_text(const T& value, F&& read) {
  return read(Json::parse(dump(to_json(value))));
}

void expect_invalid_input(const std::function<void()>& f) {
  try {
    f();
    FAIL() << "no error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput) << e.what();
  }
}

Toast small_toast(const Graph& g) {
  GenerateOptions opts;
  opts.seed = 4;
  const auto gen = generate_level_sets(g, opts);
  return levels_to_toast(g, fill_levels(g, gen.sets));
}

TEST(Io, GraphRoundTrip) {
  for (const Graph& g : {build_grid({5, 7}, Topology::kWindow), build_grid({4, 4, 4}, Topology::kTorus)}) {
    const Graph back = via_text(g, graph_from_json);
    EXPECT_EQ(back.dims(), g.dims());
    EXPECT_EQ(back.topology(), g.topology());
    EXPECT_EQ(back.edges(), g.edges());
  }
  const Graph p = ref::path_graph(5, true);
  const Graph back = via_text(p, graph_from_json);
  EXPECT_EQ(back.edges(), p.edges());
  EXPECT_EQ(back.exterior(), p.exterior());
  EXPECT_EQ(back.topology(), Topology::kExplicit);
}

TEST(Io, ToastAndLevelsRoundTrip) {
  const Graph g = build_grid({32, 32}, Topology::kTorus);
  GenerateOptions opts;
  opts.seed = 4;
  const auto gen = generate_level_sets(g, opts);
  EXPECT_EQ(via_text(gen.sets, levels_from_json), gen.sets);
  const Toast t = levels_to_toast(g, fill_levels(g, gen.sets));
  EXPECT_EQ(via_text(t, toast_from_json), t);

  LevelSets with_domain = gen.sets;
  with_domain.domain = VertexSet{1, 2, 3};
  with_domain.component_bounds.clear();
  EXPECT_EQ(via_text(with_domain, levels_from_json), with_domain);
}

TEST(Io, CertificatesRoundTrip) {
  const Graph w = build_grid({20, 20}, Topology::kWindow);
  const Toast wt = ref::box_toast(w, {ref::Box{{6, 6}, 4, 1}, ref::Box{{3, 3}, 12, 2}});
  const TreeCertificate c = build_tree(w, wt);
  EXPECT_EQ(via_text(c, tree_from_json), c);

  const Graph g = build_grid({16, 16}, Topology::kTorus);
  const Toast t = small_toast(g);
  const Orientation o = balanced_orientation(g, t);
  EXPECT_EQ(via_text(o, orientation_from_json), o);

  const MatchingRun run = run_perfect_matching(g, t, 4);
  EXPECT_EQ(via_text(run.matching, matching_from_json), run.matching);
  const Json fj = Json::parse(dump(to_json(g, run.final_state)));
  EXPECT_EQ(fractional_from_json(g, fj), run.final_state);
  const auto log = circuits_from_json(Json::parse(dump(to_json(run.circuits))));
  ASSERT_EQ(log.size(), run.circuits.size());
  for (std::size_t i = 0; i < log.size(); ++i) {
    EXPECT_EQ(log[i].cycle, run.circuits[i].cycle);
    EXPECT_EQ(log[i].e_prime, run.circuits[i].e_prime);
    EXPECT_EQ(log[i].signs, run.circuits[i].signs);
    EXPECT_EQ(log[i].tile_id, run.circuits[i].tile_id);
  }
  EXPECT_TRUE(verify_circuit_log(g, 4, log).passed());
}

TEST(Io, FractionalFormat) {
  const Graph g = ref::cycle_graph(4);
  const Json j = to_json(g, init_fractional(g, 2));
  EXPECT_EQ(j["d"], 2);
  EXPECT_EQ(j["num"].size(), 4u);
  EXPECT_EQ(j["num"][0].size(), 3u);
  expect_invalid_input([&] { fractional_from_json(g, Json::parse(R"({"d":2,"num":[[0,1,1]]})")); });
  expect_invalid_input([&] { fractional_from_json(g, Json::parse(R"({"d":2,"num":[[0,2,1]]})")); });
}

TEST(Io, IsoFamilyRoundTrip) {
  IsoFamily fam;
  fam.members.push_back(IsoMember{VertexSet{1, 2}, VertexSet{0, 1, 2, 3}});
  const IsoFamily back = via_text(fam, iso_family_from_json);
  ASSERT_EQ(back.members.size(), 1u);
  EXPECT_EQ(back.members[0].inner, fam.members[0].inner);
  EXPECT_EQ(back.members[0].envelope, fam.members[0].envelope);
}

TEST(Io, MalformedDocuments) {
  expect_invalid_input([] { graph_from_json(Json::parse(R"({"dims":[4]})")); });
  expect_invalid_input([] { graph_from_json(Json::parse(R"({"dims":"x","topology":"torus"})")); });
  expect_invalid_input([] { graph_from_json(Json::parse(R"({"dims":[3],"topology":"explicit","edges":[[0]]})")); });
  expect_invalid_input([] { toast_from_json(Json::parse(R"({"tiles":[{"id":0}]})")); });
  expect_invalid_input([] { levels_from_json(Json::parse(R"({"levels":[]})")); });
  expect_invalid_input([] { tree_from_json(Json::parse(R"({"tree_edges":[]})")); });
  expect_invalid_input([] { orientation_from_json(Json::parse(R"([{"tail":0}])")); });
  expect_invalid_input([] { matching_from_json(Json::parse(R"([[0,1,2]])")); });
  expect_invalid_input([] { circuits_from_json(Json::parse(R"([{"cycle":[0,1]}])")); });
  expect_invalid_input([] { vertex_set_from_json(Json::parse(R"(["a"])")); });
}

TEST(Io, Files) {
  const auto dir = std::filesystem::temp_directory_path() / "toastlab_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "g.json").string();
  write_text_file(path, dump(to_json(ref::cycle_graph(5))));
  EXPECT_EQ(graph_from_json(read_json_file(path)).edge_count(), 5);
  try {
    read_json_file((dir / "missing.json").string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
  write_text_file(path, "{not json");
  EXPECT_THROW(read_json_file(path), Error);
  std::filesystem::remove_all(dir);
}

TEST(Io, DotOutput) {
  const Graph g = ref::cycle_graph(4);
  const std::string dot = orientation_to_dot(g, Orientation{{Arc{0, 1}, Arc{1, 2}, Arc{2, 3}, Arc{3, 0}}});
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  EXPECT_NE(dot.find("0 -> 1"), std::string::npos);
}

}  // namespace
}  // namespace toastlab
