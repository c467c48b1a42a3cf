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

#ifndef TOASTLAB_IO_HPP_
#define TOASTLAB_IO_HPP_

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "toastlab/error.hpp"
#include "toastlab/folner.hpp"
#include "toastlab/graph.hpp"
#include "toastlab/level_sets.hpp"
#include "toastlab/matching.hpp"
#include "toastlab/oracles.hpp"
#include "toastlab/orientation.hpp"
#include "toastlab/report.hpp"
#include "toastlab/toast.hpp"
#include "toastlab/tree.hpp"

namespace toastlab {

// JSON documents. Readers throw Error(kInvalidInput) on malformed input.

namespace detail {

template <typename F>
auto parse_guard(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& ex) {
    throw Error(ErrorCode::kInvalidInput, std::string("malformed ") + what + ": " + ex.what());
  }
}

inline Json edge_list(const std::vector<Edge>& edges) {
  Json out = Json::array();
  for (const Edge& e : edges) out.push_back(Json::array({e.u, e.v}));
  return out;
}

inline std::vector<Edge> edges_of(const Json& j) {
  std::vector<Edge> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::kInvalidInput, "edge must be [u,v]");
    out.emplace_back(e[0].get<Vertex>(), e[1].get<Vertex>());
  }
  return out;
}

}  // namespace detail

inline Json to_json(const VertexSet& s) { return Json(s.ids()); }

inline VertexSet vertex_set_from_json(const Json& j) {
  return detail::parse_guard("vertex set", [&] { return VertexSet(j.get<std::vector<Vertex>>()); });
}

inline Json to_json(const Graph& g) {
  Json j;
  j["dims"] = g.dims();
  j["topology"] = std::string(topology_name(g.topology()));
  if (!g.is_lattice()) {
    j["edges"] = detail::edge_list(g.edges());
    if (g.has_escape()) j["exterior"] = to_json(g.exterior());
  }
  return j;
}

inline Graph graph_from_json(const Json& j) {
  return detail::parse_guard("graph", [&] {
    const auto dims = j.at("dims").get<std::vector<int>>();
    const Topology t = parse_topology(j.at("topology").get<std::string>());
    if (t != Topology::kExplicit) return Graph::grid(dims, t);
    if (dims.size() != 1) throw Error(ErrorCode::kInvalidInput, "explicit graph needs dims [n]");
    VertexSet exterior;
    if (j.contains("exterior")) exterior = vertex_set_from_json(j.at("exterior"));
    return Graph::from_edges(dims[0], detail::edges_of(j.at("edges")), exterior);
  });
}

inline Json to_json(const Toast& t) {
  Json tiles = Json::array();
  for (const Tile& tile : t.tiles) {
    tiles.push_back(Json{{"id", tile.id}, {"level", tile.level}, {"vertices", to_json(tile.vertices)}});
  }
  return Json{{"tiles", std::move(tiles)},
              {"flags",
               {{"claims_connected", t.flags.claims_connected},
                {"claims_layered", t.flags.claims_layered}}}};
}

inline Toast toast_from_json(const Json& j) {
  return detail::parse_guard("toast", [&] {
    Toast t;
    for (const auto& item : j.at("tiles")) {
      t.tiles.push_back(Tile{item.at("id").get<int>(), item.at("level").get<int>(),
                             vertex_set_from_json(item.at("vertices"))});
    }
    if (j.contains("flags")) {
      const auto& f = j.at("flags");
      t.flags.claims_connected = f.value("claims_connected", false);
      t.flags.claims_layered = f.value("claims_layered", false);
    }
    return t;
  });
}

inline Json to_json(const LevelSets& ls) {
  Json levels = Json::array();
  for (std::size_t n = 0; n < ls.levels.size(); ++n) {
    Json item{{"level", n + 1}};
    if (n < ls.component_bounds.size()) item["component_bound"] = ls.component_bounds[n];
    item["vertices"] = to_json(ls.levels[n]);
    levels.push_back(std::move(item));
  }
  Json j{{"r", ls.r}, {"levels", std::move(levels)}};
  if (ls.domain) j["domain"] = to_json(*ls.domain);
  return j;
}

inline LevelSets levels_from_json(const Json& j) {
  return detail::parse_guard("level sets", [&] {
    LevelSets ls;
    ls.r = j.at("r").get<int>();
    bool bounds = true;
    for (const auto& item : j.at("levels")) {
      ls.levels.push_back(vertex_set_from_json(item.at("vertices")));
      if (item.contains("component_bound")) {
        ls.component_bounds.push_back(item.at("component_bound").get<int>());
      } else {
        bounds = false;
      }
    }
    if (!bounds) ls.component_bounds.clear();
    if (j.contains("domain")) ls.domain = vertex_set_from_json(j.at("domain"));
    return ls;
  });
}

inline Json to_json(const Report& r) { return r.to_json(); }

inline Json to_json(const TreeCertificate& c) {
  Json exits = Json::array();
  for (const auto& [tile, v] : c.exit_vertices) exits.push_back(Json{{"tile", tile}, {"vertex", v}});
  Json orient = Json::array();
  for (const auto& [v, p] : c.escape_orientation) orient.push_back(Json::array({v, p}));
  return Json{{"tree_edges", detail::edge_list(c.tree_edges.edges())},
              {"exit_vertices", std::move(exits)},
              {"exit_edges", detail::edge_list(c.exit_edges.edges())},
              {"escape_orientation", std::move(orient)}};
}

inline TreeCertificate tree_from_json(const Json& j) {
  return detail::parse_guard("tree certificate", [&] {
    TreeCertificate c;
    c.tree_edges = EdgeSet(detail::edges_of(j.at("tree_edges")));
    c.exit_edges = EdgeSet(detail::edges_of(j.at("exit_edges")));
    for (const auto& e : j.at("exit_vertices")) {
      c.exit_vertices[e.at("tile").get<int>()] = e.at("vertex").get<Vertex>();
    }
    for (const auto& e : j.at("escape_orientation")) {
      c.escape_orientation[e.at(0).get<Vertex>()] = e.at(1).get<Vertex>();
    }
    return c;
  });
}

inline Json to_json(const Orientation& o) {
  Json out = Json::array();
  for (const Arc& a : o.arcs) out.push_back(Json{{"tail", a.tail}, {"head", a.head}});
  return out;
}

inline Orientation orientation_from_json(const Json& j) {
  return detail::parse_guard("orientation", [&] {
    Orientation o;
    for (const auto& a : j) o.arcs.push_back(Arc{a.at("tail").get<Vertex>(), a.at("head").get<Vertex>()});
    return o;
  });
}

inline Json to_json(const Graph& g, const FractionalMatching& f) {
  Json num = Json::array();
  for (EdgeId id = 0; id < g.edge_count() && id < static_cast<EdgeId>(f.num.size()); ++id) {
    num.push_back(Json::array({g.edge(id).u, g.edge(id).v, f.num[id]}));
  }
  return Json{{"d", f.d}, {"num", std::move(num)}};
}

inline FractionalMatching fractional_from_json(const Graph& g, const Json& j) {
  return detail::parse_guard("fractional matching", [&] {
    FractionalMatching f;
    f.d = j.at("d").get<int>();
    f.num.assign(static_cast<std::size_t>(g.edge_count()), -1);
    for (const auto& item : j.at("num")) {
      const auto id = g.find_edge(item.at(0).get<Vertex>(), item.at(1).get<Vertex>());
      if (!id) throw Error(ErrorCode::kInvalidInput, "numerator on a non-edge");
      f.num[*id] = item.at(2).get<int>();
    }
    for (int v : f.num) {
      if (v < 0) throw Error(ErrorCode::kInvalidInput, "edge without numerator");
    }
    return f;
  });
}

inline Json to_json(const Matching& m) { return detail::edge_list(m.edges.edges()); }

inline Matching matching_from_json(const Json& j) {
  return detail::parse_guard("matching", [&] { return Matching{EdgeSet(detail::edges_of(j))}; });
}

inline Json to_json(const std::vector<Circuit>& log) {
  Json out = Json::array();
  for (const Circuit& c : log) {
    out.push_back(Json{{"tile", c.tile_id},
                       {"region_depth", c.region_depth},
                       {"cycle", c.cycle.vertices},
                       {"e_prime", Json::array({c.e_prime.u, c.e_prime.v})},
                       {"eps", c.eps},
                       {"signs", c.signs}});
  }
  return out;
}

inline std::vector<Circuit> circuits_from_json(const Json& j) {
  return detail::parse_guard("circuit log", [&] {
    std::vector<Circuit> out;
    for (const auto& item : j) {
      Circuit c;
      c.tile_id = item.value("tile", -1);
      c.region_depth = item.value("region_depth", 0);
      c.cycle.vertices = item.at("cycle").get<std::vector<Vertex>>();
      c.e_prime = Edge(item.at("e_prime").at(0).get<Vertex>(), item.at("e_prime").at(1).get<Vertex>());
      c.eps = item.value("eps", 1);
      if (item.contains("signs")) c.signs = item.at("signs").get<std::vector<int>>();
      out.push_back(std::move(c));
    }
    return out;
  });
}

inline Json to_json(const std::vector<OrientationStep>& log) {
  Json out = Json::array();
  for (const OrientationStep& s : log) {
    out.push_back(Json{{"owner_tile", s.owner_tile},
                       {"region_tile", s.region_tile},
                       {"layer", s.layer},
                       {"method", s.method},
                       {"cycle", s.cycle.vertices}});
  }
  return out;
}

inline Json to_json(const KappaReport& k) {
  return Json{{"d", k.d},
              {"window", k.window},
              {"max_set_size", k.max_set_size},
              {"kappa_max", k.kappa_max},
              {"kappa", k.kappa},
              {"witness_sets_checked", k.witness_sets_checked},
              {"enumerated", k.enumerated},
              {"budget_exceeded", k.budget_exceeded},
              {"center", k.center},
              {"failing_set_at_kappa_minus_1", to_json(k.failing_set_at_kappa_minus_1)},
              {"failing_cells", k.failing_cells}};
}

inline Json to_json(const IsoFamily& fam) {
  Json members = Json::array();
  for (const IsoMember& m : fam.members) {
    members.push_back(Json{{"inner", to_json(m.inner)}, {"envelope", to_json(m.envelope)}});
  }
  return Json{{"members", std::move(members)}};
}

inline IsoFamily iso_family_from_json(const Json& j) {
  return detail::parse_guard("isoperimetric family", [&] {
    IsoFamily fam;
    for (const auto& m : j.at("members")) {
      fam.members.push_back(
          IsoMember{vertex_set_from_json(m.at("inner")), vertex_set_from_json(m.at("envelope"))});
    }
    return fam;
  });
}

// Files.

/// Compact, newline-terminated; byte-stable for identical input.
inline std::string dump(const Json& j) { return j.dump() + "\n"; }

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return detail::parse_guard(path.c_str(), [&] { return Json::parse(buf.str()); });
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidParameter, "cannot write " + path);
  out << text;
}

// DOT export. Lattice vertices of 2-dimensional graphs get pinned positions.

namespace detail {

inline void dot_nodes(std::ostringstream& os, const Graph& g, const VertexSet& vertices) {
  for (Vertex v : vertices) {
    os << "  " << v;
    if (g.is_lattice() && g.dimension() == 2) {
      const auto c = g.coords(v);
      os << " [pos=\"" << c[1] << "," << -c[0] << "!\"]";
    }
    os << ";\n";
  }
}

}  // namespace detail

/// Tree edges solid, exit edges dashed, arrows along the escape orientation.
inline std::string tree_to_dot(const Graph& g, const TreeCertificate& c) {
  std::ostringstream os;
  os << "digraph tree {\n  node [shape=point];\n";
  std::vector<Vertex> touched;
  for (const Edge& e : c.tree_edges) touched.insert(touched.end(), {e.u, e.v});
  for (const Edge& e : c.exit_edges) touched.insert(touched.end(), {e.u, e.v});
  detail::dot_nodes(os, g, VertexSet(std::move(touched)));
  for (const auto& [v, p] : c.escape_orientation) {
    if (p == kExteriorMarker) continue;
    const Edge e(v, p);
    const char* style = c.exit_edges.contains(e) ? "dashed" : "solid";
    os << "  " << v << " -> " << p << " [style=" << style << "];\n";
  }
  os << "}\n";
  return os.str();
}

inline std::string orientation_to_dot(const Graph& g, const Orientation& o) {
  std::ostringstream os;
  os << "digraph orientation {\n  node [shape=point];\n";
  std::vector<Vertex> all(static_cast<std::size_t>(g.vertex_count()));
  for (Vertex v = 0; v < g.vertex_count(); ++v) all[v] = v;
  detail::dot_nodes(os, g, VertexSet(std::move(all)));
  for (const Arc& a : o.arcs) os << "  " << a.tail << " -> " << a.head << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace toastlab

#endif  // TOASTLAB_IO_HPP_
