#pragma once

#include <array>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "podns/types.hpp"

namespace podns {

// Triangulated 2D domain with tagged boundary facets.  Triangles are kept
// positively oriented; every boundary facet must coincide with an edge of
// exactly one triangle, and the facets cover the whole boundary.
struct Mesh {
  struct Facet {
    std::array<Index, 2> nodes;
    int tag = 0;
  };

  std::vector<Vec2> nodes;
  std::vector<std::array<Index, 3>> triangles;
  std::vector<Facet> boundary_facets;

  // facet -> adjacent triangle and its local edge (0:(0,1) 1:(1,2) 2:(2,0))
  std::vector<Index> facet_cell;
  std::vector<int> facet_local_edge;

  Index n_nodes() const { return static_cast<Index>(nodes.size()); }
  Index n_triangles() const { return static_cast<Index>(triangles.size()); }
  Index n_facets() const { return static_cast<Index>(boundary_facets.size()); }

  Real signed_area(Index t) const {
    const auto& tri = triangles[t];
    const Vec2 a = nodes[tri[0]], b = nodes[tri[1]], c = nodes[tri[2]];
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) -
                  (c.x() - a.x()) * (b.y() - a.y()));
  }

  std::set<int> boundary_tags() const {
    std::set<int> tags;
    for (const auto& f : boundary_facets) tags.insert(f.tag);
    return tags;
  }

  // Outward normal of a boundary facet with respect to the fluid domain.
  Vec2 facet_normal(Index f) const {
    const auto& fc = boundary_facets[f];
    const Vec2 a = nodes[fc.nodes[0]], b = nodes[fc.nodes[1]];
    Vec2 n(b.y() - a.y(), a.x() - b.x());
    n.normalize();
    const auto& tri = triangles[facet_cell[f]];
    Vec2 centroid = (nodes[tri[0]] + nodes[tri[1]] + nodes[tri[2]]) / 3.0;
    if (n.dot(0.5 * (a + b) - centroid) < 0) n = -n;
    return n;
  }

  Real facet_length(Index f) const {
    const auto& fc = boundary_facets[f];
    return (nodes[fc.nodes[1]] - nodes[fc.nodes[0]]).norm();
  }
};

namespace detail {
inline std::pair<Index, Index> sorted_edge(Index a, Index b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}
}  // namespace detail

// Fixes orientation, builds facet adjacency, and checks the topology
// invariants.  Call after filling nodes/triangles/boundary_facets.
inline void finalize_mesh(Mesh& mesh) {
  const Index nv = mesh.n_nodes();
  for (auto& tri : mesh.triangles)
    for (Index v : tri)
      if (v < 0 || v >= nv) throw TopologyError("triangle node out of range");

  for (Index t = 0; t < mesh.n_triangles(); ++t)
    if (mesh.signed_area(t) <= 0.0)
      std::swap(mesh.triangles[t][1], mesh.triangles[t][2]);

  // edge -> adjacent triangles
  std::map<std::pair<Index, Index>, std::vector<std::pair<Index, int>>> edges;
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int e = 0; e < 3; ++e)
      edges[detail::sorted_edge(tri[e], tri[(e + 1) % 3])].push_back({t, e});
  }

  mesh.facet_cell.assign(mesh.boundary_facets.size(), -1);
  mesh.facet_local_edge.assign(mesh.boundary_facets.size(), -1);
  std::set<std::pair<Index, Index>> covered;
  for (Index f = 0; f < mesh.n_facets(); ++f) {
    const auto& fc = mesh.boundary_facets[f];
    if (fc.nodes[0] < 0 || fc.nodes[0] >= nv || fc.nodes[1] < 0 ||
        fc.nodes[1] >= nv)
      throw TopologyError("facet node out of range");
    const auto key = detail::sorted_edge(fc.nodes[0], fc.nodes[1]);
    auto it = edges.find(key);
    if (it == edges.end())
      throw TopologyError("boundary facet is not an edge of the mesh");
    if (it->second.size() != 1)
      throw TopologyError("boundary facet matches an interior edge");
    if (!covered.insert(key).second)
      throw TopologyError("duplicate boundary facet");
    mesh.facet_cell[f] = it->second[0].first;
    mesh.facet_local_edge[f] = it->second[0].second;
  }
  for (const auto& [key, adj] : edges)
    if (adj.size() == 1 && covered.find(key) == covered.end())
      throw TopologyError("boundary edge without a facet");
}

inline Index count_edges(const Mesh& mesh) {
  std::set<std::pair<Index, Index>> edges;
  for (const auto& tri : mesh.triangles)
    for (int e = 0; e < 3; ++e)
      edges.insert(detail::sorted_edge(tri[e], tri[(e + 1) % 3]));
  return static_cast<Index>(edges.size());
}

// ASCII format:
//   nodes <nv> triangles <nt> facets <nf>
//   nv lines "x y", nt lines "i j k" (0-based), nf lines "i j tag"
inline Mesh read_mesh(std::istream& in) {
  Mesh mesh;
  std::string kw_nodes, kw_tris, kw_facets;
  Index nv = 0, nt = 0, nf = 0;
  if (!(in >> kw_nodes >> nv >> kw_tris >> nt >> kw_facets >> nf) ||
      kw_nodes != "nodes" || kw_tris != "triangles" || kw_facets != "facets")
    throw ParseError("mesh header must read 'nodes N triangles N facets N'");
  if (nv < 3 || nt < 1) throw ParseError("mesh must have nodes and triangles");
  mesh.nodes.resize(nv);
  for (Index i = 0; i < nv; ++i)
    if (!(in >> mesh.nodes[i].x() >> mesh.nodes[i].y()))
      throw ParseError("malformed node line " + std::to_string(i));
  mesh.triangles.resize(nt);
  for (Index i = 0; i < nt; ++i)
    if (!(in >> mesh.triangles[i][0] >> mesh.triangles[i][1] >>
          mesh.triangles[i][2]))
      throw ParseError("malformed triangle line " + std::to_string(i));
  mesh.boundary_facets.resize(nf);
  for (Index i = 0; i < nf; ++i) {
    auto& f = mesh.boundary_facets[i];
    if (!(in >> f.nodes[0] >> f.nodes[1] >> f.tag))
      throw ParseError("malformed facet line " + std::to_string(i));
  }
  finalize_mesh(mesh);
  return mesh;
}

inline Mesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file: " + path);
  return read_mesh(in);
}

inline void write_mesh(const Mesh& mesh, std::ostream& out) {
  out.precision(17);
  out << "nodes " << mesh.n_nodes() << " triangles " << mesh.n_triangles()
      << " facets " << mesh.n_facets() << "\n";
  for (const auto& p : mesh.nodes) out << p.x() << " " << p.y() << "\n";
  for (const auto& t : mesh.triangles)
    out << t[0] << " " << t[1] << " " << t[2] << "\n";
  for (const auto& f : mesh.boundary_facets)
    out << f.nodes[0] << " " << f.nodes[1] << " " << f.tag << "\n";
}

inline void write_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_mesh(mesh, out);
}

}  // namespace podns
