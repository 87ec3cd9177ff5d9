#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "podns/mesh.hpp"
#include "podns/space.hpp"
#include "podns/types.hpp"

namespace podns {

struct VtkField {
  std::string name;
  Vector data;               // nodal values, interleaved when components == 2
  int components = 1;        // 1 scalar, 2 vector
  const FeSpace* space = nullptr;  // locates P2 edge dofs in refined exports
};

// Legacy ASCII unstructured-grid writer.  By default P2 fields are emitted
// on the vertex subset; with refine=true each triangle is split into four
// through the edge midpoints, so P2 dofs become vertices (P1 fields get the
// edge average there).
inline void export_vtk(const Mesh& mesh, const std::vector<VtkField>& fields,
                       const std::string& path, bool refine = false) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.precision(17);

  std::vector<Vec2> points(mesh.nodes.begin(), mesh.nodes.end());
  std::vector<std::array<Index, 3>> cells;
  std::map<std::pair<Index, Index>, Index> midpoint;  // edge -> refined point
  if (!refine) {
    cells = mesh.triangles;
  } else {
    auto mid = [&](Index a, Index b) {
      const auto key = detail::sorted_edge(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const Index id = static_cast<Index>(points.size());
      points.push_back(0.5 * (mesh.nodes[a] + mesh.nodes[b]));
      midpoint.emplace(key, id);
      return id;
    };
    for (const auto& t : mesh.triangles) {
      const Index m01 = mid(t[0], t[1]), m12 = mid(t[1], t[2]),
                  m20 = mid(t[2], t[0]);
      cells.push_back({t[0], m01, m20});
      cells.push_back({t[1], m12, m01});
      cells.push_back({t[2], m20, m12});
      cells.push_back({m01, m12, m20});
    }
  }
  const Index n_points = static_cast<Index>(points.size());
  const Index nv = mesh.n_nodes();

  out << "# vtk DataFile Version 3.0\n";
  out << "podns export\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << n_points << " double\n";
  for (const auto& p : points) out << p.x() << " " << p.y() << " 0\n";
  out << "CELLS " << cells.size() << " " << 4 * cells.size() << "\n";
  for (const auto& c : cells)
    out << "3 " << c[0] << " " << c[1] << " " << c[2] << "\n";
  out << "CELL_TYPES " << cells.size() << "\n";
  for (std::size_t i = 0; i < cells.size(); ++i) out << "5\n";

  out << "POINT_DATA " << n_points << "\n";
  std::vector<std::pair<Index, Index>> edge_of_point(n_points, {-1, -1});
  for (const auto& [edge, pt] : midpoint) edge_of_point[pt] = edge;
  for (const auto& field : fields) {
    // scalar dof index carried by each emitted point, -1 for edge average
    std::vector<Index> dof_of_point(n_points, -1);
    const Index n_scalar = field.data.size() / field.components;
    for (Index p = 0; p < std::min(nv, n_scalar); ++p) dof_of_point[p] = p;
    std::map<std::pair<Index, Index>, Index> edge_dof;
    if (refine && field.space && field.space->degree == 2) {
      const auto& sp = *field.space;
      for (Index t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int e = 0; e < 3; ++e)
          edge_dof[detail::sorted_edge(tri[e], tri[(e + 1) % 3])] =
              sp.cell_dofs[t][3 + e];
      }
    }
    for (const auto& [edge, pt] : midpoint) {
      auto it = edge_dof.find(edge);
      if (it != edge_dof.end()) dof_of_point[pt] = it->second;
    }
    auto value = [&](Index pt, int c) -> Real {
      const Index d = dof_of_point[pt];
      if (d >= 0) return field.data[field.components * d + c];
      const auto& [ea, eb] = edge_of_point[pt];
      if (ea >= 0)  // P1 field at a refined midpoint: edge average
        return 0.5 * (field.data[field.components * ea + c] +
                      field.data[field.components * eb + c]);
      return 0.0;
    };
    if (field.components == 2) {
      out << "VECTORS " << field.name << " double\n";
      for (Index p = 0; p < n_points; ++p)
        out << value(p, 0) << " " << value(p, 1) << " 0\n";
    } else {
      out << "SCALARS " << field.name << " double 1\n";
      out << "LOOKUP_TABLE default\n";
      for (Index p = 0; p < n_points; ++p) out << value(p, 0) << "\n";
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace podns
