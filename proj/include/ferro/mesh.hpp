// Conforming simplicial 2-D meshes with globally oriented edges: built-in
// structured generators plus a minimal text reader. Boundary facets carry
// string tags consumed by the boundary-condition layer.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace ferro {

struct Mesh {
  int dim = 2;
  Eigen::MatrixXd vertices;  // nv x dim, meters
  std::vector<std::array<int, 3>> tris;

  struct BoundaryFacet {
    std::array<int, 2> v;
    std::string tag;
  };
  std::vector<BoundaryFacet> boundary;

  // Derived topology (build_topology). Edges are globally oriented by
  // ascending vertex index; the edge normal is the right-hand normal of the
  // direction a -> b, shared by both adjacent elements.
  struct Edge {
    int a = -1, b = -1;     // a < b
    int elem[2] = {-1, -1};
  };
  std::vector<Edge> edges;
  std::vector<std::array<int, 3>> tri_edges;  // local edge k opposite vertex k
  std::vector<int> boundary_edge;             // facet index -> edge index

  int num_vertices() const { return static_cast<int>(vertices.rows()); }
  int num_elements() const { return static_cast<int>(tris.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  /// Element area (positive; build_topology reorders inverted elements).
  double area(int e) const;
  double edge_length(int ei) const;
  /// Unit normal of the globally oriented edge.
  Eigen::Vector2d edge_normal(int ei) const;
  Eigen::Vector2d centroid(int e) const;

  /// Builds edge tables, checks orientation consistency and positive areas.
  void build_topology();
};

/// Structured triangulation of [x0, x0+lx] x [y0, y0+ly] with nx x ny cells,
/// each split along the same diagonal. Boundary facets are tagged
/// left/right/bottom/top.
Mesh make_rect_mesh(double lx, double ly, int nx, int ny, double x0 = 0.0,
                    double y0 = 0.0);

/// Single reference-like triangle (0,0), (l,0), (0,l); facets tagged
/// bottom/hypotenuse/left.
Mesh make_single_triangle(double l);

/// Text format: line 1 "dim nv ne nbf"; nv coordinate lines; ne connectivity
/// lines (0-based); nbf lines "v0 v1 tag" with tag in {fix, trac, el, ins}.
Mesh read_mesh(const std::string& path);
Mesh parse_mesh(std::istream& in);

}  // namespace ferro
