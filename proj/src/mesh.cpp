#include "ferro/mesh.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace ferro {

double Mesh::area(int e) const {
  const auto& t = tris[e];
  const Eigen::Vector2d a = vertices.row(t[0]);
  const Eigen::Vector2d b = vertices.row(t[1]);
  const Eigen::Vector2d c = vertices.row(t[2]);
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) -
                (b.y() - a.y()) * (c.x() - a.x()));
}

double Mesh::edge_length(int ei) const {
  const Edge& e = edges[ei];
  return (vertices.row(e.b) - vertices.row(e.a)).norm();
}

Eigen::Vector2d Mesh::edge_normal(int ei) const {
  const Edge& e = edges[ei];
  const Eigen::Vector2d t =
      (vertices.row(e.b) - vertices.row(e.a)).normalized();
  return {t.y(), -t.x()};
}

Eigen::Vector2d Mesh::centroid(int e) const {
  const auto& t = tris[e];
  return (vertices.row(t[0]) + vertices.row(t[1]) + vertices.row(t[2])) / 3.0;
}

void Mesh::build_topology() {
  if (dim != 2) throw std::invalid_argument("only 2-D meshes are supported");
  // enforce positive orientation
  for (std::size_t e = 0; e < tris.size(); ++e) {
    if (area(static_cast<int>(e)) < 0.0) std::swap(tris[e][1], tris[e][2]);
    if (!(area(static_cast<int>(e)) > 0.0))
      throw std::invalid_argument("degenerate element " + std::to_string(e));
  }

  edges.clear();
  tri_edges.assign(tris.size(), {-1, -1, -1});
  std::map<std::pair<int, int>, int> index;
  for (std::size_t e = 0; e < tris.size(); ++e) {
    for (int k = 0; k < 3; ++k) {
      int a = tris[e][(k + 1) % 3];
      int b = tris[e][(k + 2) % 3];
      if (a > b) std::swap(a, b);
      auto [it, inserted] = index.try_emplace({a, b}, num_edges());
      if (inserted) {
        Edge ed;
        ed.a = a;
        ed.b = b;
        edges.push_back(ed);
      }
      Edge& ed = edges[it->second];
      if (ed.elem[0] < 0)
        ed.elem[0] = static_cast<int>(e);
      else if (ed.elem[1] < 0)
        ed.elem[1] = static_cast<int>(e);
      else
        throw std::invalid_argument("non-conforming mesh: edge shared by >2 elements");
      tri_edges[e][k] = it->second;
    }
  }

  boundary_edge.assign(boundary.size(), -1);
  for (std::size_t f = 0; f < boundary.size(); ++f) {
    int a = boundary[f].v[0];
    int b = boundary[f].v[1];
    if (a > b) std::swap(a, b);
    auto it = index.find({a, b});
    if (it == index.end())
      throw std::invalid_argument("boundary facet " + std::to_string(f) +
                                  " is not a mesh edge");
    if (edges[it->second].elem[1] >= 0)
      throw std::invalid_argument("boundary facet " + std::to_string(f) +
                                  " is an interior edge");
    boundary_edge[f] = it->second;
  }
}

Mesh make_rect_mesh(double lx, double ly, int nx, int ny, double x0, double y0) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("grid size must be >= 1");
  Mesh m;
  m.vertices.resize((nx + 1) * (ny + 1), 2);
  auto vid = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      m.vertices(vid(i, j), 0) = x0 + lx * i / nx;
      m.vertices(vid(i, j), 1) = y0 + ly * j / ny;
    }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      m.tris.push_back({v00, v10, v11});
      m.tris.push_back({v00, v11, v01});
    }
  for (int i = 0; i < nx; ++i) {
    m.boundary.push_back({{vid(i, 0), vid(i + 1, 0)}, "bottom"});
    m.boundary.push_back({{vid(i, ny), vid(i + 1, ny)}, "top"});
  }
  for (int j = 0; j < ny; ++j) {
    m.boundary.push_back({{vid(0, j), vid(0, j + 1)}, "left"});
    m.boundary.push_back({{vid(nx, j), vid(nx, j + 1)}, "right"});
  }
  m.build_topology();
  return m;
}

Mesh make_single_triangle(double l) {
  Mesh m;
  m.vertices.resize(3, 2);
  m.vertices << 0.0, 0.0, l, 0.0, 0.0, l;
  m.tris.push_back({0, 1, 2});
  m.boundary.push_back({{0, 1}, "bottom"});
  m.boundary.push_back({{1, 2}, "hypotenuse"});
  m.boundary.push_back({{2, 0}, "left"});
  m.build_topology();
  return m;
}

Mesh parse_mesh(std::istream& in) {
  Mesh m;
  std::string line;
  int lineno = 0;
  auto next_line = [&](std::istringstream& ss) {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      ss.clear();
      ss.str(line);
      return;
    }
    throw std::runtime_error("mesh file truncated at line " +
                             std::to_string(lineno));
  };

  std::istringstream ss;
  next_line(ss);
  int dim, nv, ne, nbf;
  if (!(ss >> dim >> nv >> ne >> nbf) || dim != 2)
    throw std::runtime_error("bad mesh header at line " + std::to_string(lineno));
  m.dim = dim;
  m.vertices.resize(nv, 2);
  for (int i = 0; i < nv; ++i) {
    next_line(ss);
    if (!(ss >> m.vertices(i, 0) >> m.vertices(i, 1)))
      throw std::runtime_error("bad vertex at line " + std::to_string(lineno));
  }
  for (int e = 0; e < ne; ++e) {
    next_line(ss);
    std::array<int, 3> t{};
    if (!(ss >> t[0] >> t[1] >> t[2]))
      throw std::runtime_error("bad element at line " + std::to_string(lineno));
    for (int v : t)
      if (v < 0 || v >= nv)
        throw std::runtime_error("vertex index out of range at line " +
                                 std::to_string(lineno));
    m.tris.push_back(t);
  }
  for (int f = 0; f < nbf; ++f) {
    next_line(ss);
    Mesh::BoundaryFacet bf;
    if (!(ss >> bf.v[0] >> bf.v[1] >> bf.tag))
      throw std::runtime_error("bad boundary facet at line " +
                               std::to_string(lineno));
    if (bf.tag != "fix" && bf.tag != "trac" && bf.tag != "el" && bf.tag != "ins")
      throw std::runtime_error("unknown boundary tag '" + bf.tag +
                               "' at line " + std::to_string(lineno));
    m.boundary.push_back(bf);
  }
  m.build_topology();
  return m;
}

Mesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file: " + path);
  return parse_mesh(in);
}

}  // namespace ferro
