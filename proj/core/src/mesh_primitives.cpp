#include "physdyn/mesh_primitives.hpp"

#include <Eigen/Geometry>

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>

namespace physdyn {

namespace {

void add_quad(PartMesh& mesh, int a, int b, int c, int d) {
  mesh.triangles.push_back({a, b, c});
  mesh.triangles.push_back({a, c, d});
}

}  // namespace

PartMesh make_box(const Eigen::Vector3d& center, const Eigen::Vector3d& size) {
  PartMesh mesh;
  const Eigen::Vector3d h = 0.5 * size;
  mesh.vertices.reserve(8);
  for (int i = 0; i < 8; ++i) {
    mesh.vertices.emplace_back(center.x() + ((i & 1) ? h.x() : -h.x()),
                               center.y() + ((i & 2) ? h.y() : -h.y()),
                               center.z() + ((i & 4) ? h.z() : -h.z()));
  }
  add_quad(mesh, 0, 2, 3, 1);  // z-
  add_quad(mesh, 4, 5, 7, 6);  // z+
  add_quad(mesh, 0, 1, 5, 4);  // y-
  add_quad(mesh, 2, 6, 7, 3);  // y+
  add_quad(mesh, 0, 4, 6, 2);  // x-
  add_quad(mesh, 1, 3, 7, 5);  // x+
  return mesh;
}

PartMesh make_tetrahedron(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                          const Eigen::Vector3d& p2,
                          const Eigen::Vector3d& p3) {
  PartMesh mesh;
  mesh.vertices = {p0, p1, p2, p3};
  const double det = (p1 - p0).cross(p2 - p0).dot(p3 - p0);
  if (det < 0.0) std::swap(mesh.vertices[2], mesh.vertices[3]);
  mesh.triangles = {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}};
  return mesh;
}

PartMesh make_icosphere(double radius, const Eigen::Vector3d& center,
                        int subdivisions) {
  const double t = 0.5 * (1.0 + std::sqrt(5.0));
  std::vector<Eigen::Vector3d> verts = {
      {-1, t, 0},  {1, t, 0},  {-1, -t, 0}, {1, -t, 0},
      {0, -1, t},  {0, 1, t},  {0, -1, -t}, {0, 1, -t},
      {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (auto& v : verts) v.normalize();

  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      verts.push_back((verts[a] + verts[b]).normalized());
      const int idx = static_cast<int>(verts.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> refined;
    refined.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int ab = mid(f[0], f[1]);
      const int bc = mid(f[1], f[2]);
      const int ca = mid(f[2], f[0]);
      refined.push_back({f[0], ab, ca});
      refined.push_back({f[1], bc, ab});
      refined.push_back({f[2], ca, bc});
      refined.push_back({ab, bc, ca});
    }
    faces = std::move(refined);
  }

  PartMesh mesh;
  mesh.vertices.reserve(verts.size());
  for (const auto& v : verts) mesh.vertices.push_back(center + radius * v);
  mesh.triangles = std::move(faces);
  return mesh;
}

PartMesh make_cylinder_wall(double radius, double height, int segments,
                            const Eigen::Vector3d& base_center) {
  PartMesh mesh;
  mesh.vertices.reserve(2 * segments);
  for (int k = 0; k < segments; ++k) {
    const double a = 2.0 * M_PI * k / segments;
    mesh.vertices.emplace_back(base_center.x() + radius * std::cos(a),
                               base_center.y() + radius * std::sin(a),
                               base_center.z());
  }
  for (int k = 0; k < segments; ++k) {
    mesh.vertices.emplace_back(mesh.vertices[k].x(), mesh.vertices[k].y(),
                               base_center.z() + height);
  }
  for (int k = 0; k < segments; ++k) {
    const int k1 = (k + 1) % segments;
    add_quad(mesh, k, k1, segments + k1, segments + k);
  }
  return mesh;
}

PartMesh make_square_patch() {
  PartMesh mesh;
  mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  mesh.triangles = {{0, 1, 2}, {0, 2, 3}};
  return mesh;
}

}  // namespace physdyn
