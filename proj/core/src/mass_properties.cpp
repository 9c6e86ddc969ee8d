#include "physdyn/mass_properties.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <string>

#include "physdyn/errors.hpp"

namespace physdyn {

namespace {

void require_solid(const PartMesh& mesh, double volume) {
  if (!is_watertight(mesh)) {
    throw GeometryError("part " + std::to_string(mesh.part_id) +
                        ": mesh is not watertight");
  }
  if (!(volume > 0.0)) {
    throw GeometryError("part " + std::to_string(mesh.part_id) +
                        ": non-positive enclosed volume " +
                        std::to_string(volume));
  }
}

VolumeCom volume_com_unchecked(const PartMesh& mesh) {
  double volume = 0.0;
  Eigen::Vector3d moment = Eigen::Vector3d::Zero();
  for (const auto& tri : mesh.triangles) {
    const Eigen::Vector3d& a = mesh.vertices[tri[0]];
    const Eigen::Vector3d& b = mesh.vertices[tri[1]];
    const Eigen::Vector3d& c = mesh.vertices[tri[2]];
    const double v = a.cross(b).dot(c) / 6.0;  // tet (origin, a, b, c)
    volume += v;
    moment += v * (a + b + c) / 4.0;  // tet centroid, origin term is zero
  }
  VolumeCom out;
  out.volume = volume;
  out.com = volume != 0.0 ? Eigen::Vector3d(moment / volume)
                          : Eigen::Vector3d::Zero();
  return out;
}

// Second moments S_ij = integral of x_i x_j over the enclosed volume, about
// the origin. Per-tet quadrature: (v/20) (a a^T + b b^T + c c^T + s s^T)
// with s = a + b + c, exact for the linear map onto each tet.
Eigen::Matrix3d second_moments(const PartMesh& mesh) {
  Eigen::Matrix3d s2 = Eigen::Matrix3d::Zero();
  for (const auto& tri : mesh.triangles) {
    const Eigen::Vector3d& a = mesh.vertices[tri[0]];
    const Eigen::Vector3d& b = mesh.vertices[tri[1]];
    const Eigen::Vector3d& c = mesh.vertices[tri[2]];
    const double v = a.cross(b).dot(c) / 6.0;
    const Eigen::Vector3d s = a + b + c;
    s2 += (v / 20.0) * (a * a.transpose() + b * b.transpose() +
                        c * c.transpose() + s * s.transpose());
  }
  return s2;
}

}  // namespace

VolumeCom part_volume_com(const PartMesh& mesh) {
  VolumeCom out = volume_com_unchecked(mesh);
  require_solid(mesh, out.volume);
  return out;
}

Eigen::Matrix3d part_inertia_about_com(const PartMesh& mesh, double mass) {
  const VolumeCom vc = volume_com_unchecked(mesh);
  require_solid(mesh, vc.volume);
  Eigen::Matrix3d s2 = second_moments(mesh);
  s2 -= vc.volume * vc.com * vc.com.transpose();  // shift to centroid
  const double density = mass / vc.volume;
  return density *
         (s2.trace() * Eigen::Matrix3d::Identity() - s2);
}

BodyMassProperties body_mass_properties(const RestBody& body) {
  BodyMassProperties out;
  const MassConfig& cfg = body.mass_config;
  double mass_sum = 0.0;
  for (int i = 0; i < body.tree.part_count; ++i) {
    const PartMesh& mesh = body.part_meshes[i];
    PartMassProperties p;
    p.part_id = i;
    const VolumeCom vc = volume_com_unchecked(mesh);
    require_solid(mesh, vc.volume);
    p.volume = vc.volume;
    p.com = vc.com;
    if (cfg.mode == MassMode::kFractionTable) {
      p.mass = cfg.total_kg * cfg.fractions[i];
    } else {
      const double scale =
          cfg.density_scale.empty() ? 1.0 : cfg.density_scale[i];
      p.mass = cfg.density_kg_m3 * scale * p.volume;
    }
    p.inertia = part_inertia_about_com(mesh, p.mass);
    out.total_volume += p.volume;
    mass_sum += p.mass;
    out.com += p.mass * p.com;
    out.parts.push_back(std::move(p));
  }
  out.com /= mass_sum;
  // In fraction mode the fractions sum to 1 by construction; report the
  // configured total rather than its roundtrip through the per-part sum.
  out.total_mass =
      cfg.mode == MassMode::kFractionTable ? cfg.total_kg : mass_sum;
  return out;
}

}  // namespace physdyn
