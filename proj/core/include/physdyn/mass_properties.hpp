#pragma once

#include <Eigen/Core>

#include "physdyn/body_model.hpp"

namespace physdyn {

struct VolumeCom {
  double volume = 0.0;      // [m^3]
  Eigen::Vector3d com = Eigen::Vector3d::Zero();
};

// Signed volume and centroid of a closed mesh, computed from the tetrahedra
// spanned by each triangle and the origin. Requires a watertight mesh with
// outward winding; throws GeometryError otherwise.
VolumeCom part_volume_com(const PartMesh& mesh);

// Inertia tensor about the mesh centroid, world axes, assuming the given
// mass is spread uniformly over the enclosed volume.
Eigen::Matrix3d part_inertia_about_com(const PartMesh& mesh, double mass);

struct PartMassProperties {
  int part_id = 0;
  double volume = 0.0;   // [m^3]
  double mass = 0.0;     // [kg]
  Eigen::Vector3d com = Eigen::Vector3d::Zero();      // rest world [m]
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();  // about com [kg m^2]
};

struct BodyMassProperties {
  std::vector<PartMassProperties> parts;
  double total_volume = 0.0;
  double total_mass = 0.0;
  Eigen::Vector3d com = Eigen::Vector3d::Zero();  // whole-body rest COM
};

// Per-part masses come from the body's mass config: either
// total_kg * fraction, or density * density_scale * volume summed into the
// total. Throws GeometryError naming the first part whose mesh is not
// watertight or has non-positive volume.
BodyMassProperties body_mass_properties(const RestBody& body);

}  // namespace physdyn
