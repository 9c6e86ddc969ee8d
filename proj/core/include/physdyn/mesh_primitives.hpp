#pragma once

#include <Eigen/Core>

#include "physdyn/body_model.hpp"

namespace physdyn {

// Procedural test and building-block meshes. All closed shapes are watertight
// with outward winding (signed volume > 0).

PartMesh make_box(const Eigen::Vector3d& center, const Eigen::Vector3d& size);

// Tetrahedron; faces are wound outward regardless of the input handedness.
PartMesh make_tetrahedron(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                          const Eigen::Vector3d& p2, const Eigen::Vector3d& p3);

// Subdivided icosahedron projected onto a sphere. subdivisions = 3 gives
// 1280 triangles.
PartMesh make_icosphere(double radius, const Eigen::Vector3d& center,
                        int subdivisions);

// Open side wall of a cylinder (no caps, two boundary rims).
PartMesh make_cylinder_wall(double radius, double height, int segments,
                            const Eigen::Vector3d& base_center);

// Open unit square in the z = 0 plane (one 4-edge boundary loop).
PartMesh make_square_patch();

}  // namespace physdyn
