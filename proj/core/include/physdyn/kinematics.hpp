#pragma once

#include <Eigen/Core>

#include <array>
#include <filesystem>
#include <vector>

#include "physdyn/body_model.hpp"

namespace physdyn {

// Intrinsic X-Y-Z Euler rotation, R = Rx(a) * Ry(b) * Rz(c).
Eigen::Matrix3d euler_xyz_to_matrix(const Eigen::Vector3d& angles);

// Inverse of euler_xyz_to_matrix. At the gimbal singularity (|R02| = 1) the
// z angle is fixed to 0 and the x angle absorbs the remaining rotation.
Eigen::Vector3d matrix_to_euler_xyz(const Eigen::Matrix3d& rot);

// Rotation vector (axis * angle, radians) conversions.
Eigen::Matrix3d axis_angle_to_matrix(const Eigen::Vector3d& rotvec);
Eigen::Vector3d matrix_to_axis_angle(const Eigen::Matrix3d& rot);

// World pose of every part for one generalized coordinate vector
// q = [root translation, root xyz angles, part 1 xyz angles, ...].
struct FkResult {
  std::vector<Eigen::Matrix3d> part_rotation;   // world rotation per part
  std::vector<Eigen::Vector3d> joint_world;     // posed joint positions
  std::vector<Eigen::Vector3d> joint_rest;      // rest joint positions
  // World direction of each part's three rotation axes at the current pose
  // (x axis of the parent frame, then the y and z axes after the preceding
  // intrinsic rotations).
  std::vector<std::array<Eigen::Vector3d, 3>> rot_axis_world;

  // Rest-world point attached to `part`, mapped to the posed world.
  Eigen::Vector3d world_point(int part, const Eigen::Vector3d& rest) const {
    return part_rotation[part] * (rest - joint_rest[part]) + joint_world[part];
  }
};

FkResult forward_kinematics(const KinematicTree& tree,
                            const Eigen::VectorXd& q);

// Posed world positions of the body's contact vertices, in body order
// (parts ascending, vertex list order within a part).
std::vector<Eigen::Vector3d> contact_point_positions(const RestBody& body,
                                                     const FkResult& fk);

struct MotionSequence {
  double fps = 60.0;
  Eigen::MatrixXd q;  // frame_count x dof_count, row per frame

  int frame_count() const { return static_cast<int>(q.rows()); }
  int dof_count() const { return static_cast<int>(q.cols()); }
};

// Motion JSON: {"fps", "rotation_format": "euler"|"axis_angle", "frames":
// [{"root_translation": [3], "rotations": [part_count x 3]}, ...]}.
// Axis-angle triples are converted to intrinsic X-Y-Z angles on load.
MotionSequence load_motion(const std::filesystem::path& path, int part_count);
void save_motion(const MotionSequence& motion,
                 const std::filesystem::path& path);

// Removes 2*pi jumps between consecutive frames, column by column, for all
// angle DOFs. Root translation columns are untouched.
void unwrap_angles(MotionSequence& motion);

struct MotionDerivatives {
  Eigen::MatrixXd qd;   // [units/s]
  Eigen::MatrixXd qdd;  // [units/s^2]
  // True where one-sided stencils were used (first and last frame).
  std::vector<bool> one_sided;
};

// Central differences inside, second-order one-sided stencils at the two
// ends (exact for quadratic trajectories). Needs at least 3 frames; throws
// SchemaError otherwise.
MotionDerivatives finite_difference_derivatives(const MotionSequence& motion);

}  // namespace physdyn
