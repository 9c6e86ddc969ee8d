#pragma once

#include <Eigen/Core>

#include <vector>

#include "physdyn/body_model.hpp"
#include "physdyn/dynamics.hpp"
#include "physdyn/kinematics.hpp"

namespace physdyn {

// Soft contact model on the ground plane z = 0. Forces at a contact point
// are spanned by three non-negative intensities x = (k_h, k_n, c):
//   lambda = s * (-k_h * b_h - k_n * b_n - c * v)
// with b_h = (-0.5, -0.5, 0), b_n = (0, 0, d - 2), d the point height, v its
// world velocity, and s the activation below. The constants are part of the
// model, not tunables.
inline constexpr double kContactSharpness = 60.0;
inline constexpr double kContactHorizontalOffset = 0.5;
inline constexpr double kContactNormalOffset = 2.0;

// Activation s = 2 sigmoid(-60 d) sigmoid(-60 |v|), in (0, 1).
// s = 0.5 exactly for a resting point on the ground (d = 0, |v| = 0).
double contact_scale(double height, double speed);

struct ContactPointState {
  int part = 0;
  int vertex = 0;  // index into the part's mesh
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  double height = 0.0;
  double scale = 0.0;
  // Basis directions of the force law; constant horizontal direction on the
  // flat ground, normal lever shrinking with height.
  Eigen::Vector3d horizontal_basis = Eigen::Vector3d::Zero();  // b_h
  Eigen::Vector3d normal_basis = Eigen::Vector3d::Zero();      // b_n
};

// Posed position, velocity and activation of every contact vertex, in body
// contact order.
std::vector<ContactPointState> contact_state(const RestBody& body,
                                             const Eigen::VectorXd& q,
                                             const Eigen::VectorXd& qd);

// Per-point force basis A_p = s * [-b_h, -b_n, -v] (3x3, columns scale
// k_h, k_n, c).
struct ContactBasis {
  std::vector<Eigen::Matrix3d> point_basis;

  int point_count() const { return static_cast<int>(point_basis.size()); }
  // Block-diagonal (3n x 3n) matrix mapping stacked intensities to stacked
  // forces.
  Eigen::MatrixXd dense() const;
};

ContactBasis contact_basis(const std::vector<ContactPointState>& states);

// Per-point forces lambda_p = A_p x_p from stacked intensities.
std::vector<Eigen::Vector3d> contact_forces(const ContactBasis& basis,
                                            const Eigen::VectorXd& x);

// Default intensity caps (k_h, k_n, c): weight/2, weight/2, 200.
Eigen::Vector3d default_param_upper_bounds(double total_mass,
                                           const GravityModel& gravity);

}  // namespace physdyn
