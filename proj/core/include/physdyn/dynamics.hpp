#pragma once

#include <Eigen/Core>

#include "physdyn/body_model.hpp"
#include "physdyn/kinematics.hpp"
#include "physdyn/mass_properties.hpp"

namespace physdyn {

struct GravityModel {
  double magnitude = 9.81;  // [m/s^2], acting along -z

  Eigen::Vector3d accel() const { return {0.0, 0.0, -magnitude}; }
};

// 3 x dof Jacobian of a world point attached to `part`: translation columns
// for the root, h x (p - pivot) for every ancestor rotation DOF.
Eigen::MatrixXd point_jacobian(const KinematicTree& tree, const FkResult& fk,
                               int part, const Eigen::Vector3d& world_point);

// 3 x dof angular-velocity Jacobian of `part` (rotation axis per ancestor
// rotation DOF, zero translation columns).
Eigen::MatrixXd angular_jacobian(const KinematicTree& tree, const FkResult& fk,
                                 int part);

// Stacked point Jacobians of all contact vertices at the posed contact
// positions, (3 * contact_count) x dof, body contact order.
Eigen::MatrixXd contact_jacobian(const RestBody& body, const FkResult& fk);

// Time derivative of the point Jacobian of a body-attached point (given in
// rest coordinates), by symmetric differencing along qd.
Eigen::MatrixXd point_jacobian_dot(const KinematicTree& tree,
                                   const Eigen::VectorXd& q,
                                   const Eigen::VectorXd& qd, int part,
                                   const Eigen::Vector3d& rest_point);

Eigen::MatrixXd angular_jacobian_dot(const KinematicTree& tree,
                                     const Eigen::VectorXd& q,
                                     const Eigen::VectorXd& qd, int part);

// Joint-space mass matrix: sum over parts of
// m J_S^T J_S + J_R^T (R I R^T) J_R with J_S at the posed part COM.
Eigen::MatrixXd mass_matrix(const RestBody& body,
                            const BodyMassProperties& props,
                            const Eigen::VectorXd& q);

// Generalized gravity term g(q) on the left-hand side of
// M qdd + C + g = J_C^T lambda + tau, i.e. -sum J_S^T m g_accel.
Eigen::VectorXd gravity_vector(const RestBody& body,
                               const BodyMassProperties& props,
                               const Eigen::VectorXd& q,
                               const GravityModel& gravity);

// Velocity-dependent term C(q, qd): Coriolis/centrifugal plus gyroscopic
// torques, projected through the part Jacobians.
Eigen::VectorXd bias_force(const RestBody& body,
                           const BodyMassProperties& props,
                           const Eigen::VectorXd& q, const Eigen::VectorXd& qd);

// Left-hand side M qdd + C + g for one frame.
Eigen::VectorXd el_residual(const RestBody& body,
                            const BodyMassProperties& props,
                            const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                            const Eigen::VectorXd& qdd,
                            const GravityModel& gravity);

// Kinetic plus gravitational potential energy of one state.
double total_energy(const RestBody& body, const BodyMassProperties& props,
                    const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                    const GravityModel& gravity);

}  // namespace physdyn
