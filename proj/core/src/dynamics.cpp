#include "physdyn/dynamics.hpp"

#include <Eigen/Geometry>

#include <vector>

namespace physdyn {

namespace {

// mask[p] is true when p lies on the chain root -> part (inclusive).
std::vector<char> chain_mask(const KinematicTree& tree, int part) {
  std::vector<char> mask(tree.part_count, 0);
  for (int p = part; p != kNoParent; p = tree.parent[p]) mask[p] = 1;
  return mask;
}

int rot_dof_base(int part) { return part == 0 ? 3 : 6 + 3 * (part - 1); }

// Step size for symmetric differencing along qd; returns 0 when qd is zero.
double directional_step(const Eigen::VectorXd& q, const Eigen::VectorXd& qd) {
  const double scale = qd.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return 1e-6 * (1.0 + q.cwiseAbs().maxCoeff()) / scale;
}

}  // namespace

Eigen::MatrixXd point_jacobian(const KinematicTree& tree, const FkResult& fk,
                               int part, const Eigen::Vector3d& world_point) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(3, tree.dof_count());
  jac.block<3, 3>(0, 0).setIdentity();
  const std::vector<char> mask = chain_mask(tree, part);
  for (int p = 0; p < tree.part_count; ++p) {
    if (!mask[p]) continue;
    const Eigen::Vector3d arm = world_point - fk.joint_world[p];
    const int base = rot_dof_base(p);
    for (int axis = 0; axis < 3; ++axis) {
      jac.col(base + axis) = fk.rot_axis_world[p][axis].cross(arm);
    }
  }
  return jac;
}

Eigen::MatrixXd angular_jacobian(const KinematicTree& tree, const FkResult& fk,
                                 int part) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(3, tree.dof_count());
  const std::vector<char> mask = chain_mask(tree, part);
  for (int p = 0; p < tree.part_count; ++p) {
    if (!mask[p]) continue;
    const int base = rot_dof_base(p);
    for (int axis = 0; axis < 3; ++axis) {
      jac.col(base + axis) = fk.rot_axis_world[p][axis];
    }
  }
  return jac;
}

Eigen::MatrixXd contact_jacobian(const RestBody& body, const FkResult& fk) {
  Eigen::MatrixXd jac =
      Eigen::MatrixXd::Zero(3 * body.contact_point_count(),
                            body.tree.dof_count());
  int row = 0;
  for (int part = 0; part < body.tree.part_count; ++part) {
    for (int v : body.contact_vertices[part]) {
      const Eigen::Vector3d point =
          fk.world_point(part, body.part_meshes[part].vertices[v]);
      jac.middleRows<3>(row) = point_jacobian(body.tree, fk, part, point);
      row += 3;
    }
  }
  return jac;
}

Eigen::MatrixXd point_jacobian_dot(const KinematicTree& tree,
                                   const Eigen::VectorXd& q,
                                   const Eigen::VectorXd& qd, int part,
                                   const Eigen::Vector3d& rest_point) {
  const double h = directional_step(q, qd);
  if (h == 0.0) return Eigen::MatrixXd::Zero(3, tree.dof_count());
  const FkResult plus = forward_kinematics(tree, q + h * qd);
  const FkResult minus = forward_kinematics(tree, q - h * qd);
  const Eigen::MatrixXd jac_plus =
      point_jacobian(tree, plus, part, plus.world_point(part, rest_point));
  const Eigen::MatrixXd jac_minus =
      point_jacobian(tree, minus, part, minus.world_point(part, rest_point));
  return (jac_plus - jac_minus) / (2.0 * h);
}

Eigen::MatrixXd angular_jacobian_dot(const KinematicTree& tree,
                                     const Eigen::VectorXd& q,
                                     const Eigen::VectorXd& qd, int part) {
  const double h = directional_step(q, qd);
  if (h == 0.0) return Eigen::MatrixXd::Zero(3, tree.dof_count());
  const FkResult plus = forward_kinematics(tree, q + h * qd);
  const FkResult minus = forward_kinematics(tree, q - h * qd);
  return (angular_jacobian(tree, plus, part) -
          angular_jacobian(tree, minus, part)) /
         (2.0 * h);
}

Eigen::MatrixXd mass_matrix(const RestBody& body,
                            const BodyMassProperties& props,
                            const Eigen::VectorXd& q) {
  const FkResult fk = forward_kinematics(body.tree, q);
  const int n = body.tree.dof_count();
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
  for (int p = 0; p < body.tree.part_count; ++p) {
    const PartMassProperties& part = props.parts[p];
    const Eigen::MatrixXd jac_s = point_jacobian(
        body.tree, fk, p, fk.world_point(p, part.com));
    const Eigen::MatrixXd jac_r = angular_jacobian(body.tree, fk, p);
    const Eigen::Matrix3d& rot = fk.part_rotation[p];
    const Eigen::Matrix3d inertia_world =
        rot * part.inertia * rot.transpose();
    mass.noalias() += part.mass * jac_s.transpose() * jac_s;
    mass.noalias() += jac_r.transpose() * inertia_world * jac_r;
  }
  return mass;
}

Eigen::VectorXd gravity_vector(const RestBody& body,
                               const BodyMassProperties& props,
                               const Eigen::VectorXd& q,
                               const GravityModel& gravity) {
  const FkResult fk = forward_kinematics(body.tree, q);
  Eigen::VectorXd grav = Eigen::VectorXd::Zero(body.tree.dof_count());
  const Eigen::Vector3d accel = gravity.accel();
  for (int p = 0; p < body.tree.part_count; ++p) {
    const PartMassProperties& part = props.parts[p];
    const Eigen::MatrixXd jac_s = point_jacobian(
        body.tree, fk, p, fk.world_point(p, part.com));
    grav.noalias() -= jac_s.transpose() * (part.mass * accel);
  }
  return grav;
}

Eigen::VectorXd bias_force(const RestBody& body,
                           const BodyMassProperties& props,
                           const Eigen::VectorXd& q,
                           const Eigen::VectorXd& qd) {
  const int n = body.tree.dof_count();
  Eigen::VectorXd bias = Eigen::VectorXd::Zero(n);
  const double h = directional_step(q, qd);
  if (h == 0.0) return bias;

  const FkResult fk = forward_kinematics(body.tree, q);
  const FkResult plus = forward_kinematics(body.tree, q + h * qd);
  const FkResult minus = forward_kinematics(body.tree, q - h * qd);

  for (int p = 0; p < body.tree.part_count; ++p) {
    const PartMassProperties& part = props.parts[p];
    const Eigen::Vector3d com_rest = part.com;

    const Eigen::MatrixXd jac_s =
        point_jacobian(body.tree, fk, p, fk.world_point(p, com_rest));
    const Eigen::MatrixXd jac_r = angular_jacobian(body.tree, fk, p);
    const Eigen::Vector3d vel_dot_s =
        ((point_jacobian(body.tree, plus, p, plus.world_point(p, com_rest)) -
          point_jacobian(body.tree, minus, p,
                         minus.world_point(p, com_rest))) /
         (2.0 * h)) *
        qd;
    const Eigen::Vector3d vel_dot_r =
        ((angular_jacobian(body.tree, plus, p) -
          angular_jacobian(body.tree, minus, p)) /
         (2.0 * h)) *
        qd;

    const Eigen::Matrix3d& rot = fk.part_rotation[p];
    const Eigen::Matrix3d inertia_world =
        rot * part.inertia * rot.transpose();
    const Eigen::Vector3d omega = jac_r * qd;
    bias.noalias() += jac_s.transpose() * (part.mass * vel_dot_s);
    bias.noalias() += jac_r.transpose() *
                      (inertia_world * vel_dot_r +
                       omega.cross(inertia_world * omega));
  }
  return bias;
}

Eigen::VectorXd el_residual(const RestBody& body,
                            const BodyMassProperties& props,
                            const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                            const Eigen::VectorXd& qdd,
                            const GravityModel& gravity) {
  return mass_matrix(body, props, q) * qdd + bias_force(body, props, q, qd) +
         gravity_vector(body, props, q, gravity);
}

double total_energy(const RestBody& body, const BodyMassProperties& props,
                    const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                    const GravityModel& gravity) {
  const FkResult fk = forward_kinematics(body.tree, q);
  double energy = 0.0;
  const Eigen::Vector3d accel = gravity.accel();
  for (int p = 0; p < body.tree.part_count; ++p) {
    const PartMassProperties& part = props.parts[p];
    const Eigen::Vector3d com_world = fk.world_point(p, part.com);
    const Eigen::MatrixXd jac_s = point_jacobian(body.tree, fk, p, com_world);
    const Eigen::MatrixXd jac_r = angular_jacobian(body.tree, fk, p);
    const Eigen::Vector3d vel = jac_s * qd;
    const Eigen::Vector3d omega = jac_r * qd;
    const Eigen::Matrix3d& rot = fk.part_rotation[p];
    const Eigen::Matrix3d inertia_world =
        rot * part.inertia * rot.transpose();
    energy += 0.5 * part.mass * vel.squaredNorm();
    energy += 0.5 * omega.dot(inertia_world * omega);
    energy -= part.mass * accel.dot(com_world);
  }
  return energy;
}

}  // namespace physdyn
