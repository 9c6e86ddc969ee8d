#include "physdyn/contact.hpp"

#include <cmath>

#include "physdyn/errors.hpp"

namespace physdyn {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

double contact_scale(double height, double speed) {
  return 2.0 * sigmoid(-kContactSharpness * height) *
         sigmoid(-kContactSharpness * speed);
}

std::vector<ContactPointState> contact_state(const RestBody& body,
                                             const Eigen::VectorXd& q,
                                             const Eigen::VectorXd& qd) {
  const FkResult fk = forward_kinematics(body.tree, q);
  std::vector<ContactPointState> states;
  states.reserve(body.contact_point_count());
  for (int part = 0; part < body.tree.part_count; ++part) {
    for (int v : body.contact_vertices[part]) {
      ContactPointState s;
      s.part = part;
      s.vertex = v;
      s.position = fk.world_point(part, body.part_meshes[part].vertices[v]);
      s.velocity =
          point_jacobian(body.tree, fk, part, s.position) * qd;
      s.height = s.position.z();
      s.scale = contact_scale(s.height, s.velocity.norm());
      s.horizontal_basis = Eigen::Vector3d(-kContactHorizontalOffset,
                                           -kContactHorizontalOffset, 0.0);
      s.normal_basis =
          Eigen::Vector3d(0.0, 0.0, s.height - kContactNormalOffset);
      states.push_back(std::move(s));
    }
  }
  return states;
}

ContactBasis contact_basis(const std::vector<ContactPointState>& states) {
  ContactBasis basis;
  basis.point_basis.reserve(states.size());
  for (const ContactPointState& s : states) {
    Eigen::Matrix3d block;
    block.col(0) = -s.horizontal_basis;
    block.col(1) = -s.normal_basis;
    block.col(2) = -s.velocity;
    basis.point_basis.push_back(s.scale * block);
  }
  return basis;
}

Eigen::MatrixXd ContactBasis::dense() const {
  const int n = 3 * point_count();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int p = 0; p < point_count(); ++p) {
    out.block<3, 3>(3 * p, 3 * p) = point_basis[p];
  }
  return out;
}

std::vector<Eigen::Vector3d> contact_forces(const ContactBasis& basis,
                                            const Eigen::VectorXd& x) {
  if (x.size() != 3 * basis.point_count()) {
    throw SchemaError("contact_forces: intensity vector has " +
                      std::to_string(x.size()) + " entries, expected " +
                      std::to_string(3 * basis.point_count()));
  }
  std::vector<Eigen::Vector3d> forces(basis.point_basis.size());
  for (int p = 0; p < basis.point_count(); ++p) {
    forces[p] = basis.point_basis[p] * x.segment<3>(3 * p);
  }
  return forces;
}

Eigen::Vector3d default_param_upper_bounds(double total_mass,
                                           const GravityModel& gravity) {
  const double half_weight = 0.5 * total_mass * gravity.magnitude;
  return {half_weight, half_weight, 200.0};
}

}  // namespace physdyn
