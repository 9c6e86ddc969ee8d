#include "physdyn/dynamics.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <random>

#include "doctest.h"
#include "physdyn/builtin_bodies.hpp"
#include "physdyn/kinematics.hpp"
#include "physdyn/mass_properties.hpp"
#include "test_support.hpp"

using namespace physdyn;

namespace {

Eigen::Vector3d vee(const Eigen::Matrix3d& w) {
  return 0.5 * Eigen::Vector3d(w(2, 1) - w(1, 2), w(0, 2) - w(2, 0),
                               w(1, 0) - w(0, 1));
}

struct PartState {
  Eigen::Vector3d com_velocity;
  Eigen::Vector3d angular_velocity;
};

// Per-part COM and angular velocities by differencing forward kinematics
// along qd; independent of the Jacobian code.
std::vector<PartState> fd_part_velocities(const RestBody& body,
                                          const BodyMassProperties& props,
                                          const Eigen::VectorXd& q,
                                          const Eigen::VectorXd& qd) {
  const double h = 1e-6;
  const FkResult plus = forward_kinematics(body.tree, q + h * qd);
  const FkResult minus = forward_kinematics(body.tree, q - h * qd);
  const FkResult mid = forward_kinematics(body.tree, q);

  std::vector<PartState> states(body.tree.part_count);
  for (int p = 0; p < body.tree.part_count; ++p) {
    const Eigen::Vector3d rest_com = props.parts[p].com;
    states[p].com_velocity =
        (plus.world_point(p, rest_com) - minus.world_point(p, rest_com)) /
        (2.0 * h);
    const Eigen::Matrix3d dr =
        (plus.part_rotation[p] - minus.part_rotation[p]) / (2.0 * h);
    states[p].angular_velocity = vee(dr * mid.part_rotation[p].transpose());
  }
  return states;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("point and angular jacobians match finite differences") {
  const RestBody body = make_box_humanoid();
  std::mt19937 rng(101);
  const double eps = 1e-6;

  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXd q =
        testsupport::random_vector(rng, body.tree.dof_count(), -1.0, 1.0);
    const FkResult fk = forward_kinematics(body.tree, q);

    for (int part : {0, 7, 15, 23}) {
      const Eigen::Vector3d rest_point = body.part_meshes[part].vertices[5];
      const Eigen::Vector3d world = fk.world_point(part, rest_point);

      const Eigen::MatrixXd jac = point_jacobian(body.tree, fk, part, world);
      const Eigen::MatrixXd jac_fd =
          testsupport::fd_point_jacobian(body.tree, q, part, rest_point, eps);
      CHECK((jac - jac_fd).cwiseAbs().maxCoeff() < 1e-6);

      const Eigen::MatrixXd ang = angular_jacobian(body.tree, fk, part);
      const Eigen::MatrixXd ang_fd =
          testsupport::fd_angular_jacobian(body.tree, q, part, eps);
      CHECK((ang - ang_fd).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("point jacobian structure") {
  const RestBody body = make_box_humanoid();
  std::mt19937 rng(57);
  const Eigen::VectorXd q =
      testsupport::random_vector(rng, body.tree.dof_count(), -0.9, 0.9);
  const FkResult fk = forward_kinematics(body.tree, q);

  const int lfoot = 7;
  const Eigen::Vector3d point = fk.world_point(lfoot, {0.1, 0.1, 0.0});
  const Eigen::MatrixXd jac = point_jacobian(body.tree, fk, lfoot, point);

  CHECK(jac.leftCols<3>().isApprox(Eigen::Matrix3d::Identity()));
  // DOFs of parts off the root->l_foot chain contribute nothing.
  for (int part : {2, 3, 5, 16, 21}) {
    const int base = 6 + 3 * (part - 1);
    CHECK(jac.middleCols<3>(base).cwiseAbs().maxCoeff() == 0.0);
  }
  // The chain itself does contribute.
  for (int part : {1, 4}) {
    const int base = 6 + 3 * (part - 1);
    CHECK(jac.middleCols<3>(base).cwiseAbs().maxCoeff() > 1e-3);
  }

  const Eigen::MatrixXd ang = angular_jacobian(body.tree, fk, lfoot);
  CHECK(ang.leftCols<3>().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("contact jacobian stacks the contact point jacobians") {
  const RestBody body = make_box_humanoid();
  std::mt19937 rng(73);
  const Eigen::VectorXd q =
      testsupport::random_vector(rng, body.tree.dof_count(), -0.5, 0.5);
  const FkResult fk = forward_kinematics(body.tree, q);

  const Eigen::MatrixXd jc = contact_jacobian(body, fk);
  REQUIRE(jc.rows() == 3 * body.contact_point_count());
  REQUIRE(jc.cols() == body.tree.dof_count());

  int row = 0;
  for (int part = 0; part < body.tree.part_count; ++part) {
    for (int v : body.contact_vertices[part]) {
      const Eigen::Vector3d world =
          fk.world_point(part, body.part_meshes[part].vertices[v]);
      const Eigen::MatrixXd jac = point_jacobian(body.tree, fk, part, world);
      CHECK((jc.middleRows<3>(row) - jac).cwiseAbs().maxCoeff() < 1e-14);
      row += 3;
    }
  }
}

TEST_CASE("jacobian derivative predicts point acceleration") {
  const RestBody body = make_box_humanoid();
  const MotionSequence motion =
      testsupport::sinusoid_motion(body.tree.dof_count(), 120.0, 0.25, 301);
  const MotionDerivatives d = finite_difference_derivatives(motion);

  const int part = 21;
  const Eigen::Vector3d rest_point = body.part_meshes[part].vertices[0];

  // World positions of the tracked point on every frame.
  std::vector<Eigen::Vector3d> pos(motion.frame_count());
  for (int f = 0; f < motion.frame_count(); ++f) {
    pos[f] = forward_kinematics(body.tree, motion.q.row(f).transpose())
                 .world_point(part, rest_point);
  }

  const double fps = motion.fps;
  for (int f = 2; f + 2 < motion.frame_count(); f += 5) {
    const Eigen::VectorXd q = motion.q.row(f).transpose();
    const Eigen::VectorXd qd = d.qd.row(f).transpose();
    const Eigen::VectorXd qdd = d.qdd.row(f).transpose();

    const FkResult fk = forward_kinematics(body.tree, q);
    const Eigen::MatrixXd jac =
        point_jacobian(body.tree, fk, part, fk.world_point(part, rest_point));
    const Eigen::MatrixXd jdot =
        point_jacobian_dot(body.tree, q, qd, part, rest_point);

    const Eigen::Vector3d vel = jac * qd;
    const Eigen::Vector3d vel_fd = (pos[f + 1] - pos[f - 1]) * fps / 2.0;
    CHECK((vel - vel_fd).norm() < 0.005 * std::max(1.0, vel_fd.norm()));

    const Eigen::Vector3d accel = jdot * qd + jac * qdd;
    const Eigen::Vector3d accel_fd =
        (pos[f + 1] - 2.0 * pos[f] + pos[f - 1]) * fps * fps;
    CHECK((accel - accel_fd).norm() < 0.01 * std::max(1.0, accel_fd.norm()));
  }
}

TEST_CASE("jacobian derivatives vanish at zero velocity") {
  const RestBody body = make_box_humanoid();
  std::mt19937 rng(83);
  const Eigen::VectorXd q =
      testsupport::random_vector(rng, body.tree.dof_count(), -0.5, 0.5);
  const Eigen::VectorXd qd = Eigen::VectorXd::Zero(q.size());

  CHECK(point_jacobian_dot(body.tree, q, qd, 9, {0, 0, 1.4})
            .cwiseAbs()
            .maxCoeff() == 0.0);
  CHECK(angular_jacobian_dot(body.tree, q, qd, 9).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("mass matrix is symmetric positive definite with identity base") {
  const RestBody body = make_box_humanoid(70.0);
  const BodyMassProperties props = body_mass_properties(body);
  std::mt19937 rng(211);

  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXd q =
        testsupport::random_vector(rng, body.tree.dof_count(), -1.2, 1.2);
    const Eigen::MatrixXd m = mass_matrix(body, props, q);

    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() <
          1e-10 * m.cwiseAbs().maxCoeff());
    CHECK((m.topLeftCorner<3, 3>() - 70.0 * Eigen::Matrix3d::Identity())
              .cwiseAbs()
              .maxCoeff() < 1e-10);

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("kinetic energy matches finite-difference part velocities") {
  const RestBody body = make_box_humanoid(70.0);
  const BodyMassProperties props = body_mass_properties(body);
  std::mt19937 rng(307);

  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd q =
        testsupport::random_vector(rng, body.tree.dof_count(), -1.0, 1.0);
    const Eigen::VectorXd qd =
        testsupport::random_vector(rng, body.tree.dof_count(), -2.0, 2.0);

    const Eigen::MatrixXd m = mass_matrix(body, props, q);
    const double ke_matrix = 0.5 * qd.dot(m * qd);

    const FkResult fk = forward_kinematics(body.tree, q);
    double ke_parts = 0.0;
    const auto states = fd_part_velocities(body, props, q, qd);
    for (int p = 0; p < body.tree.part_count; ++p) {
      const Eigen::Matrix3d rot = fk.part_rotation[p];
      const Eigen::Matrix3d inertia_world =
          rot * props.parts[p].inertia * rot.transpose();
      ke_parts += 0.5 * props.parts[p].mass *
                      states[p].com_velocity.squaredNorm() +
                  0.5 * states[p].angular_velocity.dot(
                            inertia_world * states[p].angular_velocity);
    }
    CHECK(ke_matrix ==
          doctest::Approx(ke_parts).epsilon(1e-5));
  }
}

TEST_CASE("gravity vector is the potential gradient") {
  const RestBody body = make_box_humanoid(70.0);
  const BodyMassProperties props = body_mass_properties(body);
  const GravityModel gravity;
  std::mt19937 rng(401);
  const Eigen::VectorXd q =
      testsupport::random_vector(rng, body.tree.dof_count(), -1.0, 1.0);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(q.size());

  const Eigen::VectorXd g = gravity_vector(body, props, q, gravity);

  // Base translation rows carry the whole weight.
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 0.0);
  CHECK(g[2] == doctest::Approx(70.0 * 9.81).epsilon(1e-12));

  const double eps = 1e-6;
  Eigen::VectorXd qp = q;
  for (int i = 0; i < q.size(); ++i) {
    qp[i] = q[i] + eps;
    const double up = total_energy(body, props, qp, zero, gravity);
    qp[i] = q[i] - eps;
    const double um = total_energy(body, props, qp, zero, gravity);
    qp[i] = q[i];
    const double grad = (up - um) / (2.0 * eps);
    CHECK(std::abs(g[i] - grad) < 1e-4 * std::max(1.0, std::abs(grad)));
  }
}

TEST_CASE("double pendulum matches the textbook closed form") {
  const double length = 0.5;
  const double total = 4.0;
  const RestBody chain = make_chain_body(2, length, total);
  const BodyMassProperties props = body_mass_properties(chain);
  const GravityModel gravity;

  const double m1 = total / 2, m2 = total / 2;
  const double c = length / 2;  // joint-to-com distance of each link
  const double w = length / 5;
  const double moment = m1 / 12.0 * (w * w + length * length);

  const double theta1 = 0.6, theta2 = -1.1;
  const double omega1 = 0.7, omega2 = -1.3;

  Eigen::VectorXd q = Eigen::VectorXd::Zero(9);
  Eigen::VectorXd qd = Eigen::VectorXd::Zero(9);
  q[3] = theta1;
  q[6] = theta2;
  qd[3] = omega1;
  qd[6] = omega2;

  const Eigen::MatrixXd m = mass_matrix(chain, props, q);
  const double m11 = m1 * c * c + moment +
                     m2 * (length * length + c * c +
                           2.0 * length * c * std::cos(theta2)) +
                     moment;
  const double m12 = m2 * (c * c + length * c * std::cos(theta2)) + moment;
  const double m22 = m2 * c * c + moment;
  CHECK(m(3, 3) == doctest::Approx(m11).epsilon(1e-12));
  CHECK(m(3, 6) == doctest::Approx(m12).epsilon(1e-12));
  CHECK(m(6, 3) == doctest::Approx(m12).epsilon(1e-12));
  CHECK(m(6, 6) == doctest::Approx(m22).epsilon(1e-12));

  const Eigen::VectorXd bias = bias_force(chain, props, q, qd);
  const double h = m2 * length * c * std::sin(theta2);
  const double c1 = -h * (2.0 * omega1 * omega2 + omega2 * omega2);
  const double c2 = h * omega1 * omega1;
  CHECK(bias[3] == doctest::Approx(c1).epsilon(1e-6));
  CHECK(bias[6] == doctest::Approx(c2).epsilon(1e-6));

  const Eigen::VectorXd g = gravity_vector(chain, props, q, gravity);
  const double g1 = (m1 * c + m2 * length) * 9.81 * std::sin(theta1) +
                    m2 * c * 9.81 * std::sin(theta1 + theta2);
  const double g2 = m2 * c * 9.81 * std::sin(theta1 + theta2);
  CHECK(g[3] == doctest::Approx(g1).epsilon(1e-10));
  CHECK(g[6] == doctest::Approx(g2).epsilon(1e-10));
}

TEST_CASE("ballistic spin conserves total energy") {
  const RestBody body = make_box_body({0.3, 0.2, 0.5}, 2.5, {0, 0, 0});
  const BodyMassProperties props = body_mass_properties(body);
  const GravityModel gravity;

  const double fps = 120.0;
  const Eigen::Vector3d v0(1.2, -0.4, 3.0);
  const double spin = 4.0;

  double reference = 0.0;
  for (int f = 0; f <= 60; ++f) {
    const double t = f / fps;
    Eigen::VectorXd q = Eigen::VectorXd::Zero(6);
    Eigen::VectorXd qd = Eigen::VectorXd::Zero(6);
    q.head<3>() = v0 * t + Eigen::Vector3d(0, 0, 2.0 - 0.5 * 9.81 * t * t);
    q[5] = spin * t;  // constant rate about the z principal axis
    qd.head<3>() = v0 - Eigen::Vector3d(0, 0, 9.81 * t);
    qd[5] = spin;

    const double e = total_energy(body, props, q, qd, gravity);
    if (f == 0) {
      reference = e;
    } else {
      CHECK(e == doctest::Approx(reference).epsilon(1e-9));
    }
  }
}

TEST_CASE("energy rate equals mechanical power along a smooth motion") {
  const RestBody body = make_box_humanoid(70.0);
  const BodyMassProperties props = body_mass_properties(body);
  const GravityModel gravity;

  const MotionSequence motion =
      testsupport::sinusoid_motion(body.tree.dof_count(), 60.0, 1.0, 501);
  const MotionDerivatives d = finite_difference_derivatives(motion);
  const int frames = motion.frame_count();

  std::vector<double> energy(frames);
  for (int f = 0; f < frames; ++f) {
    energy[f] = total_energy(body, props, motion.q.row(f).transpose(),
                             d.qd.row(f).transpose(), gravity);
  }

  double err2 = 0.0, ref2 = 0.0;
  for (int f = 1; f + 1 < frames; f += 2) {
    const Eigen::VectorXd qd = d.qd.row(f).transpose();
    const Eigen::VectorXd lhs =
        el_residual(body, props, motion.q.row(f).transpose(), qd,
                    d.qdd.row(f).transpose(), gravity);
    const double power = qd.dot(lhs);
    const double e_rate = (energy[f + 1] - energy[f - 1]) * motion.fps / 2.0;
    err2 += (power - e_rate) * (power - e_rate);
    ref2 += e_rate * e_rate;
  }
  CHECK(std::sqrt(err2) < 0.01 * std::sqrt(ref2));
}

TEST_CASE("base rows follow the linear momentum derivative") {
  const RestBody body = make_box_humanoid(70.0);
  const BodyMassProperties props = body_mass_properties(body);
  const GravityModel gravity;

  const MotionSequence motion =
      testsupport::sinusoid_motion(body.tree.dof_count(), 60.0, 1.0, 601);
  const MotionDerivatives d = finite_difference_derivatives(motion);
  const int frames = motion.frame_count();

  // Whole-body linear momentum per frame, straight from part COM motion.
  std::vector<Eigen::Vector3d> momentum(frames);
  std::vector<std::vector<Eigen::Vector3d>> coms(frames);
  for (int f = 0; f < frames; ++f) {
    const FkResult fk =
        forward_kinematics(body.tree, motion.q.row(f).transpose());
    coms[f].resize(body.tree.part_count);
    for (int p = 0; p < body.tree.part_count; ++p) {
      coms[f][p] = fk.world_point(p, props.parts[p].com);
    }
  }
  for (int f = 1; f + 1 < frames; ++f) {
    momentum[f].setZero();
    for (int p = 0; p < body.tree.part_count; ++p) {
      momentum[f] += props.parts[p].mass * (coms[f + 1][p] - coms[f - 1][p]) *
                     motion.fps / 2.0;
    }
  }

  double err2 = 0.0, ref2 = 0.0;
  for (int f = 2; f + 2 < frames; f += 2) {
    const Eigen::VectorXd qd = d.qd.row(f).transpose();
    const Eigen::VectorXd qdd = d.qdd.row(f).transpose();
    const Eigen::VectorXd lhs =
        mass_matrix(body, props, motion.q.row(f).transpose()) * qdd +
        bias_force(body, props, motion.q.row(f).transpose(), qd);
    const Eigen::Vector3d dp =
        (momentum[f + 1] - momentum[f - 1]) * motion.fps / 2.0;
    err2 += (lhs.head<3>() - dp).squaredNorm();
    ref2 += dp.squaredNorm();
  }
  CHECK(std::sqrt(err2) < 0.01 * std::sqrt(ref2));
}

TEST_CASE("el_residual composes its three terms") {
  const RestBody body = make_box_humanoid(70.0);
  const BodyMassProperties props = body_mass_properties(body);
  const GravityModel gravity{4.9};
  std::mt19937 rng(701);
  const int n = body.tree.dof_count();
  const Eigen::VectorXd q = testsupport::random_vector(rng, n, -0.7, 0.7);
  const Eigen::VectorXd qd = testsupport::random_vector(rng, n, -1.5, 1.5);
  const Eigen::VectorXd qdd = testsupport::random_vector(rng, n, -4.0, 4.0);

  const Eigen::VectorXd r = el_residual(body, props, q, qd, qdd, gravity);
  const Eigen::VectorXd expected = mass_matrix(body, props, q) * qdd +
                                   bias_force(body, props, q, qd) +
                                   gravity_vector(body, props, q, gravity);
  CHECK((r - expected).cwiseAbs().maxCoeff() < 1e-9);
}

}  // TEST_SUITE
