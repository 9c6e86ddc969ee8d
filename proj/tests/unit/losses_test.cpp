#include <Eigen/Core>

#include "doctest.h"
#include "physdyn/builtin_bodies.hpp"
#include "physdyn/errors.hpp"
#include "physdyn/force_solver.hpp"
#include "physdyn/metrics.hpp"
#include "test_support.hpp"

using namespace physdyn;

namespace {

MotionSequence zero_motion(int dof, int frames, double fps = 30.0) {
  MotionSequence motion;
  motion.fps = fps;
  motion.q = Eigen::MatrixXd::Zero(frames, dof);
  return motion;
}

FrameForces zero_forces(int points, int dof) {
  FrameForces f;
  f.x = Eigen::VectorXd::Zero(3 * points);
  f.lambda.assign(points, Eigen::Vector3d::Zero());
  f.tau = Eigen::VectorXd::Zero(dof);
  return f;
}

}  // namespace

TEST_SUITE("losses") {

TEST_CASE("reconstruction loss vanishes for identical motions") {
  const RestBody body = make_box_humanoid();
  const MotionSequence gt =
      testsupport::sinusoid_motion(body.tree.dof_count(), 30.0, 0.3, 55, 0.3);
  CHECK(reconstruction_loss(body, gt, gt) == 0.0);
}

TEST_CASE("reconstruction loss weighs coordinates and joint positions") {
  const RestBody body = make_box_body({0.2, 0.2, 0.2}, 1.0, {0, 0, 1.0});
  const MotionSequence gt = zero_motion(6, 1);

  // A root translation moves both q and the single joint by delta.
  MotionSequence pred = gt;
  const double delta = 0.01;
  pred.q(0, 0) = delta;
  const LossWeights w;
  CHECK(reconstruction_loss(body, pred, gt) ==
        doctest::Approx((w.gamma_q + w.gamma_j) * delta * delta)
            .epsilon(1e-12));

  // A root rotation spins the box about its own joint: q moves, J does not.
  MotionSequence spun = gt;
  spun.q(0, 3) = 0.1;
  CHECK(reconstruction_loss(body, spun, gt) ==
        doctest::Approx(w.gamma_q * 0.01).epsilon(1e-12));

  // Frames accumulate by summation.
  MotionSequence pred2 = zero_motion(6, 2);
  pred2.q(0, 0) = delta;
  pred2.q(1, 0) = delta;
  const MotionSequence gt2 = zero_motion(6, 2);
  CHECK(reconstruction_loss(body, pred2, gt2) ==
        doctest::Approx(2.0 * (w.gamma_q + w.gamma_j) * delta * delta)
            .epsilon(1e-12));

  CHECK_THROWS_AS(reconstruction_loss(body, pred, gt2), SchemaError);
}

TEST_CASE("force loss is a weighted l1 over tau and lambda") {
  const int points = 2, dof = 9;
  std::vector<FrameForces> pred(2, zero_forces(points, dof));
  std::vector<FrameForces> labels = pred;

  pred[0].tau[4] = 1.5;
  labels[0].tau[7] = -0.5;           // |tau - tau_label|_1 = 2.0
  pred[0].lambda[1] = {1.0, 0, 0};
  labels[0].lambda[1] = {0, -2.0, 0}; // l1 difference 3.0

  const LossWeights w;
  const double expected = w.gamma_tau * 2.0 + w.gamma_lambda * 3.0;
  CHECK(force_loss(pred, labels) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(force_loss(labels, pred) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(force_loss(labels, labels) == 0.0);

  labels.pop_back();
  CHECK_THROWS_AS(force_loss(pred, labels), SchemaError);
}

TEST_CASE("contact sets threshold the label forces") {
  SequenceForces forces;
  forces.frames.assign(1, zero_forces(3, 6));
  forces.frames[0].lambda[1] = {0, 0, 1e-15};  // below default threshold
  forces.frames[0].lambda[2] = {0, 1e-3, 0};

  const auto sets = contact_sets_from_forces(forces);
  REQUIRE(sets.size() == 1);
  CHECK(sets[0] == std::vector<int>{2});

  const auto looser = contact_sets_from_forces(forces, 1e-16);
  CHECK(looser[0] == std::vector<int>{1, 2});
}

TEST_CASE("contact loss penalizes height and velocity of active points") {
  const RestBody body = make_box_body({0.2, 0.2, 0.2}, 1.0, {0, 0, 0.1}, true);
  const LossWeights w;

  // Static single frame hovering 1 cm up: only the height term fires.
  MotionSequence hover = zero_motion(6, 1);
  hover.q(0, 2) = 0.01;
  CHECK(contact_loss(body, hover, {{0}}) ==
        doctest::Approx(w.gamma_z * 0.01).epsilon(1e-12));
  // Per-frame contribution is the mean over the active points.
  CHECK(contact_loss(body, hover, {{0, 1, 2, 3}}) ==
        doctest::Approx(w.gamma_z * 0.01).epsilon(1e-12));
  // Empty contact set: nothing to penalize.
  CHECK(contact_loss(body, hover, {{}}) == 0.0);

  // Sliding on the ground: only the velocity term fires.
  MotionSequence slide = zero_motion(6, 2, 50.0);
  slide.q(1, 0) = 0.01;  // 0.5 m/s along x
  const double speed = 0.01 * 50.0;
  CHECK(contact_loss(body, slide, {{0}, {0}}) ==
        doctest::Approx(2.0 * w.gamma_v * speed).epsilon(1e-10));

  CHECK_THROWS_AS(contact_loss(body, hover, {{7}}), SchemaError);
  CHECK_THROWS_AS(contact_loss(body, hover, {{0}, {0}}), SchemaError);
}

TEST_CASE("euler-lagrange loss closes on solver output") {
  const RestBody body = make_box_humanoid(70.0);
  const MotionSequence motion = zero_motion(body.tree.dof_count(), 5);
  const SequenceForces forces = solve_sequence(body, motion, {}, {});
  const double loss = euler_lagrange_loss(body, motion, forces.frames, {});
  CHECK(loss < 1e-6);
}

TEST_CASE("euler-lagrange loss sees unexplained gravity") {
  const RestBody body = make_box_body({0.3, 0.2, 0.4}, 5.0, {0, 0, 1.0}, true);
  const int frames = 5;
  const MotionSequence motion = zero_motion(6, frames);
  const std::vector<FrameForces> labels(frames, zero_forces(4, 6));

  // Static box, no forces plugged in: the residual is exactly the gravity
  // term, |r|_1 = m g per frame.
  const double loss = euler_lagrange_loss(body, motion, labels, {});
  CHECK(loss == doctest::Approx(frames * 5.0 * 9.81).epsilon(1e-9));

  std::vector<FrameForces> wrong_points(frames, zero_forces(3, 6));
  CHECK_THROWS_AS(euler_lagrange_loss(body, motion, wrong_points, {}),
                  SchemaError);
  std::vector<FrameForces> wrong_tau(frames, zero_forces(4, 9));
  CHECK_THROWS_AS(euler_lagrange_loss(body, motion, wrong_tau, {}),
                  SchemaError);
  CHECK_THROWS_AS(
      euler_lagrange_loss(body, motion, {labels.begin(), labels.end() - 1},
                          {}),
      SchemaError);
}

TEST_CASE("total loss is the plain sum") {
  CHECK(total_loss(1.0, 2.5, 0.25, 10.0) == 13.75);
  CHECK(total_loss(0, 0, 0, 0) == 0.0);
}

}  // TEST_SUITE
