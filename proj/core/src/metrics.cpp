#include "physdyn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "physdyn/contact.hpp"
#include "physdyn/errors.hpp"
#include "physdyn/mass_properties.hpp"

namespace physdyn {

namespace {

constexpr double kMm = 1000.0;

void check_dof(const RestBody& body, const MotionSequence& motion,
               const char* what) {
  if (motion.dof_count() != body.tree.dof_count()) {
    throw SchemaError(std::string(what) + " has " +
                      std::to_string(motion.dof_count()) +
                      " DOFs, body needs " +
                      std::to_string(body.tree.dof_count()));
  }
}

std::vector<FkResult> pose_frames(const KinematicTree& tree,
                                  const Eigen::MatrixXd& q) {
  std::vector<FkResult> out;
  out.reserve(q.rows());
  for (int t = 0; t < q.rows(); ++t) {
    out.push_back(forward_kinematics(tree, q.row(t).transpose()));
  }
  return out;
}

// Velocities for loss evaluation; tolerates short sequences unlike
// finite_difference_derivatives.
Eigen::MatrixXd sequence_velocities(const MotionSequence& motion) {
  const int frames = motion.frame_count();
  if (frames == 1) return Eigen::MatrixXd::Zero(1, motion.dof_count());
  if (frames == 2) {
    Eigen::MatrixXd qd(2, motion.dof_count());
    qd.row(0) = (motion.q.row(1) - motion.q.row(0)) * motion.fps;
    qd.row(1) = qd.row(0);
    return qd;
  }
  return finite_difference_derivatives(motion).qd;
}

// Monotone-chain convex hull, counter-clockwise, collinear points dropped.
std::vector<Eigen::Vector2d> convex_hull(std::vector<Eigen::Vector2d> pts) {
  std::sort(pts.begin(), pts.end(),
            [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
              return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
            });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
                          return a.x() == b.x() && a.y() == b.y();
                        }),
            pts.end());
  const int n = static_cast<int>(pts.size());
  if (n < 3) return pts;
  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a,
                  const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) -
           (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<Eigen::Vector2d> hull(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (int i = n - 2, lower = k + 1; i >= 0; --i) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

bool inside_convex(const std::vector<Eigen::Vector2d>& hull,
                   const Eigen::Vector2d& p) {
  if (hull.size() < 3) return false;
  for (size_t i = 0; i < hull.size(); ++i) {
    const Eigen::Vector2d& a = hull[i];
    const Eigen::Vector2d& b = hull[(i + 1) % hull.size()];
    const double cross =
        (b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x());
    if (cross < -1e-12) return false;
  }
  return true;
}

}  // namespace

MetricReport plausibility_metrics(const RestBody& body,
                                  const MotionSequence& pred,
                                  const MotionSequence* gt,
                                  const MetricSelection& selection) {
  check_dof(body, pred, "prediction");
  if ((selection.accl || selection.vel) && gt == nullptr) {
    throw SchemaError(
        "plausibility_metrics: accl and vel need a ground-truth sequence");
  }
  if (gt != nullptr) {
    check_dof(body, *gt, "ground truth");
    if (gt->frame_count() != pred.frame_count()) {
      throw SchemaError("plausibility_metrics: prediction has " +
                        std::to_string(pred.frame_count()) +
                        " frames, ground truth " +
                        std::to_string(gt->frame_count()));
    }
  }

  const int frames = pred.frame_count();
  const int joints = body.tree.part_count;
  const std::vector<FkResult> fk = pose_frames(body.tree, pred.q);
  MetricReport report;

  if (selection.accl && frames >= 3) {
    const std::vector<FkResult> fk_gt = pose_frames(body.tree, gt->q);
    double sum = 0.0;
    for (int t = 1; t + 1 < frames; ++t) {
      double frame_sum = 0.0;
      for (int j = 0; j < joints; ++j) {
        const Eigen::Vector3d acc_pred = fk[t + 1].joint_world[j] -
                                         2.0 * fk[t].joint_world[j] +
                                         fk[t - 1].joint_world[j];
        const Eigen::Vector3d acc_gt = fk_gt[t + 1].joint_world[j] -
                                       2.0 * fk_gt[t].joint_world[j] +
                                       fk_gt[t - 1].joint_world[j];
        frame_sum += (acc_pred - acc_gt).norm() * kMm;
      }
      report.accl_per_frame.push_back(frame_sum / joints);
      sum += frame_sum;
    }
    report.accl = sum / (joints * (frames - 2));
  } else if (selection.accl) {
    report.accl = 0.0;
  }

  if (selection.vel && frames >= 2) {
    const std::vector<FkResult> fk_gt = pose_frames(body.tree, gt->q);
    double sum = 0.0;
    for (int t = 0; t + 1 < frames; ++t) {
      double frame_sum = 0.0;
      for (int j = 0; j < joints; ++j) {
        const double speed_pred =
            (fk[t + 1].joint_world[j] - fk[t].joint_world[j]).norm();
        const double speed_gt =
            (fk_gt[t + 1].joint_world[j] - fk_gt[t].joint_world[j]).norm();
        frame_sum += std::abs(speed_pred - speed_gt) * kMm;
      }
      report.vel_per_frame.push_back(frame_sum / joints);
      sum += frame_sum;
    }
    report.vel = sum / (joints * (frames - 1));
  } else if (selection.vel) {
    report.vel = 0.0;
  }

  if (selection.fs) {
    std::vector<std::vector<Eigen::Vector3d>> contacts;
    contacts.reserve(frames);
    for (int t = 0; t < frames; ++t) {
      contacts.push_back(contact_point_positions(body, fk[t]));
    }
    double sum = 0.0;
    long events = 0;
    for (int t = 0; t + 1 < frames; ++t) {
      double frame_sum = 0.0;
      long frame_events = 0;
      for (size_t i = 0; i < contacts[t].size(); ++i) {
        if (contacts[t][i].z() < kContactHeightThreshold &&
            contacts[t + 1][i].z() < kContactHeightThreshold) {
          frame_sum +=
              (contacts[t + 1][i] - contacts[t][i]).head<2>().norm() * kMm;
          ++frame_events;
        }
      }
      report.fs_per_frame.push_back(
          frame_events > 0 ? frame_sum / frame_events : 0.0);
      sum += frame_sum;
      events += frame_events;
    }
    report.fs = events > 0 ? sum / events : 0.0;
  }

  if (selection.gp) {
    double sum = 0.0;
    long events = 0;
    for (int t = 0; t < frames; ++t) {
      double frame_sum = 0.0;
      long frame_events = 0;
      for (int p = 0; p < body.tree.part_count; ++p) {
        for (const Eigen::Vector3d& v : body.part_meshes[p].vertices) {
          const double z = fk[t].world_point(p, v).z();
          if (z < 0.0) {
            frame_sum += -z * kMm;
            ++frame_events;
          }
        }
      }
      report.gp_per_frame.push_back(
          frame_events > 0 ? frame_sum / frame_events : 0.0);
      sum += frame_sum;
      events += frame_events;
    }
    report.gp = events > 0 ? sum / events : 0.0;
  }

  if (selection.bos) {
    const BodyMassProperties props = body_mass_properties(body);
    int inside_count = 0;
    for (int t = 0; t < frames; ++t) {
      Eigen::Vector3d com = Eigen::Vector3d::Zero();
      for (int p = 0; p < body.tree.part_count; ++p) {
        com += props.parts[p].mass *
               fk[t].world_point(p, props.parts[p].com);
      }
      com /= props.total_mass;

      std::vector<Eigen::Vector2d> support;
      for (const Eigen::Vector3d& c : contact_point_positions(body, fk[t])) {
        if (c.z() < kContactHeightThreshold) support.push_back(c.head<2>());
      }
      const bool inside =
          inside_convex(convex_hull(std::move(support)), com.head<2>());
      report.bos_per_frame.push_back(inside ? 1 : 0);
      if (inside) ++inside_count;
    }
    report.bos = 100.0 * inside_count / frames;
  }

  return report;
}

double reconstruction_loss(const RestBody& body, const MotionSequence& pred,
                           const MotionSequence& gt,
                           const LossWeights& weights) {
  check_dof(body, pred, "prediction");
  check_dof(body, gt, "ground truth");
  if (pred.frame_count() != gt.frame_count()) {
    throw SchemaError("reconstruction_loss: frame count mismatch (" +
                      std::to_string(pred.frame_count()) + " vs " +
                      std::to_string(gt.frame_count()) + ")");
  }
  double loss = 0.0;
  for (int t = 0; t < pred.frame_count(); ++t) {
    const FkResult fk_pred =
        forward_kinematics(body.tree, pred.q.row(t).transpose());
    const FkResult fk_gt =
        forward_kinematics(body.tree, gt.q.row(t).transpose());
    double joint_sq = 0.0;
    for (int j = 0; j < body.tree.part_count; ++j) {
      joint_sq +=
          (fk_pred.joint_world[j] - fk_gt.joint_world[j]).squaredNorm();
    }
    loss += weights.gamma_q * (pred.q.row(t) - gt.q.row(t)).squaredNorm() +
            weights.gamma_j * joint_sq;
  }
  return loss;
}

double force_loss(const std::vector<FrameForces>& pred,
                  const std::vector<FrameForces>& labels,
                  const LossWeights& weights) {
  if (pred.size() != labels.size()) {
    throw SchemaError("force_loss: frame count mismatch (" +
                      std::to_string(pred.size()) + " vs " +
                      std::to_string(labels.size()) + ")");
  }
  double loss = 0.0;
  for (size_t t = 0; t < pred.size(); ++t) {
    if (pred[t].lambda.size() != labels[t].lambda.size() ||
        pred[t].tau.size() != labels[t].tau.size()) {
      throw SchemaError("force_loss: shape mismatch at frame " +
                        std::to_string(t));
    }
    double lambda_l1 = 0.0;
    for (size_t p = 0; p < pred[t].lambda.size(); ++p) {
      lambda_l1 += (pred[t].lambda[p] - labels[t].lambda[p]).lpNorm<1>();
    }
    loss += weights.gamma_tau * (pred[t].tau - labels[t].tau).lpNorm<1>() +
            weights.gamma_lambda * lambda_l1;
  }
  return loss;
}

std::vector<std::vector<int>> contact_sets_from_forces(
    const SequenceForces& forces, double threshold) {
  std::vector<std::vector<int>> sets;
  sets.reserve(forces.frames.size());
  for (const FrameForces& frame : forces.frames) {
    std::vector<int> active;
    for (size_t p = 0; p < frame.lambda.size(); ++p) {
      if (frame.lambda[p].norm() > threshold) {
        active.push_back(static_cast<int>(p));
      }
    }
    sets.push_back(std::move(active));
  }
  return sets;
}

double contact_loss(const RestBody& body, const MotionSequence& motion,
                    const std::vector<std::vector<int>>& contact_sets,
                    const LossWeights& weights) {
  check_dof(body, motion, "motion");
  if (static_cast<int>(contact_sets.size()) != motion.frame_count()) {
    throw SchemaError("contact_loss: " +
                      std::to_string(contact_sets.size()) +
                      " contact sets for " +
                      std::to_string(motion.frame_count()) + " frames");
  }
  MotionSequence unwrapped = motion;
  unwrap_angles(unwrapped);
  const Eigen::MatrixXd qd = sequence_velocities(unwrapped);
  const int point_count = body.contact_point_count();

  double loss = 0.0;
  for (int t = 0; t < unwrapped.frame_count(); ++t) {
    if (contact_sets[t].empty()) continue;
    const std::vector<ContactPointState> states = contact_state(
        body, unwrapped.q.row(t).transpose(), qd.row(t).transpose());
    double frame_sum = 0.0;
    for (int idx : contact_sets[t]) {
      if (idx < 0 || idx >= point_count) {
        throw SchemaError("contact_loss: contact point index " +
                          std::to_string(idx) + " out of range at frame " +
                          std::to_string(t));
      }
      frame_sum += weights.gamma_v * states[idx].velocity.lpNorm<1>() +
                   weights.gamma_z * std::abs(states[idx].position.z());
    }
    loss += frame_sum / contact_sets[t].size();
  }
  return loss;
}

double euler_lagrange_loss(const RestBody& body, const MotionSequence& motion,
                           const std::vector<FrameForces>& labels,
                           const GravityModel& gravity) {
  check_dof(body, motion, "motion");
  if (static_cast<int>(labels.size()) != motion.frame_count()) {
    throw SchemaError("euler_lagrange_loss: " + std::to_string(labels.size()) +
                      " force frames for " +
                      std::to_string(motion.frame_count()) + " motion frames");
  }
  MotionSequence unwrapped = motion;
  unwrap_angles(unwrapped);
  const MotionDerivatives deriv = finite_difference_derivatives(unwrapped);
  const BodyMassProperties props = body_mass_properties(body);
  const int point_count = body.contact_point_count();

  double loss = 0.0;
  for (int t = 0; t < unwrapped.frame_count(); ++t) {
    if (static_cast<int>(labels[t].lambda.size()) != point_count) {
      throw SchemaError("euler_lagrange_loss: frame " + std::to_string(t) +
                        " has " + std::to_string(labels[t].lambda.size()) +
                        " forces for " + std::to_string(point_count) +
                        " contact points");
    }
    const Eigen::VectorXd q = unwrapped.q.row(t).transpose();
    const Eigen::VectorXd r =
        el_residual(body, props, q, deriv.qd.row(t).transpose(),
                    deriv.qdd.row(t).transpose(), gravity);
    if (labels[t].tau.size() != r.size()) {
      throw SchemaError("euler_lagrange_loss: tau size mismatch at frame " +
                        std::to_string(t));
    }
    const FkResult fk = forward_kinematics(body.tree, q);
    const Eigen::MatrixXd jc = contact_jacobian(body, fk);
    Eigen::VectorXd lambda_stack(3 * point_count);
    for (int p = 0; p < point_count; ++p) {
      lambda_stack.segment<3>(3 * p) = labels[t].lambda[p];
    }
    loss += (r - jc.transpose() * lambda_stack - labels[t].tau).lpNorm<1>();
  }
  return loss;
}

double total_loss(double l_recon, double l_force, double l_contact,
                  double l_euler) {
  return l_recon + l_force + l_contact + l_euler;
}

}  // namespace physdyn
