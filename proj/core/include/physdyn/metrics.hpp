#pragma once

#include <Eigen/Core>

#include <optional>
#include <vector>

#include "physdyn/body_model.hpp"
#include "physdyn/dynamics.hpp"
#include "physdyn/force_solver.hpp"
#include "physdyn/kinematics.hpp"

namespace physdyn {

// Height below which a vertex counts as "in contact" for the FS and BOS
// metrics.
inline constexpr double kContactHeightThreshold = 0.03;  // [m]

struct MetricSelection {
  bool accl = true;  // needs ground truth
  bool vel = true;   // needs ground truth
  bool fs = true;
  bool gp = true;
  bool bos = true;

  static MetricSelection all() { return {}; }
  static MetricSelection motion_only() {
    return {false, false, true, true, true};
  }
};

struct MetricReport {
  std::optional<double> accl;  // [mm/frame^2]
  std::optional<double> vel;   // [mm/frame]
  double fs = 0.0;             // [mm]
  double gp = 0.0;             // [mm]
  double bos = 0.0;            // percentage of frames in [0, 100]

  // Diagnostics. accl: interior frames; vel/fs: frame pairs; gp/bos: frames.
  std::vector<double> accl_per_frame;
  std::vector<double> vel_per_frame;
  std::vector<double> fs_per_frame;
  std::vector<double> gp_per_frame;
  std::vector<char> bos_per_frame;
};

// ACCL: mean over joints and interior frames of the norm of the difference
// of second differences of joint positions, pred vs gt. VEL: mean absolute
// difference of per-joint speed magnitudes over adjacent-frame pairs.
// FS: mean horizontal displacement of contact vertices below the height
// threshold in both adjacent frames. GP: mean |z| over all mesh vertices
// with z < 0. BOS: percentage of frames whose COM ground projection falls
// inside the convex hull of the in-contact contact vertices. Selecting accl
// or vel without gt throws SchemaError.
MetricReport plausibility_metrics(
    const RestBody& body, const MotionSequence& pred,
    const MotionSequence* gt = nullptr,
    const MetricSelection& selection = MetricSelection::motion_only());

struct LossWeights {
  double gamma_q = 2e3;       // squared coordinate error
  double gamma_j = 1e5;       // squared joint-position error
  double gamma_tau = 5.0;     // L1 actuation error
  double gamma_lambda = 1.0;  // L1 contact-force error
  double gamma_v = 100.0;     // L1 contact-vertex velocity
  double gamma_z = 200.0;     // contact-vertex height
};

// Sum over frames of gamma_q |q - q_gt|^2 + gamma_j |J - J_gt|^2 with J the
// stacked world joint positions.
double reconstruction_loss(const RestBody& body, const MotionSequence& pred,
                           const MotionSequence& gt,
                           const LossWeights& weights = {});

// Sum over frames of gamma_tau |tau - tau_label|_1 +
// gamma_lambda |lambda - lambda_label|_1.
double force_loss(const std::vector<FrameForces>& pred,
                  const std::vector<FrameForces>& labels,
                  const LossWeights& weights = {});

// Per-frame contact-point index sets with force norm above the threshold.
std::vector<std::vector<int>> contact_sets_from_forces(
    const SequenceForces& forces, double threshold = 1e-12);

// Sum over frames with non-empty C_t of the per-point mean of
// gamma_v |v|_1 + gamma_z |z| over the points of C_t. Vertex velocities come
// from differentiating the sequence (zero for a single frame).
double contact_loss(const RestBody& body, const MotionSequence& motion,
                    const std::vector<std::vector<int>>& contact_sets,
                    const LossWeights& weights = {});

// Sum over frames of |M qdd + C + g - Jc^T lambda - tau|_1 with the label
// forces plugged in. Unweighted.
double euler_lagrange_loss(const RestBody& body, const MotionSequence& motion,
                           const std::vector<FrameForces>& labels,
                           const GravityModel& gravity);

double total_loss(double l_recon, double l_force, double l_contact,
                  double l_euler);

struct LossReport {
  double l_recon = 0.0;
  double l_force = 0.0;
  double l_contact = 0.0;
  double l_euler = 0.0;
  double l_total = 0.0;
  LossWeights weights;
};

}  // namespace physdyn
