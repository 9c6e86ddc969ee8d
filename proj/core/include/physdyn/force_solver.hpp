#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

#include "physdyn/contact.hpp"
#include "physdyn/dynamics.hpp"
#include "physdyn/kinematics.hpp"

namespace physdyn {

// min ||A x - b||^2 subject to lower <= x <= upper, solved with an
// active-set method (BVLS). Columns are normalized internally; columns with
// negligible norm have their variable pinned to the bound closest to zero.
struct BoxLsqResult {
  Eigen::VectorXd x;
  // Largest KKT violation relative to max(1, |A^T b|_inf) after column
  // normalization.
  double kkt_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

BoxLsqResult solve_box_lsq(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& lower,
                           const Eigen::VectorXd& upper, double kkt_tol = 1e-8,
                           int max_iterations = 0);

// Which rows of the force-balance residual the contact intensities are fit
// to. Joint actuation absorbs the joint rows exactly in both modes; the
// floating base rows can only be explained by contact.
enum class ResidualMode { kFullResidual, kBaseOnly };

ResidualMode residual_mode_from_string(const std::string& name);
std::string to_string(ResidualMode mode);

struct SolverConfig {
  ResidualMode mode = ResidualMode::kFullResidual;
  // Per-point intensity caps (k_h, k_n, c); defaults to
  // default_param_upper_bounds of the body being solved.
  std::optional<Eigen::Vector3d> x_max;
  double kkt_tol = 1e-8;
  int max_iterations = 0;  // 0 means 10x variable count
};

struct FrameForces {
  Eigen::VectorXd x;                    // 3 intensities per contact point
  std::vector<Eigen::Vector3d> lambda;  // world force per contact point
  Eigen::VectorXd tau;                  // joint actuation, first 6 rows zero
  double residual_full = 0.0;  // |r - B x|_2 over all rows
  double residual_base = 0.0;  // |r - B x|_2 over the six base rows
  double kkt_residual = 0.0;
  bool converged = true;
  bool one_sided = false;  // derivative stencil at this frame
};

// Infers contact forces and joint actuation for one frame of state
// (q, qd, qdd): solves the box-constrained fit of B x to the rows selected
// by config.mode, then assigns tau := joint rows of (r - B x).
FrameForces solve_frame(const RestBody& body, const BodyMassProperties& props,
                        const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                        const Eigen::VectorXd& qdd, const GravityModel& gravity,
                        const SolverConfig& config);

struct SequenceForces {
  std::vector<FrameForces> frames;
  std::vector<std::string> warnings;  // frame order, e.g. non-convergence
};

// Unwraps angles, differentiates the motion, and solves every frame.
// workers > 1 distributes frames over threads; results do not depend on the
// worker count.
SequenceForces solve_sequence(const RestBody& body,
                              const MotionSequence& motion,
                              const GravityModel& gravity,
                              const SolverConfig& config, int workers = 1);

}  // namespace physdyn
