#include "physdyn/force_solver.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "physdyn/errors.hpp"
#include "physdyn/mass_properties.hpp"

namespace physdyn {

namespace {

enum class VarState { kLower, kUpper, kFree, kPinned };

double bind_tol(double lo, double hi) {
  return 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
}

}  // namespace

BoxLsqResult solve_box_lsq(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& lower,
                           const Eigen::VectorXd& upper, double kkt_tol,
                           int max_iterations) {
  const int rows = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (b.size() != rows || lower.size() != n || upper.size() != n) {
    throw SchemaError("solve_box_lsq: inconsistent problem dimensions");
  }
  for (int j = 0; j < n; ++j) {
    if (!(lower[j] <= upper[j])) {
      throw SchemaError("solve_box_lsq: lower bound exceeds upper bound at " +
                        std::to_string(j));
    }
  }

  BoxLsqResult res;
  res.x = Eigen::VectorXd::Zero(n);
  if (n == 0) {
    res.converged = true;
    return res;
  }
  if (max_iterations <= 0) max_iterations = 10 * n;

  // Normalize columns; variables whose column is numerically zero cannot
  // influence the fit and are pinned at the in-bounds value closest to zero.
  Eigen::VectorXd norm(n);
  for (int j = 0; j < n; ++j) norm[j] = a.col(j).norm();
  const double degenerate = 1e-12 * std::max(1.0, norm.maxCoeff());

  Eigen::MatrixXd ah = Eigen::MatrixXd::Zero(rows, n);
  Eigen::VectorXd y(n), yl(n), yu(n);
  std::vector<VarState> state(n);
  Eigen::VectorXd b_eff = b;
  for (int j = 0; j < n; ++j) {
    if (norm[j] <= degenerate) {
      state[j] = VarState::kPinned;
      const double pinned = std::clamp(0.0, lower[j], upper[j]);
      y[j] = pinned;  // raw value; the column is dropped from the fit
      yl[j] = yu[j] = pinned;
      b_eff -= a.col(j) * pinned;
    } else {
      state[j] = VarState::kLower;
      ah.col(j) = a.col(j) / norm[j];
      yl[j] = lower[j] * norm[j];
      yu[j] = upper[j] * norm[j];
      y[j] = yl[j];
    }
  }
  const double scale =
      std::max(1.0, (ah.transpose() * b_eff).cwiseAbs().maxCoeff());

  std::vector<char> banned(n, 0);
  std::vector<int> free_list;
  int iter = 0;
  while (true) {
    const Eigen::VectorXd grad = ah.transpose() * (ah * y - b_eff);
    double worst_all = 0.0;
    double worst_candidate = 0.0;
    int candidate = -1;
    for (int j = 0; j < n; ++j) {
      if (state[j] == VarState::kPinned) continue;
      double viol = 0.0;
      bool at_bound = false;
      switch (state[j]) {
        case VarState::kFree:
          viol = std::abs(grad[j]);
          break;
        case VarState::kLower:
          viol = std::max(0.0, -grad[j]);
          at_bound = true;
          break;
        case VarState::kUpper:
          viol = std::max(0.0, grad[j]);
          at_bound = true;
          break;
        default:
          break;
      }
      worst_all = std::max(worst_all, viol);
      if (at_bound && !banned[j] && yl[j] < yu[j] &&
          viol > worst_candidate) {
        worst_candidate = viol;
        candidate = j;
      }
    }
    res.kkt_residual = worst_all / scale;
    if (worst_all <= kkt_tol * scale || candidate == -1 ||
        iter >= max_iterations) {
      res.converged = worst_all <= kkt_tol * scale;
      break;
    }
    ++iter;

    const VarState came_from = state[candidate];
    const double objective_before = (ah * y - b_eff).squaredNorm();
    state[candidate] = VarState::kFree;

    // Re-optimize over the free set, binding blockers until feasible.
    while (true) {
      free_list.clear();
      for (int j = 0; j < n; ++j) {
        if (state[j] == VarState::kFree) free_list.push_back(j);
      }
      if (free_list.empty()) break;

      Eigen::MatrixXd af(rows, free_list.size());
      Eigen::VectorXd bf = b_eff;
      for (int j = 0; j < n; ++j) {
        if (state[j] == VarState::kLower || state[j] == VarState::kUpper) {
          bf -= ah.col(j) * y[j];
        }
      }
      for (size_t k = 0; k < free_list.size(); ++k) {
        af.col(k) = ah.col(free_list[k]);
      }
      const Eigen::VectorXd sol =
          af.completeOrthogonalDecomposition().solve(bf);

      double step = 1.0;
      for (size_t k = 0; k < free_list.size(); ++k) {
        const int j = free_list[k];
        double target;
        if (sol[k] < yl[j]) {
          target = yl[j];
        } else if (sol[k] > yu[j]) {
          target = yu[j];
        } else {
          continue;
        }
        const double delta = sol[k] - y[j];
        if (delta == 0.0) continue;
        step = std::min(step, std::max(0.0, (target - y[j]) / delta));
      }

      // Bind every variable that reached the bound its target lies beyond.
      bool bound_someone = false;
      for (size_t k = 0; k < free_list.size(); ++k) {
        const int j = free_list[k];
        y[j] += step * (sol[k] - y[j]);
        const double tol = bind_tol(yl[j], yu[j]);
        if (y[j] <= yl[j] + tol && sol[k] <= yl[j] + tol) {
          y[j] = yl[j];
          state[j] = VarState::kLower;
          bound_someone = true;
        } else if (y[j] >= yu[j] - tol && sol[k] >= yu[j] - tol) {
          y[j] = yu[j];
          state[j] = VarState::kUpper;
          bound_someone = true;
        }
      }
      if (step >= 1.0 || !bound_someone) break;
    }

    const double objective_after = (ah * y - b_eff).squaredNorm();
    if (state[candidate] == came_from &&
        objective_after >= objective_before * (1.0 - 1e-14)) {
      banned[candidate] = 1;  // no progress; skip until the set changes
    } else {
      std::fill(banned.begin(), banned.end(), 0);
    }
  }

  res.iterations = iter;
  for (int j = 0; j < n; ++j) {
    res.x[j] =
        state[j] == VarState::kPinned ? y[j] : y[j] / norm[j];
  }
  return res;
}

ResidualMode residual_mode_from_string(const std::string& name) {
  if (name == "full-residual") return ResidualMode::kFullResidual;
  if (name == "base-only") return ResidualMode::kBaseOnly;
  throw SchemaError("unknown residual mode \"" + name +
                    "\" (expected full-residual or base-only)");
}

std::string to_string(ResidualMode mode) {
  return mode == ResidualMode::kFullResidual ? "full-residual" : "base-only";
}

FrameForces solve_frame(const RestBody& body, const BodyMassProperties& props,
                        const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                        const Eigen::VectorXd& qdd, const GravityModel& gravity,
                        const SolverConfig& config) {
  const int n = body.tree.dof_count();
  const Eigen::VectorXd r = el_residual(body, props, q, qd, qdd, gravity);
  const std::vector<ContactPointState> states = contact_state(body, q, qd);
  const ContactBasis basis = contact_basis(states);
  const int nc = basis.point_count();

  const FkResult fk = forward_kinematics(body.tree, q);
  const Eigen::MatrixXd jc = contact_jacobian(body, fk);
  Eigen::MatrixXd bmat(n, 3 * nc);
  for (int p = 0; p < nc; ++p) {
    bmat.middleCols<3>(3 * p) =
        jc.middleRows<3>(3 * p).transpose() * basis.point_basis[p];
  }

  const Eigen::Vector3d caps =
      config.x_max ? *config.x_max
                   : default_param_upper_bounds(props.total_mass, gravity);
  if ((caps.array() < 0.0).any()) {
    throw SchemaError("solve_frame: intensity caps must be non-negative");
  }
  const Eigen::VectorXd lower = Eigen::VectorXd::Zero(3 * nc);
  Eigen::VectorXd upper(3 * nc);
  for (int p = 0; p < nc; ++p) upper.segment<3>(3 * p) = caps;

  BoxLsqResult ls;
  if (config.mode == ResidualMode::kBaseOnly) {
    ls = solve_box_lsq(bmat.topRows(6), r.head(6), lower, upper,
                       config.kkt_tol, config.max_iterations);
  } else {
    ls = solve_box_lsq(bmat, r, lower, upper, config.kkt_tol,
                       config.max_iterations);
  }

  FrameForces out;
  out.x = ls.x;
  out.lambda = contact_forces(basis, ls.x);
  const Eigen::VectorXd unexplained = r - bmat * ls.x;
  out.residual_full = unexplained.norm();
  out.residual_base = unexplained.head(6).norm();
  out.tau = unexplained;
  out.tau.head(6).setZero();
  out.kkt_residual = ls.kkt_residual;
  out.converged = ls.converged;
  return out;
}

SequenceForces solve_sequence(const RestBody& body,
                              const MotionSequence& motion,
                              const GravityModel& gravity,
                              const SolverConfig& config, int workers) {
  if (motion.dof_count() != body.tree.dof_count()) {
    throw SchemaError("motion has " + std::to_string(motion.dof_count()) +
                      " DOFs, body needs " +
                      std::to_string(body.tree.dof_count()));
  }
  MotionSequence unwrapped = motion;
  unwrap_angles(unwrapped);
  const MotionDerivatives deriv = finite_difference_derivatives(unwrapped);
  const BodyMassProperties props = body_mass_properties(body);

  const int frames = unwrapped.frame_count();
  SequenceForces out;
  out.frames.resize(frames);
  workers = std::clamp(workers, 1, frames);

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (int t = next.fetch_add(1); t < frames; t = next.fetch_add(1)) {
      try {
        out.frames[t] = solve_frame(body, props,
                                    unwrapped.q.row(t).transpose(),
                                    deriv.qd.row(t).transpose(),
                                    deriv.qdd.row(t).transpose(), gravity,
                                    config);
        out.frames[t].one_sided = deriv.one_sided[t];
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (int t = 0; t < frames; ++t) {
    if (!out.frames[t].converged) {
      char msg[96];
      std::snprintf(msg, sizeof(msg),
                    "frame %d: KKT tolerance not reached (residual %.3g)", t,
                    out.frames[t].kkt_residual);
      out.warnings.emplace_back(msg);
    }
  }
  return out;
}

}  // namespace physdyn
