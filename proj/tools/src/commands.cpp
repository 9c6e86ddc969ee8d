#include "commands.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "physdyn/body_model.hpp"
#include "physdyn/errors.hpp"
#include "physdyn/force_solver.hpp"
#include "physdyn/kinematics.hpp"
#include "physdyn/mass_properties.hpp"
#include "physdyn/metrics.hpp"

namespace physdyn::cli {

namespace {

using nlohmann::json;

json to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json to_json(const Eigen::Vector3d& v) {
  return json::array({v.x(), v.y(), v.z()});
}

json row_major(const Eigen::Matrix3d& m) {
  json arr = json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) arr.push_back(m(r, c));
  }
  return arr;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write output file " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw SchemaError("failed writing output file " + path.string());
}

json load_json(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) {
    throw SchemaError("cannot open " + std::string(what) + " file " +
                      path.string());
  }
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string(what) + " file " + path.string() + ": " +
                      e.what());
  }
}

struct ForcesFile {
  std::string mode = "full-residual";
  std::vector<FrameForces> frames;
};

ForcesFile load_forces(const std::filesystem::path& path) {
  const json j = load_json(path, "forces");
  ForcesFile file;
  if (j.contains("mode")) file.mode = j["mode"].get<std::string>();
  if (!j.contains("frames") || !j["frames"].is_array()) {
    throw SchemaError("forces file: missing \"frames\" array");
  }
  for (const json& record : j["frames"]) {
    FrameForces frame;
    if (!record.contains("lambda") || !record.contains("tau")) {
      throw SchemaError("forces file: frame record needs lambda and tau");
    }
    const json& lambda = record["lambda"];
    if (!lambda.is_array() || lambda.size() % 3 != 0) {
      throw SchemaError("forces file: lambda must be a flat 3n array");
    }
    for (size_t i = 0; i < lambda.size(); i += 3) {
      frame.lambda.emplace_back(lambda[i].get<double>(),
                                lambda[i + 1].get<double>(),
                                lambda[i + 2].get<double>());
    }
    const json& tau = record["tau"];
    frame.tau.resize(tau.size());
    for (size_t i = 0; i < tau.size(); ++i) {
      frame.tau[static_cast<Eigen::Index>(i)] = tau[i].get<double>();
    }
    file.frames.push_back(std::move(frame));
  }
  return file;
}

SolverConfig solver_config(const RunConfig& config, const std::string& mode) {
  SolverConfig solver;
  solver.mode = residual_mode_from_string(mode);
  if (config.x_max) {
    solver.x_max = Eigen::Vector3d((*config.x_max)[0], (*config.x_max)[1],
                                   (*config.x_max)[2]);
  }
  return solver;
}

}  // namespace

double resolve_gravity(const std::optional<double>& flag) {
  double g = 9.81;
  if (const char* env = std::getenv("PHYSDYN_GRAVITY")) {
    char* end = nullptr;
    g = std::strtod(env, &end);
    if (end == env || *end != '\0' || !std::isfinite(g) || g <= 0.0) {
      throw SchemaError("PHYSDYN_GRAVITY must be a positive number, got \"" +
                        std::string(env) + "\"");
    }
  }
  if (flag) {
    if (!(*flag > 0.0)) {
      throw SchemaError("--gravity must be positive");
    }
    g = *flag;
  }
  return g;
}

void run_massprops(const RunConfig& config) {
  const RestBody body = load_body(config.body);
  const BodyMassProperties props = body_mass_properties(body);

  json j;
  j["units"] = {{"volume", "m^3"},
                {"mass", "kg"},
                {"com", "m"},
                {"inertia", "kg m^2, row-major about part COM"}};
  j["total_volume_m3"] = props.total_volume;
  j["total_mass_kg"] = props.total_mass;
  j["com"] = to_json(props.com);
  json parts = json::array();
  for (const PartMassProperties& p : props.parts) {
    parts.push_back({{"part", p.part_id},
                     {"volume", p.volume},
                     {"mass", p.mass},
                     {"com", to_json(p.com)},
                     {"inertia", row_major(p.inertia)}});
  }
  j["parts"] = std::move(parts);
  write_json(config.out, j);
}

void run_fk(const RunConfig& config) {
  const RestBody body = load_body(config.body);
  const MotionSequence motion =
      load_motion(config.motion, body.tree.part_count);

  json j;
  j["units"] = {{"length", "m"}};
  j["fps"] = motion.fps;
  j["rotation_format"] = "euler";
  json frames = json::array();
  for (int t = 0; t < motion.frame_count(); ++t) {
    const Eigen::VectorXd q = motion.q.row(t).transpose();
    const FkResult fk = forward_kinematics(body.tree, q);
    json frame;
    frame["root_translation"] = to_json(Eigen::Vector3d(q.head<3>()));
    json rotations = json::array();
    for (int p = 0; p < body.tree.part_count; ++p) {
      rotations.push_back(
          to_json(Eigen::Vector3d(q.segment<3>(p == 0 ? 3 : 6 + 3 * (p - 1)))));
    }
    frame["rotations"] = std::move(rotations);
    json joints = json::array();
    for (const Eigen::Vector3d& joint : fk.joint_world) {
      joints.push_back(to_json(joint));
    }
    frame["joints"] = std::move(joints);
    frames.push_back(std::move(frame));
  }
  j["frames"] = std::move(frames);
  write_json(config.out, j);
}

void run_infer(const RunConfig& config) {
  const RestBody body = load_body(config.body);
  const MotionSequence motion =
      load_motion(config.motion, body.tree.part_count);
  if (motion.frame_count() < 3) {
    throw SchemaError("infer: need >= 3 frames, got " +
                      std::to_string(motion.frame_count()));
  }
  const GravityModel gravity{config.gravity};
  const SequenceForces solved = solve_sequence(
      body, motion, gravity, solver_config(config, config.mode),
      config.workers);

  json j;
  j["units"] = {{"lambda", "N"}, {"tau", "N m"}, {"residual", "N"}};
  j["mode"] = config.mode;
  j["gravity_m_s2"] = config.gravity;
  j["fps"] = motion.fps;
  j["frame_count"] = motion.frame_count();
  j["contact_point_count"] = body.contact_point_count();
  json frames = json::array();
  for (int t = 0; t < motion.frame_count(); ++t) {
    const FrameForces& f = solved.frames[t];
    json record;
    record["frame"] = t;
    record["x"] = to_json(f.x);
    Eigen::VectorXd lambda(3 * static_cast<Eigen::Index>(f.lambda.size()));
    for (size_t p = 0; p < f.lambda.size(); ++p) {
      lambda.segment<3>(3 * static_cast<Eigen::Index>(p)) = f.lambda[p];
    }
    record["lambda"] = to_json(lambda);
    record["tau"] = to_json(f.tau);
    record["residual_base"] = f.residual_base;
    record["residual_full"] = f.residual_full;
    record["kkt"] = f.kkt_residual;
    record["endpoint"] = f.one_sided;
    frames.push_back(std::move(record));
  }
  j["frames"] = std::move(frames);
  j["warnings"] = solved.warnings;
  write_json(config.out, j);
  for (const std::string& w : solved.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
}

void run_metrics(const RunConfig& config) {
  const RestBody body = load_body(config.body);
  const MotionSequence pred = load_motion(config.pred, body.tree.part_count);
  std::optional<MotionSequence> gt;
  if (!config.gt.empty()) {
    gt = load_motion(config.gt, body.tree.part_count);
  }
  const MetricSelection selection =
      gt ? MetricSelection::all() : MetricSelection::motion_only();
  const MetricReport report =
      plausibility_metrics(body, pred, gt ? &*gt : nullptr, selection);

  json j;
  j["units"] = {{"accl", "mm/frame^2"},
                {"vel", "mm/frame"},
                {"fs", "mm"},
                {"gp", "mm"},
                {"bos", "percent of frames"}};
  j["frame_count"] = pred.frame_count();
  if (report.accl) j["accl"] = *report.accl;
  if (report.vel) j["vel"] = *report.vel;
  j["fs"] = report.fs;
  j["gp"] = report.gp;
  j["bos"] = report.bos;
  json per_frame;
  if (report.accl) per_frame["accl"] = report.accl_per_frame;
  if (report.vel) per_frame["vel"] = report.vel_per_frame;
  per_frame["fs"] = report.fs_per_frame;
  per_frame["gp"] = report.gp_per_frame;
  json bos_flags = json::array();
  for (char flag : report.bos_per_frame) bos_flags.push_back(flag != 0);
  per_frame["bos"] = std::move(bos_flags);
  j["per_frame"] = std::move(per_frame);
  write_json(config.out, j);
}

void run_losses(const RunConfig& config) {
  const RestBody body = load_body(config.body);
  const MotionSequence pred = load_motion(config.pred, body.tree.part_count);
  const MotionSequence gt = load_motion(config.gt, body.tree.part_count);
  const ForcesFile labels = load_forces(config.forces);
  const GravityModel gravity{config.gravity};
  const LossWeights weights;

  const SequenceForces pred_forces = solve_sequence(
      body, pred, gravity, solver_config(config, labels.mode),
      config.workers);

  SequenceForces label_seq;
  label_seq.frames = labels.frames;
  const double l_recon = reconstruction_loss(body, pred, gt, weights);
  const double l_force =
      force_loss(pred_forces.frames, labels.frames, weights);
  const double l_contact = contact_loss(
      body, pred, contact_sets_from_forces(label_seq), weights);
  const double l_euler =
      euler_lagrange_loss(body, pred, labels.frames, gravity);

  json j;
  j["units"] = {{"inputs", "SI"}, {"losses", "weighted sums, see weights"}};
  j["weights"] = {{"gamma_q", weights.gamma_q},
                  {"gamma_j", weights.gamma_j},
                  {"gamma_tau", weights.gamma_tau},
                  {"gamma_lambda", weights.gamma_lambda},
                  {"gamma_v", weights.gamma_v},
                  {"gamma_z", weights.gamma_z}};
  j["l_recon"] = l_recon;
  j["l_force"] = l_force;
  j["l_contact"] = l_contact;
  j["l_euler"] = l_euler;
  j["l_total"] = total_loss(l_recon, l_force, l_contact, l_euler);
  write_json(config.out, j);
}

}  // namespace physdyn::cli
