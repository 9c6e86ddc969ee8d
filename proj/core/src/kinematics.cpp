#include "physdyn/kinematics.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <fstream>
#include <string>

#include "json_util.hpp"
#include "physdyn/errors.hpp"

namespace physdyn {

Eigen::Matrix3d euler_xyz_to_matrix(const Eigen::Vector3d& angles) {
  return (Eigen::AngleAxisd(angles.x(), Eigen::Vector3d::UnitX()) *
          Eigen::AngleAxisd(angles.y(), Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(angles.z(), Eigen::Vector3d::UnitZ()))
      .toRotationMatrix();
}

Eigen::Vector3d matrix_to_euler_xyz(const Eigen::Matrix3d& rot) {
  const double sy = std::clamp(rot(0, 2), -1.0, 1.0);
  if (std::abs(sy) > 1.0 - 1e-12) {
    // Gimbal lock: only a +- x rotation is distinguishable; pin z to 0.
    const double x = sy > 0.0 ? std::atan2(rot(1, 0), rot(1, 1))
                              : std::atan2(-rot(1, 0), rot(1, 1));
    return {x, std::copysign(M_PI / 2.0, sy), 0.0};
  }
  return {std::atan2(-rot(1, 2), rot(2, 2)), std::asin(sy),
          std::atan2(-rot(0, 1), rot(0, 0))};
}

Eigen::Matrix3d axis_angle_to_matrix(const Eigen::Vector3d& rotvec) {
  const double angle = rotvec.norm();
  if (angle < 1e-300) return Eigen::Matrix3d::Identity();
  return Eigen::AngleAxisd(angle, rotvec / angle).toRotationMatrix();
}

Eigen::Vector3d matrix_to_axis_angle(const Eigen::Matrix3d& rot) {
  const Eigen::AngleAxisd aa(rot);
  return aa.angle() * aa.axis();
}

FkResult forward_kinematics(const KinematicTree& tree,
                            const Eigen::VectorXd& q) {
  if (q.size() != tree.dof_count()) {
    throw SchemaError("forward_kinematics: coordinate vector has " +
                      std::to_string(q.size()) + " entries, body needs " +
                      std::to_string(tree.dof_count()));
  }
  const int n = tree.part_count;
  FkResult fk;
  fk.part_rotation.resize(n);
  fk.joint_world.resize(n);
  fk.joint_rest = tree.joint_rest_offset;
  fk.rot_axis_world.resize(n);

  for (int i = 0; i < n; ++i) {
    const int parent = tree.parent[i];
    const int base = i == 0 ? 3 : 6 + 3 * (i - 1);
    const Eigen::Vector3d angles = q.segment<3>(base);

    const Eigen::Matrix3d base_rot =
        i == 0 ? Eigen::Matrix3d::Identity() : fk.part_rotation[parent];
    const Eigen::Matrix3d rx =
        Eigen::AngleAxisd(angles.x(), Eigen::Vector3d::UnitX())
            .toRotationMatrix();
    const Eigen::Matrix3d rxy =
        rx * Eigen::AngleAxisd(angles.y(), Eigen::Vector3d::UnitY());
    fk.part_rotation[i] =
        base_rot * rxy *
        Eigen::AngleAxisd(angles.z(), Eigen::Vector3d::UnitZ());
    fk.rot_axis_world[i] = {base_rot.col(0), base_rot * rx.col(1),
                            Eigen::Vector3d(base_rot * rxy.col(2))};

    if (i == 0) {
      fk.joint_world[i] = tree.joint_rest_offset[0] + q.head<3>();
    } else {
      fk.joint_rest[i] += fk.joint_rest[parent];
      fk.joint_world[i] = fk.joint_world[parent] +
                          fk.part_rotation[parent] * tree.joint_rest_offset[i];
    }
  }
  return fk;
}

std::vector<Eigen::Vector3d> contact_point_positions(const RestBody& body,
                                                     const FkResult& fk) {
  std::vector<Eigen::Vector3d> out;
  out.reserve(body.contact_point_count());
  for (int part = 0; part < body.tree.part_count; ++part) {
    for (int v : body.contact_vertices[part]) {
      out.push_back(fk.world_point(part, body.part_meshes[part].vertices[v]));
    }
  }
  return out;
}

MotionSequence load_motion(const std::filesystem::path& path, int part_count) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open motion file " + path.string());
  detail::json j;
  try {
    in >> j;
  } catch (const detail::json::parse_error& e) {
    throw SchemaError("motion file " + path.string() + ": " + e.what());
  }

  MotionSequence motion;
  motion.fps = detail::require(j, "fps", "motion").get<double>();
  if (!(motion.fps > 0.0)) throw SchemaError("motion: fps must be positive");
  std::string format = "euler";
  if (j.contains("rotation_format")) {
    format = j["rotation_format"].get<std::string>();
  }
  if (format != "euler" && format != "axis_angle") {
    throw SchemaError("motion: unknown rotation_format \"" + format + "\"");
  }
  const bool axis_angle = format == "axis_angle";

  const detail::json& frames = detail::require(j, "frames", "motion");
  if (!frames.is_array() || frames.empty()) {
    throw SchemaError("motion: \"frames\" must be a non-empty array");
  }
  const int dof = 6 + 3 * (part_count - 1);
  motion.q.resize(static_cast<int>(frames.size()), dof);
  for (int t = 0; t < static_cast<int>(frames.size()); ++t) {
    const std::string ctx = "motion frame " + std::to_string(t);
    const detail::json& frame = frames[t];
    motion.q.row(t).head<3>() =
        detail::as_vec3(detail::require(frame, "root_translation", ctx), ctx)
            .transpose();
    const detail::json& rotations = detail::require(frame, "rotations", ctx);
    if (!rotations.is_array() ||
        static_cast<int>(rotations.size()) != part_count) {
      throw SchemaError(ctx + ": expected " + std::to_string(part_count) +
                        " rotation triples");
    }
    for (int p = 0; p < part_count; ++p) {
      Eigen::Vector3d r = detail::as_vec3(rotations[p], ctx);
      if (axis_angle) r = matrix_to_euler_xyz(axis_angle_to_matrix(r));
      motion.q.row(t).segment<3>(p == 0 ? 3 : 6 + 3 * (p - 1)) = r.transpose();
    }
  }
  return motion;
}

void save_motion(const MotionSequence& motion,
                 const std::filesystem::path& path) {
  const int part_count = (motion.dof_count() - 3) / 3;
  detail::json j;
  j["fps"] = motion.fps;
  j["rotation_format"] = "euler";
  detail::json frames = detail::json::array();
  for (int t = 0; t < motion.frame_count(); ++t) {
    detail::json frame;
    frame["root_translation"] =
        detail::vec3_to_json(motion.q.row(t).head<3>().transpose());
    detail::json rotations = detail::json::array();
    for (int p = 0; p < part_count; ++p) {
      rotations.push_back(detail::vec3_to_json(
          motion.q.row(t).segment<3>(p == 0 ? 3 : 6 + 3 * (p - 1))
              .transpose()));
    }
    frame["rotations"] = std::move(rotations);
    frames.push_back(std::move(frame));
  }
  j["frames"] = std::move(frames);
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write motion file " + path.string());
  out << j.dump(2) << "\n";
}

void unwrap_angles(MotionSequence& motion) {
  for (int col = 3; col < motion.dof_count(); ++col) {
    for (int t = 1; t < motion.frame_count(); ++t) {
      const double jump = motion.q(t, col) - motion.q(t - 1, col);
      motion.q(t, col) -= 2.0 * M_PI * std::round(jump / (2.0 * M_PI));
    }
  }
}

MotionDerivatives finite_difference_derivatives(const MotionSequence& motion) {
  const int frames = motion.frame_count();
  if (frames < 3) {
    throw SchemaError("motion: need at least 3 frames for derivatives, got " +
                      std::to_string(frames));
  }
  const double fps = motion.fps;
  const Eigen::MatrixXd& q = motion.q;
  MotionDerivatives d;
  d.qd.resizeLike(q);
  d.qdd.resizeLike(q);
  d.one_sided.assign(frames, false);
  d.one_sided.front() = d.one_sided.back() = true;

  for (int t = 1; t + 1 < frames; ++t) {
    d.qd.row(t) = (q.row(t + 1) - q.row(t - 1)) * (fps / 2.0);
    d.qdd.row(t) = (q.row(t + 1) - 2.0 * q.row(t) + q.row(t - 1)) * fps * fps;
  }
  const int last = frames - 1;
  d.qd.row(0) = (-3.0 * q.row(0) + 4.0 * q.row(1) - q.row(2)) * (fps / 2.0);
  d.qdd.row(0) = (q.row(0) - 2.0 * q.row(1) + q.row(2)) * fps * fps;
  d.qd.row(last) =
      (3.0 * q.row(last) - 4.0 * q.row(last - 1) + q.row(last - 2)) *
      (fps / 2.0);
  d.qdd.row(last) =
      (q.row(last) - 2.0 * q.row(last - 1) + q.row(last - 2)) * fps * fps;
  return d;
}

}  // namespace physdyn
