// Regenerates the committed example assets in data/.

#include <cmath>
#include <filesystem>
#include <iostream>

#include "physdyn/body_model.hpp"
#include "physdyn/builtin_bodies.hpp"
#include "physdyn/kinematics.hpp"

using namespace physdyn;

namespace {

MotionSequence standing_motion(const RestBody& body, int frames, double fps) {
  MotionSequence motion;
  motion.fps = fps;
  motion.q = Eigen::MatrixXd::Zero(frames, body.tree.dof_count());
  return motion;
}

// Upper-body sway with planted feet: arms and spine follow slow sinusoids,
// legs stay at the rest pose so the soles never move.
MotionSequence sway_motion(const RestBody& body, int frames, double fps) {
  MotionSequence motion = standing_motion(body, frames, fps);
  const auto rot_col = [](int part, int axis) {
    return (part == 0 ? 3 : 6 + 3 * (part - 1)) + axis;
  };
  for (int t = 0; t < frames; ++t) {
    const double s = t / fps;
    const double lean = 0.10 * std::sin(2.0 * M_PI * 0.4 * s);
    const double swing = 0.35 * std::sin(2.0 * M_PI * 0.6 * s);
    motion.q(t, rot_col(3, 0)) = lean;          // spine1 pitch
    motion.q(t, rot_col(6, 1)) = 0.5 * lean;    // spine2 roll
    motion.q(t, rot_col(16, 0)) = swing;        // l_upper_arm
    motion.q(t, rot_col(17, 0)) = -swing;       // r_upper_arm
    motion.q(t, rot_col(18, 0)) = 0.4 * swing;  // l_forearm
    motion.q(t, rot_col(19, 0)) = -0.4 * swing; // r_forearm
    motion.q(t, rot_col(12, 2)) = 0.2 * lean;   // neck yaw
  }
  return motion;
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "data";
  std::filesystem::create_directories(dir);

  const RestBody humanoid = make_box_humanoid(70.0);
  save_body(humanoid, dir / "humanoid_24.json");

  const RestBody box =
      make_box_body({0.4, 0.3, 0.2}, 5.0, {0.0, 0.0, 1.0}, true);
  save_body(box, dir / "box.json");

  save_motion(standing_motion(humanoid, 48, 30.0), dir / "standing.json");
  save_motion(sway_motion(humanoid, 180, 60.0), dir / "sway.json");

  std::cout << "assets written to " << dir << "\n";
  return 0;
}
