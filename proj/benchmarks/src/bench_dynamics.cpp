#include <benchmark/benchmark.h>

#include <random>

#include "physdyn/builtin_bodies.hpp"
#include "physdyn/dynamics.hpp"
#include "physdyn/force_solver.hpp"
#include "physdyn/mass_properties.hpp"

namespace {

using namespace physdyn;

const RestBody& humanoid() {
  static const RestBody body = make_box_humanoid(70.0);
  return body;
}

const BodyMassProperties& humanoid_props() {
  static const BodyMassProperties props = body_mass_properties(humanoid());
  return props;
}

Eigen::VectorXd random_pose(unsigned seed, double angle_scale) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-angle_scale, angle_scale);
  Eigen::VectorXd q(humanoid().tree.dof_count());
  for (Eigen::Index i = 0; i < q.size(); ++i) q[i] = dist(rng);
  return q;
}

void bm_forward_kinematics(benchmark::State& state) {
  const Eigen::VectorXd q = random_pose(7, 0.4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_kinematics(humanoid().tree, q));
  }
}
BENCHMARK(bm_forward_kinematics);

void bm_mass_properties(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(body_mass_properties(humanoid()));
  }
}
BENCHMARK(bm_mass_properties);

void bm_mass_matrix(benchmark::State& state) {
  const Eigen::VectorXd q = random_pose(11, 0.4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mass_matrix(humanoid(), humanoid_props(), q));
  }
}
BENCHMARK(bm_mass_matrix);

void bm_bias_force(benchmark::State& state) {
  const Eigen::VectorXd q = random_pose(13, 0.4);
  const Eigen::VectorXd qd = random_pose(17, 1.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bias_force(humanoid(), humanoid_props(), q, qd));
  }
}
BENCHMARK(bm_bias_force);

void bm_contact_jacobian(benchmark::State& state) {
  const Eigen::VectorXd q = random_pose(19, 0.4);
  const FkResult fk = forward_kinematics(humanoid().tree, q);
  for (auto _ : state) {
    benchmark::DoNotOptimize(contact_jacobian(humanoid(), fk));
  }
}
BENCHMARK(bm_contact_jacobian);

void bm_solve_frame_standing(benchmark::State& state) {
  const Eigen::VectorXd q = Eigen::VectorXd::Zero(humanoid().tree.dof_count());
  const Eigen::VectorXd qd = q;
  const Eigen::VectorXd qdd = q;
  const GravityModel gravity;
  SolverConfig config;
  config.mode = state.range(0) == 0 ? ResidualMode::kFullResidual
                                    : ResidualMode::kBaseOnly;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        solve_frame(humanoid(), humanoid_props(), q, qd, qdd, gravity,
                    config));
  }
}
BENCHMARK(bm_solve_frame_standing)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
