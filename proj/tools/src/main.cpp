#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <optional>

#include "commands.hpp"
#include "physdyn/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Mesh-based articulated-body dynamics: mass properties, forward "
      "kinematics, contact-force inference, plausibility metrics and losses"};
  app.require_subcommand(1);

  physdyn::cli::RunConfig config;
  std::optional<double> gravity_flag;
  std::vector<double> x_max_flag;
  std::function<void(const physdyn::cli::RunConfig&)> command;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--gravity", gravity_flag,
                    "Gravity magnitude [m/s^2]; overrides PHYSDYN_GRAVITY");
    sub->add_option("--out", config.out, "Output JSON path")->required();
  };

  CLI::App* massprops =
      app.add_subcommand("massprops", "Per-part volume, mass, COM, inertia");
  massprops->add_option("--body", config.body, "Body JSON")->required();
  add_common(massprops);
  massprops->callback([&] { command = physdyn::cli::run_massprops; });

  CLI::App* fk =
      app.add_subcommand("fk", "Posed joint positions for a motion");
  fk->add_option("--body", config.body, "Body JSON")->required();
  fk->add_option("--motion", config.motion, "Motion JSON")->required();
  add_common(fk);
  fk->callback([&] { command = physdyn::cli::run_fk; });

  CLI::App* infer = app.add_subcommand(
      "infer", "Infer contact forces and joint actuation per frame");
  infer->add_option("--body", config.body, "Body JSON")->required();
  infer->add_option("--motion", config.motion, "Motion JSON")->required();
  infer->add_option("--mode", config.mode,
                    "Residual rows to fit: full-residual or base-only")
      ->check(CLI::IsMember({"full-residual", "base-only"}));
  infer->add_option("--workers", config.workers, "Solver threads")
      ->check(CLI::PositiveNumber);
  infer
      ->add_option("--x-max", x_max_flag,
                   "Intensity caps k_h k_n c (default weight/2 weight/2 200)")
      ->expected(3);
  add_common(infer);
  infer->callback([&] { command = physdyn::cli::run_infer; });

  CLI::App* metrics = app.add_subcommand(
      "metrics", "Plausibility metrics (ACCL/VEL need --gt)");
  metrics->add_option("--body", config.body, "Body JSON")->required();
  metrics->add_option("--pred", config.pred, "Predicted motion JSON")
      ->required();
  metrics->add_option("--gt", config.gt, "Ground-truth motion JSON");
  add_common(metrics);
  metrics->callback([&] { command = physdyn::cli::run_metrics; });

  CLI::App* losses =
      app.add_subcommand("losses", "Reconstruction/force/contact/EL losses");
  losses->add_option("--body", config.body, "Body JSON")->required();
  losses->add_option("--pred", config.pred, "Predicted motion JSON")
      ->required();
  losses->add_option("--gt", config.gt, "Ground-truth motion JSON")
      ->required();
  losses->add_option("--forces", config.forces, "Label forces JSON (infer output)")
      ->required();
  losses->add_option("--workers", config.workers, "Solver threads")
      ->check(CLI::PositiveNumber);
  add_common(losses);
  losses->callback([&] { command = physdyn::cli::run_losses; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    config.gravity = physdyn::cli::resolve_gravity(gravity_flag);
    if (x_max_flag.size() == 3) {
      config.x_max = {x_max_flag[0], x_max_flag[1], x_max_flag[2]};
    }
    command(config);
  } catch (const physdyn::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const physdyn::GeometryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
