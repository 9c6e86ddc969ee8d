#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>

namespace physdyn::cli {

struct RunConfig {
  std::filesystem::path body;
  std::filesystem::path motion;   // fk, infer
  std::filesystem::path pred;     // metrics, losses
  std::filesystem::path gt;       // metrics (optional), losses
  std::filesystem::path forces;   // losses
  std::filesystem::path out;
  std::string mode = "full-residual";
  int workers = 1;
  std::optional<std::array<double, 3>> x_max;  // k_h, k_n, c caps
  double gravity = 9.81;
};

// Gravity magnitude: --gravity flag beats PHYSDYN_GRAVITY beats 9.81.
// Throws SchemaError on an unparseable or non-positive value.
double resolve_gravity(const std::optional<double>& flag);

void run_massprops(const RunConfig& config);
void run_fk(const RunConfig& config);
void run_infer(const RunConfig& config);
void run_metrics(const RunConfig& config);
void run_losses(const RunConfig& config);

}  // namespace physdyn::cli
