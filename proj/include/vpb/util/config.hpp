#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vpb/collision/kernel.hpp"
#include "vpb/core/species.hpp"
#include "vpb/fluid/euler_poisson.hpp"
#include "vpb/hilbert/expansion.hpp"
#include "vpb/remainder/weights.hpp"
#include "vpb/sim/sweep.hpp"

namespace vpb {

struct ConfigError : std::runtime_error {
  std::vector<std::string> violations;
  explicit ConfigError(const std::vector<std::string>& v)
      : std::runtime_error(join(v)), violations(v) {}
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "configuration invalid:";
    for (const auto& m : v) s += "\n  - " + m;
    return s;
  }
};

// Flat dotted-key configuration covering every module. Unknown keys are
// rejected; all violations are reported together.
struct RunConfig {
  SpeciesPair species;
  CollisionKernel kernel;

  // grids
  int cells = 16;
  double L_x = 2.0 * M_PI;
  int v_points = 9;
  double v_extent = 0.0;  // 0 -> derived from theta_bar
  int angular = 26;
  int interp_order = 2;

  EPConfig ep;  // sp filled from species at load

  // expansion
  int expansion_k = 6;
  int k_terms = 1;
  HilbertConfig hilbert;

  WeightSpec weight;

  // kinetic run
  SimConfig sim;

  // sweep
  std::vector<double> eps_list{0.2, 0.1, 0.05, 0.025};
  double perturbation = 0.1;

  std::uint64_t seed = 12345;
  int threads = 0;  // 0 -> hardware concurrency

  double velocity_extent() const {
    return v_extent > 0.0 ? v_extent : default_velocity_extent(1.3 * ep.theta_bar(), species);
  }

  SweepConfig sweep_config() const;

  // Canonical emission: sorted keys, 17 significant digits; reparsing the
  // emission reproduces the config exactly.
  std::string emit() const;
  std::uint64_t hash() const;  // FNV-1a over the canonical emission
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

}  // namespace vpb
