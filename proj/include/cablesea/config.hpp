#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cablesea/sea.hpp"
#include "cablesea/sim.hpp"
#include "cablesea/synthesis.hpp"

namespace cablesea {

struct VelocityTuning {
  double xi = 0.88;
  /// Fixed gains; when both are set they replace the tuned values.
  std::optional<double> kpv;
  std::optional<double> kiv;
};

struct TorqueTuning {
  double omega_bar = 451.24;  ///< rad/s
  double xi_bar = 0.826;
  double q2_corner_hz = 50.0;
};

struct PdGains {
  double kp = 490.0;
  double kd = 0.1;
  double rolloff = 1e5;  ///< rad/s
};

/// Replaces the SEA torque plant, e.g. to exercise a different model.
struct PlantOverride {
  Polynomial num;
  Polynomial den;
};

struct Config {
  SeaParams sea;
  VelocityTuning velocity_tuning;
  TorqueTuning torque_tuning;
  PdGains pd;
  std::optional<PlantOverride> plant;
  std::vector<Scenario> scenarios;
  std::filesystem::path output_dir = "out";

  /// Throws kInvalidArgument for unknown names.
  const Scenario& scenario(const std::string& name) const;
  /// Physical parameters, tuning constants and scenarios. Throws the
  /// SeaParams errors, kBadSpec, kInvalidArgument (duplicate scenario names).
  void validate() const;
};

/// Line-based format:
///
///   # comment
///   [section]
///   key = value
///
/// Sections: sea, velocity_tuning, torque_tuning, pd, plant, output and
/// any number of "[scenario <name>]". Coefficient lists are
/// whitespace-separated, highest degree first. Unknown sections or keys,
/// malformed numbers and repeated keys throw kParseError with the line number.
Config parse_config(const std::string& text);

/// Reads and parses a file, then validates. Throws kParseError if the file
/// cannot be read.
Config load_config(const std::filesystem::path& path);

/// Velocity PI gains: the fixed kpv/kiv when given, otherwise tune_pi(xi).
PiGains velocity_gains(const Config& c);

/// The override plant if present, otherwise torque_plant(sea, velocity_gains).
RationalTf design_plant(const Config& c);

struct Design {
  PiGains gains;
  RationalTf plant;
  OptimalStabilizer stabilizer;
  TwoDofController controller;
};

/// Optimal stabilizer, coprime factors, Q1, Q2 and the assembled 2-DOF
/// controller for the configured plant.
Design synthesize(const Config& c);

}  // namespace cablesea
