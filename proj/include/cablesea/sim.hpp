#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cablesea/lti.hpp"
#include "cablesea/sea.hpp"
#include "cablesea/synthesis.hpp"

namespace cablesea {

struct Signal {
  double dt = 0.0;
  std::vector<double> samples;
  std::string unit;

  double time(size_t k) const { return static_cast<double>(k) * dt; }
  friend bool operator==(const Signal&, const Signal&) = default;
};

struct ReferenceSpec {
  enum class Kind { kStep, kSinusoid };
  Kind kind = Kind::kStep;
  double amplitude = 1.0;  ///< Nm for the torque loop, rad/s for the velocity loop
  double freq_hz = 0.0;    ///< sinusoid only

  friend bool operator==(const ReferenceSpec&, const ReferenceSpec&) = default;
};

/// Zero-mean Gaussian sequence. A fresh value is drawn every `hold` seconds
/// (every step when hold <= dt) and held in between.
struct NoiseSpec {
  double stddev = 0.0;
  std::uint64_t seed = 0;
  double hold = 0.0;

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

enum class LoopKind { kTorque, kVelocity };

struct Scenario {
  std::string name;
  LoopKind loop = LoopKind::kTorque;
  ReferenceSpec reference;
  NoiseSpec disturbance;  ///< added at the plant input
  NoiseSpec noise;        ///< added to the measured output
  double duration = 0.1;  ///< s
  double dt = 1e-5;       ///< integration step, s
  int record_every = 1;   ///< keep every k-th sample in the traces

  /// Throws kBadSpec.
  void validate() const;
  /// Number of integration samples, t = 0 .. duration inclusive.
  size_t samples() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Standard normal stream: std::mt19937_64 seeded with `seed`, 53-bit
/// uniforms u = (x >> 11) * 2^-53, Box-Muller pairs
/// (sqrt(-2 ln(1 - u1)) cos(2 pi u2), sqrt(-2 ln(1 - u1)) sin(2 pi u2))
/// emitted cosine first.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}
  double next();

 private:
  double uniform();

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct ScenarioSignals {
  Signal r;
  Signal d;
  Signal n;
};

/// Reference, disturbance and noise at the integration step.
ScenarioSignals generate(const Scenario& sc);

struct SimMetrics {
  double rise_time = 0.0;           ///< s, 10-90%; NaN unless a settled step
  double overshoot = 0.0;           ///< fraction; NaN unless a settled step
  double settling_time = 0.0;       ///< s, 2% band; NaN unless a settled step
  double rms_tracking_error = 0.0;  ///< RMS of r - z after the first 20%
  double steady_state_error = 0.0;  ///< |mean(r - z)| over the final 5%
};

struct SimResult {
  std::string controller;
  Scenario scenario;
  /// Named traces r, d, n, u, v, y, z, all sharing dt and length.
  std::vector<std::pair<std::string, Signal>> traces;
  SimMetrics metrics;

  /// Throws kInvalidArgument for an unknown name.
  const Signal& trace(const std::string& name) const;
};

/// 2-DOF loop realized from its factors: u = Q1 r - Y y - Q2 (M y - N u) + (1 - X) u.
/// Throws kStepTooLarge, kBadSpec, kUnstableLoop (divergence guard).
SimResult run_2dof(const RationalTf& plant, const TwoDofController& ctl, const Scenario& sc);

/// kp + kd s / (s / rolloff + 1).
RationalTf pd_controller(double kp, double kd, double rolloff = 1e5);

/// Unity-feedback PD loop, same wiring of d and n.
SimResult run_pd(const RationalTf& plant, double kp, double kd, const Scenario& sc, double rolloff = 1e5);

/// PI velocity loop around the motor: r and z in rad/s, u in V.
SimResult run_velocity(const MotorParams& motor, const PiGains& gains, const Scenario& sc);

struct ComparisonRow {
  std::string metric;
  double a = 0.0;
  double b = 0.0;
  double delta = 0.0;  ///< a - b
};

struct Comparison {
  std::string label_a;
  std::string label_b;
  std::vector<ComparisonRow> rows;
  Signal error_a;      ///< r - z of a
  Signal error_b;      ///< r - z of b
  Signal error_delta;  ///< error_a - error_b
};

/// Throws kScenarioMismatch unless both runs used the same scenario.
Comparison compare(const SimResult& a, const SimResult& b);

}  // namespace cablesea
