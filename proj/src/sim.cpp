#include "cablesea/sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "cablesea/error.hpp"

namespace cablesea {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void bad_spec(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kBadSpec, what);
}

void validate_noise(const NoiseSpec& n, const char* label) {
  bad_spec(std::isfinite(n.stddev) && n.stddev >= 0.0, std::string(label) + " std must be finite and non-negative");
  bad_spec(std::isfinite(n.hold) && n.hold >= 0.0, std::string(label) + " hold must be finite and non-negative");
}

// Held Gaussian sequence: a fresh draw every hold_steps samples.
class NoiseSource {
 public:
  NoiseSource(const NoiseSpec& spec, double dt)
      : stddev_(spec.stddev),
        hold_steps_(std::max<size_t>(1, static_cast<size_t>(std::llround(spec.hold / dt)))),
        stream_(spec.seed) {}

  double next() {
    if (stddev_ == 0.0) return 0.0;
    if (k_++ % hold_steps_ == 0) value_ = stddev_ * stream_.next();
    return value_;
  }

 private:
  double stddev_;
  size_t hold_steps_;
  GaussianStream stream_;
  double value_ = 0.0;
  size_t k_ = 0;
};

// Produces r, d, n sample by sample; generate() and the simulators share it.
class ScenarioSource {
 public:
  explicit ScenarioSource(const Scenario& sc)
      : sc_(sc), disturbance_(sc.disturbance, sc.dt), noise_(sc.noise, sc.dt) {}

  void next(double& r, double& d, double& n) {
    if (sc_.reference.kind == ReferenceSpec::Kind::kStep) {
      r = sc_.reference.amplitude;
    } else {
      const double t = static_cast<double>(k_) * sc_.dt;
      r = sc_.reference.amplitude * std::sin(2.0 * std::numbers::pi * sc_.reference.freq_hz * t);
    }
    d = disturbance_.next();
    n = noise_.next();
    ++k_;
  }

 private:
  const Scenario& sc_;
  NoiseSource disturbance_;
  NoiseSource noise_;
  size_t k_ = 0;
};

struct Units {
  std::string reference;
  std::string actuation;
};

Units units_for(LoopKind loop) {
  if (loop == LoopKind::kVelocity) return {"rad/s", "V"};
  return {"Nm", "rad/s"};
}

// Simulates a loop whose inputs are (r, d, n) and outputs are (u, v, y, z).
// Only every record_every-th sample is stored; metrics use every sample.
SimResult run_loop(std::string controller, const LinearSystem& sys, const Scenario& sc) {
  sc.validate();
  const DiscreteSystem disc = discretize_zoh(sys, sc.dt);
  const size_t count = sc.samples();
  const size_t stride = static_cast<size_t>(sc.record_every);
  const size_t kept = (count - 1) / stride + 1;
  const double limit = 1e6 * std::max(std::fabs(sc.reference.amplitude), 1.0);
  const bool step = sc.reference.kind == ReferenceSpec::Kind::kStep && sc.reference.amplitude != 0.0;
  const size_t rms_start = static_cast<size_t>(std::floor(0.2 * static_cast<double>(count)));
  const size_t tail = std::max<size_t>(1, static_cast<size_t>(std::ceil(0.05 * static_cast<double>(count))));

  constexpr int kOutputs = 4;
  std::array<std::vector<double>, 3 + kOutputs> rec;
  for (auto& v : rec) v.reserve(kept);
  std::vector<double> z_full;
  if (step) z_full.reserve(count);

  ScenarioSource source(sc);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(disc.ad.rows());
  Eigen::VectorXd next(x.size());
  Eigen::Vector3d w;
  Eigen::Matrix<double, kOutputs, 1> y;
  double sq = 0.0;
  double tail_sum = 0.0;
  for (size_t k = 0; k < count; ++k) {
    source.next(w(0), w(1), w(2));
    y.noalias() = disc.c * x;
    y.noalias() += disc.d * w;
    for (int i = 0; i < kOutputs; ++i) {
      if (!std::isfinite(y(i)) || std::fabs(y(i)) > limit) {
        throw Error(ErrorCode::kUnstableLoop, controller + " loop diverged in scenario '" + sc.name + "'");
      }
    }
    const double e = w(0) - y(3);
    if (k >= rms_start) sq += e * e;
    if (k >= count - tail) tail_sum += e;
    if (step) z_full.push_back(y(3));
    if (k % stride == 0) {
      for (int i = 0; i < 3; ++i) rec[static_cast<size_t>(i)].push_back(w(i));
      for (int i = 0; i < kOutputs; ++i) rec[static_cast<size_t>(3 + i)].push_back(y(i));
    }
    next.noalias() = disc.ad * x;
    next.noalias() += disc.bd * w;
    x.swap(next);
  }

  SimMetrics m;
  m.rms_tracking_error = std::sqrt(sq / static_cast<double>(count - rms_start));
  m.steady_state_error = std::fabs(tail_sum / static_cast<double>(tail));
  m.rise_time = m.overshoot = m.settling_time = kNaN;
  if (step) {
    try {
      const StepMetrics s = step_metrics(z_full, sc.dt, sc.reference.amplitude);
      m.rise_time = s.rise_time;
      m.overshoot = s.overshoot;
      m.settling_time = s.settling_time;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNotSettled) throw;
    }
  }

  SimResult res;
  res.controller = std::move(controller);
  res.scenario = sc;
  res.metrics = m;
  const Units units = units_for(sc.loop);
  const double rdt = sc.dt * static_cast<double>(stride);
  const char* const names[] = {"r", "d", "n", "u", "v", "y", "z"};
  const std::string* const unit[] = {&units.reference, &units.actuation, &units.reference, &units.actuation,
                                     &units.actuation, &units.reference, &units.reference};
  for (size_t i = 0; i < rec.size(); ++i) res.traces.push_back({names[i], Signal{rdt, std::move(rec[i]), *unit[i]}});
  return res;
}

// Unity-feedback loop u = C (r - y), v = u + d, z = P v, y = z + n.
LinearSystem unity_feedback_system(const RationalTf& plant, const RationalTf& c) {
  BlockDiagram bd(3);
  const int pb = bd.add_block(plant);
  const int cb = bd.add_block(c);
  const auto r = bd.input(0);
  const auto d = bd.input(1);
  const auto n = bd.input(2);
  const auto u = bd.output_of(cb);
  const auto z = bd.output_of(pb);
  const auto y = z + n;
  bd.connect(cb, r - y);
  bd.connect(pb, u + d);
  bd.add_output(u);
  bd.add_output(u + d);
  bd.add_output(y);
  bd.add_output(z);
  return bd.build();
}

}  // namespace

void Scenario::validate() const {
  bad_spec(std::isfinite(duration) && duration > 0.0, "duration must be positive");
  bad_spec(std::isfinite(dt) && dt > 0.0, "dt must be positive");
  bad_spec(dt <= duration, "dt must not exceed the duration");
  bad_spec(record_every >= 1, "record_every must be at least 1");
  bad_spec(std::isfinite(reference.amplitude), "reference amplitude must be finite");
  if (reference.kind == ReferenceSpec::Kind::kSinusoid) {
    bad_spec(std::isfinite(reference.freq_hz) && reference.freq_hz > 0.0, "sinusoid frequency must be positive");
    bad_spec(duration * reference.freq_hz >= 10.0 - 1e-9, "sinusoid scenarios must span at least 10 periods");
  }
  validate_noise(disturbance, "disturbance");
  validate_noise(noise, "noise");
}

size_t Scenario::samples() const { return static_cast<size_t>(std::floor(duration / dt + 1e-9)) + 1; }

double GaussianStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double GaussianStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(1.0 - u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

ScenarioSignals generate(const Scenario& sc) {
  sc.validate();
  const size_t count = sc.samples();
  const Units units = units_for(sc.loop);
  ScenarioSignals s{{sc.dt, std::vector<double>(count), units.reference},
                    {sc.dt, std::vector<double>(count), units.actuation},
                    {sc.dt, std::vector<double>(count), units.reference}};
  ScenarioSource source(sc);
  for (size_t k = 0; k < count; ++k) source.next(s.r.samples[k], s.d.samples[k], s.n.samples[k]);
  return s;
}

const Signal& SimResult::trace(const std::string& name) const {
  for (const auto& [n, s] : traces) {
    if (n == name) return s;
  }
  throw Error(ErrorCode::kInvalidArgument, "no trace named '" + name + "'");
}

SimResult run_2dof(const RationalTf& plant, const TwoDofController& ctl, const Scenario& sc) {
  const CoprimeFactors& f = ctl.factors;
  BlockDiagram bd(3);
  const int pb = bd.add_block(plant);
  const int q1b = bd.add_block(ctl.q1);
  const int q2b = bd.add_block(ctl.q2);
  const int mb = bd.add_block(f.m);
  const int nb = bd.add_block(f.n);
  const int yb = bd.add_block(f.y);
  const int xb = bd.add_block(f.one_minus_x);

  const auto r = bd.input(0);
  const auto d = bd.input(1);
  const auto n = bd.input(2);
  const auto z = bd.output_of(pb);
  const auto y = z + n;
  const auto u = bd.output_of(q1b) - bd.output_of(yb) - bd.output_of(q2b) + bd.output_of(xb);
  bd.connect(q1b, r);
  bd.connect(yb, y);
  bd.connect(mb, y);
  bd.connect(nb, u);
  bd.connect(q2b, bd.output_of(mb) - bd.output_of(nb));
  bd.connect(xb, u);
  bd.connect(pb, u + d);
  bd.add_output(u);
  bd.add_output(u + d);
  bd.add_output(y);
  bd.add_output(z);
  return run_loop("2dof", bd.build(), sc);
}

RationalTf pd_controller(double kp, double kd, double rolloff) {
  if (!(rolloff > 0.0)) throw Error(ErrorCode::kInvalidArgument, "PD roll-off must be positive");
  return RationalTf(Polynomial{kp / rolloff + kd, kp}, Polynomial{1.0 / rolloff, 1.0});
}

SimResult run_pd(const RationalTf& plant, double kp, double kd, const Scenario& sc, double rolloff) {
  return run_loop("pd", unity_feedback_system(plant, pd_controller(kp, kd, rolloff)), sc);
}

SimResult run_velocity(const MotorParams& motor, const PiGains& gains, const Scenario& sc) {
  if (sc.loop != LoopKind::kVelocity) throw Error(ErrorCode::kBadSpec, "scenario is not a velocity-loop scenario");
  return run_loop("pi", unity_feedback_system(velocity_plant(motor), pi_controller(gains)), sc);
}

Comparison compare(const SimResult& a, const SimResult& b) {
  if (!(a.scenario == b.scenario)) {
    throw Error(ErrorCode::kScenarioMismatch, "results come from different scenarios");
  }
  Comparison c;
  c.label_a = a.controller;
  c.label_b = b.controller;
  auto row = [&](const char* name, double SimMetrics::*field) {
    c.rows.push_back({name, a.metrics.*field, b.metrics.*field, a.metrics.*field - b.metrics.*field});
  };
  row("rise_time", &SimMetrics::rise_time);
  row("overshoot", &SimMetrics::overshoot);
  row("settling_time", &SimMetrics::settling_time);
  row("rms_tracking_error", &SimMetrics::rms_tracking_error);
  row("steady_state_error", &SimMetrics::steady_state_error);

  auto error_of = [](const SimResult& res) {
    const Signal& r = res.trace("r");
    const Signal& z = res.trace("z");
    Signal e{r.dt, std::vector<double>(r.samples.size()), r.unit};
    for (size_t k = 0; k < e.samples.size(); ++k) e.samples[k] = r.samples[k] - z.samples[k];
    return e;
  };
  c.error_a = error_of(a);
  c.error_b = error_of(b);
  c.error_delta = c.error_a;
  for (size_t k = 0; k < c.error_delta.samples.size(); ++k) c.error_delta.samples[k] -= c.error_b.samples[k];
  return c;
}

}  // namespace cablesea
