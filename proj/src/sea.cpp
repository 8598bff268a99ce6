#include "cablesea/sea.hpp"

#include <cmath>
#include <string>

#include "cablesea/error.hpp"

namespace cablesea {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

Polynomial motor_denominator(const MotorParams& m) {
  const double jl = m.inertia * m.inductance;
  return Polynomial{1.0, (m.inertia * m.resistance + m.viscous_friction * m.inductance) / jl,
                    (m.viscous_friction * m.resistance + m.back_emf_constant * m.torque_constant) / jl};
}

double motor_gain(const MotorParams& m) { return m.torque_constant / (m.inertia * m.inductance); }

}  // namespace

void MotorParams::validate() const {
  require(inertia > 0.0, "motor inertia J must be positive");
  require(inductance > 0.0, "coil inductance L_a must be positive");
  require(resistance > 0.0, "winding resistance R_a must be positive");
  require(torque_constant > 0.0, "torque constant K_t must be positive");
  require(back_emf_constant >= 0.0, "back-emf constant K_b must be non-negative");
  require(viscous_friction >= 0.0, "viscous friction K_f must be non-negative");
}

void SeaParams::validate() const {
  motor.validate();
  require(spring_stiffness > 0.0, "spring stiffness K_s must be positive");
  require(gear_ratio > 0.0, "gear ratio K_g must be positive");
  require(spring_damping >= 0.0, "spring damping C_s must be non-negative");
  require(spring_inertia >= 0.0, "spring inertia M_s must be non-negative");
  require(load_inertia >= 0.0, "load inertia J_l must be non-negative");
}

std::pair<double, double> motor_poles(const MotorParams& m) {
  const Polynomial den = motor_denominator(m);
  const double b = den.coeff(1);
  const double c = den.coeff(0);
  const double disc = b * b - 4.0 * c;
  if (disc < 0.0) throw Error(ErrorCode::kOverdampedRequired, "velocity plant has complex poles");
  // Rates are the negated roots; avoid cancellation for the small one.
  const double fast = 0.5 * (b + std::sqrt(disc));
  const double slow = fast != 0.0 ? c / fast : 0.0;
  return {slow, fast};
}

RationalTf velocity_plant(const MotorParams& m) {
  m.validate();
  motor_poles(m);
  return RationalTf(Polynomial::constant(motor_gain(m)), motor_denominator(m));
}

PiGains tune_pi(const MotorParams& m, double xi) {
  m.validate();
  if (!(xi > 0.0 && xi < 1.0)) throw Error(ErrorCode::kInvalidArgument, "damping ratio must lie in (0, 1)");
  const Polynomial den = motor_denominator(m);
  const double b = den.coeff(1);
  const double c = den.coeff(0);
  if (b * b - 4.0 * c < 0.0) throw Error(ErrorCode::kComplexPoles, "velocity plant has complex poles");
  const auto [p1, p2] = motor_poles(m);
  if (!(p1 > 0.0)) throw Error(ErrorCode::kInvalidArgument, "velocity plant needs two stable poles");
  if (p2 - p1 <= 1e-6 * p2) throw Error(ErrorCode::kRepeatedPoles, "velocity plant poles coincide");

  PiGains g;
  g.xi = xi;
  g.p1 = p1;
  g.p2 = p2;
  g.omega_n = p2 / (2.0 * xi);
  g.kpv = g.omega_n * g.omega_n / motor_gain(m);
  g.kiv = p1 * g.kpv;
  return g;
}

PiGains pi_from_gains(const MotorParams& m, double kpv, double kiv) {
  m.validate();
  if (!(kpv > 0.0) || !(kiv >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "PI gains must be positive");
  const auto [p1, p2] = motor_poles(m);
  PiGains g;
  g.kpv = kpv;
  g.kiv = kiv;
  g.p1 = p1;
  g.p2 = p2;
  g.omega_n = std::sqrt(kpv * motor_gain(m));
  g.xi = p2 / (2.0 * g.omega_n);
  return g;
}

RationalTf pi_controller(const PiGains& g) {
  return RationalTf(Polynomial{g.kpv, g.kiv}, Polynomial{1.0, 0.0});
}

RationalTf velocity_closed_loop(const MotorParams& m, const PiGains& g, bool exact_cancellation) {
  if (exact_cancellation) {
    const double wn2 = g.omega_n * g.omega_n;
    return RationalTf(Polynomial::constant(wn2), Polynomial{1.0, 2.0 * g.xi * g.omega_n, wn2});
  }
  // K (K_pv s + K_iv) / (s den(s) + K (K_pv s + K_iv)), assembled on the raw
  // polynomials so an inexact p1 cancellation survives.
  const Polynomial forward = Polynomial{g.kpv, g.kiv} * motor_gain(m);
  const Polynomial closed = Polynomial{1.0, 0.0} * motor_denominator(m) + forward;
  return RationalTf(forward, closed);
}

RationalTf spring_torque_tf(const SeaParams& p) {
  p.validate();
  return RationalTf(Polynomial{p.spring_inertia, p.spring_damping, p.spring_stiffness},
                    Polynomial{p.gear_ratio, 0.0});
}

RationalTf torque_plant(const SeaParams& p, const PiGains& g) {
  p.validate();
  return series(velocity_closed_loop(p.motor, g, false), spring_torque_tf(p));
}

}  // namespace cablesea
