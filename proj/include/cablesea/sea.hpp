#pragma once

#include <utility>

#include "cablesea/lti.hpp"

namespace cablesea {

/// Brushed DC motor. Coulomb friction and load torque are taken as zero
/// throughout, so they have no fields here.
struct MotorParams {
  double inertia = 6.96e-6;          ///< J, kg m^2
  double inductance = 0.62e-3;       ///< L_a, H
  double resistance = 2.07;          ///< R_a, Ohm
  double torque_constant = 0.0525;   ///< K_t, Nm/A
  double back_emf_constant = 0.0525; ///< K_b, V s/rad
  double viscous_friction = 1e-5;    ///< K_f, Nm/(rad/s)

  /// Throws kInvalidArgument unless J, L_a, R_a, K_t > 0 and K_b, K_f >= 0.
  void validate() const;
};

/// Cable-driven series elastic actuator. Defaults are the reference build.
struct SeaParams {
  MotorParams motor;
  double spring_stiffness = 138.0;  ///< K_s, Nm/rad
  double gear_ratio = 156.0;        ///< K_g, motor:output
  double spring_damping = 0.01;     ///< C_s, Nm/(rad/s)
  double spring_inertia = 1e-5;     ///< M_s, kg m^2
  /// J_l, kg m^2. Kept for completeness; the torque plant assumes a fixed load.
  double load_inertia = 0.1;

  void validate() const;
};

/// PI velocity-loop gains and the design quantities they came from.
struct PiGains {
  double kpv = 0.0;      ///< V/(rad/s)
  double kiv = 0.0;      ///< V/rad
  double omega_n = 0.0;  ///< rad/s
  double xi = 0.0;
  double p1 = 0.0;       ///< slow motor pole, rad/s
  double p2 = 0.0;       ///< fast motor pole, rad/s
};

/// omega(s) / v_a(s) = (K_t / J L_a) / (s^2 + (J R_a + K_f L_a)/(J L_a) s
///                                      + (K_f R_a + K_b K_t)/(J L_a)).
/// Throws kOverdampedRequired if the poles are complex.
RationalTf velocity_plant(const MotorParams& m);

/// Velocity-plant poles as positive rates {p1, p2}, p1 <= p2.
/// Throws kOverdampedRequired if the poles are complex.
std::pair<double, double> motor_poles(const MotorParams& m);

/// Pole-cancelling PI design: K_iv / K_pv = p1, 2 xi omega_n = p2,
/// K_pv = omega_n^2 J L_a / K_t.
/// Throws kInvalidArgument (xi outside (0,1)), kComplexPoles, kRepeatedPoles.
PiGains tune_pi(const MotorParams& m, double xi);

/// PiGains built from externally fixed gains (e.g. rounded values);
/// omega_n and xi are recovered from the resulting loop.
PiGains pi_from_gains(const MotorParams& m, double kpv, double kiv);

/// C_v(s) = K_pv + K_iv / s.
RationalTf pi_controller(const PiGains& g);

/// Unity-feedback PI velocity loop. With exact_cancellation the ideal
/// omega_n^2 / (s^2 + 2 xi omega_n s + omega_n^2) is returned; otherwise the
/// loop is closed on the actual polynomials (third order unless the gains
/// cancel p1 to within the coprimality tolerance).
RationalTf velocity_closed_loop(const MotorParams& m, const PiGains& g, bool exact_cancellation = false);

/// T_o(s) / omega(s) = (M_s s^2 + C_s s + K_s) / (K_g s) for a fixed load.
/// Improper; only meaningful in series with the velocity loop.
RationalTf spring_torque_tf(const SeaParams& p);

/// P(s) = T_o(s) / omega_d(s): the non-exact velocity loop in series with
/// the spring.
RationalTf torque_plant(const SeaParams& p, const PiGains& g);

}  // namespace cablesea
