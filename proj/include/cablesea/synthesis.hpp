#pragma once

#include <array>
#include <span>
#include <vector>

#include "cablesea/lti.hpp"

namespace cablesea {

/// Optimal-transient stabilizer C0 = q/p for a strictly proper plant b/a,
/// with a p + b q = d^2 and d the spectral factor of a(-s)a(s) + b(-s)b(s).
struct OptimalStabilizer {
  Polynomial a;  ///< plant denominator (monic)
  Polynomial b;  ///< plant numerator
  Polynomial p;
  Polynomial q;
  Polynomial d;
  /// ||(d-a)/d||^2 + ||b/d||^2 + ||(d-p)/d||^2 + ||q/d||^2
  double j_star = 0.0;

  RationalTf controller() const { return {q, p}; }
};

/// Throws the errors of spectral_factor / solve_diophantine, and
/// kNotStrictlyProper for a plant that is not strictly proper.
OptimalStabilizer optimal_stabilizer(const RationalTf& plant);

using GangOfFour = std::array<std::array<RationalTf, 2>, 2>;

/// [[PC/(1+PC), C/(1+PC)], [P/(1+PC), -PC/(1+PC)]].
GangOfFour gang_of_four(const RationalTf& plant, const RationalTf& c);

/// Internal stability: all four gang-of-four entries stable.
bool internally_stable(const RationalTf& plant, const RationalTf& c);

/// Sum of impulse-response energies of the four gang-of-four entries.
/// Throws kUnstable for a loop that is not internally stable and
/// kInfiniteCost when an entry has direct feedthrough.
double transient_cost(const RationalTf& plant, const RationalTf& c);

/// Stable coprime factors over d: M = a/d, N = b/d, X = p/d, Y = q/d, with
/// P = N/M, C0 = Y/X and M X + N Y = 1.
struct CoprimeFactors {
  RationalTf m;
  RationalTf n;
  RationalTf x;
  RationalTf y;
  /// 1 - X = (d - p)/d, strictly proper; lets X^-1 be realized in a loop.
  RationalTf one_minus_x;
};

CoprimeFactors coprime_factors(const OptimalStabilizer& stab, const RationalTf& plant);

/// max |M X + N Y - 1| over the given frequencies (rad/s).
double bezout_residual(const CoprimeFactors& f, std::span<const double> omegas);

/// Frequencies log-spaced over [lo, hi], count points inclusive.
std::vector<double> log_frequencies(double lo, double hi, int count);

/// omega^2 / (s^2 + 2 xi omega s + omega^2).
RationalTf second_order(double omega, double xi);

/// Q1 = omega_bar^2 / (N (s^2 + 2 xi_bar omega_bar s + omega_bar^2)), so that
/// N Q1 is the prescribed second-order response. Properness of the result is
/// left to the caller to inspect.
/// Throws kNonMinimumPhasePlant if N has a zero outside the open left half-plane.
RationalTf design_q1(const CoprimeFactors& f, double omega_bar, double xi_bar);

/// Unity-gain first-order low-pass with its pole at 2 pi corner_hz.
RationalTf design_q2(double corner_hz);

struct TwoDofController {
  CoprimeFactors factors;
  RationalTf q1;
  RationalTf q2;
  RationalTf c1;  ///< Q1 / (X - N Q2), acts on the reference
  RationalTf c2;  ///< (Y + M Q2) / (X - N Q2), acts on the measurement
};

/// Throws kUnstable for unstable Q1/Q2 and kDegenerateDenominator if
/// X - N Q2 vanishes identically.
TwoDofController assemble_2dof(const CoprimeFactors& f, const RationalTf& q1, const RationalTf& q2);

/// Closed-loop maps of the loop u = C1 r - C2 y, v = u + d, z = P v,
/// y = z + n. Rows are (u, v, y, z); dn columns are (d, n).
template <typename T>
struct ClosedLoopMaps {
  std::array<T, 4> r;
  std::array<std::array<T, 2>, 4> dn;
};

/// Lumped maps computed from C1, C2 and P by rational arithmetic.
ClosedLoopMaps<RationalTf> closed_loop_maps(const TwoDofController& ctl, const RationalTf& plant);

/// The same maps evaluated pointwise at s = j omega from C1, C2 and P.
ClosedLoopMaps<std::complex<double>> closed_loop_response(const TwoDofController& ctl,
                                                          const RationalTf& plant, double omega);

/// The Youla-form expressions: r maps [M, M, N, N] Q1 and the dn maps
/// base - [M, M, N, N] Q2 [N, M] evaluated at s = j omega.
ClosedLoopMaps<std::complex<double>> youla_response(const TwoDofController& ctl, double omega);

}  // namespace cablesea
