#include "cablesea/synthesis.hpp"

#include <cmath>
#include <numbers>

#include "cablesea/error.hpp"

namespace cablesea {

namespace {

using Complex = std::complex<double>;

// d - p where both share the leading coefficient by construction; the
// rounding residue left in the leading slot is removed.
Polynomial strictly_proper_difference(const Polynomial& d, const Polynomial& p) {
  Polynomial diff = d - p;
  if (diff.degree() == d.degree() && std::fabs(diff.leading()) <= 1e-12 * std::fabs(d.leading())) {
    std::vector<double> c(diff.coeffs().begin() + 1, diff.coeffs().end());
    diff = Polynomial(std::move(c));
  }
  return diff;
}

}  // namespace

OptimalStabilizer optimal_stabilizer(const RationalTf& plant) {
  if (plant.is_zero()) throw Error(ErrorCode::kNotCoprime, "zero plant cannot be stabilized by feedback");
  if (!plant.is_strictly_proper()) throw Error(ErrorCode::kNotStrictlyProper, "plant must be strictly proper");

  OptimalStabilizer out;
  out.a = plant.den();
  out.b = plant.num();
  out.d = spectral_factor(out.a, out.b);
  DiophantineSolution pq = solve_diophantine(out.a, out.b, out.d * out.d);
  out.p = std::move(pq.p);
  out.q = std::move(pq.q);

  const Polynomial& d = out.d;
  out.j_star = h2_norm_sq(RationalTf(strictly_proper_difference(d, out.a), d)) +
               h2_norm_sq(RationalTf(out.b, d)) +
               h2_norm_sq(RationalTf(strictly_proper_difference(d, out.p), d)) +
               h2_norm_sq(RationalTf(out.q, d));
  return out;
}

GangOfFour gang_of_four(const RationalTf& plant, const RationalTf& c) {
  const RationalTf loop = series(plant, c);
  const RationalTf t = feedback(loop);
  return {{{t, feedback(c, plant)}, {feedback(plant, c), -t}}};
}

bool internally_stable(const RationalTf& plant, const RationalTf& c) {
  const GangOfFour g = gang_of_four(plant, c);
  for (const auto& row : g) {
    for (const RationalTf& entry : row) {
      if (!is_stable(entry)) return false;
    }
  }
  return true;
}

double transient_cost(const RationalTf& plant, const RationalTf& c) {
  const GangOfFour g = gang_of_four(plant, c);
  for (const auto& row : g) {
    for (const RationalTf& entry : row) {
      if (!is_stable(entry)) throw Error(ErrorCode::kUnstable, "closed loop is not internally stable");
    }
  }
  double cost = 0.0;
  for (const auto& row : g) {
    for (const RationalTf& entry : row) {
      if (!entry.is_strictly_proper()) {
        throw Error(ErrorCode::kInfiniteCost, "closed-loop entry has direct feedthrough; impulse energy is infinite");
      }
      cost += h2_norm_sq(entry);
    }
  }
  return cost;
}

CoprimeFactors coprime_factors(const OptimalStabilizer& stab, const RationalTf& plant) {
  if (plant.den() != stab.a || plant.num() != stab.b) {
    throw Error(ErrorCode::kInvalidArgument, "stabilizer was built for a different plant");
  }
  const Polynomial& d = stab.d;
  // a and d can share roots to well within the cancellation tolerance, so
  // the factors keep their exact polynomials.
  return {RationalTf::unreduced(stab.a, d), RationalTf::unreduced(stab.b, d), RationalTf::unreduced(stab.p, d),
          RationalTf::unreduced(stab.q, d), RationalTf::unreduced(strictly_proper_difference(d, stab.p), d)};
}

double bezout_residual(const CoprimeFactors& f, std::span<const double> omegas) {
  double worst = 0.0;
  for (double w : omegas) {
    const Complex s(0.0, w);
    worst = std::max(worst, std::abs(f.m(s) * f.x(s) + f.n(s) * f.y(s) - 1.0));
  }
  return worst;
}

std::vector<double> log_frequencies(double lo, double hi, int count) {
  std::vector<double> out(static_cast<size_t>(count));
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    out[static_cast<size_t>(i)] = std::pow(10.0, a + t * (b - a));
  }
  return out;
}

RationalTf second_order(double omega, double xi) {
  const double w2 = omega * omega;
  return RationalTf(Polynomial::constant(w2), Polynomial{1.0, 2.0 * xi * omega, w2});
}

RationalTf design_q1(const CoprimeFactors& f, double omega_bar, double xi_bar) {
  if (!(omega_bar > 0.0) || !(xi_bar > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "omega_bar and xi_bar must be positive");
  }
  if (!is_hurwitz(f.n.num())) {
    throw Error(ErrorCode::kNonMinimumPhasePlant, "plant numerator has zeros outside the open left half-plane");
  }
  return series(second_order(omega_bar, xi_bar), f.n.inverse());
}

RationalTf design_q2(double corner_hz) {
  if (!(corner_hz > 0.0)) throw Error(ErrorCode::kInvalidArgument, "Q2 corner frequency must be positive");
  const double wc = 2.0 * std::numbers::pi * corner_hz;
  return RationalTf(Polynomial::constant(wc), Polynomial{1.0, wc});
}

TwoDofController assemble_2dof(const CoprimeFactors& f, const RationalTf& q1, const RationalTf& q2) {
  if (!is_stable(q1) || !is_stable(q2)) throw Error(ErrorCode::kUnstable, "Q1 and Q2 must be stable");
  const RationalTf den = f.x - f.n * q2;
  if (den.is_zero()) throw Error(ErrorCode::kDegenerateDenominator, "X - N Q2 vanishes identically");
  TwoDofController ctl{f, q1, q2, {}, {}};
  ctl.c1 = q1 / den;
  ctl.c2 = (f.y + f.m * q2) / den;
  return ctl;
}

ClosedLoopMaps<RationalTf> closed_loop_maps(const TwoDofController& ctl, const RationalTf& plant) {
  const RationalTf& p = plant;
  const RationalTf sens = feedback(RationalTf::gain(1.0), p * ctl.c2);
  const RationalTf c1s = ctl.c1 * sens;
  const RationalTf pc1s = p * c1s;
  const RationalTf c2s = ctl.c2 * sens;
  const RationalTf pc2s = p * c2s;
  const RationalTf ps = p * sens;
  ClosedLoopMaps<RationalTf> m;
  m.r = {c1s, c1s, pc1s, pc1s};
  m.dn = {{{-pc2s, -c2s}, {sens, -c2s}, {ps, sens}, {ps, -pc2s}}};
  return m;
}

ClosedLoopMaps<std::complex<double>> closed_loop_response(const TwoDofController& ctl,
                                                          const RationalTf& plant, double omega) {
  const Complex s(0.0, omega);
  const Complex p = plant(s);
  const Complex c1 = ctl.c1(s);
  const Complex c2 = ctl.c2(s);
  const Complex sens = 1.0 / (1.0 + p * c2);
  ClosedLoopMaps<Complex> m;
  m.r = {c1 * sens, c1 * sens, p * c1 * sens, p * c1 * sens};
  m.dn = {{{-p * c2 * sens, -c2 * sens}, {sens, -c2 * sens}, {p * sens, sens}, {p * sens, -p * c2 * sens}}};
  return m;
}

ClosedLoopMaps<std::complex<double>> youla_response(const TwoDofController& ctl, double omega) {
  const Complex s(0.0, omega);
  const CoprimeFactors& f = ctl.factors;
  const Complex m = f.m(s);
  const Complex n = f.n(s);
  const Complex x = f.x(s);
  const Complex y = f.y(s);
  const Complex q1 = ctl.q1(s);
  const Complex q2 = ctl.q2(s);
  const std::array<Complex, 4> left{m, m, n, n};
  const std::array<Complex, 2> right{n, m};
  const std::array<std::array<Complex, 2>, 4> base{{{-n * y, -m * y}, {m * x, -m * y}, {n * x, m * x}, {n * x, -n * y}}};
  ClosedLoopMaps<Complex> out;
  for (size_t i = 0; i < 4; ++i) {
    out.r[i] = left[i] * q1;
    for (size_t j = 0; j < 2; ++j) out.dn[i][j] = base[i][j] - left[i] * q2 * right[j];
  }
  return out;
}

}  // namespace cablesea
