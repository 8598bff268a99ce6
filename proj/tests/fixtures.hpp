#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "cablesea/lti.hpp"
#include "cablesea/polynomial.hpp"

namespace testing {

using cablesea::Polynomial;
using cablesea::RationalTf;
using Complex = std::complex<double>;

/// The torque plant as printed for the reference build.
inline const RationalTf kPaperPlant(Polynomial{0.2034, 245.1, 2.848e6, 5.761e8},
                                    Polynomial{1.0, 3340.0, 3.817e6, 6.54e8, 0.0});

inline double rel_err(double got, double want) { return std::fabs(got - want) / std::fabs(want); }

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

/// Roots of random magnitude in [lo, hi]; each is a real root or a complex
/// pair. With stable = false the half-plane of each root is random too.
inline std::vector<Complex> random_roots(std::mt19937_64& rng, int degree, bool stable, double lo = 0.1,
                                         double hi = 1e3) {
  std::vector<Complex> r;
  std::uniform_real_distribution<double> angle(0.1, 1.4);
  std::bernoulli_distribution coin(0.5);
  while (static_cast<int>(r.size()) < degree) {
    const double mag = log_uniform(rng, lo, hi);
    const double sign = (stable || coin(rng)) ? -1.0 : 1.0;
    if (degree - static_cast<int>(r.size()) >= 2 && coin(rng)) {
      const double th = angle(rng);
      r.emplace_back(sign * mag * std::cos(th), mag * std::sin(th));
      r.emplace_back(sign * mag * std::cos(th), -mag * std::sin(th));
    } else {
      r.emplace_back(sign * mag, 0.0);
    }
  }
  return r;
}

inline Polynomial random_poly(std::mt19937_64& rng, int degree, bool stable, double leading = 1.0) {
  const std::vector<Complex> r = random_roots(rng, degree, stable);
  return Polynomial::from_roots(r, leading);
}

/// Strictly proper plant b/a with deg a in [1, max_degree].
inline RationalTf random_plant(std::mt19937_64& rng, int max_degree, bool stable) {
  std::uniform_int_distribution<int> deg(1, max_degree);
  const int n = deg(rng);
  std::uniform_int_distribution<int> mdeg(0, n - 1);
  const Polynomial a = random_poly(rng, n, stable);
  std::uniform_real_distribution<double> gain(0.2, 5.0);
  const Polynomial b = random_poly(rng, mdeg(rng), false, gain(rng) * std::pow(10.0, n - 1));
  return RationalTf(b, a);
}

/// Impulse-response energy of a strictly proper stable g by trapezoidal
/// integration of (C e^{At} B)^2 over [0, 40 / |slowest pole|].
inline double impulse_energy(const RationalTf& g, int steps = 200000) {
  const cablesea::StateSpace ss = cablesea::to_state_space(g);
  double slowest = HUGE_VAL;
  for (const Complex& r : cablesea::roots(g.den())) slowest = std::min(slowest, std::fabs(r.real()));
  const double horizon = 40.0 / slowest;
  const double h = horizon / steps;
  const Eigen::MatrixXd step = (ss.a * h).exp();
  Eigen::VectorXd x = ss.b;
  double prev = std::pow(ss.c.dot(x), 2);
  double sum = 0.0;
  for (int k = 0; k < steps; ++k) {
    x = step * x;
    const double cur = std::pow(ss.c.dot(x), 2);
    sum += 0.5 * h * (prev + cur);
    prev = cur;
  }
  return sum;
}

}  // namespace testing
