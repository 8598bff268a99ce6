#include <doctest.h>

#include <cmath>
#include <random>

#include "cablesea/error.hpp"
#include "cablesea/sea.hpp"
#include "support.hpp"

using namespace cablesea;
using testing::Complex;
using testing::check_code;
using testing::kPaperPlant;
using testing::rel_err;

namespace {

// omega / v_a straight from the coupled electrical and mechanical equations:
// v_a = (L s + R) i + K_b omega,  K_t i = (J s + K_f) omega.
Complex motor_response(const MotorParams& m, Complex s) {
  return m.torque_constant /
         ((m.inertia * s + m.viscous_friction) * (m.inductance * s + m.resistance) +
          m.back_emf_constant * m.torque_constant);
}

MotorParams random_motor(std::mt19937_64& rng) {
  MotorParams m;
  for (;;) {
    m.inertia = testing::log_uniform(rng, 1e-6, 1e-4);
    m.inductance = testing::log_uniform(rng, 1e-4, 1e-2);
    m.resistance = testing::log_uniform(rng, 0.5, 10.0);
    m.torque_constant = testing::log_uniform(rng, 0.01, 0.2);
    m.back_emf_constant = m.torque_constant;
    m.viscous_friction = testing::log_uniform(rng, 1e-7, 1e-4);
    const auto b = (m.inertia * m.resistance + m.viscous_friction * m.inductance) / (m.inertia * m.inductance);
    const auto c = (m.viscous_friction * m.resistance + m.back_emf_constant * m.torque_constant) /
                   (m.inertia * m.inductance);
    if (b * b > 4.5 * c) return m;
  }
}

}  // namespace

TEST_CASE("velocity plant matches the printed reference build") {
  const RationalTf g = velocity_plant(MotorParams{});
  REQUIRE(g.den().degree() == 2);
  CHECK(rel_err(g.num().coeff(0), 1.217e7) < 5e-3);
  CHECK(rel_err(g.den().coeff(1), 3340.0) < 5e-3);
  CHECK(rel_err(g.den().coeff(0), 6.435e5) < 5e-3);
}

TEST_CASE("velocity plant agrees with the motor equations") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const MotorParams m = random_motor(rng);
    const RationalTf g = velocity_plant(m);
    for (double w : {1.0, 100.0, 1e4}) {
      const Complex want = motor_response(m, Complex(0.0, w));
      CHECK(std::abs(g(Complex(0.0, w)) - want) < 1e-10 * std::abs(want));
    }
    const double dc = m.torque_constant /
                      (m.viscous_friction * m.resistance + m.back_emf_constant * m.torque_constant);
    CHECK(rel_err(g.dc_gain(), dc) < 1e-10);
  }
}

TEST_CASE("friction-free motor without back emf has a pole at the origin") {
  MotorParams m;
  m.viscous_friction = 0.0;
  m.back_emf_constant = 0.0;
  const RationalTf g = velocity_plant(m);
  CHECK(rel_err(g.num().coeff(0), m.torque_constant / (m.inertia * m.inductance)) < 1e-14);
  CHECK(rel_err(g.den().coeff(1), m.resistance / m.inductance) < 1e-14);
  CHECK(g.den().coeff(0) == 0.0);
}

TEST_CASE("motor parameter validation") {
  MotorParams m;
  m.torque_constant = 0.0;
  check_code(ErrorCode::kInvalidArgument, [&] { velocity_plant(m); });
  m = MotorParams{};
  m.inertia = -1.0;
  check_code(ErrorCode::kInvalidArgument, [&] { velocity_plant(m); });
  m = MotorParams{};
  m.back_emf_constant = -0.1;
  check_code(ErrorCode::kInvalidArgument, [&] { velocity_plant(m); });

  SeaParams p;
  p.spring_stiffness = 0.0;
  check_code(ErrorCode::kInvalidArgument, [&] { spring_torque_tf(p); });
  p = SeaParams{};
  p.gear_ratio = -156.0;
  check_code(ErrorCode::kInvalidArgument, [&] { spring_torque_tf(p); });
  p = SeaParams{};
  p.spring_damping = -1.0;
  check_code(ErrorCode::kInvalidArgument, [&] { spring_torque_tf(p); });
}

TEST_CASE("underdamped motor is rejected") {
  MotorParams m;
  m.inertia = 1.0;
  m.inductance = 1.0;
  m.resistance = 2.0;
  m.viscous_friction = 0.0;
  m.torque_constant = 2.0;
  m.back_emf_constant = 2.0;
  check_code(ErrorCode::kOverdampedRequired, [&] { velocity_plant(m); });
  check_code(ErrorCode::kComplexPoles, [&] { tune_pi(m, 0.7); });
}

TEST_CASE("coincident motor poles are rejected") {
  MotorParams m;
  m.inertia = 1.0;
  m.inductance = 1.0;
  m.resistance = 2.0;
  m.viscous_friction = 0.0;
  m.torque_constant = 1.0;
  m.back_emf_constant = 1.0;
  check_code(ErrorCode::kRepeatedPoles, [&] { tune_pi(m, 0.7); });
}

TEST_CASE("motor poles of the reference build") {
  const MotorParams m;
  const auto [p1, p2] = motor_poles(m);
  const double b = 3340.15;
  CHECK(p1 == doctest::Approx(205.3).epsilon(2e-3));
  CHECK(p2 == doctest::Approx(3134.7).epsilon(2e-3));
  CHECK(rel_err(p1 + p2, b) < 1e-4);
  for (const Complex& r : roots(velocity_plant(m).den())) {
    const double rate = -r.real();
    CHECK(std::min(rel_err(rate, p1), rel_err(rate, p2)) < 1e-6);
  }
}

TEST_CASE("tune_pi reproduces the printed gains") {
  const PiGains g = tune_pi(MotorParams{}, 0.88);
  CHECK(rel_err(g.kpv, 0.26) < 0.02);
  CHECK(rel_err(g.kiv, 53.5) < 0.02);
  CHECK(g.omega_n == doctest::Approx(1781.0).epsilon(2e-3));
}

TEST_CASE("tune_pi on a hand-worked plant") {
  // den = s^2 + 3 s + 2, poles at 1 and 2, gain K_t / (J L_a) = 1.
  MotorParams m;
  m.inertia = 1.0;
  m.inductance = 1.0;
  m.resistance = 2.0;
  m.viscous_friction = 1.0;
  m.torque_constant = 1.0;
  m.back_emf_constant = 0.0;
  const PiGains g = tune_pi(m, 0.5);
  CHECK(g.p1 == doctest::Approx(1.0));
  CHECK(g.p2 == doctest::Approx(2.0));
  CHECK(g.omega_n == doctest::Approx(2.0));
  CHECK(g.kpv == doctest::Approx(4.0));
  CHECK(g.kiv == doctest::Approx(4.0));
}

TEST_CASE("tune_pi rejects damping ratios outside (0, 1)") {
  const MotorParams m;
  for (double xi : {0.0, -0.3, 1.0, 1.5, std::nan("")}) {
    check_code(ErrorCode::kInvalidArgument, [&] { tune_pi(m, xi); });
  }
}

TEST_CASE("tune_pi invariants over random motors") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> xis(0.05, 0.99);
  for (int trial = 0; trial < 200; ++trial) {
    const MotorParams m = random_motor(rng);
    const PiGains g = tune_pi(m, xis(rng));
    CHECK(rel_err(g.kiv / g.kpv, g.p1) < 1e-9);
    CHECK(rel_err(2.0 * g.xi * g.omega_n, g.p2) < 1e-9);
    for (const Complex& r : roots(velocity_plant(m).den())) {
      const double rate = -r.real();
      CHECK(std::min(rel_err(rate, g.p1), rel_err(rate, g.p2)) < 1e-6);
    }
  }
}

TEST_CASE("pi_from_gains recovers the design of tuned gains") {
  const MotorParams m;
  const PiGains tuned = tune_pi(m, 0.88);
  const PiGains g = pi_from_gains(m, tuned.kpv, tuned.kiv);
  CHECK(rel_err(g.omega_n, tuned.omega_n) < 1e-12);
  CHECK(rel_err(g.xi, 0.88) < 1e-12);
  check_code(ErrorCode::kInvalidArgument, [&] { pi_from_gains(m, 0.0, 1.0); });
  check_code(ErrorCode::kInvalidArgument, [&] { pi_from_gains(m, 1.0, -1.0); });
}

TEST_CASE("velocity closed loop in both modes") {
  const MotorParams m;
  const PiGains tuned = tune_pi(m, 0.88);
  const RationalTf exact = velocity_closed_loop(m, tuned, true);
  CHECK(exact.order() == 2);
  CHECK(exact.dc_gain() == doctest::Approx(1.0));
  CHECK(exact.den().coeff(0) == doctest::Approx(tuned.omega_n * tuned.omega_n));

  const RationalTf printed = velocity_closed_loop(m, pi_from_gains(m, 0.26, 53.5), false);
  CHECK(printed.order() == 3);
  CHECK(printed.dc_gain() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(is_stable(printed));

  const RationalTf raw = velocity_closed_loop(m, tuned, false);
  for (double w = 1.0; w <= tuned.omega_n / 10.0; w *= 1.5) {
    const Complex a = freq_response(exact, w);
    CHECK(std::abs(freq_response(raw, w) - a) < 1e-2 * std::abs(a));
    CHECK(std::abs(freq_response(printed, w) - a) < 1e-2 * std::abs(a));
  }
}

TEST_CASE("spring torque transfer function") {
  const RationalTf t = spring_torque_tf(SeaParams{});
  CHECK(t.relative_degree() == -1);
  CHECK(!t.is_proper());
  // (1e-5 s^2 + 0.01 s + 138) / (156 s) with a monic denominator.
  CHECK(rel_err(t.num().coeff(2), 1e-5 / 156.0) < 1e-14);
  CHECK(rel_err(t.num().coeff(1), 0.01 / 156.0) < 1e-14);
  CHECK(rel_err(t.num().coeff(0), 138.0 / 156.0) < 1e-14);
  CHECK(t.den() == Polynomial({1.0, 0.0}));

  SeaParams rigid;
  rigid.spring_inertia = 0.0;
  rigid.spring_damping = 0.0;
  const RationalTf k = spring_torque_tf(rigid);
  CHECK(k.num().degree() == 0);
  CHECK(rel_err(k.num().coeff(0), 138.0 / 156.0) < 1e-14);
  CHECK(k.den() == Polynomial({1.0, 0.0}));
}

TEST_CASE("torque plant matches the printed coefficients") {
  const SeaParams p;
  const RationalTf plant = torque_plant(p, pi_from_gains(p.motor, 0.26, 53.5));
  REQUIRE(plant.num().degree() == 3);
  REQUIRE(plant.den().degree() == 4);
  for (int k = 0; k <= 3; ++k) {
    INFO("num s^" << k);
    CHECK(rel_err(plant.num().coeff(k), kPaperPlant.num().coeff(k)) < 0.01);
  }
  for (int k = 1; k <= 4; ++k) {
    INFO("den s^" << k);
    CHECK(rel_err(plant.den().coeff(k), kPaperPlant.den().coeff(k)) < 0.01);
  }
  CHECK(plant.den().coeff(0) == 0.0);
}

TEST_CASE("torque plant has one integrator and is minimum phase") {
  const SeaParams p;
  const RationalTf plant = torque_plant(p, pi_from_gains(p.motor, 0.26, 53.5));
  CHECK(!is_stable(plant));
  int origin = 0;
  for (const Complex& r : roots(plant.den())) {
    if (std::abs(r) < 1e-9) {
      ++origin;
    } else {
      CHECK(r.real() < 0.0);
    }
  }
  CHECK(origin == 1);
  CHECK(is_hurwitz(plant.num()));
  // Routh condition on the printed cubic numerator.
  CHECK(245.1 * 2.848e6 > 0.2034 * 5.761e8);
  CHECK(is_hurwitz(kPaperPlant.num()));
}
