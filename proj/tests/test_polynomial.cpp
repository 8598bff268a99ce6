#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cablesea/error.hpp"
#include "cablesea/polynomial.hpp"
#include "support.hpp"

using namespace cablesea;
using testing::Complex;
using testing::check_code;

namespace {

bool close_coeffs(const Polynomial& got, const Polynomial& want, double tol) {
  if (got.degree() != want.degree()) return false;
  for (int k = 0; k <= want.degree(); ++k) {
    const double scale = std::max(1.0, std::fabs(want.coeff(k)));
    if (std::fabs(got.coeff(k) - want.coeff(k)) > tol * scale) return false;
  }
  return true;
}

std::vector<Complex> sorted_roots(const Polynomial& p) {
  std::vector<Complex> r = roots(p);
  std::sort(r.begin(), r.end(), [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return r;
}

}  // namespace

TEST_CASE("construction trims leading zeros") {
  const Polynomial p{0.0, 0.0, 1.0, 2.0};
  CHECK(p.degree() == 1);
  CHECK(p.coeffs() == std::vector<double>{1.0, 2.0});
  CHECK(Polynomial{0.0}.is_zero());
  CHECK(Polynomial{}.degree() == -1);
  CHECK(Polynomial{1.0, 3.0, 2.0}.coeff(0) == 2.0);
  CHECK(Polynomial{1.0, 3.0, 2.0}.coeff(7) == 0.0);
}

TEST_CASE("add") {
  CHECK(add({1.0, 1.0}, {1.0, 2.0}) == Polynomial{2.0, 3.0});
  const Polynomial p{3.0, -1.0, 4.0};
  CHECK(add(p, Polynomial{}) == p);
  const Polynomial collapsed = add({1.0, 0.0, 1.0}, {-1.0, 0.0, 0.0});
  CHECK(collapsed == Polynomial{1.0});
  CHECK(collapsed.degree() == 0);
}

TEST_CASE("mul") {
  CHECK(mul({1.0, 1.0}, {1.0, 2.0}) == Polynomial{1.0, 3.0, 2.0});
  const Polynomial p{3.0, -1.0, 4.0};
  CHECK(mul(p, Polynomial{1.0}) == p);
  CHECK(mul({1.0, 1.0}, {1.0, -1.0}) == Polynomial{1.0, 0.0, -1.0});
  CHECK(mul(p, Polynomial{}).is_zero());
}

TEST_CASE("reflect") {
  CHECK(reflect({1.0, 1.0}) == Polynomial{-1.0, 1.0});
  CHECK(reflect({1.0, 0.0, 0.0}) == Polynomial{1.0, 0.0, 0.0});
  CHECK(reflect({1.0, 0.0, 1.0, 0.0}) == Polynomial{-1.0, 0.0, -1.0, 0.0});
}

TEST_CASE("reflect is an involution") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> c(1 + trial % 7);
    for (double& x : c) x = g(rng);
    const Polynomial p(c);
    CHECK(reflect(reflect(p)) == p);
  }
}

TEST_CASE("add and mul are commutative and associative") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  auto rand_poly = [&](int n) {
    std::vector<double> c(static_cast<size_t>(n + 1));
    for (double& x : c) x = g(rng) * std::pow(10.0, g(rng));
    return Polynomial(c);
  };
  for (int trial = 0; trial < 100; ++trial) {
    const Polynomial a = rand_poly(trial % 5);
    const Polynomial b = rand_poly((trial + 2) % 6);
    const Polynomial c = rand_poly((trial + 4) % 4);
    CHECK(add(a, b) == add(b, a));
    CHECK(coefficient_mismatch(mul(a, b), mul(b, a), a.abs() * b.abs()) < 1e-12);
    const Polynomial scale_add = a.abs() + b.abs() + c.abs();
    CHECK(coefficient_mismatch(add(add(a, b), c), add(a, add(b, c)), scale_add) < 1e-12);
    const Polynomial scale_mul = a.abs() * b.abs() * c.abs();
    CHECK(coefficient_mismatch(mul(mul(a, b), c), mul(a, mul(b, c)), scale_mul) < 1e-12);
  }
}

TEST_CASE("evaluation, derivative, variable scaling") {
  const Polynomial p{2.0, -3.0, 1.0};
  CHECK(p(2.0) == doctest::Approx(3.0));
  const Complex v = p(Complex(0.0, 1.0));
  CHECK(v.real() == doctest::Approx(-1.0));
  CHECK(v.imag() == doctest::Approx(-3.0));
  CHECK(p.derivative() == Polynomial{4.0, -3.0});
  CHECK(p.scale_variable(2.0) == Polynomial{8.0, -6.0, 1.0});
}

TEST_CASE("from_roots") {
  const std::vector<Complex> r{{-1.0, 2.0}, {-1.0, -2.0}, {-3.0, 0.0}};
  CHECK(close_coeffs(Polynomial::from_roots(r, 2.0), Polynomial{2.0, 10.0, 22.0, 30.0}, 1e-14));
}

TEST_CASE("to_string") {
  CHECK(to_string(Polynomial{1.0, 3.0, 2.0}) == "1*s^2 + 3*s + 2");
  CHECK(to_string(Polynomial{-1.0, 0.0, -2.0}) == "-1*s^2 - 2");
  CHECK(to_string(Polynomial{}) == "0");
}

TEST_CASE("roots of simple polynomials") {
  const auto r1 = sorted_roots({1.0, 3.0, 2.0});
  REQUIRE(r1.size() == 2);
  CHECK(r1[0].real() == doctest::Approx(-2.0));
  CHECK(r1[1].real() == doctest::Approx(-1.0));
  CHECK(std::fabs(r1[0].imag()) < 1e-12);

  const auto r2 = sorted_roots({1.0, 0.0, 1.0});
  REQUIRE(r2.size() == 2);
  CHECK(std::fabs(r2[0].real()) < 1e-12);
  CHECK(r2[0].imag() == doctest::Approx(-1.0));
  CHECK(r2[1].imag() == doctest::Approx(1.0));
}

TEST_CASE("roots of the velocity-plant denominator match the quadratic formula") {
  const double b = 3340.0;
  const double c = 6.435e5;
  const double disc = std::sqrt(b * b - 4.0 * c);
  const double fast = -(b + disc) / 2.0;
  const double slow = c / fast;
  const auto r = sorted_roots({1.0, b, c});
  CHECK(testing::rel_err(r[0].real(), fast) < 1e-12);
  CHECK(testing::rel_err(r[1].real(), slow) < 1e-12);
  CHECK(r[1].real() == doctest::Approx(-205.3).epsilon(1e-3));
  CHECK(r[0].real() == doctest::Approx(-3134.7).epsilon(1e-3));
}

TEST_CASE("roots errors") {
  check_code(ErrorCode::kZeroPolynomial, [] { roots(Polynomial{}); });
  check_code(ErrorCode::kConstantPolynomial, [] { roots(Polynomial{4.0}); });
}

TEST_CASE("roots are accurate and conjugate-symmetric on random polynomials") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 8;
    const Polynomial p = testing::random_poly(rng, n, false, testing::log_uniform(rng, 1e-3, 1e3));
    const auto r = roots(p);
    REQUIRE(static_cast<int>(r.size()) == n);
    const Polynomial mag = p.abs();
    for (const Complex& z : r) {
      CHECK(std::abs(p(z)) <= 1e-9 * mag(std::abs(z)));
      if (z.imag() != 0.0) {
        CHECK(std::count(r.begin(), r.end(), std::conj(z)) >= 1);
      }
    }
  }
}

TEST_CASE("is_hurwitz") {
  CHECK(is_hurwitz({1.0, 1.0}));
  CHECK_FALSE(is_hurwitz({1.0, -1.0}));
  CHECK(is_hurwitz({1.0, 3340.0, 6.435e5}));
  CHECK_FALSE(is_hurwitz({1.0, 0.0, 1.0}));
  CHECK_FALSE(is_hurwitz({1.0, 1.0, 0.0}));
  CHECK(is_hurwitz({5.0}));
}

TEST_CASE("are_coprime") {
  CHECK(are_coprime({1.0, 1.0}, {1.0, 2.0}));
  CHECK_FALSE(are_coprime({1.0, 3.0, 2.0}, {1.0, 1.0}));
  CHECK_FALSE(are_coprime({1.0, 1.0 + 1e-9}, {1.0, 1.0}));
  CHECK(are_coprime({1.0, 1.0 + 1e-4}, {1.0, 1.0}));
  CHECK(are_coprime({1.0, 1.0}, {3.0}));
}

TEST_CASE("spectral_factor examples") {
  const Polynomial d1 = spectral_factor({1.0, 1.0}, {1.0});
  CHECK(close_coeffs(d1, Polynomial{1.0, std::sqrt(2.0)}, 1e-14));
  const Polynomial d2 = spectral_factor({1.0, 0.0}, {1.0});
  CHECK(close_coeffs(d2, Polynomial{1.0, 1.0}, 1e-14));
}

TEST_CASE("spectral_factor of the printed torque plant") {
  const Polynomial a{1.0, 3340.0, 3.817e6, 6.54e8, 0.0};
  const Polynomial b{0.2034, 245.1, 2.848e6, 5.761e8};
  const Polynomial d = spectral_factor(a, b);
  CHECK(d.degree() == 4);
  CHECK(d.leading() == 1.0);
  CHECK(is_hurwitz(d));
  // Independent check: the factorization identity evaluated on the imaginary axis.
  for (double w : {1.0, 30.0, 450.0, 3000.0, 1e5}) {
    const Complex s(0.0, w);
    const double lhs = std::norm(d(s));
    const double rhs = std::norm(a(s)) + std::norm(b(s));
    CHECK(testing::rel_err(lhs, rhs) < 1e-10);
  }
  CHECK(spectral_residual(a, b, d) < 1e-12);
}

TEST_CASE("spectral_factor errors") {
  check_code(ErrorCode::kNotCoprime, [] { spectral_factor({1.0, 3.0, 2.0}, {1.0, 1.0}); });
  check_code(ErrorCode::kDegreeMismatch, [] { spectral_factor({1.0, 1.0}, {1.0, 2.0}); });
  check_code(ErrorCode::kNotCoprime, [] { spectral_factor({1.0, 0.0, 1.0}, {}); });
  // Coprime, but a(-s)a(s) + b(-s)b(s) has roots within 1e-12 of the axis.
  check_code(ErrorCode::kImaginaryAxisRoot, [] { spectral_factor({1.0, 0.0, 1.0}, {1e-12}); });
}

TEST_CASE("spectral_factor identity on random plants") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const RationalTf g = testing::random_plant(rng, 6, trial % 2 == 0);
    const Polynomial d = spectral_factor(g.den(), g.num());
    CHECK(is_hurwitz(d));
    CHECK(d.leading() == doctest::Approx(std::fabs(g.den().leading())));
    CHECK(spectral_residual(g.den(), g.num(), d) < 1e-8);
  }
}

TEST_CASE("solve_diophantine examples") {
  const double r2 = std::sqrt(2.0);
  const DiophantineSolution s1 = solve_diophantine({1.0, 1.0}, {1.0}, {1.0, 2.0 * r2, 2.0});
  CHECK(close_coeffs(s1.p, Polynomial{1.0, 2.0 * r2 - 1.0}, 1e-14));
  CHECK(close_coeffs(s1.q, Polynomial{3.0 - 2.0 * r2}, 1e-14));

  const DiophantineSolution s2 = solve_diophantine({1.0, 0.0}, {1.0}, {1.0, 2.0, 1.0});
  CHECK(close_coeffs(s2.p, Polynomial{1.0, 2.0}, 1e-14));
  CHECK(close_coeffs(s2.q, Polynomial{1.0}, 1e-14));
}

TEST_CASE("solve_diophantine on the printed torque plant") {
  const Polynomial a{1.0, 3340.0, 3.817e6, 6.54e8, 0.0};
  const Polynomial b{0.2034, 245.1, 2.848e6, 5.761e8};
  const Polynomial d = spectral_factor(a, b);
  const Polynomial target = d * d;
  const DiophantineSolution s = solve_diophantine(a, b, target);
  CHECK(s.p.degree() == 4);
  CHECK(s.q.degree() <= 3);
  CHECK(diophantine_residual(a, b, s.p, s.q, target) < 1e-10);
}

TEST_CASE("solve_diophantine errors") {
  check_code(ErrorCode::kDegreeMismatch, [] { solve_diophantine({1.0, 1.0}, {1.0}, {1.0, 1.0, 1.0, 1.0}); });
  check_code(ErrorCode::kSingularSylvester,
             [] { solve_diophantine({1.0, 3.0, 2.0}, {1.0, 1.0}, {1.0, 4.0, 6.0, 4.0, 1.0}); });
}

TEST_CASE("solve_diophantine residual on random coprime inputs") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 200; ++trial) {
    const RationalTf g = testing::random_plant(rng, 5, trial % 3 != 0);
    const int n = g.den().degree();
    const Polynomial target = testing::random_poly(rng, 2 * n, true);
    const DiophantineSolution s = solve_diophantine(g.den(), g.num(), target);
    CHECK(s.p.degree() == n);
    CHECK(s.q.degree() <= n - 1);
    CHECK(diophantine_residual(g.den(), g.num(), s.p, s.q, target) < 1e-8);
  }
}
