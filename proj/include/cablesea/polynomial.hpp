#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace cablesea {

/// Default absolute tolerance, applied to frequency-scaled coefficients/roots.
inline constexpr double kDefaultTol = 1e-9;

/// Relative root distance below which two roots are treated as common.
inline constexpr double kCoprimeTol = 1e-6;

/// Real univariate polynomial in the Laplace variable s.
///
/// Coefficients are stored highest degree first, so {1, 3, 2} is s^2 + 3s + 2.
/// Leading zeros are trimmed on construction; the zero polynomial has an empty
/// coefficient list and degree -1.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);
  Polynomial(std::initializer_list<double> coeffs);

  static Polynomial constant(double c);
  /// s^k.
  static Polynomial monomial(int k, double c = 1.0);
  /// leading * prod(s - r_i); the imaginary residue of the product is dropped,
  /// so the roots should be closed under conjugation.
  static Polynomial from_roots(std::span<const std::complex<double>> roots,
                               double leading = 1.0);

  const std::vector<double>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  double leading() const { return coeffs_.empty() ? 0.0 : coeffs_.front(); }
  /// Coefficient of s^power (0 when out of range).
  double coeff(int power) const;

  double operator()(double s) const;
  std::complex<double> operator()(std::complex<double> s) const;

  Polynomial derivative() const;
  /// p(scale * t) as a polynomial in t.
  Polynomial scale_variable(double scale) const;
  /// Coefficientwise absolute values.
  Polynomial abs() const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(const Polynomial& rhs);
  Polynomial& operator*=(double k);

  friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
  friend Polynomial operator-(Polynomial lhs, const Polynomial& rhs) { return lhs -= rhs; }
  friend Polynomial operator*(Polynomial lhs, const Polynomial& rhs) { return lhs *= rhs; }
  friend Polynomial operator*(Polynomial lhs, double k) { return lhs *= k; }
  friend Polynomial operator*(double k, Polynomial rhs) { return rhs *= k; }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim();

  std::vector<double> coeffs_;
};

Polynomial add(const Polynomial& lhs, const Polynomial& rhs);
Polynomial mul(const Polynomial& lhs, const Polynomial& rhs);

/// p(-s): the coefficient of s^k is multiplied by (-1)^k.
Polynomial reflect(const Polynomial& p);

/// Human-readable form, e.g. "0.2034*s^3 + 245.1*s^2 + 2.848e+06*s + 5.761e+08".
std::string to_string(const Polynomial& p, int precision = 6);

/// Geometric mean of the magnitudes of the nonzero roots. Substituting
/// s = scale * t brings those roots to unit magnitude on average, which is
/// how every routine below tames the wide coefficient spread of SEA plants.
double frequency_scale(const Polynomial& p);

/// All complex roots with multiplicity, via eigenvalues of the balanced
/// companion matrix of the frequency-scaled polynomial followed by a guarded
/// Newton polish. Complex roots are returned in exact conjugate pairs.
/// Throws kZeroPolynomial / kConstantPolynomial.
std::vector<std::complex<double>> roots(const Polynomial& p);

/// True iff every root has real part < -tol * frequency_scale(p).
/// Nonzero constants are Hurwitz (no roots).
bool is_hurwitz(const Polynomial& p, double tol = kDefaultTol);

/// False if some root of a lies within rel_tol * |root| of a root of b.
bool are_coprime(const Polynomial& a, const Polynomial& b, double rel_tol = kCoprimeTol);

/// Stable d with d(-s)d(s) = a(-s)a(s) + b(-s)b(s) and leading coefficient |a_0|.
///
/// The even right-hand side is a polynomial in w = s^2 of degree deg(a); its
/// roots are found in w and mapped to the left half-plane square root, which
/// halves the degree handed to the eigenvalue solver.
/// Throws kNotCoprime, kImaginaryAxisRoot, kDegreeMismatch.
Polynomial spectral_factor(const Polynomial& a, const Polynomial& b, double tol = kDefaultTol);

struct DiophantineSolution {
  Polynomial p;
  Polynomial q;
};

/// Unique (p, q) with deg p = n, deg q <= n-1 and a p + b q = target, where
/// n = deg a and deg target = 2n. Solved as a (2n+1)-square Sylvester system
/// in the frequency-scaled variable.
/// Throws kDegreeMismatch, kSingularSylvester.
DiophantineSolution solve_diophantine(const Polynomial& a, const Polynomial& b,
                                      const Polynomial& target);

/// max_k |lhs_k - rhs_k| / scale_k, where scale_k is the magnitude of the
/// terms that produced coefficient k. Used for identity checks whose
/// coefficients span many decades.
double coefficient_mismatch(const Polynomial& lhs, const Polynomial& rhs,
                            const Polynomial& scale);

/// Relative residual of d(-s)d(s) = a(-s)a(s) + b(-s)b(s).
double spectral_residual(const Polynomial& a, const Polynomial& b, const Polynomial& d);

/// Relative residual of a p + b q = target.
double diophantine_residual(const Polynomial& a, const Polynomial& b, const Polynomial& p,
                            const Polynomial& q, const Polynomial& target);

}  // namespace cablesea
