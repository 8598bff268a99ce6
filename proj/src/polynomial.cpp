#include "cablesea/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "cablesea/detail/balance.hpp"
#include "cablesea/error.hpp"

namespace cablesea {

namespace {

using Complex = std::complex<double>;

// Number of trailing zero coefficients, i.e. the multiplicity of the root at 0.
int zero_root_count(const std::vector<double>& c) {
  int count = 0;
  for (auto it = c.rbegin(); it != c.rend() && *it == 0.0; ++it) ++count;
  return count;
}

Complex horner(const std::vector<double>& c, Complex s) {
  Complex acc = 0.0;
  for (double v : c) acc = acc * s + v;
  return acc;
}

// Roots of a polynomial with nonzero constant term and degree >= 1, already
// scaled so its roots are O(1).
std::vector<Complex> companion_roots(const std::vector<double>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  if (n == 1) return {Complex(-c[1] / c[0], 0.0)};

  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) comp(0, j) = -c[j + 1] / c[0];
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  detail::balance(comp);

  Eigen::EigenSolver<Eigen::MatrixXd> solver(comp, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kInvalidArgument, "companion eigenvalue iteration failed");
  }
  const Eigen::VectorXcd ev = solver.eigenvalues();

  std::vector<double> dc(c.size() - 1);
  for (int i = 0; i < n; ++i) dc[i] = c[i] * static_cast<double>(n - i);

  // Polish roots in the closed upper half-plane and mirror the rest, which
  // keeps conjugate pairs exact.
  std::vector<Complex> out;
  out.reserve(n);
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    Complex r = ev[k];
    if (r.imag() < 0.0) continue;
    const bool real_root = r.imag() == 0.0;
    for (int iter = 0; iter < 3; ++iter) {
      const Complex f = horner(c, r);
      const Complex df = horner(dc, r);
      if (df == 0.0) break;
      Complex next = r - f / df;
      if (real_root) next = Complex(next.real(), 0.0);
      if (!(std::abs(horner(c, next)) < std::abs(f))) break;
      r = next;
    }
    out.push_back(r);
    if (!real_root) out.push_back(std::conj(r));
  }
  return out;
}

std::vector<double> trimmed(std::vector<double> c) {
  auto first = std::find_if(c.begin(), c.end(), [](double v) { return v != 0.0; });
  c.erase(c.begin(), first);
  return c;
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial::Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs) { trim(); }

Polynomial Polynomial::constant(double c) { return Polynomial(std::vector<double>{c}); }

Polynomial Polynomial::monomial(int k, double c) {
  std::vector<double> v(static_cast<size_t>(k) + 1, 0.0);
  v[0] = c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::from_roots(std::span<const std::complex<double>> roots, double leading) {
  std::vector<Complex> acc{Complex(leading, 0.0)};
  for (const Complex& r : roots) {
    std::vector<Complex> next(acc.size() + 1, Complex(0.0, 0.0));
    for (size_t i = 0; i < acc.size(); ++i) {
      next[i] += acc[i];
      next[i + 1] -= acc[i] * r;
    }
    acc = std::move(next);
  }
  std::vector<double> c(acc.size());
  std::transform(acc.begin(), acc.end(), c.begin(), [](Complex z) { return z.real(); });
  return Polynomial(std::move(c));
}

void Polynomial::trim() { coeffs_ = trimmed(std::move(coeffs_)); }

double Polynomial::coeff(int power) const {
  const int idx = degree() - power;
  if (power < 0 || idx < 0) return 0.0;
  return coeffs_[static_cast<size_t>(idx)];
}

double Polynomial::operator()(double s) const {
  double acc = 0.0;
  for (double v : coeffs_) acc = acc * s + v;
  return acc;
}

std::complex<double> Polynomial::operator()(std::complex<double> s) const {
  return horner(coeffs_, s);
}

Polynomial Polynomial::derivative() const {
  if (degree() < 1) return {};
  std::vector<double> d(coeffs_.size() - 1);
  const int n = degree();
  for (int i = 0; i < n; ++i) d[i] = coeffs_[i] * static_cast<double>(n - i);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::scale_variable(double scale) const {
  std::vector<double> c = coeffs_;
  double f = 1.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    *it *= f;
    f *= scale;
  }
  return Polynomial(std::move(c));
}

Polynomial Polynomial::abs() const {
  std::vector<double> c = coeffs_;
  for (double& v : c) v = std::fabs(v);
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (double& v : out.coeffs_) v = -v;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  const size_t n = std::max(coeffs_.size(), rhs.coeffs_.size());
  std::vector<double> sum(n, 0.0);
  std::copy(coeffs_.begin(), coeffs_.end(), sum.begin() + (n - coeffs_.size()));
  const size_t off = n - rhs.coeffs_.size();
  for (size_t i = 0; i < rhs.coeffs_.size(); ++i) sum[off + i] += rhs.coeffs_[i];
  coeffs_ = std::move(sum);
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) { return *this += -rhs; }

Polynomial& Polynomial::operator*=(const Polynomial& rhs) {
  if (is_zero() || rhs.is_zero()) {
    coeffs_.clear();
    return *this;
  }
  std::vector<double> prod(coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    for (size_t j = 0; j < rhs.coeffs_.size(); ++j) prod[i + j] += coeffs_[i] * rhs.coeffs_[j];
  }
  coeffs_ = std::move(prod);
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(double k) {
  for (double& v : coeffs_) v *= k;
  trim();
  return *this;
}

Polynomial add(const Polynomial& lhs, const Polynomial& rhs) { return lhs + rhs; }
Polynomial mul(const Polynomial& lhs, const Polynomial& rhs) { return lhs * rhs; }

Polynomial reflect(const Polynomial& p) {
  std::vector<double> c = p.coeffs();
  const int n = p.degree();
  for (int i = 0; i <= n; ++i) {
    if ((n - i) % 2 == 1) c[i] = -c[i];
  }
  return Polynomial(std::move(c));
}

std::string to_string(const Polynomial& p, int precision) {
  if (p.is_zero()) return "0";
  std::string out;
  const int n = p.degree();
  char buf[64];
  for (int i = 0; i <= n; ++i) {
    const double c = p.coeffs()[i];
    if (c == 0.0) continue;
    const int power = n - i;
    if (!out.empty()) out += c < 0 ? " - " : " + ";
    else if (c < 0) out += "-";
    std::snprintf(buf, sizeof buf, "%.*g", precision, std::fabs(c));
    out += buf;
    if (power == 1) out += "*s";
    else if (power > 1) out += "*s^" + std::to_string(power);
  }
  return out;
}

double frequency_scale(const Polynomial& p) {
  const int zeros = zero_root_count(p.coeffs());
  const int m = p.degree() - zeros;
  if (m <= 0) return 1.0;
  const double last = p.coeffs()[static_cast<size_t>(m)];
  const double scale = std::pow(std::fabs(last / p.leading()), 1.0 / m);
  return std::isfinite(scale) && scale > 0.0 ? scale : 1.0;
}

std::vector<std::complex<double>> roots(const Polynomial& p) {
  if (p.is_zero()) throw Error(ErrorCode::kZeroPolynomial, "roots of the zero polynomial");
  if (p.degree() == 0) throw Error(ErrorCode::kConstantPolynomial, "roots of a constant");

  std::vector<double> c = p.coeffs();
  const int zeros = zero_root_count(c);
  c.resize(c.size() - static_cast<size_t>(zeros));

  std::vector<Complex> out(static_cast<size_t>(zeros), Complex(0.0, 0.0));
  if (c.size() < 2) return out;

  const double scale = frequency_scale(Polynomial(c));
  std::vector<double> scaled = Polynomial(c).scale_variable(scale).coeffs();
  const double lead = scaled.front();
  for (double& v : scaled) v /= lead;

  for (const Complex& r : companion_roots(scaled)) out.push_back(r * scale);
  return out;
}

bool is_hurwitz(const Polynomial& p, double tol) {
  if (p.is_zero()) return false;
  if (p.degree() == 0) return true;
  const double bound = tol * frequency_scale(p);
  for (const Complex& r : roots(p)) {
    if (!(r.real() < -bound)) return false;
  }
  return true;
}

bool are_coprime(const Polynomial& a, const Polynomial& b, double rel_tol) {
  if (a.is_zero() && b.is_zero()) return false;
  if (a.is_zero()) return b.degree() == 0;
  if (b.is_zero()) return a.degree() == 0;
  if (a.degree() == 0 || b.degree() == 0) return true;
  if (zero_root_count(a.coeffs()) > 0 && zero_root_count(b.coeffs()) > 0) return false;
  const auto ra = roots(a);
  const auto rb = roots(b);
  for (const Complex& x : ra) {
    for (const Complex& y : rb) {
      if (std::abs(x - y) <= rel_tol * std::max(std::abs(x), std::abs(y))) return false;
    }
  }
  return true;
}

Polynomial spectral_factor(const Polynomial& a, const Polynomial& b, double tol) {
  if (a.degree() < 1) {
    throw Error(ErrorCode::kDegreeMismatch, "spectral factor needs deg(a) >= 1");
  }
  if (b.degree() >= a.degree()) {
    throw Error(ErrorCode::kDegreeMismatch, "spectral factor needs deg(b) < deg(a)");
  }
  if (!are_coprime(a, b)) {
    throw Error(ErrorCode::kNotCoprime, "a(s) and b(s) share a root");
  }

  const Polynomial even = reflect(a) * a + reflect(b) * b;
  const int n = a.degree();

  // even(s) = e(s^2); collect e highest first.
  std::vector<double> e(static_cast<size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) e[static_cast<size_t>(n - k)] = even.coeff(2 * k);
  const Polynomial ew(e);

  const double bound = tol * frequency_scale(even);
  std::vector<Complex> stable;
  stable.reserve(static_cast<size_t>(n));
  for (const Complex& w : roots(ew)) {
    const Complex s = -std::sqrt(w);
    if (!(s.real() < -bound)) {
      throw Error(ErrorCode::kImaginaryAxisRoot,
                  "a(-s)a(s) + b(-s)b(s) has a root on the imaginary axis");
    }
    stable.push_back(s);
  }
  return Polynomial::from_roots(stable, std::fabs(a.leading()));
}

DiophantineSolution solve_diophantine(const Polynomial& a, const Polynomial& b,
                                      const Polynomial& target) {
  const int n = a.degree();
  if (n < 1) throw Error(ErrorCode::kDegreeMismatch, "Diophantine solve needs deg(a) >= 1");
  if (b.degree() >= n) throw Error(ErrorCode::kDegreeMismatch, "Diophantine solve needs deg(b) < deg(a)");
  if (target.degree() != 2 * n) {
    throw Error(ErrorCode::kDegreeMismatch, "target degree must be 2*deg(a)");
  }
  if (b.is_zero() || !are_coprime(a, b)) {
    throw Error(ErrorCode::kSingularSylvester, "a(s) and b(s) are not coprime");
  }

  // Work in t = s / scale and equilibrate each operand so the Sylvester
  // matrix entries are O(1).
  const double scale = frequency_scale(a);
  Polynomial as = a.scale_variable(scale);
  Polynomial bs = b.scale_variable(scale);
  Polynomial ts = target.scale_variable(scale);
  auto max_abs = [](const Polynomial& p) {
    double m = 0.0;
    for (double v : p.coeffs()) m = std::max(m, std::fabs(v));
    return m;
  };
  const double alpha = max_abs(as);
  const double beta = max_abs(bs);
  const double tau = max_abs(ts);
  as *= 1.0 / alpha;
  bs *= 1.0 / beta;
  ts *= 1.0 / tau;

  const int size = 2 * n + 1;
  Eigen::MatrixXd sylvester = Eigen::MatrixXd::Zero(size, size);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) sylvester(i + j, j) = as.coeff(n - i);
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= n; ++i) sylvester(i + j + 1, n + 1 + j) = bs.coeff(n - i);
  }
  Eigen::VectorXd rhs(size);
  for (int i = 0; i < size; ++i) rhs(i) = ts.coeff(2 * n - i);

  Eigen::FullPivLU<Eigen::MatrixXd> lu(sylvester);
  lu.setThreshold(std::numeric_limits<double>::epsilon());
  if (lu.rank() < size) {
    throw Error(ErrorCode::kSingularSylvester, "Sylvester matrix is rank deficient");
  }
  Eigen::VectorXd x = lu.solve(rhs);

  // Unknowns back in s: coefficient j of p (or q) multiplies t^(n-j) in the
  // scaled system.
  std::vector<double> pw(static_cast<size_t>(2 * n + 1));
  pw[0] = 1.0;
  for (size_t k = 1; k < pw.size(); ++k) pw[k] = pw[k - 1] * scale;
  auto unpack = [&](const Eigen::VectorXd& v, std::vector<long double>& pc, std::vector<long double>& qc) {
    for (int j = 0; j <= n; ++j) pc[j] = static_cast<long double>(v(j)) * tau / alpha / pw[n - j];
    for (int j = 0; j < n; ++j) qc[j] = static_cast<long double>(v(n + 1 + j)) * tau / beta / pw[n - 1 - j];
  };
  std::vector<long double> pc(static_cast<size_t>(n) + 1);
  std::vector<long double> qc(static_cast<size_t>(n));
  unpack(x, pc, qc);

  // Iterative refinement with the residual of the unscaled equation
  // accumulated in extended precision; repairs the componentwise error the
  // equilibrated solve leaves in small coefficients.
  for (int pass = 0; pass < 3; ++pass) {
    std::vector<long double> r(static_cast<size_t>(2 * n + 1), 0.0L);
    for (int k = 0; k <= 2 * n; ++k) r[static_cast<size_t>(2 * n - k)] = target.coeff(k);
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) r[static_cast<size_t>(i + j)] -= static_cast<long double>(a.coeffs()[i]) * pc[j];
    }
    const int mb = b.degree();
    const int off = 2 * n - (mb + n - 1);
    for (int i = 0; i <= mb; ++i) {
      for (int j = 0; j < n; ++j) {
        r[static_cast<size_t>(off + i + j)] -= static_cast<long double>(b.coeffs()[i]) * qc[j];
      }
    }
    Eigen::VectorXd rs(size);
    for (int i = 0; i < size; ++i) rs(i) = static_cast<double>(r[static_cast<size_t>(i)] * pw[2 * n - i] / tau);
    if (rs.cwiseAbs().maxCoeff() == 0.0) break;
    const Eigen::VectorXd dx = lu.solve(rs);
    std::vector<long double> dp(pc.size());
    std::vector<long double> dq(qc.size());
    unpack(dx, dp, dq);
    for (size_t j = 0; j < pc.size(); ++j) pc[j] += dp[j];
    for (size_t j = 0; j < qc.size(); ++j) qc[j] += dq[j];
  }

  std::vector<double> pd(pc.begin(), pc.end());
  std::vector<double> qd(qc.begin(), qc.end());
  // The top equation involves p's leading coefficient alone.
  pd.front() = target.leading() / a.leading();
  return {Polynomial(std::move(pd)), Polynomial(std::move(qd))};
}

double coefficient_mismatch(const Polynomial& lhs, const Polynomial& rhs,
                            const Polynomial& scale) {
  const int n = std::max({lhs.degree(), rhs.degree(), scale.degree()});
  double worst = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double diff = std::fabs(lhs.coeff(k) - rhs.coeff(k));
    if (diff == 0.0) continue;
    const double s = std::fabs(scale.coeff(k));
    if (s == 0.0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, diff / s);
  }
  return worst;
}

double spectral_residual(const Polynomial& a, const Polynomial& b, const Polynomial& d) {
  const Polynomial lhs = reflect(d) * d;
  const Polynomial rhs = reflect(a) * a + reflect(b) * b;
  const Polynomial scale = d.abs() * d.abs() + a.abs() * a.abs() + b.abs() * b.abs();
  return coefficient_mismatch(lhs, rhs, scale);
}

double diophantine_residual(const Polynomial& a, const Polynomial& b, const Polynomial& p,
                            const Polynomial& q, const Polynomial& target) {
  const Polynomial lhs = a * p + b * q;
  const Polynomial scale = a.abs() * p.abs() + b.abs() * q.abs() + target.abs();
  return coefficient_mismatch(lhs, target, scale);
}

}  // namespace cablesea
