#include "cablesea/lti.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "cablesea/detail/balance.hpp"
#include "cablesea/error.hpp"

namespace cablesea {

namespace {

using Complex = std::complex<double>;

int trailing_zeros(const Polynomial& p) {
  int count = 0;
  const auto& c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend() && *it == 0.0; ++it) ++count;
  return count;
}

Polynomial drop_trailing(const Polynomial& p, int k) {
  std::vector<double> c = p.coeffs();
  c.resize(c.size() - static_cast<size_t>(k));
  return Polynomial(std::move(c));
}

// Canonical realization of num/den with den of degree n >= num degree.
StateSpace canonical(const Polynomial& num, const Polynomial& den) {
  const int n = den.degree();
  const double lead = den.leading();
  StateSpace ss;
  ss.d = num.degree() == n ? num.leading() / lead : 0.0;
  const Polynomial rem = num - den * ss.d;
  ss.a = Eigen::MatrixXd::Zero(n, n);
  ss.b = Eigen::VectorXd::Zero(n);
  ss.c = Eigen::RowVectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    ss.a(0, j) = -den.coeff(n - 1 - j) / lead;
    ss.c(j) = rem.coeff(n - 1 - j) / lead;
  }
  for (int i = 1; i < n; ++i) ss.a(i, i - 1) = 1.0;
  if (n > 0) ss.b(0) = 1.0;
  return ss;
}

}  // namespace

int cancel_common_roots(Polynomial& x, Polynomial& y, double rel_tol) {
  if (x.degree() < 1 || y.degree() < 1) return 0;
  int cancelled = 0;
  const int zeros = std::min(trailing_zeros(x), trailing_zeros(y));
  if (zeros > 0) {
    x = drop_trailing(x, zeros);
    y = drop_trailing(y, zeros);
    cancelled += zeros;
  }
  if (x.degree() < 1 || y.degree() < 1) return cancelled;

  const std::vector<Complex> rx = roots(x);
  const std::vector<Complex> ry = roots(y);
  std::vector<bool> used_x(rx.size(), false);
  std::vector<bool> used_y(ry.size(), false);
  int matched = 0;
  for (size_t i = 0; i < rx.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    size_t best_j = ry.size();
    for (size_t j = 0; j < ry.size(); ++j) {
      if (used_y[j]) continue;
      const double dist = std::abs(rx[i] - ry[j]);
      if (dist < best) {
        best = dist;
        best_j = j;
      }
    }
    if (best_j == ry.size()) continue;
    if (best <= rel_tol * std::max(std::abs(rx[i]), std::abs(ry[best_j]))) {
      used_x[i] = true;
      used_y[best_j] = true;
      ++matched;
    }
  }
  if (matched == 0) return cancelled;

  auto keep = [](const std::vector<Complex>& r, const std::vector<bool>& used) {
    std::vector<Complex> out;
    for (size_t i = 0; i < r.size(); ++i) {
      if (!used[i]) out.push_back(r[i]);
    }
    return out;
  };
  x = Polynomial::from_roots(keep(rx, used_x), x.leading());
  y = Polynomial::from_roots(keep(ry, used_y), y.leading());
  return cancelled + matched;
}

RationalTf::RationalTf(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Error(ErrorCode::kZeroDenominator, "transfer function with zero denominator");
  if (num_.is_zero()) {
    den_ = Polynomial::constant(1.0);
    return;
  }
  cancel_common_roots(num_, den_);
  make_monic();
}

RationalTf::RationalTf(Polynomial num, Polynomial den, Reduced)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Error(ErrorCode::kZeroDenominator, "transfer function with zero denominator");
  if (num_.is_zero()) den_ = Polynomial::constant(1.0);
  make_monic();
}

void RationalTf::make_monic() {
  const double lead = den_.leading();
  if (lead != 1.0) {
    num_ *= 1.0 / lead;
    den_ *= 1.0 / lead;
  }
}

double RationalTf::dc_gain() const {
  const double n0 = num_(0.0);
  const double d0 = den_(0.0);
  if (d0 == 0.0) {
    if (n0 == 0.0) return 0.0;
    return std::copysign(std::numeric_limits<double>::infinity(), n0);
  }
  return n0 / d0;
}

RationalTf RationalTf::operator-() const { return RationalTf(-num_, den_, Reduced{}); }

RationalTf RationalTf::inverse() const {
  if (is_zero()) throw Error(ErrorCode::kZeroDenominator, "inverse of the zero transfer function");
  return RationalTf(den_, num_, Reduced{});
}

RationalTf operator+(const RationalTf& lhs, const RationalTf& rhs) {
  if (lhs.is_zero()) return rhs;
  if (rhs.is_zero()) return lhs;
  if (lhs.den_ == rhs.den_) return RationalTf(lhs.num_ + rhs.num_, lhs.den_);
  // Strip the common part of the denominators first so it never has to be
  // recovered from the roots of a high-degree product.
  Polynomial d1 = lhs.den_;
  Polynomial d2 = rhs.den_;
  cancel_common_roots(d1, d2);
  return RationalTf(lhs.num_ * d2 + rhs.num_ * d1, lhs.den_ * d2);
}

RationalTf operator-(const RationalTf& lhs, const RationalTf& rhs) { return lhs + (-rhs); }

RationalTf operator*(const RationalTf& lhs, const RationalTf& rhs) { return series(lhs, rhs); }

RationalTf operator/(const RationalTf& lhs, const RationalTf& rhs) {
  return series(lhs, rhs.inverse());
}

RationalTf series(const RationalTf& g1, const RationalTf& g2) {
  if (g1.is_zero() || g2.is_zero()) return RationalTf();
  Polynomial n1 = g1.num();
  Polynomial d1 = g1.den();
  Polynomial n2 = g2.num();
  Polynomial d2 = g2.den();
  cancel_common_roots(n1, d2);
  cancel_common_roots(n2, d1);
  return RationalTf(n1 * n2, d1 * d2, RationalTf::Reduced{});
}

RationalTf parallel(const RationalTf& g1, const RationalTf& g2) { return g1 + g2; }

RationalTf feedback(const RationalTf& g, const RationalTf& h) {
  const RationalTf loop = series(g, h);
  const Polynomial closed = loop.den() + loop.num();
  if (closed.is_zero()) throw Error(ErrorCode::kAlgebraicLoop, "1 + g h vanishes identically");
  return series(g, RationalTf(loop.den(), closed, RationalTf::Reduced{}));
}

bool is_stable(const RationalTf& g, double tol) { return is_hurwitz(g.den(), tol); }

std::complex<double> freq_response(const RationalTf& g, double omega) {
  const Complex s(0.0, omega);
  const Complex den = g.den()(s);
  const double scale = g.den().abs()(std::fabs(omega));
  if (std::abs(den) <= 1e-12 * scale) {
    throw Error(ErrorCode::kPoleOnAxis, "pole on the imaginary axis at the requested frequency");
  }
  return g.num()(s) / den;
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& w) {
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd at = a.transpose();
  // vec(A'Q) = (I kron A') vec Q,  vec(QA) = (A' kron I) vec Q.
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n * n, n * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    k.block(j * n, j * n, n, n) += at;
    for (Eigen::Index i = 0; i < n; ++i) {
      k.block(j * n, i * n, n, n).diagonal().array() += at(j, i);
    }
  }
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(w.data(), n * n);
  const Eigen::VectorXd x = k.partialPivLu().solve(rhs);
  Eigen::MatrixXd q = Eigen::Map<const Eigen::MatrixXd>(x.data(), n, n);
  return 0.5 * (q + q.transpose());
}

double h2_norm_sq(const RationalTf& g) {
  if (g.is_zero()) return 0.0;
  if (!g.is_strictly_proper()) throw Error(ErrorCode::kNotStrictlyProper, "H2 norm needs a strictly proper system");
  if (!is_stable(g)) throw Error(ErrorCode::kUnstable, "H2 norm of an unstable system");
  const StateSpace ss = to_balanced_state_space(g);
  const Eigen::MatrixXd q = solve_lyapunov(ss.a, ss.c.transpose() * ss.c);
  return ss.b.dot(q * ss.b);
}

std::complex<double> StateSpace::freq_response(double omega) const {
  const Eigen::Index n = a.rows();
  if (n == 0) return d;
  const Eigen::MatrixXcd m = Complex(0.0, omega) * Eigen::MatrixXcd::Identity(n, n) - a.cast<Complex>();
  const Eigen::VectorXcd x = m.partialPivLu().solve(b.cast<Complex>());
  return (c.cast<Complex>() * x)(0) + d;
}

StateSpace to_state_space(const RationalTf& g) {
  if (!g.is_proper()) throw Error(ErrorCode::kImproper, "realization of an improper transfer function");
  return canonical(g.num(), g.den());
}

StateSpace to_balanced_state_space(const RationalTf& g) {
  if (!g.is_proper()) throw Error(ErrorCode::kImproper, "realization of an improper transfer function");
  const double scale = frequency_scale(g.den());
  StateSpace ss = canonical(g.num().scale_variable(scale), g.den().scale_variable(scale));
  if (ss.order() == 0) return ss;
  const Eigen::VectorXd t = detail::balance(ss.a);
  ss.b = ss.b.cwiseQuotient(t) * scale;
  ss.c = ss.c.cwiseProduct(t.transpose());
  ss.a *= scale;
  return ss;
}

LinearSystem to_linear_system(const StateSpace& ss) {
  LinearSystem sys;
  sys.a = ss.a;
  sys.b = ss.b;
  sys.c = ss.c;
  sys.d = Eigen::MatrixXd::Constant(1, 1, ss.d);
  return sys;
}

double max_stable_step(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) return std::numeric_limits<double>::infinity();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  const double rate = solver.eigenvalues().cwiseAbs().maxCoeff();
  if (rate == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (10.0 * rate);
}

DiscreteSystem discretize_zoh(const LinearSystem& sys, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "time step must be positive");
  const double limit = max_stable_step(sys.a);
  if (dt > limit) {
    throw Error(ErrorCode::kStepTooLarge,
                "dt = " + std::to_string(dt) + " s exceeds 1/(10 max|eig|) = " + std::to_string(limit) + " s");
  }
  const Eigen::Index n = sys.a.rows();
  const Eigen::Index m = sys.b.cols();
  DiscreteSystem out;
  out.c = sys.c;
  out.d = sys.d;
  out.dt = dt;
  if (n == 0) {
    out.ad.resize(0, 0);
    out.bd.resize(0, m);
    return out;
  }
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + m, n + m);
  aug.topLeftCorner(n, n) = sys.a * dt;
  aug.topRightCorner(n, m) = sys.b * dt;
  const Eigen::MatrixXd e = aug.exp();
  out.ad = e.topLeftCorner(n, n);
  out.bd = e.topRightCorner(n, m);
  return out;
}

Eigen::MatrixXd simulate(const DiscreteSystem& sys, const Eigen::MatrixXd& inputs) {
  const Eigen::Index samples = inputs.rows();
  Eigen::MatrixXd out(samples, sys.c.rows());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.ad.rows());
  Eigen::VectorXd next(x.size());
  for (Eigen::Index k = 0; k < samples; ++k) {
    const auto u = inputs.row(k).transpose();
    out.row(k).noalias() = (sys.c * x + sys.d * u).transpose();
    next.noalias() = sys.ad * x;
    next.noalias() += sys.bd * u;
    x.swap(next);
  }
  return out;
}

std::vector<double> simulate(const StateSpace& g, std::span<const double> input, double dt) {
  const DiscreteSystem sys = discretize_zoh(to_linear_system(g), dt);
  const Eigen::MatrixXd u = Eigen::Map<const Eigen::VectorXd>(input.data(), static_cast<Eigen::Index>(input.size()));
  const Eigen::MatrixXd y = simulate(sys, u);
  return {y.data(), y.data() + y.size()};
}

StepMetrics step_metrics(std::span<const double> trace, double dt, double target) {
  if (target == 0.0) throw Error(ErrorCode::kInvalidArgument, "step metrics need a nonzero target");
  if (trace.empty()) throw Error(ErrorCode::kInvalidArgument, "empty trace");
  const size_t n = trace.size();
  std::vector<double> e(n);
  for (size_t k = 0; k < n; ++k) e[k] = trace[k] / target;

  constexpr double kBand = 0.02;
  const size_t tail = static_cast<size_t>(std::floor(0.95 * static_cast<double>(n)));
  for (size_t k = tail; k < n; ++k) {
    if (std::fabs(e[k] - 1.0) > kBand) {
      throw Error(ErrorCode::kNotSettled, "trace leaves the 2% band in its final 5%");
    }
  }

  auto crossing = [&](double level) {
    for (size_t k = 0; k < n; ++k) {
      if (e[k] >= level) {
        if (k == 0) return 0.0;
        const double frac = (level - e[k - 1]) / (e[k] - e[k - 1]);
        return (static_cast<double>(k - 1) + frac) * dt;
      }
    }
    return std::numeric_limits<double>::quiet_NaN();
  };

  StepMetrics m;
  m.rise_time = crossing(0.9) - crossing(0.1);
  m.overshoot = std::max(0.0, *std::max_element(e.begin(), e.end()) - 1.0);
  m.settling_time = 0.0;
  for (size_t k = n; k-- > 0;) {
    if (std::fabs(e[k] - 1.0) > kBand) {
      m.settling_time = static_cast<double>(k + 1) * dt;
      break;
    }
  }
  return m;
}

BlockDiagram::Wire operator+(BlockDiagram::Wire lhs, const BlockDiagram::Wire& rhs) {
  lhs.terms.insert(lhs.terms.end(), rhs.terms.begin(), rhs.terms.end());
  return lhs;
}

BlockDiagram::Wire operator-(BlockDiagram::Wire lhs, const BlockDiagram::Wire& rhs) {
  return std::move(lhs) + (-1.0) * rhs;
}

BlockDiagram::Wire operator*(double k, BlockDiagram::Wire w) {
  for (auto& t : w.terms) t.gain *= k;
  return w;
}

int BlockDiagram::add_block(const RationalTf& g) {
  blocks_.push_back(to_balanced_state_space(g));
  block_inputs_.emplace_back();
  connected_.push_back(false);
  return static_cast<int>(blocks_.size()) - 1;
}

BlockDiagram::Wire BlockDiagram::input(int index) const {
  if (index < 0 || index >= external_inputs_) throw Error(ErrorCode::kInvalidArgument, "no such external input");
  return Wire{{Term{true, index, 1.0}}};
}

BlockDiagram::Wire BlockDiagram::output_of(int block) const {
  if (block < 0 || block >= static_cast<int>(blocks_.size())) throw Error(ErrorCode::kInvalidArgument, "no such block");
  return Wire{{Term{false, block, 1.0}}};
}

void BlockDiagram::connect(int block, Wire w) {
  if (block < 0 || block >= static_cast<int>(blocks_.size())) throw Error(ErrorCode::kInvalidArgument, "no such block");
  block_inputs_[block] = std::move(w);
  connected_[block] = true;
}

int BlockDiagram::add_output(Wire w) {
  outputs_.push_back(std::move(w));
  return static_cast<int>(outputs_.size()) - 1;
}

LinearSystem BlockDiagram::build() const {
  const Eigen::Index nb = static_cast<Eigen::Index>(blocks_.size());
  const Eigen::Index m = external_inputs_;
  const Eigen::Index no = static_cast<Eigen::Index>(outputs_.size());
  for (bool c : connected_) {
    if (!c) throw Error(ErrorCode::kInvalidArgument, "block input left unconnected");
  }

  std::vector<Eigen::Index> offset(blocks_.size() + 1, 0);
  for (size_t i = 0; i < blocks_.size(); ++i) offset[i + 1] = offset[i] + blocks_[i].order();
  const Eigen::Index n = offset.back();

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, nb);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(nb, n);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(nb, nb);
  for (Eigen::Index i = 0; i < nb; ++i) {
    const StateSpace& blk = blocks_[i];
    const Eigen::Index o = offset[i];
    const Eigen::Index k = blk.order();
    a.block(o, o, k, k) = blk.a;
    b.block(o, i, k, 1) = blk.b;
    c.block(i, o, 1, k) = blk.c;
    d(i, i) = blk.d;
  }

  auto fill = [](const Wire& w, Eigen::MatrixXd& from_blocks, Eigen::MatrixXd& from_inputs, Eigen::Index row) {
    for (const Term& t : w.terms) {
      if (t.external) from_inputs(row, t.index) += t.gain;
      else from_blocks(row, t.index) += t.gain;
    }
  };
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(nb, nb);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(nb, m);
  for (Eigen::Index i = 0; i < nb; ++i) fill(block_inputs_[i], f, g, i);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(no, nb);
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(no, m);
  for (Eigen::Index i = 0; i < no; ++i) fill(outputs_[i], h, k, i);

  // Block outputs y = C x + D (F y + G w)  =>  y = L (C x + D G w).
  const Eigen::MatrixXd loop = Eigen::MatrixXd::Identity(nb, nb) - d * f;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(loop);
  if (!lu.isInvertible()) throw Error(ErrorCode::kAlgebraicLoop, "singular static loop in block diagram");
  const Eigen::MatrixXd lc = lu.solve(c);
  const Eigen::MatrixXd ldg = lu.solve(d * g);

  LinearSystem sys;
  sys.a = a + b * f * lc;
  sys.b = b * (f * ldg + g);
  sys.c = h * lc;
  sys.d = h * ldg + k;
  return sys;
}

}  // namespace cablesea
