#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cablesea/polynomial.hpp"

namespace cablesea {

/// SISO rational transfer function num(s)/den(s) kept in reduced normal form:
/// common roots (relative distance below kCoprimeTol) are cancelled and the
/// denominator is monic. The zero function is stored as 0/1.
class RationalTf {
 public:
  RationalTf() : den_(Polynomial::constant(1.0)) {}
  RationalTf(Polynomial num, Polynomial den);

  static RationalTf gain(double k) { return {Polynomial::constant(k), Polynomial::constant(1.0)}; }
  /// num/den with a monic denominator but no root cancellation.
  static RationalTf unreduced(Polynomial num, Polynomial den) { return {std::move(num), std::move(den), Reduced{}}; }

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  /// Number of poles.
  int order() const { return den_.degree(); }
  /// deg(den) - deg(num); meaningless for the zero function.
  int relative_degree() const { return den_.degree() - num_.degree(); }
  bool is_proper() const { return is_zero() || relative_degree() >= 0; }
  bool is_strictly_proper() const { return is_zero() || relative_degree() > 0; }
  bool is_biproper() const { return !is_zero() && relative_degree() == 0; }

  std::complex<double> operator()(std::complex<double> s) const { return num_(s) / den_(s); }
  /// Value at s = 0 (infinite for a pole at the origin).
  double dc_gain() const;

  RationalTf operator-() const;
  RationalTf inverse() const;

  friend RationalTf operator+(const RationalTf& lhs, const RationalTf& rhs);
  friend RationalTf operator-(const RationalTf& lhs, const RationalTf& rhs);
  friend RationalTf operator*(const RationalTf& lhs, const RationalTf& rhs);
  friend RationalTf operator/(const RationalTf& lhs, const RationalTf& rhs);
  friend RationalTf series(const RationalTf& g1, const RationalTf& g2);
  friend RationalTf feedback(const RationalTf& g, const RationalTf& h);

 private:
  struct Reduced {};
  RationalTf(Polynomial num, Polynomial den, Reduced);
  void make_monic();

  Polynomial num_;
  Polynomial den_;
};

/// Cancels common roots of two polynomials in place (relative tolerance).
/// Returns the number of cancelled roots.
int cancel_common_roots(Polynomial& x, Polynomial& y, double rel_tol = kCoprimeTol);

/// g1 * g2. Cross cancellation is done on the factors before multiplying.
RationalTf series(const RationalTf& g1, const RationalTf& g2);
/// g1 + g2.
RationalTf parallel(const RationalTf& g1, const RationalTf& g2);
/// Negative feedback g / (1 + g h). Throws kAlgebraicLoop if 1 + g h == 0.
RationalTf feedback(const RationalTf& g, const RationalTf& h = RationalTf::gain(1.0));

bool is_stable(const RationalTf& g, double tol = kDefaultTol);

/// g(j omega). Throws kPoleOnAxis when j omega is (numerically) a pole.
std::complex<double> freq_response(const RationalTf& g, double omega);

/// Squared H2 norm from the observability Gramian: B'QB with A'Q + QA + C'C = 0.
/// Throws kNotStrictlyProper, kUnstable.
double h2_norm_sq(const RationalTf& g);

/// SISO state-space model dx/dt = A x + B u, y = C x + D u.
struct StateSpace {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::RowVectorXd c;
  double d = 0.0;

  int order() const { return static_cast<int>(a.rows()); }
  std::complex<double> freq_response(double omega) const;
};

/// Controllable canonical realization (companion first row, B = e1).
/// Throws kImproper.
StateSpace to_state_space(const RationalTf& g);

/// The canonical realization after frequency scaling and diagonal balancing.
/// Same transfer function, far better conditioned for the SEA coefficient
/// spread; used internally for simulation and block diagrams.
StateSpace to_balanced_state_space(const RationalTf& g);

/// Solves A'Q + QA + W = 0 for symmetric W (A Hurwitz).
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& w);

/// Multi-input multi-output model; the block-diagram engine produces these.
struct LinearSystem {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  Eigen::MatrixXd c;
  Eigen::MatrixXd d;

  int states() const { return static_cast<int>(a.rows()); }
  int inputs() const { return static_cast<int>(b.cols()); }
  int outputs() const { return static_cast<int>(c.rows()); }
};

LinearSystem to_linear_system(const StateSpace& ss);

/// Largest step allowed by the resolution rule dt <= 1 / (10 max|eig(A)|).
/// Infinite for a static system.
double max_stable_step(const Eigen::MatrixXd& a);

/// Zero-order-hold discretization x[k+1] = Ad x[k] + Bd u[k], exact for
/// piecewise-constant inputs (matrix exponential of the augmented block).
struct DiscreteSystem {
  Eigen::MatrixXd ad;
  Eigen::MatrixXd bd;
  Eigen::MatrixXd c;
  Eigen::MatrixXd d;
  double dt = 0.0;
};

/// Throws kInvalidArgument for dt <= 0 and kStepTooLarge when dt exceeds
/// max_stable_step(sys.a).
DiscreteSystem discretize_zoh(const LinearSystem& sys, double dt);

/// Runs from zero initial state. `inputs` is samples x inputs; the result is
/// samples x outputs, y[k] = C x[k] + D u[k].
Eigen::MatrixXd simulate(const DiscreteSystem& sys, const Eigen::MatrixXd& inputs);

/// SISO convenience: uniformly sampled input, same-length output.
std::vector<double> simulate(const StateSpace& g, std::span<const double> input, double dt);

struct StepMetrics {
  double rise_time = 0.0;      ///< 10% to 90% crossing interval, s
  double overshoot = 0.0;      ///< (peak - target) / target, clamped at 0
  double settling_time = 0.0;  ///< entry time into the final +/-2% band, s
};

/// Throws kNotSettled if any sample in the final 5% of the trace leaves the
/// +/-2% band, kInvalidArgument for a zero target.
StepMetrics step_metrics(std::span<const double> trace, double dt, double target);

/// Wiring helper for interconnections of SISO blocks and external inputs.
/// A Wire is a linear combination of external inputs and block outputs.
class BlockDiagram {
 public:
  struct Term {
    bool external = false;
    int index = 0;
    double gain = 1.0;
  };
  struct Wire {
    std::vector<Term> terms;

    friend Wire operator+(Wire lhs, const Wire& rhs);
    friend Wire operator-(Wire lhs, const Wire& rhs);
    friend Wire operator*(double k, Wire w);
  };

  explicit BlockDiagram(int external_inputs) : external_inputs_(external_inputs) {}

  /// Adds a proper block; returns its index.
  int add_block(const RationalTf& g);
  Wire input(int index) const;
  Wire output_of(int block) const;
  void connect(int block, Wire w);
  /// Declares a system output; returns its row index.
  int add_output(Wire w);

  /// Closed interconnection with the external inputs as inputs.
  /// Throws kAlgebraicLoop if the static loop equations are singular and
  /// kInvalidArgument if some block input is left unconnected.
  LinearSystem build() const;

 private:
  int external_inputs_;
  std::vector<StateSpace> blocks_;
  std::vector<Wire> block_inputs_;
  std::vector<bool> connected_;
  std::vector<Wire> outputs_;
};

}  // namespace cablesea
