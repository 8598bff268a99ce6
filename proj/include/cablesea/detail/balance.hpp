#pragma once

#include <Eigen/Dense>

namespace cablesea::detail {

// Parlett-Reinsch balancing by powers of two (no permutations). On return
// `a` holds T^-1 A T; the diagonal of T is returned.
inline Eigen::VectorXd balance(Eigen::MatrixXd& a) {
  constexpr double kRadix = 2.0;
  constexpr double kSqrdx = kRadix * kRadix;
  const Eigen::Index n = a.rows();
  Eigen::VectorXd t = Eigen::VectorXd::Ones(n);
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / kRadix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= kRadix;
        c *= kSqrdx;
      }
      g = r * kRadix;
      while (c > g) {
        f /= kRadix;
        c /= kSqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
        t(i) *= f;
      }
    }
  }
  return t;
}

}  // namespace cablesea::detail
