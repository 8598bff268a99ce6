#pragma once

#include <string>

#include "cablesea/config.hpp"
#include "cablesea/sim.hpp"
#include "cablesea/synthesis.hpp"

namespace cablesea {

/// printf "%.16e": 17 significant digits, enough to round-trip a double.
/// Non-finite values are written as nan, inf, -inf.
std::string format_double(double x);

/// Coefficients separated by single spaces, highest degree first.
std::string format_coeffs(const Polynomial& p);

/// "# dt=<dt>" followed by "t,r[Nm],d[rad/s],..." and one row per sample.
std::string traces_csv(const SimResult& res);

/// Flat JSON object: controller, scenario and the metrics (null when NaN).
std::string metrics_json(const SimResult& res);

/// Fixed-width side-by-side metric table.
std::string comparison_report(const Comparison& c);

/// "# dt=<dt>" then t,e_<a>[unit],e_<b>[unit],delta[unit].
std::string comparison_csv(const Comparison& c);

/// Everything needed to rebuild a synthesized controller.
struct ControllerArtifact {
  RationalTf plant;
  OptimalStabilizer stabilizer;
  TwoDofController controller;
  TorqueTuning tuning;
  double bezout_residual = 0.0;
};

ControllerArtifact make_artifact(const Design& d, const TorqueTuning& tuning);

/// Plain text with labeled sections; each transfer function is written as
/// "num = ..." and "den = ..." coefficient lists.
std::string format_controller(const ControllerArtifact& a);

/// Inverse of format_controller. Throws kParseError.
ControllerArtifact parse_controller(const std::string& text);

}  // namespace cablesea
