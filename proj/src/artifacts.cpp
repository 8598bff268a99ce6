#include "cablesea/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "cablesea/error.hpp"

namespace cablesea {

namespace {

const char* const kTfSections[] = {"plant", "M", "N", "X", "Y", "one_minus_X", "Q1", "Q2", "C1", "C2"};

std::string json_number(double x) { return std::isfinite(x) ? format_double(x) : "null"; }

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

void write_tf(std::ostringstream& out, const char* name, const RationalTf& g) {
  out << '[' << name << "]\n";
  out << "num = " << format_coeffs(g.num()) << '\n';
  out << "den = " << format_coeffs(g.den()) << '\n';
}

double parse_double(const std::string& v) {
  if (v == "nan") return std::nan("");
  if (v == "inf") return HUGE_VAL;
  if (v == "-inf") return -HUGE_VAL;
  size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw Error(ErrorCode::kParseError, "not a number: '" + v + "'");
  return x;
}

Polynomial parse_coeffs(const std::string& v) {
  std::istringstream in(v);
  std::vector<double> c;
  std::string tok;
  while (in >> tok) c.push_back(parse_double(tok));
  if (c.empty()) throw Error(ErrorCode::kParseError, "empty coefficient list");
  return Polynomial(std::move(c));
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string format_coeffs(const Polynomial& p) {
  std::string out;
  for (double c : p.coeffs()) {
    if (!out.empty()) out += ' ';
    out += format_double(c);
  }
  return out.empty() ? format_double(0.0) : out;
}

std::string traces_csv(const SimResult& res) {
  std::ostringstream out;
  const Signal& first = res.traces.front().second;
  out << "# dt=" << format_double(first.dt) << '\n';
  out << 't';
  for (const auto& [name, s] : res.traces) out << ',' << name << '[' << s.unit << ']';
  out << '\n';
  for (size_t k = 0; k < first.samples.size(); ++k) {
    out << format_double(first.time(k));
    for (const auto& entry : res.traces) out << ',' << format_double(entry.second.samples[k]);
    out << '\n';
  }
  return out.str();
}

std::string metrics_json(const SimResult& res) {
  const SimMetrics& m = res.metrics;
  std::ostringstream out;
  out << "{\n";
  out << "  \"controller\": " << json_string(res.controller) << ",\n";
  out << "  \"scenario\": " << json_string(res.scenario.name) << ",\n";
  out << "  \"rise_time\": " << json_number(m.rise_time) << ",\n";
  out << "  \"overshoot\": " << json_number(m.overshoot) << ",\n";
  out << "  \"settling_time\": " << json_number(m.settling_time) << ",\n";
  out << "  \"rms_tracking_error\": " << json_number(m.rms_tracking_error) << ",\n";
  out << "  \"steady_state_error\": " << json_number(m.steady_state_error) << "\n";
  out << "}\n";
  return out.str();
}

std::string comparison_report(const Comparison& c) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-20s %24s %24s %24s\n", "metric", c.label_a.c_str(), c.label_b.c_str(),
                "delta");
  out << line;
  for (const ComparisonRow& r : c.rows) {
    std::snprintf(line, sizeof line, "%-20s %24s %24s %24s\n", r.metric.c_str(), format_double(r.a).c_str(),
                  format_double(r.b).c_str(), format_double(r.delta).c_str());
    out << line;
  }
  return out.str();
}

std::string comparison_csv(const Comparison& c) {
  std::ostringstream out;
  const std::string& unit = c.error_a.unit;
  out << "# dt=" << format_double(c.error_a.dt) << '\n';
  out << "t,e_" << c.label_a << '[' << unit << "],e_" << c.label_b << '[' << unit << "],delta[" << unit << "]\n";
  for (size_t k = 0; k < c.error_a.samples.size(); ++k) {
    out << format_double(c.error_a.time(k)) << ',' << format_double(c.error_a.samples[k]) << ','
        << format_double(c.error_b.samples[k]) << ',' << format_double(c.error_delta.samples[k]) << '\n';
  }
  return out.str();
}

ControllerArtifact make_artifact(const Design& d, const TorqueTuning& tuning) {
  ControllerArtifact a;
  a.plant = d.plant;
  a.stabilizer = d.stabilizer;
  a.controller = d.controller;
  a.tuning = tuning;
  const std::vector<double> omegas = log_frequencies(1e-2, 1e5, 50);
  a.bezout_residual = bezout_residual(d.controller.factors, omegas);
  return a;
}

std::string format_controller(const ControllerArtifact& a) {
  const TwoDofController& c = a.controller;
  const CoprimeFactors& f = c.factors;
  std::ostringstream out;
  out << "# cablesea 2-DOF controller\n";
  out << "# polynomial coefficients are listed highest degree first\n\n";
  out << "[design]\n";
  out << "omega_bar = " << format_double(a.tuning.omega_bar) << '\n';
  out << "xi_bar = " << format_double(a.tuning.xi_bar) << '\n';
  out << "q2_corner_hz = " << format_double(a.tuning.q2_corner_hz) << '\n';
  out << "bezout_residual = " << format_double(a.bezout_residual) << "\n\n";
  out << "[stabilizer]\n";
  out << "d = " << format_coeffs(a.stabilizer.d) << '\n';
  out << "p = " << format_coeffs(a.stabilizer.p) << '\n';
  out << "q = " << format_coeffs(a.stabilizer.q) << '\n';
  out << "j_star = " << format_double(a.stabilizer.j_star) << "\n\n";
  const RationalTf* tfs[] = {&a.plant, &f.m, &f.n, &f.x, &f.y, &f.one_minus_x, &c.q1, &c.q2, &c.c1, &c.c2};
  for (size_t i = 0; i < std::size(tfs); ++i) {
    if (i > 0) out << '\n';
    write_tf(out, kTfSections[i], *tfs[i]);
  }
  return out.str();
}

ControllerArtifact parse_controller(const std::string& text) {
  std::map<std::string, std::map<std::string, std::string>> sections;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const size_t hash = raw.find('#');
    std::string l = raw.substr(0, hash);
    while (!l.empty() && std::isspace(static_cast<unsigned char>(l.back()))) l.pop_back();
    if (l.empty()) continue;
    if (l.front() == '[') {
      if (l.back() != ']') throw Error(ErrorCode::kParseError, "line " + std::to_string(line) + ": bad header");
      section = l.substr(1, l.size() - 2);
      if (sections.contains(section)) {
        throw Error(ErrorCode::kParseError, "line " + std::to_string(line) + ": repeated section " + section);
      }
      sections[section];
      continue;
    }
    const size_t eq = l.find(" = ");
    if (section.empty() || eq == std::string::npos) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line) + ": expected 'key = value'");
    }
    sections[section][l.substr(0, eq)] = l.substr(eq + 3);
  }

  auto field = [&](const std::string& sec, const std::string& key) -> const std::string& {
    const auto s = sections.find(sec);
    if (s == sections.end()) throw Error(ErrorCode::kParseError, "missing section [" + sec + "]");
    const auto k = s->second.find(key);
    if (k == s->second.end()) throw Error(ErrorCode::kParseError, "missing key '" + key + "' in [" + sec + "]");
    return k->second;
  };
  auto tf = [&](const char* sec) {
    return RationalTf::unreduced(parse_coeffs(field(sec, "num")), parse_coeffs(field(sec, "den")));
  };

  ControllerArtifact a;
  a.tuning.omega_bar = parse_double(field("design", "omega_bar"));
  a.tuning.xi_bar = parse_double(field("design", "xi_bar"));
  a.tuning.q2_corner_hz = parse_double(field("design", "q2_corner_hz"));
  a.bezout_residual = parse_double(field("design", "bezout_residual"));
  a.plant = tf("plant");
  a.stabilizer.a = a.plant.den();
  a.stabilizer.b = a.plant.num();
  a.stabilizer.d = parse_coeffs(field("stabilizer", "d"));
  a.stabilizer.p = parse_coeffs(field("stabilizer", "p"));
  a.stabilizer.q = parse_coeffs(field("stabilizer", "q"));
  a.stabilizer.j_star = parse_double(field("stabilizer", "j_star"));
  CoprimeFactors& f = a.controller.factors;
  f.m = tf("M");
  f.n = tf("N");
  f.x = tf("X");
  f.y = tf("Y");
  f.one_minus_x = tf("one_minus_X");
  a.controller.q1 = tf("Q1");
  a.controller.q2 = tf("Q2");
  a.controller.c1 = tf("C1");
  a.controller.c2 = tf("C2");
  return a;
}

}  // namespace cablesea
