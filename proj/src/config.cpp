#include "cablesea/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "cablesea/error.hpp"

namespace cablesea {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  Config run() {
    std::istringstream in(text_);
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_;
      const std::string l = trim(raw.substr(0, raw.find('#')));
      if (l.empty()) continue;
      if (l.front() == '[') {
        open_section(l);
        continue;
      }
      const size_t eq = l.find('=');
      if (eq == std::string::npos) fail("expected 'key = value'");
      const std::string key = trim(l.substr(0, eq));
      const std::string value = trim(l.substr(eq + 1));
      if (key.empty()) fail("empty key");
      assign(key, value);
    }
    finish_plant();
    return std::move(config_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::kParseError, "line " + std::to_string(line_) + ": " + what);
  }

  double number(const std::string& v) const {
    double out = 0.0;
    const char* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (v.empty() || ec != std::errc() || ptr != end) fail("not a number: '" + v + "'");
    return out;
  }

  std::uint64_t integer(const std::string& v) const {
    std::uint64_t out = 0;
    const char* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (v.empty() || ec != std::errc() || ptr != end) fail("not a non-negative integer: '" + v + "'");
    return out;
  }

  Polynomial coefficients(const std::string& v) const {
    std::istringstream in(v);
    std::vector<double> c;
    std::string tok;
    while (in >> tok) c.push_back(number(tok));
    if (c.empty()) fail("empty coefficient list");
    return Polynomial(std::move(c));
  }

  void open_section(const std::string& l) {
    if (l.back() != ']') fail("unterminated section header");
    const std::string name = trim(l.substr(1, l.size() - 2));
    seen_.clear();
    if (name.rfind("scenario", 0) == 0 && name.size() > 8 && std::isspace(static_cast<unsigned char>(name[8]))) {
      Scenario sc;
      sc.name = trim(name.substr(8));
      config_.scenarios.push_back(std::move(sc));
      section_ = "scenario";
      return;
    }
    static const std::set<std::string> known{"sea", "velocity_tuning", "torque_tuning", "pd", "plant", "output"};
    if (!known.contains(name)) fail("unknown section [" + name + "]");
    section_ = name;
  }

  void assign(const std::string& key, const std::string& v) {
    if (section_.empty()) fail("key '" + key + "' outside any section");
    if (!seen_.insert(key).second) fail("repeated key '" + key + "'");
    const auto& table = setters();
    const auto sec = table.find(section_);
    const auto it = sec->second.find(key);
    if (it == sec->second.end()) fail("unknown key '" + key + "' in [" + section_ + "]");
    it->second(v);
  }

  void finish_plant() {
    if (!plant_num_ && !plant_den_) return;
    if (!plant_num_ || !plant_den_) {
      throw Error(ErrorCode::kParseError, "[plant] needs both num and den");
    }
    config_.plant = PlantOverride{*plant_num_, *plant_den_};
  }

  using Setter = std::function<void(const std::string&)>;
  using Table = std::map<std::string, std::map<std::string, Setter>>;

  const Table& setters() {
    if (!table_.empty()) return table_;
    auto num = [this](double& field) { return [this, &field](const std::string& v) { field = number(v); }; };
    SeaParams& s = config_.sea;
    table_["sea"] = {
        {"motor_inertia", num(s.motor.inertia)},
        {"inductance", num(s.motor.inductance)},
        {"resistance", num(s.motor.resistance)},
        {"torque_constant", num(s.motor.torque_constant)},
        {"back_emf_constant", num(s.motor.back_emf_constant)},
        {"viscous_friction", num(s.motor.viscous_friction)},
        {"spring_stiffness", num(s.spring_stiffness)},
        {"gear_ratio", num(s.gear_ratio)},
        {"spring_damping", num(s.spring_damping)},
        {"spring_inertia", num(s.spring_inertia)},
        {"load_inertia", num(s.load_inertia)},
    };
    VelocityTuning& vt = config_.velocity_tuning;
    table_["velocity_tuning"] = {
        {"xi", num(vt.xi)},
        {"kpv", [this, &vt](const std::string& v) { vt.kpv = number(v); }},
        {"kiv", [this, &vt](const std::string& v) { vt.kiv = number(v); }},
    };
    TorqueTuning& tt = config_.torque_tuning;
    table_["torque_tuning"] = {
        {"omega_bar", num(tt.omega_bar)},
        {"xi_bar", num(tt.xi_bar)},
        {"q2_corner_hz", num(tt.q2_corner_hz)},
    };
    table_["pd"] = {{"kp", num(config_.pd.kp)}, {"kd", num(config_.pd.kd)}, {"rolloff", num(config_.pd.rolloff)}};
    table_["plant"] = {
        {"num", [this](const std::string& v) { plant_num_ = coefficients(v); }},
        {"den", [this](const std::string& v) { plant_den_ = coefficients(v); }},
    };
    table_["output"] = {{"dir", [this](const std::string& v) { config_.output_dir = v; }}};

    // Scenario setters act on whichever scenario section is open.
    auto sc = [this](auto apply) {
      return [this, apply](const std::string& v) { apply(config_.scenarios.back(), v); };
    };
    table_["scenario"] = {
        {"loop", sc([this](Scenario& s, const std::string& v) {
           if (v == "torque") s.loop = LoopKind::kTorque;
           else if (v == "velocity") s.loop = LoopKind::kVelocity;
           else fail("loop must be torque or velocity");
         })},
        {"reference", sc([this](Scenario& s, const std::string& v) {
           if (v == "step") s.reference.kind = ReferenceSpec::Kind::kStep;
           else if (v == "sinusoid") s.reference.kind = ReferenceSpec::Kind::kSinusoid;
           else fail("reference must be step or sinusoid");
         })},
        {"amplitude", sc([this](Scenario& s, const std::string& v) { s.reference.amplitude = number(v); })},
        {"freq_hz", sc([this](Scenario& s, const std::string& v) { s.reference.freq_hz = number(v); })},
        {"duration", sc([this](Scenario& s, const std::string& v) { s.duration = number(v); })},
        {"dt", sc([this](Scenario& s, const std::string& v) { s.dt = number(v); })},
        {"record_every", sc([this](Scenario& s, const std::string& v) {
           const std::uint64_t k = integer(v);
           if (k < 1 || k > 1000000) fail("record_every must lie in [1, 1000000]");
           s.record_every = static_cast<int>(k);
         })},
        {"disturbance_std", sc([this](Scenario& s, const std::string& v) { s.disturbance.stddev = number(v); })},
        {"disturbance_seed", sc([this](Scenario& s, const std::string& v) { s.disturbance.seed = integer(v); })},
        {"disturbance_hold", sc([this](Scenario& s, const std::string& v) { s.disturbance.hold = number(v); })},
        {"noise_std", sc([this](Scenario& s, const std::string& v) { s.noise.stddev = number(v); })},
        {"noise_seed", sc([this](Scenario& s, const std::string& v) { s.noise.seed = integer(v); })},
        {"noise_hold", sc([this](Scenario& s, const std::string& v) { s.noise.hold = number(v); })},
    };
    return table_;
  }

  const std::string& text_;
  Config config_;
  Table table_;
  std::string section_;
  std::set<std::string> seen_;
  std::optional<Polynomial> plant_num_;
  std::optional<Polynomial> plant_den_;
  int line_ = 0;
};

}  // namespace

const Scenario& Config::scenario(const std::string& name) const {
  for (const Scenario& s : scenarios) {
    if (s.name == name) return s;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown scenario '" + name + "'");
}

void Config::validate() const {
  sea.validate();
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must be positive");
  };
  positive(velocity_tuning.xi, "velocity_tuning.xi");
  if (velocity_tuning.kpv.has_value() != velocity_tuning.kiv.has_value()) {
    throw Error(ErrorCode::kInvalidArgument, "velocity_tuning.kpv and kiv must be given together");
  }
  positive(torque_tuning.omega_bar, "torque_tuning.omega_bar");
  positive(torque_tuning.xi_bar, "torque_tuning.xi_bar");
  positive(torque_tuning.q2_corner_hz, "torque_tuning.q2_corner_hz");
  positive(pd.rolloff, "pd.rolloff");
  std::set<std::string> names;
  for (const Scenario& s : scenarios) {
    if (s.name.empty()) throw Error(ErrorCode::kInvalidArgument, "scenario without a name");
    if (!names.insert(s.name).second) throw Error(ErrorCode::kInvalidArgument, "duplicate scenario '" + s.name + "'");
    s.validate();
  }
}

Config parse_config(const std::string& text) { return Parser(text).run(); }

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  Config c = parse_config(buf.str());
  c.validate();
  return c;
}

PiGains velocity_gains(const Config& c) {
  if (c.velocity_tuning.kpv && c.velocity_tuning.kiv) {
    return pi_from_gains(c.sea.motor, *c.velocity_tuning.kpv, *c.velocity_tuning.kiv);
  }
  return tune_pi(c.sea.motor, c.velocity_tuning.xi);
}

RationalTf design_plant(const Config& c) {
  if (c.plant) return RationalTf(c.plant->num, c.plant->den);
  return torque_plant(c.sea, velocity_gains(c));
}

Design synthesize(const Config& c) {
  Design d;
  if (!c.plant) d.gains = velocity_gains(c);
  d.plant = c.plant ? RationalTf(c.plant->num, c.plant->den) : torque_plant(c.sea, d.gains);
  d.stabilizer = optimal_stabilizer(d.plant);
  const CoprimeFactors f = coprime_factors(d.stabilizer, d.plant);
  const RationalTf q1 = design_q1(f, c.torque_tuning.omega_bar, c.torque_tuning.xi_bar);
  const RationalTf q2 = design_q2(c.torque_tuning.q2_corner_hz);
  d.controller = assemble_2dof(f, q1, q2);
  return d;
}

}  // namespace cablesea
