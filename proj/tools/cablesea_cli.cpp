#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "cablesea/artifacts.hpp"
#include "cablesea/config.hpp"
#include "cablesea/error.hpp"

namespace fs = std::filesystem;
using namespace cablesea;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path.string());
  out << text;
  std::cout << "wrote " << path.string() << '\n';
}

std::string describe(const RationalTf& g) {
  return "(" + to_string(g.num(), 10) + ") / (" + to_string(g.den(), 10) + ")";
}

int tune_velocity(const Config& cfg, const fs::path& out_dir) {
  const RationalTf gv = velocity_plant(cfg.sea.motor);
  const PiGains tuned = tune_pi(cfg.sea.motor, cfg.velocity_tuning.xi);
  std::cout << "G_v(s) = " << describe(gv) << '\n';
  std::cout << "motor poles: p1 = " << format_double(tuned.p1) << " rad/s, p2 = " << format_double(tuned.p2)
            << " rad/s\n";
  std::cout << "tuned PI (xi = " << format_double(tuned.xi) << "): kpv = " << format_double(tuned.kpv)
            << ", kiv = " << format_double(tuned.kiv) << ", omega_n = " << format_double(tuned.omega_n) << '\n';
  const PiGains used = velocity_gains(cfg);
  if (cfg.velocity_tuning.kpv) {
    std::cout << "configured PI: kpv = " << format_double(used.kpv) << ", kiv = " << format_double(used.kiv) << '\n';
  }

  Scenario sc;
  sc.name = "velocity_step";
  sc.loop = LoopKind::kVelocity;
  sc.duration = 0.02;
  sc.dt = 1e-5;
  const SimResult res = run_velocity(cfg.sea.motor, used, sc);
  std::cout << "unit step: rise_time = " << format_double(res.metrics.rise_time)
            << " s, overshoot = " << format_double(res.metrics.overshoot)
            << ", settling_time = " << format_double(res.metrics.settling_time) << " s\n";

  std::ostringstream report;
  report << "G_v_num = " << format_coeffs(gv.num()) << '\n';
  report << "G_v_den = " << format_coeffs(gv.den()) << '\n';
  report << "p1 = " << format_double(tuned.p1) << '\n';
  report << "p2 = " << format_double(tuned.p2) << '\n';
  report << "xi = " << format_double(tuned.xi) << '\n';
  report << "omega_n = " << format_double(tuned.omega_n) << '\n';
  report << "kpv = " << format_double(tuned.kpv) << '\n';
  report << "kiv = " << format_double(tuned.kiv) << '\n';
  report << "used_kpv = " << format_double(used.kpv) << '\n';
  report << "used_kiv = " << format_double(used.kiv) << '\n';
  report << "rise_time = " << format_double(res.metrics.rise_time) << '\n';
  report << "overshoot = " << format_double(res.metrics.overshoot) << '\n';
  report << "settling_time = " << format_double(res.metrics.settling_time) << '\n';
  write_file(out_dir / "velocity_tuning.txt", report.str());
  return 0;
}

int synthesize_cmd(const Config& cfg, const fs::path& out_dir) {
  const Design d = synthesize(cfg);
  const ControllerArtifact a = make_artifact(d, cfg.torque_tuning);
  const OptimalStabilizer& st = d.stabilizer;
  std::cout << "P(s) = " << describe(d.plant) << '\n';
  std::cout << "d(s) = " << to_string(st.d, 10) << '\n';
  std::cout << "p(s) = " << to_string(st.p, 10) << '\n';
  std::cout << "q(s) = " << to_string(st.q, 10) << '\n';
  std::cout << "J* = " << format_double(st.j_star) << '\n';
  std::cout << "Bezout residual = " << format_double(a.bezout_residual) << '\n';
  std::cout << "r->z target: omega_bar = " << format_double(cfg.torque_tuning.omega_bar)
            << " rad/s, xi_bar = " << format_double(cfg.torque_tuning.xi_bar) << '\n';
  std::cout << "C1(s) = " << describe(d.controller.c1) << '\n';
  std::cout << "C2(s) = " << describe(d.controller.c2) << '\n';
  write_file(out_dir / "controller.txt", format_controller(a));
  return 0;
}

void write_run(const fs::path& out_dir, const SimResult& res) {
  const std::string stem = res.scenario.name + "_" + res.controller;
  write_file(out_dir / (stem + ".csv"), traces_csv(res));
  write_file(out_dir / (stem + "_metrics.json"), metrics_json(res));
}

int simulate_cmd(const Config& cfg, const std::string& name, const std::string& which, std::optional<std::uint64_t> seed,
                 const fs::path& out_dir) {
  Scenario sc = cfg.scenario(name);
  if (seed) {
    sc.disturbance.seed = *seed;
    sc.noise.seed = *seed + 1;
  }
  if (sc.loop == LoopKind::kVelocity) {
    const SimResult res = run_velocity(cfg.sea.motor, velocity_gains(cfg), sc);
    write_run(out_dir, res);
    std::cout << metrics_json(res);
    return 0;
  }
  const RationalTf plant = design_plant(cfg);
  std::optional<SimResult> two;
  std::optional<SimResult> pd;
  if (which != "pd") {
    const Design d = synthesize(cfg);
    two = run_2dof(d.plant, d.controller, sc);
    write_run(out_dir, *two);
  }
  if (which != "2dof") {
    pd = run_pd(plant, cfg.pd.kp, cfg.pd.kd, sc, cfg.pd.rolloff);
    write_run(out_dir, *pd);
  }
  if (two && pd) {
    const Comparison c = compare(*two, *pd);
    const std::string report = comparison_report(c);
    write_file(out_dir / (name + "_compare.txt"), report);
    write_file(out_dir / (name + "_compare.csv"), comparison_csv(c));
    std::cout << report;
  } else {
    std::cout << metrics_json(two ? *two : *pd);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Torque control design and simulation for a cable-driven series elastic actuator"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out;
  app.add_option("--config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out, "Output directory (overrides the config)");

  auto* tune = app.add_subcommand("tune-velocity", "Velocity plant, PI gains and step metrics");
  auto* synth = app.add_subcommand("synthesize", "Optimal stabilizer and 2-DOF controller artifact");
  auto* sim = app.add_subcommand("simulate", "Run a configured scenario");
  std::string scenario;
  std::string controller = "both";
  std::optional<std::uint64_t> seed;
  sim->add_option("--scenario", scenario, "Scenario name")->required();
  sim->add_option("--controller", controller, "Controller to run")
      ->check(CLI::IsMember({"2dof", "pd", "both"}));
  sim->add_option("--seed", seed, "Disturbance seed; the noise seed is seed + 1");
  for (auto* sub : {tune, synth, sim}) {
    sub->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const Config cfg = load_config(config_path);
    const fs::path out_dir = out.empty() ? cfg.output_dir : fs::path(out);
    if (*tune) return tune_velocity(cfg, out_dir);
    if (*synth) return synthesize_cmd(cfg, out_dir);
    return simulate_cmd(cfg, scenario, controller, seed, out_dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
