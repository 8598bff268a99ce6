#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cablesea/artifacts.hpp"
#include "cablesea/config.hpp"
#include "cablesea/error.hpp"
#include "cablesea/lti.hpp"
#include "cablesea/polynomial.hpp"
#include "cablesea/sea.hpp"
#include "cablesea/sim.hpp"
#include "cablesea/synthesis.hpp"

namespace py = pybind11;
using namespace cablesea;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

py::dict traces_dict(const SimResult& r) {
  py::dict out;
  for (const auto& [name, s] : r.traces) out[py::str(name)] = to_array(s.samples);
  return out;
}

py::dict maps_dict(const ClosedLoopMaps<std::complex<double>>& m) {
  py::dict out;
  out["r"] = m.r;
  out["dn"] = m.dn;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cable-driven SEA modeling, 2-DOF torque controller synthesis and simulation";

  static py::handle error_type = py::exception<Error>(m, "Error", PyExc_RuntimeError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("code") = py::str(std::string(to_string(e.code())));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<Polynomial>(m, "Polynomial")
      .def(py::init<std::vector<double>>(), py::arg("coeffs"))
      .def_property_readonly("coeffs", &Polynomial::coeffs)
      .def_property_readonly("degree", &Polynomial::degree)
      .def("__call__", py::overload_cast<std::complex<double>>(&Polynomial::operator(), py::const_))
      .def("roots", [](const Polynomial& p) { return roots(p); })
      .def("is_hurwitz", [](const Polynomial& p) { return is_hurwitz(p); })
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def(py::self == py::self)
      .def("__repr__", [](const Polynomial& p) { return "Polynomial(" + to_string(p) + ")"; });

  m.def("spectral_factor", [](const Polynomial& a, const Polynomial& b) { return spectral_factor(a, b); },
        py::arg("a"), py::arg("b"));
  m.def("solve_diophantine",
        [](const Polynomial& a, const Polynomial& b, const Polynomial& target) {
          DiophantineSolution s = solve_diophantine(a, b, target);
          return py::make_tuple(s.p, s.q);
        },
        py::arg("a"), py::arg("b"), py::arg("target"));

  py::class_<RationalTf>(m, "RationalTf")
      .def(py::init<Polynomial, Polynomial>(), py::arg("num"), py::arg("den"))
      .def_property_readonly("num", &RationalTf::num)
      .def_property_readonly("den", &RationalTf::den)
      .def_property_readonly("order", &RationalTf::order)
      .def("dc_gain", &RationalTf::dc_gain)
      .def("freq_response", [](const RationalTf& g, double w) { return freq_response(g, w); }, py::arg("omega"))
      .def("is_stable", [](const RationalTf& g) { return is_stable(g); })
      .def("h2_norm_sq", [](const RationalTf& g) { return h2_norm_sq(g); })
      .def(py::self + py::self)
      .def(py::self * py::self)
      .def("__repr__", [](const RationalTf& g) {
        return "RationalTf((" + to_string(g.num()) + ") / (" + to_string(g.den()) + "))";
      });
  m.def("feedback", &feedback, py::arg("g"), py::arg("h") = RationalTf::gain(1.0));

  py::class_<MotorParams>(m, "MotorParams")
      .def(py::init<>())
      .def_readwrite("inertia", &MotorParams::inertia)
      .def_readwrite("inductance", &MotorParams::inductance)
      .def_readwrite("resistance", &MotorParams::resistance)
      .def_readwrite("torque_constant", &MotorParams::torque_constant)
      .def_readwrite("back_emf_constant", &MotorParams::back_emf_constant)
      .def_readwrite("viscous_friction", &MotorParams::viscous_friction);

  py::class_<SeaParams>(m, "SeaParams")
      .def(py::init<>())
      .def_readwrite("motor", &SeaParams::motor)
      .def_readwrite("spring_stiffness", &SeaParams::spring_stiffness)
      .def_readwrite("gear_ratio", &SeaParams::gear_ratio)
      .def_readwrite("spring_damping", &SeaParams::spring_damping)
      .def_readwrite("spring_inertia", &SeaParams::spring_inertia)
      .def_readwrite("load_inertia", &SeaParams::load_inertia);

  py::class_<PiGains>(m, "PiGains")
      .def_readonly("kpv", &PiGains::kpv)
      .def_readonly("kiv", &PiGains::kiv)
      .def_readonly("omega_n", &PiGains::omega_n)
      .def_readonly("xi", &PiGains::xi)
      .def_readonly("p1", &PiGains::p1)
      .def_readonly("p2", &PiGains::p2);

  m.def("velocity_plant", &velocity_plant, py::arg("motor"));
  m.def("tune_pi", &tune_pi, py::arg("motor"), py::arg("xi"));
  m.def("pi_from_gains", &pi_from_gains, py::arg("motor"), py::arg("kpv"), py::arg("kiv"));
  m.def("velocity_closed_loop", &velocity_closed_loop, py::arg("motor"), py::arg("gains"),
        py::arg("exact_cancellation") = false);
  m.def("spring_torque_tf", &spring_torque_tf, py::arg("sea"));
  m.def("torque_plant", &torque_plant, py::arg("sea"), py::arg("gains"));

  py::class_<OptimalStabilizer>(m, "OptimalStabilizer")
      .def_readonly("a", &OptimalStabilizer::a)
      .def_readonly("b", &OptimalStabilizer::b)
      .def_readonly("p", &OptimalStabilizer::p)
      .def_readonly("q", &OptimalStabilizer::q)
      .def_readonly("d", &OptimalStabilizer::d)
      .def_readonly("j_star", &OptimalStabilizer::j_star)
      .def("controller", &OptimalStabilizer::controller);

  py::class_<CoprimeFactors>(m, "CoprimeFactors")
      .def_readonly("M", &CoprimeFactors::m)
      .def_readonly("N", &CoprimeFactors::n)
      .def_readonly("X", &CoprimeFactors::x)
      .def_readonly("Y", &CoprimeFactors::y)
      .def_readonly("one_minus_X", &CoprimeFactors::one_minus_x);

  py::class_<TwoDofController>(m, "TwoDofController")
      .def_readonly("factors", &TwoDofController::factors)
      .def_readonly("Q1", &TwoDofController::q1)
      .def_readonly("Q2", &TwoDofController::q2)
      .def_readonly("C1", &TwoDofController::c1)
      .def_readonly("C2", &TwoDofController::c2);

  m.def("optimal_stabilizer", &optimal_stabilizer, py::arg("plant"));
  m.def("transient_cost", &transient_cost, py::arg("plant"), py::arg("controller"));
  m.def("internally_stable", &internally_stable, py::arg("plant"), py::arg("controller"));
  m.def("coprime_factors", &coprime_factors, py::arg("stabilizer"), py::arg("plant"));
  m.def("bezout_residual",
        [](const CoprimeFactors& f, const std::vector<double>& omegas) { return bezout_residual(f, omegas); },
        py::arg("factors"), py::arg("omegas"));
  m.def("log_frequencies", &log_frequencies, py::arg("lo"), py::arg("hi"), py::arg("count"));
  m.def("second_order", &second_order, py::arg("omega"), py::arg("xi"));
  m.def("design_q1", &design_q1, py::arg("factors"), py::arg("omega_bar"), py::arg("xi_bar"));
  m.def("design_q2", &design_q2, py::arg("corner_hz"));
  m.def("assemble_2dof", &assemble_2dof, py::arg("factors"), py::arg("q1"), py::arg("q2"));
  m.def("closed_loop_response",
        [](const TwoDofController& c, const RationalTf& p, double w) { return maps_dict(closed_loop_response(c, p, w)); },
        py::arg("controller"), py::arg("plant"), py::arg("omega"));
  m.def("youla_response",
        [](const TwoDofController& c, double w) { return maps_dict(youla_response(c, w)); }, py::arg("controller"),
        py::arg("omega"));

  py::enum_<LoopKind>(m, "LoopKind").value("TORQUE", LoopKind::kTorque).value("VELOCITY", LoopKind::kVelocity);

  py::class_<NoiseSpec>(m, "NoiseSpec")
      .def(py::init([](double stddev, std::uint64_t seed, double hold) { return NoiseSpec{stddev, seed, hold}; }),
           py::arg("stddev") = 0.0, py::arg("seed") = 0, py::arg("hold") = 0.0)
      .def_readwrite("stddev", &NoiseSpec::stddev)
      .def_readwrite("seed", &NoiseSpec::seed)
      .def_readwrite("hold", &NoiseSpec::hold);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_static("step",
                  [](double amplitude) {
                    Scenario s;
                    s.name = "step";
                    s.reference = {ReferenceSpec::Kind::kStep, amplitude, 0.0};
                    return s;
                  },
                  py::arg("amplitude") = 1.0)
      .def_static("sinusoid",
                  [](double amplitude, double freq_hz) {
                    Scenario s;
                    s.name = "sinusoid";
                    s.reference = {ReferenceSpec::Kind::kSinusoid, amplitude, freq_hz};
                    s.duration = 10.0 / freq_hz;
                    return s;
                  },
                  py::arg("amplitude"), py::arg("freq_hz"))
      .def_readwrite("name", &Scenario::name)
      .def_readwrite("loop", &Scenario::loop)
      .def_readwrite("disturbance", &Scenario::disturbance)
      .def_readwrite("noise", &Scenario::noise)
      .def_readwrite("duration", &Scenario::duration)
      .def_readwrite("dt", &Scenario::dt)
      .def_readwrite("record_every", &Scenario::record_every)
      .def_property(
          "amplitude", [](const Scenario& s) { return s.reference.amplitude; },
          [](Scenario& s, double a) { s.reference.amplitude = a; })
      .def_property_readonly("is_sinusoid",
                             [](const Scenario& s) { return s.reference.kind == ReferenceSpec::Kind::kSinusoid; })
      .def_property_readonly("freq_hz", [](const Scenario& s) { return s.reference.freq_hz; })
      .def("validate", &Scenario::validate)
      .def_property_readonly("samples", &Scenario::samples);

  m.def("generate",
        [](const Scenario& sc) {
          const ScenarioSignals s = generate(sc);
          py::dict out;
          out["r"] = to_array(s.r.samples);
          out["d"] = to_array(s.d.samples);
          out["n"] = to_array(s.n.samples);
          return out;
        },
        py::arg("scenario"));

  py::class_<SimMetrics>(m, "SimMetrics")
      .def_readonly("rise_time", &SimMetrics::rise_time)
      .def_readonly("overshoot", &SimMetrics::overshoot)
      .def_readonly("settling_time", &SimMetrics::settling_time)
      .def_readonly("rms_tracking_error", &SimMetrics::rms_tracking_error)
      .def_readonly("steady_state_error", &SimMetrics::steady_state_error);

  py::class_<SimResult>(m, "SimResult")
      .def_readonly("controller", &SimResult::controller)
      .def_readonly("scenario", &SimResult::scenario)
      .def_readonly("metrics", &SimResult::metrics)
      .def_property_readonly("dt", [](const SimResult& r) { return r.traces.front().second.dt; })
      .def_property_readonly("traces", &traces_dict)
      .def("trace", [](const SimResult& r, const std::string& name) { return to_array(r.trace(name).samples); })
      .def("to_csv", &traces_csv)
      .def("metrics_json", &metrics_json);

  m.def("run_2dof", &run_2dof, py::arg("plant"), py::arg("controller"), py::arg("scenario"));
  m.def("run_pd", &run_pd, py::arg("plant"), py::arg("kp"), py::arg("kd"), py::arg("scenario"),
        py::arg("rolloff") = 1e5);
  m.def("run_velocity", &run_velocity, py::arg("motor"), py::arg("gains"), py::arg("scenario"));
  m.def("compare_report", [](const SimResult& a, const SimResult& b) { return comparison_report(compare(a, b)); },
        py::arg("a"), py::arg("b"));

  py::class_<TorqueTuning>(m, "TorqueTuning")
      .def(py::init<>())
      .def_readwrite("omega_bar", &TorqueTuning::omega_bar)
      .def_readwrite("xi_bar", &TorqueTuning::xi_bar)
      .def_readwrite("q2_corner_hz", &TorqueTuning::q2_corner_hz);

  py::class_<PdGains>(m, "PdGains")
      .def_readwrite("kp", &PdGains::kp)
      .def_readwrite("kd", &PdGains::kd)
      .def_readwrite("rolloff", &PdGains::rolloff);

  py::class_<Config>(m, "Config")
      .def(py::init<>())
      .def_readwrite("sea", &Config::sea)
      .def_readwrite("torque_tuning", &Config::torque_tuning)
      .def_readwrite("pd", &Config::pd)
      .def_readonly("scenarios", &Config::scenarios)
      .def_readonly("output_dir", &Config::output_dir)
      .def("scenario", &Config::scenario, py::arg("name"))
      .def("validate", &Config::validate);

  py::class_<Design>(m, "Design")
      .def_readonly("gains", &Design::gains)
      .def_readonly("plant", &Design::plant)
      .def_readonly("stabilizer", &Design::stabilizer)
      .def_readonly("controller", &Design::controller);

  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));
  m.def("velocity_gains", &velocity_gains, py::arg("config"));
  m.def("design_plant", &design_plant, py::arg("config"));
  m.def("synthesize", &synthesize, py::arg("config"));
  m.def("format_controller",
        [](const Design& d, const TorqueTuning& t) { return format_controller(make_artifact(d, t)); },
        py::arg("design"), py::arg("tuning"));
}
