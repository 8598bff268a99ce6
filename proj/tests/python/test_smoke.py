import math
from pathlib import Path

import numpy as np
import pytest

import cablesea as cs

PAPER_CFG = Path(__file__).resolve().parents[2] / "configs" / "paper.cfg"


def test_velocity_plant_and_gains():
    motor = cs.MotorParams()
    g = cs.velocity_plant(motor)
    assert g.order == 2
    assert g.num.coeffs[0] == pytest.approx(1.217e7, rel=5e-3)
    gains = cs.tune_pi(motor, 0.88)
    assert gains.kpv == pytest.approx(0.26, rel=0.02)
    assert gains.kiv == pytest.approx(53.5, rel=0.02)


def test_errors_carry_a_code():
    motor = cs.MotorParams()
    with pytest.raises(cs.Error) as info:
        cs.tune_pi(motor, 1.5)
    assert info.value.code == "InvalidArgument"
    with pytest.raises(cs.Error) as info:
        cs.optimal_stabilizer(cs.RationalTf(cs.Polynomial([1.0]), cs.Polynomial([1.0])))
    assert info.value.code == "NotStrictlyProper"


def test_toy_stabilizer():
    plant = cs.RationalTf(cs.Polynomial([1.0]), cs.Polynomial([1.0, 1.0]))
    stab = cs.optimal_stabilizer(plant)
    assert stab.d.coeffs[1] == pytest.approx(math.sqrt(2.0))
    assert stab.j_star == pytest.approx(0.485281, rel=1e-6)
    assert cs.transient_cost(plant, stab.controller()) == pytest.approx(stab.j_star, rel=5e-3)
    factors = cs.coprime_factors(stab, plant)
    assert cs.bezout_residual(factors, cs.log_frequencies(1e-2, 1e3, 50)) < 1e-8


def test_synthesis_from_config():
    cfg = cs.load_config(str(PAPER_CFG))
    design = cs.synthesize(cfg)
    f = design.controller.factors
    assert cs.bezout_residual(f, cs.log_frequencies(1e-2, 1e5, 50)) < 1e-8
    target = cs.second_order(451.24, 0.826)
    for w in (1.0, 100.0, 1000.0):
        got = cs.youla_response(design.controller, w)["r"][3]
        assert abs(got - target.freq_response(w)) < 1e-6 * abs(target.freq_response(w))
    text = cs.format_controller(design, cfg.torque_tuning)
    assert text.startswith("# cablesea")
    assert "[Q1]" in text


def test_step_simulation():
    cfg = cs.load_config(str(PAPER_CFG))
    design = cs.synthesize(cfg)
    sc = cfg.scenario("fig8")
    res = cs.run_2dof(design.plant, design.controller, sc)
    z = res.trace("z")
    assert isinstance(z, np.ndarray)
    assert set(res.traces) == {"r", "d", "n", "u", "v", "y", "z"}
    assert z[-1] == pytest.approx(1.0, abs=1e-3)
    assert res.metrics.steady_state_error < 0.01
    xi = 0.826
    analytic = math.exp(-math.pi * xi / math.sqrt(1.0 - xi * xi))
    assert abs(res.metrics.overshoot - analytic) < 0.01
    csv = res.to_csv().splitlines()
    assert csv[0].startswith("# dt=")
    assert csv[1] == "t,r[Nm],d[rad/s],n[Nm],u[rad/s],v[rad/s],y[Nm],z[Nm]"


def test_generate_is_deterministic():
    sc = cs.Scenario.sinusoid(1.0, 5.0)
    sc.dt = 1e-3
    sc.noise = cs.NoiseSpec(0.1, 2)
    a = cs.generate(sc)
    b = cs.generate(sc)
    assert np.array_equal(a["n"], b["n"])
    k = np.arange(len(a["r"]))
    assert np.allclose(a["r"], np.sin(2 * np.pi * 5.0 * k * 1e-3), atol=1e-12)
    assert np.all(a["d"] == 0.0)
