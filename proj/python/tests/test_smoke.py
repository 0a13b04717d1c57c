import math

import numpy as np
import pytest

import qperm


def test_builtin_groups_validate():
    for name in ["s3", "kp", "dual-s4"]:
        g = qperm.builtin(name)
        assert all(c["passed"] for c in qperm.validate(g)), name


def test_haar_absorbs_random_state():
    g = qperm.builtin("kp")
    h = g.haar()
    phi = qperm.random_state(g, 5)
    assert np.allclose(qperm.convolve(g, h, phi), h, atol=1e-10)
    assert np.allclose(qperm.convolve(g, phi, h), h, atol=1e-10)


def test_quantum_fractions():
    kp = qperm.builtin("kp")
    cv = qperm.classical_version(kp)
    assert cv.order == 4
    assert abs(qperm.quantum_fraction(kp, cv, kp.haar()) - 0.5) < 1e-9

    d4 = qperm.builtin("dual-s4")
    cv = qperm.classical_version(d4)
    assert abs(qperm.quantum_fraction(d4, cv, d4.haar()) - 11 / 12) < 1e-9


def test_cesaro_limit_is_idempotent():
    g = qperm.builtin("kp")
    r = qperm.cesaro(g, qperm.random_state(g, 9))
    assert r["converged"]
    assert qperm.is_idempotent(g, r["limit"], 1e-7)
    assert qperm.classify(g, r["limit"])["kind"] in {"Haar", "NonHaar"}


def test_fix_spectrum_dual_s4():
    ev = qperm.fix_spectrum(qperm.builtin("dual-s4"))
    for target in [(5 + math.sqrt(17)) / 2, (5 - math.sqrt(17)) / 2]:
        assert min(abs(x - target) for x in ev) < 1e-9


def test_phase_region_and_bounds():
    assert qperm.convolution_bounds(0.0, 1.0) == (1.0, 1.0)
    assert qperm.phase_region(0.5, 0.5)["region"] == "Boundary_W"
    assert qperm.phase_region(1.0, 1.0)["qhalfw"]
    with pytest.raises(ValueError):
        qperm.phase_region(1.5, 0.0)


def test_bad_inputs_raise():
    with pytest.raises(qperm.InputError):
        qperm.builtin("nope")
    g = qperm.builtin("s3")
    with pytest.raises(ValueError):
        qperm.convolve(g, np.ones(2), np.ones(6))


def test_run_experiment_document():
    doc = qperm.run_experiment({"name": "haar", "group": "kp"})
    assert doc["experiment"] == "haar"
    assert doc["passed"]
