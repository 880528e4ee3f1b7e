import json
import math

import numpy as np
import pytest

import planewave as pw


def cw4():
    r = math.sqrt(15.0)
    return pw.ModelSpec.cahen_wallach(np.array([[6.0, r], [r, 4.0]]), K=[-np.eye(2)])


def test_cw4_eigenvalues():
    ev = sorted(z.real for z in pw.l_eigenvalues(cw4()))
    assert ev == pytest.approx([-3, -1, 0, 1, 3], abs=1e-10)


def test_heis_group_law_matches_matrix_model():
    def mat(h):
        n = len(h.alpha)
        m = np.eye(n + 2)
        m[0, 1 : n + 1] = h.alpha
        m[0, n + 1] = h.z
        m[1 : n + 1, n + 1] = h.beta
        return m

    a = pw.HeisElement([0.3, -1.0], [2.0, 0.5], 0.7)
    b = pw.HeisElement([-0.4, 0.2], [0.1, 1.5], -0.3)
    got = mat(a * b)
    assert np.allclose(got, mat(a) @ mat(b), atol=1e-14)


def test_flatness_dichotomy():
    flat = pw.ModelSpec.cahen_wallach(2.0 * np.eye(2))
    pts = flat.sample_points(8, 1)
    assert pw.conformal_flatness(flat, pts)["verdict"] == "conformally_flat"
    rep = pw.conformal_flatness(cw4(), cw4().sample_points(8, 1))
    assert rep["verdict"] == "not_conformally_flat"
    assert rep["max_component"] > 1e-2


def test_conf_flow_is_similarity():
    spec = cw4()
    rep = pw.similarity_factor(spec, pw.realize_conf_flow(spec, 0.3), spec.sample_points(16, 2))
    assert rep["verdict"] == "similarity"
    assert rep["factor"] == pytest.approx(math.exp(0.6), abs=1e-9)


def test_heis_realization_is_isometry():
    spec = cw4()
    h = pw.HeisElement([0.5, -0.2], [0.1, 0.3], 0.4)
    rep = pw.similarity_factor(spec, pw.realize_heis(spec, h), spec.sample_points(16, 3))
    assert rep["verdict"] == "isometry"


def test_lattice_examples():
    assert pw.lattice_preservation(np.array([[2.0, 1.0], [1.0, 1.0]]))["verdict"] == "preserved"
    bad = pw.lattice_preservation(np.diag([math.e**2, math.e**-2]))
    assert bad["verdict"] == "not_preserved"


def test_example2_adjusted_passes():
    ex = pw.build_example("example2", adjusted=True)
    assert ex["has_gamma"]
    assert ex["properness"]["verdict"] == "pass"
    assert not pw.build_example("example2")["has_gamma"]


def test_gauge_cocycle():
    u = np.linspace(-3, 3, 101)
    f = np.array(pw.gauge_value(1.0, 2.0, "bump", 0.25, u))
    g = np.array(pw.gauge_value(1.0, 2.0, "bump", 0.25, u + 1.0))
    assert np.max(np.abs(g - f + 2.0)) < 1e-10
    with pytest.raises(ValueError):
        pw.gauge_value(0.0, 1.0, "linear", 0.25, u)


def test_spec_validation_errors_are_line_anchored():
    text = '{\n "model": {\n  "n": 2,\n  "profile": {"constant": [[1, 2], [3, 1]]}\n }\n}\n'
    with pytest.raises(pw.SpecError, match="line 4"):
        pw.validate_spec(text)


def test_run_example_report():
    report, passed = pw.run_example("example2", adjusted=True, samples=8)
    assert passed
    assert report["status"] == "pass"


def test_example_spec_round_trips():
    ex = pw.build_example("cw4", adjusted=True)
    doc = ex["spec"]
    assert pw.validate_spec(json.dumps(doc)) == doc
    assert "spec" not in pw.build_example("cw4")
