import json
import math

import pytest

varlp = pytest.importorskip("varlp")


def chi_01(grid):
    return varlp.GridFunction.sample(grid, lambda x: 1.0 if 0.0 <= x < 1.0 else 0.0)


def test_norm_of_indicator():
    grid = varlp.Grid.uniform(varlp.Interval(-2.0, 2.0), 512)
    p2 = varlp.VariableExponent.constant(2.0)
    res = varlp.luxemburg_norm(chi_01(grid), p2)
    assert res["value"] == pytest.approx(1.0, rel=1e-8)
    assert res["modular_at_value"] <= 1.0


def test_exponent_algebra_and_json():
    p = varlp.VariableExponent.from_json(
        '{"kind":"piecewise","default":3,"pieces":[{"from":0,"to":1,"value":2}]}'
    )
    pc = varlp.conjugate(p)
    assert pc(0.5) == pytest.approx(2.0)
    assert pc(2.0) == pytest.approx(1.5)
    r = varlp.combine(varlp.VariableExponent.constant(3.0), varlp.VariableExponent.constant(6.0))
    assert r(0.0) == pytest.approx(2.0)
    assert varlp.harmonic_mean(varlp.VariableExponent.constant(3.0), varlp.Interval(0, 5)) == pytest.approx(3.0)


def test_log_holder_report():
    p = varlp.VariableExponent.from_json('{"kind":"constant","value":2}')
    rep = varlp.verify_log_holder(p, varlp.Interval(-2.0, 2.0), samples=128)
    assert rep["pass"]
    assert rep["c0"] == 0.0

    jump = varlp.VariableExponent.from_json('{"kind":"jump","at":0,"left":2,"right":3}')
    rep = varlp.verify_log_holder(jump, varlp.Interval(-2.0, 2.0), samples=128)
    assert not rep["pass"]


def test_maximal_and_average():
    grid = varlp.Grid.uniform(varlp.Interval(0.0, 2.0), 256)
    f = chi_01(grid)
    inf = varlp.VariableExponent.constant(varlp.INF)
    one = varlp.VariableExponent.constant(1.0)
    assert varlp.average_op(f, varlp.Interval(0.0, 2.0), inf, one) == pytest.approx(0.5, rel=1e-9)
    cubes = varlp.test_cubes(varlp.Interval(0.0, 2.0), 0, 4, 1)
    assert varlp.maximal(f, 0.5, cubes, inf, one) == pytest.approx(1.0, rel=1e-9)


def test_weight_classes():
    grid = varlp.Grid.graded(varlp.Interval(-2.0, 2.0), [0.0], 256)
    cubes = varlp.test_cubes(varlp.Interval(-2.0, 2.0), 0, 10, 0)
    good = varlp.Weight.power(grid, 0.5, 0.0)
    bad = varlp.Weight.power(grid, 1.5, 0.0)
    assert varlp.test_Ap_classical(good, 2.0, cubes)["verdict"] == "bounded"
    assert varlp.test_Ap_classical(bad, 2.0, cubes)["verdict"] == "diverging"


def test_cz_decomposition():
    fam = varlp.DyadicFamily(varlp.Interval(0.0, 4.0), 8)
    f = chi_01(fam.aligned_grid())
    inf = varlp.VariableExponent.constant(varlp.INF)
    one = varlp.VariableExponent.constant(1.0)
    cubes = varlp.cz_decompose(f, inf, one, fam, 0.5)
    assert len(cubes) == 1
    a, b, avg = cubes[0]
    assert (a, b) == (0.0, 1.0)
    assert avg == pytest.approx(1.0, rel=1e-9)


def test_kernels_and_probe():
    assert varlp.kernel_K1(2.5) == 1.0
    assert varlp.kernel_K2(1.0, 1.0) == pytest.approx(1.0)
    kt = varlp.kernel_by_name("Ktilde", 1.0)
    grid = varlp.Grid.uniform(varlp.Interval(0.0, 8.0), 512)
    f = varlp.GridFunction.sample(grid, lambda y: 1.0 if 2.0 <= y < 3.0 else 0.0)
    assert varlp.apply_operator(kt, f, 3.5) > 0.0
    assert varlp.apply_operator(kt, f, 2.9) == 0.0

    r2 = varlp.VariableExponent.constant(2.0)
    inf = varlp.VariableExponent.constant(varlp.INF)
    cubes = [(c, c + 2.0) for c in range(-8, 14)]
    rep = varlp.hormander_class_probe(kt, inf, r2, 1, cubes)
    assert rep["verdict"] == "bounded"


def test_scenario_roundtrip():
    report = json.loads(
        varlp.run_scenario(json.dumps({"id": "s", "target": "holder", "seed": 3, "trials": 5}))
    )
    assert report["pass"]
    assert report["target"] == "holder"
    assert not math.isnan(report["max_ratio"])
