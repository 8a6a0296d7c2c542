import math

import pytest

import stfosls


def test_uniform_mesh_and_bisection():
    mesh = stfosls.uniform_mesh(1.0, (0.0, 1.0), 2, 2)
    assert mesh.num_elements == 8
    assert mesh.num_points == 9
    assert mesh.is_conforming()
    total = sum(mesh.measure(k) for k in range(mesh.num_elements))
    assert total == pytest.approx(1.0, abs=1e-14)

    fine = mesh.bisect([0])
    assert fine.is_conforming()
    assert fine.num_elements > mesh.num_elements
    assert sum(fine.measure(k) for k in range(fine.num_elements)) == pytest.approx(1.0)
    assert mesh.bisect_all().num_elements == 16

    with pytest.raises(IndexError):
        mesh.bisect([99])


def test_mesh_dump_round_trip():
    mesh = stfosls.uniform_mesh(nt=3, nx=2).bisect([1, 4])
    text = mesh.dump()
    assert text.startswith("spacetime-mesh v1")
    again = stfosls.Mesh.load(text)
    assert again.points == mesh.points
    assert again.elements == mesh.elements


def test_quadrature_integrates_monomials():
    points, weights = stfosls.triangle_quadrature(4)
    assert sum(weights) == pytest.approx(0.5, abs=1e-15)
    # int x^2 y^2 over the reference triangle = 2! 2! / 6!
    value = sum(w * p[0] ** 2 * p[1] ** 2 for p, w in zip(points, weights))
    assert value == pytest.approx(4 / 720, rel=1e-13)


def test_marking():
    eta = [3.0, 2.0, 1.0]
    assert stfosls.mark_doerfler(eta, 0.5) == [0]
    assert stfosls.mark_maximum(eta, 0.5) == [0, 1]
    assert stfosls.verify_marking_property(eta, [0])
    assert not stfosls.verify_marking_property(eta, [2])
    with pytest.raises(ValueError):
        stfosls.mark_doerfler(eta, 0.0)


def test_uniform_heat_rate():
    run = stfosls.run_case("heat-smooth", mode="uniform", levels=4)
    assert run["reason"] == "levels_completed"
    records = run["records"]
    assert len(records) == 4
    a, b = records[-2], records[-1]
    order = math.log(a["error"] / b["error"]) / math.log(a["h_max"] / b["h_max"])
    assert 0.85 <= order <= 1.15


def test_adaptive_incompatible_run():
    run = stfosls.run_case("incompatible", max_iterations=6)
    records = run["records"]
    assert len(records) == 6
    assert all(r["error"] is None for r in records)
    assert records[-1]["estimator"] < records[0]["estimator"]
    assert run["mesh"].is_conforming()
    assert run["mesh"].num_elements == records[-1]["elements"]


def test_parameter_errors():
    assert "poisson-smooth" in stfosls.builtin_case_names()
    with pytest.raises(ValueError):
        stfosls.run_case("nonsense")
    with pytest.raises(ValueError):
        stfosls.run_case("heat-smooth", degree=3)
    with pytest.raises(ValueError):
        stfosls.run_case("heat-smooth", marking="maximum", theta=2.0)


def test_verify():
    ok, report = stfosls.verify(3)
    assert ok, report
    assert report.count("PASS") >= 6
