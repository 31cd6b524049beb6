import math
import os

import numpy as np
import pytest

import minkres as mr

FIXTURES = os.environ.get("MINKRES_FIXTURES", os.path.join(os.path.dirname(__file__), "..", "..", "fixtures"))


def test_norm_values():
    assert mr.NormSpec.p_norm(2, math.inf)([1.0, 1.0]) == 1.0
    assert mr.eval_norm(mr.NormSpec.euclidean(2), np.array([3.0, 4.0])) == pytest.approx(5.0)
    assert mr.parallelogram_defect(mr.NormSpec.p_norm(2, 1), [1, 0], [0, 1]) == pytest.approx(-4.0)
    hexagon = mr.NormSpec.load(os.path.join(FIXTURES, "hexagon.json"))
    assert hexagon.kind == "polyhedral"
    assert hexagon([2.0, 0.0]) == pytest.approx(2.0)


def test_json_round_trip():
    n = mr.NormSpec.p_norm(3, 1.5)
    back = mr.NormSpec.from_json(n.to_json())
    v = [0.3, -1.25, 2.0]
    assert back(v) == n(v)
    with pytest.raises(mr.ParseError):
        mr.NormSpec.from_json('{"kind": "p_norm", "dim": 2}')


def test_bisector():
    linf = mr.NormSpec.p_norm(2, math.inf)
    member, residual = mr.membership(linf, [0, 0], [1, 0], [3, 5])
    assert member and residual == 0.0
    pts = mr.line_intersect(linf, [0, 0], [1, 0], [0, 2])
    assert len(pts) == 2
    np.testing.assert_allclose(pts[0], [-1, 2], atol=1e-12)
    fit = mr.slab_fit(mr.NormSpec.euclidean(3), [0, 0, 0], [0.3, 1, -2])
    assert fit["verdict"] == "sandwiched"


def test_multilaterate_ambiguous_fixture():
    anchors = [np.array(p, dtype=float) for p in [[0, -1], [-4, 6], [4, 6]]]
    out = mr.multilaterate(anchors, mr.NormSpec.p_norm(2, math.inf), [2.0, 5.0, 5.0])
    np.testing.assert_allclose(out["solutions"], [[-1, 1], [1, 1]], atol=1e-6)

    e = mr.NormSpec.euclidean(2)
    tri = [np.array(p, dtype=float) for p in [[0, 0], [1, 0], [0, 1]]]
    r = mr.distances_from(tri, e, [0.25, 0.25])
    uniq = mr.multilaterate(tri, e, r)
    assert len(uniq["components"]) == 1
    np.testing.assert_allclose(uniq["solutions"][0], [0.25, 0.25], atol=1e-9)
    with pytest.raises(mr.InfeasibleDistances):
        mr.multilaterate(tri, e, [0.0, 0.0, 1.0])


def test_counterexamples():
    cert = mr.srs2_counterexample(mr.NormSpec.p_norm(2, math.inf))
    assert cert["equidistance_residual"] < 1e-8
    assert cert["hull_margin"] > 1e-6
    assert mr.verify_certificate(cert)["passed"]
    anchors = [np.array(p) for p in cert["anchors"]]
    report = mr.is_resolving_for_hull(anchors, mr.NormSpec.p_norm(2, math.inf))
    assert report["resolving"] is False

    c3 = mr.srs3_counterexample(mr.NormSpec.p_norm(3, 4))
    assert len(c3["anchors"]) == 4
    lifted = mr.lift_to_dimension(c3, mr.NormSpec.p_norm(4, 4))
    assert len(lifted["anchors"]) == 5
    assert mr.verify_certificate(lifted)["passed"]

    with pytest.raises(mr.NormIsEuclidean):
        mr.srs3_counterexample(mr.NormSpec.euclidean(3))
    with pytest.raises(mr.NormIsStrictlyConvex):
        mr.srs2_counterexample(mr.NormSpec.p_norm(2, 3))


def test_classification_and_gauss_fit():
    assert mr.classify_norm(mr.NormSpec.ellipsoidal(np.diag([1.0, 2.0, 3.0])))["class"] == "euclidean"
    assert mr.classify_norm(mr.NormSpec.p_norm(3, 4))["class"] == "strictly_convex_non_euclidean"
    fit = mr.fit_gauss_map(mr.NormSpec.ellipsoidal(np.diag([1.0, 2.0, 3.0])))
    a = np.array(fit["A"])
    np.testing.assert_allclose(a / a[0, 0], np.diag([1, 1 / 2, 1 / 3]), atol=1e-6)
    assert fit["definiteness"] == "positive_definite"
    assert mr.line_preservation_test(mr.NormSpec.p_norm(3, 4)) > 1e-2


def test_errors_are_value_errors():
    with pytest.raises(ValueError):
        mr.NormSpec.p_norm(2, 0.5)
    with pytest.raises(mr.DimensionMismatch):
        mr.eval_norm(mr.NormSpec.euclidean(2), [1.0, 2.0, 3.0])
