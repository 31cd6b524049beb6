"""Bisectors, multilateration and resolving simplices in normed spaces."""

import json as _json

from . import _core
from ._core import (
    DegenerateAnchors,
    DimensionMismatch,
    InfeasibleDistances,
    InvalidArgument,
    InvalidNormSpec,
    MinkresError,
    NoSignPattern,
    NormIsEuclidean,
    NormIsStrictlyConvex,
    NormSpec,
    NotStrictlyConvex,
    ParseError,
    distances_from,
    eval_norm,
    line_intersect,
    line_preservation_test,
    membership,
    parallelogram_defect,
    sphere_point,
    support_contact,
)

__all__ = [
    "DegenerateAnchors",
    "DimensionMismatch",
    "InfeasibleDistances",
    "InvalidArgument",
    "InvalidNormSpec",
    "MinkresError",
    "NoSignPattern",
    "NormIsEuclidean",
    "NormIsStrictlyConvex",
    "NormSpec",
    "NotStrictlyConvex",
    "ParseError",
    "classify_norm",
    "distances_from",
    "eval_norm",
    "fit_gauss_map",
    "is_resolving_for_hull",
    "lift_to_dimension",
    "line_intersect",
    "line_preservation_test",
    "membership",
    "multilaterate",
    "parallelogram_defect",
    "slab_fit",
    "sphere_point",
    "srs2_counterexample",
    "srs3_counterexample",
    "support_contact",
    "verify_certificate",
]


def _dump(cert):
    return cert if isinstance(cert, str) else _json.dumps(cert)


def slab_fit(norm, x, y, radii=(), samples_per_radius=0, seed=0):
    return _json.loads(_core.slab_fit(norm, x, y, list(radii), samples_per_radius, seed))


def multilaterate(anchors, norm, distances, grid=None, tol=1e-9):
    if grid is None:
        return _json.loads(_core.multilaterate(anchors, norm, distances, tol=tol))
    return _json.loads(_core.multilaterate(anchors, norm, distances, grid, tol))


def is_resolving_for_hull(anchors, norm, seed=0):
    return _json.loads(_core.is_resolving_for_hull(anchors, norm, seed))


def srs2_counterexample(norm, s=None):
    return _json.loads(_core.srs2_counterexample(norm, s))


def srs3_counterexample(norm, seed=0):
    return _json.loads(_core.srs3_counterexample(norm, seed))


def lift_to_dimension(certificate, norm, seed=0):
    return _json.loads(_core.lift_to_dimension(_dump(certificate), norm, seed))


def verify_certificate(certificate):
    return _json.loads(_core.verify_certificate(_dump(certificate)))


def classify_norm(norm, seed=0):
    return _json.loads(_core.classify_norm(norm, seed))


def fit_gauss_map(norm, count=64, seed=0):
    return _json.loads(_core.fit_gauss_map(norm, count, seed))
