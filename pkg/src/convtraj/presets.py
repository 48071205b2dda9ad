"""Named benchmark systems with frozen coefficient payloads.

Each preset returns keyword arguments for a pipeline SystemSpec.  The
coefficient payloads carry sha256 checksums, verified on every build, so a
silent edit of a transcribed constant cannot go unnoticed.
"""

from __future__ import annotations

import hashlib
from typing import Callable, Dict, List

import numpy as np

from .errors import BadInputError
from .poly import parse_polynomial
from .systems import ReactionNetwork, TrigCurve

# Plane quartic with four ovals; its Hamiltonian system traces the ovals.
TROTT_H_TEXT = "144x^4 + 144y^4 - 225x^2 - 225y^2 + 350x^2y^2 + 81"

# Space curve t -> (cos 2pi t, sin 4pi t, cos 6pi t) and the two cutting
# polynomials whose Jacobian-minor system traces it.
TRIG123_CUTTING_TEXTS = ("x^2 - y^2 - xz", "z - 4x^3 + 3x")
TRIG123_A = np.array([[1.0, 0, 0], [0, 0, 0], [0, 0, 1.0]])
TRIG123_B = np.array([[0.0, 0, 0], [0, 1.0, 0], [0, 0, 0]])
TRIG123_C = np.zeros(3)

# Generalized moment curve (cos 2pi p t, sin 2pi p t, cos 2pi q t, sin 2pi q t).


def _moment_matrix(p: int, q: int) -> np.ndarray:
    return 2.0 * np.pi * np.array(
        [
            [0.0, -p, 0.0, 0.0],
            [float(p), 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, -q],
            [0.0, 0.0, float(q), 0.0],
        ]
    )


def _moment_curve(p: int, q: int) -> TrigCurve:
    A = np.zeros((4, max(p, q)))
    B = np.zeros((4, max(p, q)))
    A[0, p - 1] = 1.0
    B[1, p - 1] = 1.0
    A[2, q - 1] = 1.0
    B[3, q - 1] = 1.0
    return TrigCurve(A=A, B=B, C=np.zeros(4))


# Random-looking degree-14 space curve whose hull shows 20 triangle facets.
DEGREE14_A = np.array(
    [
        [0.28561, -0.024204, -0.07664, 0.43593, 0.15244, -0.24464, 0.41538],
        [-0.37439, -0.30106, 0.32118, 0.38410, 0.29990, -0.14990, -0.45481],
        [-0.17997, -0.16046, -0.23522, 0.47912, -0.08084, 0.19628, 0.46895],
    ]
)
DEGREE14_B = np.array(
    [
        [-0.39109, 0.06742, -0.12451, 0.44073, -0.20822, -0.03646, -0.01034],
        [0.48646, 0.38580, -0.13216, 0.36184, 0.30633, -0.14131, 0.48650],
        [-0.15326, 0.32591, 0.02569, 0.23351, -0.34972, 0.04772, 0.42441],
    ]
)
DEGREE14_C = np.array([0.39768, 0.42346, 0.23797])

# Van de Vusse reaction: X1 -> X2 -> X3 at unit rates, 2 X1 -> X4 at rate 10.
VANDEVUSSE_NETWORK = ReactionNetwork(
    species_count=4,
    complexes=((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (2, 0, 0, 0), (0, 0, 0, 1)),
    edges=((0, 1, 1.0), (1, 2, 1.0), (3, 4, 10.0)),
)

# Weakly reversible mass action network whose convex trajectory from (4,4,2)
# is not forward closed.
WEAKREV_NETWORK = ReactionNetwork(
    species_count=3,
    complexes=((2, 1, 0), (1, 0, 1), (0, 2, 1), (1, 1, 0)),
    edges=(
        (0, 1, 2.0),
        (1, 0, 2.0),
        (0, 2, 4.0),
        (2, 0, 4.0),
        (2, 3, 2.0),
        (3, 2, 4.0),
    ),
)


def payload_checksum(*parts) -> str:
    h = hashlib.sha256()

    def feed(part):
        if isinstance(part, np.ndarray):
            h.update(np.ascontiguousarray(part, dtype=float).tobytes())
        elif isinstance(part, str):
            h.update(part.encode())
        elif isinstance(part, (bool, int, float)):
            h.update(repr(float(part)).encode())
        elif isinstance(part, (tuple, list)):
            for sub in part:
                feed(sub)
        elif isinstance(part, ReactionNetwork):
            feed(part.species_count)
            feed([list(c) for c in part.complexes])
            feed([list(e) for e in part.edges])
        elif isinstance(part, TrigCurve):
            feed(part.A)
            feed(part.B)
            feed(part.C)
        else:
            raise BadInputError(f"cannot checksum payload part {type(part).__name__}")

    for p in parts:
        feed(p)
    return h.hexdigest()


PRESET_CHECKSUMS: Dict[str, str] = {
    "trott": "75bd0db24da758ca3832c2bf7b77126ea19697df885fc833b20b0ef5ace005da",
    "trig123": "fc5cd38a4cb0a75141f75146440e45745e0d51bfb29ccd63e28f408d25d5b6bf",
    "smilansky-3-4": "07de8bb030939fd5777de3ffbaa7e44d00709a27346856ba1939c28815e7b6ad",
    "degree14": "8d1726b12f2e176c08195a0a49e119599315563168181e74c4cd37eacf028828",
    "vandevusse": "7383a4f93848b137e119d1453818d50497657d70837f513fe02527fb04a64c66",
    "weakly-reversible": "0ebc997246d96293ce982635338a2937c7e892b13b5ceab313c68b1a77c9daf7",
    "skew-linear": "2ffafbaf94ed7263606b8180f3c8687fcb978da93780a2ba669144029619c1b8",
}


def _check(name: str, *payload) -> None:
    got = payload_checksum(*payload)
    want = PRESET_CHECKSUMS[name]
    if got != want:
        raise BadInputError(f"preset {name!r} payload checksum mismatch: {got}")


def _trott() -> dict:
    _check("trott", TROTT_H_TEXT)
    return dict(
        kind="hamiltonian",
        name="trott",
        hamiltonian=parse_polynomial(TROTT_H_TEXT, dimension=2),
        starts=(np.array([0.0, -1.0]),),
        t_end=5.0,
        detect_cycle=True,
        max_gap=2e-3,
    )


def _trig123() -> dict:
    curve = TrigCurve(A=TRIG123_A, B=TRIG123_B, C=TRIG123_C)
    _check("trig123", TRIG123_CUTTING_TEXTS, curve)
    return dict(
        kind="algebraic",
        name="trig123",
        cutting=tuple(parse_polynomial(t, dimension=3) for t in TRIG123_CUTTING_TEXTS),
        curve=curve,
        n_samples=100,
        starts=(np.array([1.0, 0.0, 1.0]),),
        t_end=10.0,
    )


def _smilansky() -> dict:
    p, q = 3, 4
    matrix = _moment_matrix(p, q)
    curve = _moment_curve(p, q)
    start = np.array([1.0, 0.0, 1.0, 0.0])
    _check("smilansky-3-4", matrix, curve, start)
    return dict(
        kind="linear",
        name="smilansky-3-4",
        matrix=matrix,
        curve=curve,
        # multiple of 12 so the triangle (thirds) and quad (quarters) faces
        # land exactly on sample parameters
        n_samples=72,
        starts=(start,),
        t_end=1.0,
    )


def _degree14() -> dict:
    curve = TrigCurve(A=DEGREE14_A, B=DEGREE14_B, C=DEGREE14_C)
    _check("degree14", curve)
    return dict(
        kind="trig",
        name="degree14",
        curve=curve,
        n_samples=600,
    )


def _vandevusse() -> dict:
    start = np.array([1.0, 0.0, 0.0, 0.0])
    _check("vandevusse", VANDEVUSSE_NETWORK, start)
    return dict(
        kind="crn",
        name="vandevusse",
        network=VANDEVUSSE_NETWORK,
        starts=(start,),
        t_end=40.0,
        # the orbit limps into the steady state along a straight line;
        # decimating keeps the tail from shedding degenerate slivers
        decimate_tol=5e-4,
        reduce=True,
    )


def _weakrev() -> dict:
    start = np.array([4.0, 4.0, 2.0])
    _check("weakly-reversible", WEAKREV_NETWORK, start)
    return dict(
        kind="crn",
        name="weakly-reversible",
        network=WEAKREV_NETWORK,
        starts=(start,),
        t_end=12.0,
        # the outward tilt of the field is a ~1 degree effect in a fast
        # region: the gap cap keeps it above the discretization noise floor
        max_gap=0.02,
        decimate_tol=1e-4,
    )


def _skew_linear() -> dict:
    matrix = _moment_matrix(1, 2)
    start = np.array([1.0, 0.0, 1.0, 0.0])
    _check("skew-linear", matrix, start)
    return dict(
        kind="linear",
        name="skew-linear",
        matrix=matrix,
        # the orbit from this start is the (1,2) moment curve, so sample it
        # parametrically; integrating oversamples and bloats the 4d hull
        curve=_moment_curve(1, 2),
        n_samples=28,
        starts=(start,),
    )


PRESET_BUILDERS: Dict[str, Callable[[], dict]] = {
    "trott": _trott,
    "trig123": _trig123,
    "smilansky-3-4": _smilansky,
    "degree14": _degree14,
    "vandevusse": _vandevusse,
    "weakly-reversible": _weakrev,
    "skew-linear": _skew_linear,
}


def preset_names() -> List[str]:
    return sorted(PRESET_BUILDERS)


def preset_spec_kwargs(name: str) -> dict:
    builder = PRESET_BUILDERS.get(name)
    if builder is None:
        raise BadInputError(
            f"unknown preset {name!r}; known presets: {', '.join(preset_names())}"
        )
    return builder()
