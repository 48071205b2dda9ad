"""End-to-end driver: sample, reduce, hull, patches, partition, report.

A SystemSpec describes the dynamical system (one of six kinds) plus sampling
and tolerance settings; pipeline() runs every applicable stage, tags stage
failures, and collects a RunReport that serializes deterministically for a
fixed seed (timings are reported but excluded from determinism).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import BadInputError, ConvtrajError
from .hull import PolytopeData, convex_hull_molp
from .partition import PartitionReport, partition_boundary
from .patches import (
    PatchMetricCache,
    PatchReport,
    delta_plateau_scan,
    detect_arcs_edges_2d,
    detect_patches,
)
from .poly import Polynomial
from .presets import preset_spec_kwargs
from .sampler import (
    CurveSample,
    affine_span_reduce,
    decimate_curve,
    estimate_epsilon,
    integrate,
    reduce_field,
    sample_parametric,
)
from .systems import (
    ReactionNetwork,
    TrigCurve,
    VectorField,
    crn_field,
    hamiltonian_field,
    jacobian_minor_field,
    linear_field,
)

KINDS = ("explicit", "hamiltonian", "algebraic", "crn", "trig", "linear")


@dataclass
class SystemSpec:
    kind: str
    name: str = ""
    field: Optional[VectorField] = None
    hamiltonian: Optional[Polynomial] = None
    cutting: Optional[Tuple[Polynomial, ...]] = None
    network: Optional[ReactionNetwork] = None
    curve: Optional[TrigCurve] = None
    matrix: Optional[np.ndarray] = None
    starts: Tuple[np.ndarray, ...] = ()
    t_end: float = 0.0
    n_samples: int = 0
    max_gap: Optional[float] = None
    detect_cycle: bool = False
    decimate_tol: Optional[float] = None
    reduce: bool = False
    eps: float = 1e-9
    delta: Optional[float] = None
    grid_res: Optional[int] = None
    tol: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise BadInputError(f"unknown system kind {self.kind!r}")
        payload = {
            "explicit": self.field,
            "hamiltonian": self.hamiltonian,
            "algebraic": self.cutting,
            "crn": self.network,
            "trig": self.curve,
            "linear": self.matrix,
        }[self.kind]
        if payload is None:
            raise BadInputError(f"kind {self.kind!r} is missing its payload")
        self.starts = tuple(np.asarray(s, dtype=float) for s in self.starts)

    @property
    def dimension(self) -> int:
        if self.kind == "explicit":
            return self.field.dimension
        if self.kind == "hamiltonian":
            return 2
        if self.kind == "algebraic":
            return self.cutting[0].dimension
        if self.kind == "crn":
            return self.network.species_count
        if self.kind == "trig":
            return self.curve.dimension
        return int(np.asarray(self.matrix).shape[0])

    def build_field(self) -> Optional[VectorField]:
        if self.kind == "explicit":
            return self.field
        if self.kind == "hamiltonian":
            return hamiltonian_field(self.hamiltonian)
        if self.kind == "algebraic":
            return jacobian_minor_field(self.cutting)
        if self.kind == "crn":
            return crn_field(self.network)
        if self.kind == "linear":
            return linear_field(np.asarray(self.matrix, dtype=float))
        return self.field  # trig: parametric only unless a field was attached


@dataclass
class RunReport:
    name: str
    kind: str
    dimension: int
    reduced_dimension: int
    seed: int
    sample_count: int = 0
    sample_eps: float = 0.0
    sample_closed: bool = False
    sample_termination: str = ""
    hull_vertices: int = 0
    hull_facets: int = 0
    hull_edges: int = 0
    hull_eps: float = 0.0
    delta: float = 0.0
    patch_counts: Dict[int, int] = field(default_factory=dict)
    arc_count: int = 0
    flagged_facets: int = 0
    forward_closed: Optional[bool] = None
    outward_count: int = 0
    tangent_count: int = 0
    witnesses: List[List[float]] = field(default_factory=list)
    timings: Dict[str, float] = field(default_factory=dict)


@dataclass
class PipelineResult:
    """Report plus the stage artifacts, for callers that keep working with
    the geometry (tests, the census, the CLI writers)."""

    report: RunReport
    spec: SystemSpec
    sample: CurveSample
    hull: PolytopeData
    patches: Optional[PatchReport]
    partition: Optional[PartitionReport]
    field: Optional[VectorField]


def _merge_samples(samples: List[CurveSample]) -> CurveSample:
    if len(samples) == 1:
        return samples[0]
    points = np.vstack([s.points for s in samples])
    params = []
    offset = 0.0
    for s in samples:
        p = np.asarray(s.params, dtype=float)
        step = float(np.mean(np.diff(p))) if len(p) > 1 else 1.0
        params.append(p - p[0] + offset)
        offset = params[-1][-1] + step
    return CurveSample(
        dimension=samples[0].dimension,
        points=points,
        params=np.concatenate(params),
        closed=False,
        eps_estimate=max(s.eps_estimate for s in samples),
        termination="multi:" + ",".join(s.termination for s in samples),
    )


def _sample_stage(spec: SystemSpec, phi: Optional[VectorField]) -> CurveSample:
    if spec.curve is not None and spec.n_samples > 0:
        return sample_parametric(spec.curve, spec.n_samples)
    if phi is None:
        raise BadInputError("spec has no field to integrate and no curve to sample")
    if not spec.starts:
        raise BadInputError("integration needs at least one start point")
    runs = [
        integrate(
            phi,
            start,
            spec.t_end,
            max_gap=spec.max_gap,
            detect_cycle=spec.detect_cycle,
        )
        for start in spec.starts
    ]
    if spec.decimate_tol is not None:
        runs = [decimate_curve(r, spec.decimate_tol) for r in runs]
    return _merge_samples(runs)


def sample_system(spec: SystemSpec) -> CurveSample:
    """Just the sampling stage: integrate the spec's field or sample its curve."""
    return _sample_stage(spec, spec.build_field())


def _run_stage(timings: Dict[str, float], tag: str, fn, *args, **kwargs):
    t0 = time.perf_counter()
    try:
        result = fn(*args, **kwargs)
    except ConvtrajError as exc:
        raise type(exc)(f"{tag}: {exc}") from exc
    finally:
        timings[tag] = time.perf_counter() - t0
    return result


def _patch_stage(
    spec: SystemSpec, sample: CurveSample, hull: PolytopeData
) -> PatchReport:
    # Patch merging happens at the scale of the gaps actually present in the
    # point set, which decimation makes coarser than the approximation bound
    # eps_estimate tracks.  Measure the gaps directly.
    max_gap = 2.0 * estimate_epsilon(sample.points, sample.closed)
    if hull.dimension == 2:
        delta = spec.delta if spec.delta is not None else 3.0 * max_gap
        return detect_arcs_edges_2d(sample, hull, delta)
    if spec.delta is not None:
        return detect_patches(hull, spec.delta)
    cache = PatchMetricCache(hull)
    _, report, _ = delta_plateau_scan(hull, max_gap, sample=sample, cache=cache)
    return report


def pipeline(spec: SystemSpec) -> PipelineResult:
    """Run all stages; see PipelineResult for the artifacts."""
    timings: Dict[str, float] = {}
    phi = _run_stage(timings, "field", spec.build_field)

    sample = _run_stage(timings, "sample", _sample_stage, spec, phi)
    if len(sample.points) < 3:
        raise BadInputError("sample: insufficient sample")

    if spec.reduce:
        def _reduce():
            reduced, basis, offset = affine_span_reduce(sample)
            phi_r = reduce_field(phi, basis, offset) if phi is not None else None
            return reduced, phi_r

        sample, phi_work = _run_stage(timings, "reduce", _reduce)
    else:
        phi_work = phi

    hull = _run_stage(timings, "hull", convex_hull_molp, sample.points, spec.eps)
    patches = _run_stage(timings, "patches", _patch_stage, spec, sample, hull)

    partition: Optional[PartitionReport] = None
    if phi_work is not None:
        partition = _run_stage(
            timings,
            "partition",
            partition_boundary,
            phi_work,
            hull,
            patches,
            tol=spec.tol,
            grid_res=spec.grid_res,
            eps_gap=2.0 * sample.eps_estimate,
        )

    witnesses: List[List[float]] = []
    if partition is not None:
        for point, _value in partition.outward_witnesses():
            if sample.reduction is not None:
                r = sample.reduction
                point = r.offset + r.basis @ point
            witnesses.append([float(v) for v in point])

    report = RunReport(
        name=spec.name,
        kind=spec.kind,
        dimension=spec.dimension,
        reduced_dimension=hull.dimension,
        seed=spec.seed,
        sample_count=len(sample.points),
        sample_eps=sample.eps_estimate,
        sample_closed=sample.closed,
        sample_termination=sample.termination,
        hull_vertices=hull.vertex_count,
        hull_facets=hull.facet_count,
        hull_edges=hull.edge_count,
        hull_eps=hull.eps,
        delta=patches.delta,
        patch_counts=dict(sorted(patches.counts.items())),
        arc_count=len(patches.arcs),
        flagged_facets=len(patches.flagged_facets),
        forward_closed=None if partition is None else partition.forward_closed,
        outward_count=0 if partition is None else partition.outward_count,
        tangent_count=0 if partition is None else partition.tangent_count,
        witnesses=witnesses,
        timings=timings,
    )
    return PipelineResult(
        report=report,
        spec=spec,
        sample=sample,
        hull=hull,
        patches=patches,
        partition=partition,
        field=phi_work,
    )


def run_example(name: str, **overrides) -> PipelineResult:
    """Run a named preset; overrides replace spec fields (eps, delta, ...)."""
    kwargs = preset_spec_kwargs(name)
    kwargs.update(overrides)
    return pipeline(SystemSpec(**kwargs))


# -- random census --------------------------------------------------------------


@dataclass
class CensusResult:
    n: int
    d: int
    trials: int
    seed: int
    rows: List[Tuple[int, int, int]]  # (trial, #1 patches, #2 patches)
    max_1: int
    max_2: int


def census(n: int, d: int, trials: int, seed: int = 0, n_samples: int = 240) -> CensusResult:
    """Patch counts of random trigonometric curves: coefficients uniform in
    [-0.5, 0.5] (an assumption; the reference data sits in that range), per
    trial an independent substream of the seed."""
    if n != 3:
        raise BadInputError("census covers curves in 3-space")
    if d < 3:
        raise BadInputError("census needs harmonic count d >= 3")
    rows: List[Tuple[int, int, int]] = []
    max_1 = max_2 = 0
    streams = np.random.SeedSequence(seed).spawn(max(trials, 1))
    for trial in range(trials):
        rng = np.random.default_rng(streams[trial])
        curve = TrigCurve(
            A=rng.uniform(-0.5, 0.5, size=(3, d)),
            B=rng.uniform(-0.5, 0.5, size=(3, d)),
            C=rng.uniform(-0.5, 0.5, size=3),
        )
        spec = SystemSpec(
            kind="trig",
            name=f"census-{d}-{trial}",
            curve=curve,
            n_samples=n_samples,
            seed=seed,
        )
        result = pipeline(spec)
        counts = result.patches.counts if result.patches else {}
        n1, n2 = counts.get(1, 0), counts.get(2, 0)
        rows.append((trial, n1, n2))
        max_1, max_2 = max(max_1, n1), max(max_2, n2)
    return CensusResult(
        n=n, d=d, trials=trials, seed=seed, rows=rows, max_1=max_1, max_2=max_2
    )


def vertex_sample_indices(
    sample: CurveSample, hull: PolytopeData, tol: float = 1e-7
) -> np.ndarray:
    """Match hull vertices back to sample rows (vertices are snapped onto
    input points, so the match is essentially exact)."""
    pts = np.asarray(sample.points, dtype=float)
    out = np.empty(hull.vertex_count, dtype=int)
    for i, v in enumerate(hull.vertices):
        d2 = np.sum((pts - v) ** 2, axis=1)
        j = int(np.argmin(d2))
        if d2[j] > tol * tol * (1.0 + np.abs(v).max()) ** 2:
            raise BadInputError("hull vertex does not match any sample point")
        out[i] = j
    return out
