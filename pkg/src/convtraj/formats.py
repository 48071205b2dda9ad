"""File formats: CSV for samples, JSON for structured artifacts, OFF for meshes.

Every JSON artifact carries a versioned schema tag and re-parses to an equal
value; writers sort keys so identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np

from .errors import BadInputError
from .hull import PolytopeData
from .partition import (
    EdgePartition,
    FacePartition,
    FaceRegion,
    PartitionReport,
)
from .patches import FaceTuple, Patch, PatchReport
from .pipeline import CensusResult, RunReport, SystemSpec
from .poly import parse_polynomial, polynomial_to_text
from .sampler import CurveSample
from .systems import TrigCurve, VectorField, network_to_text, parse_network

PathLike = Union[str, Path]

SCHEMAS = {
    "sample": "convtraj/sample/v1",
    "hull": "convtraj/hull/v1",
    "patches": "convtraj/patches/v1",
    "partition": "convtraj/partition/v1",
    "report": "convtraj/report/v1",
    "census": "convtraj/census/v1",
    "spec": "convtraj/spec/v1",
}


def dump_json(data: dict, path: Optional[PathLike] = None) -> str:
    text = json.dumps(data, sort_keys=True, indent=2)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def load_json(path: PathLike) -> dict:
    return json.loads(Path(path).read_text())


def _check_schema(data: dict, kind: str) -> None:
    want = SCHEMAS[kind]
    got = data.get("schema")
    if got != want:
        raise BadInputError(f"expected schema {want!r}, found {got!r}")


def _arr(x) -> List:
    return np.asarray(x, dtype=float).tolist()


# -- samples (CSV) ---------------------------------------------------------------


def sample_to_csv(sample: CurveSample) -> str:
    buf = io.StringIO()
    buf.write(f"# {SCHEMAS['sample']}\n")
    buf.write(
        f"# dimension={sample.dimension} closed={int(sample.closed)}"
        f" eps={float(sample.eps_estimate)!r} termination={sample.termination}\n"
    )
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t"] + [f"x{i + 1}" for i in range(sample.dimension)])
    # float() first: repr of a numpy scalar is not parseable by float()
    for t, row in zip(sample.params, sample.points):
        writer.writerow([f"{float(t)!r}"] + [f"{float(v)!r}" for v in row])
    return buf.getvalue()


def write_sample_csv(path: PathLike, sample: CurveSample) -> None:
    Path(path).write_text(sample_to_csv(sample))


def sample_from_csv(text: str) -> CurveSample:
    lines = text.splitlines()
    if not lines or SCHEMAS["sample"] not in lines[0]:
        raise BadInputError("not a sample CSV (missing schema comment)")
    meta: Dict[str, str] = {}
    for part in lines[1].lstrip("# ").split():
        k, _, v = part.partition("=")
        meta[k] = v
    rows = [r for r in csv.reader(lines[2:]) if r]
    header, data_rows = rows[0], rows[1:]
    dim = int(meta["dimension"])
    if len(header) != dim + 1:
        raise BadInputError("sample CSV header does not match its dimension")
    data = np.array([[float(v) for v in r] for r in data_rows])
    return CurveSample(
        dimension=dim,
        points=data[:, 1:],
        params=data[:, 0],
        closed=bool(int(meta["closed"])),
        eps_estimate=float(meta["eps"]),
        termination=meta.get("termination", ""),
    )


def read_sample_csv(path: PathLike) -> CurveSample:
    return sample_from_csv(Path(path).read_text())


def sample_meta_json(sample: CurveSample) -> dict:
    meta = {
        "schema": SCHEMAS["sample"],
        "dimension": sample.dimension,
        "count": int(len(sample.points)),
        "closed": sample.closed,
        "eps_estimate": sample.eps_estimate,
        "termination": sample.termination,
    }
    if sample.reduction is not None:
        meta["reduction"] = {
            "basis": _arr(sample.reduction.basis),
            "offset": _arr(sample.reduction.offset),
            "original_dimension": sample.reduction.original_dimension,
        }
    return meta


# -- hull ------------------------------------------------------------------------


def hull_to_json(hull: PolytopeData) -> dict:
    inc_rows = [sorted(np.nonzero(hull.incidence[f])[0].tolist()) for f in range(hull.facet_count)]
    adj = [[int(a), int(b)] for a, b in hull.edges()]
    return {
        "schema": SCHEMAS["hull"],
        "dimension": hull.dimension,
        "eps": hull.eps,
        "vertices": _arr(hull.vertices),
        "facet_normals": _arr(hull.facet_normals),
        "facet_offsets": _arr(hull.facet_offsets),
        "facet_vertices": inc_rows,
        "edges": adj,
    }


def hull_from_json(data: dict) -> PolytopeData:
    _check_schema(data, "hull")
    vertices = np.asarray(data["vertices"], dtype=float)
    normals = np.asarray(data["facet_normals"], dtype=float)
    V, F = len(vertices), len(normals)
    incidence = np.zeros((F, V), dtype=bool)
    for f, ids in enumerate(data["facet_vertices"]):
        incidence[f, ids] = True
    adjacency = np.zeros((V, V), dtype=bool)
    for a, b in data["edges"]:
        adjacency[a, b] = adjacency[b, a] = True
    return PolytopeData(
        dimension=int(data["dimension"]),
        vertices=vertices,
        facet_normals=normals,
        facet_offsets=np.asarray(data["facet_offsets"], dtype=float),
        incidence=incidence,
        adjacency=adjacency,
        eps=float(data["eps"]),
    )


# -- patches ---------------------------------------------------------------------


def _face_tuple_to_json(ft: FaceTuple) -> dict:
    return {
        "vertex_ids": list(ft.vertex_ids),
        "normal": _arr(ft.normal),
        "source_facet": ft.source_facet,
        "k": ft.k,
        "padded": ft.padded,
        "unpadded_ids": None if ft.unpadded_ids is None else list(ft.unpadded_ids),
    }


def _face_tuple_from_json(d: Optional[dict]) -> Optional[FaceTuple]:
    if d is None:
        return None
    return FaceTuple(
        vertex_ids=tuple(d["vertex_ids"]),
        normal=np.asarray(d["normal"], dtype=float),
        source_facet=int(d["source_facet"]),
        k=int(d["k"]),
        padded=bool(d["padded"]),
        unpadded_ids=None if d["unpadded_ids"] is None else tuple(d["unpadded_ids"]),
    )


def patches_to_json(report: PatchReport) -> dict:
    return {
        "schema": SCHEMAS["patches"],
        "dimension": report.dimension,
        "delta": report.delta,
        "suspicious": report.suspicious,
        "counts": {str(k): v for k, v in sorted(report.counts.items())},
        "arcs": [list(map(int, arc)) for arc in report.arcs],
        "flagged_facets": list(map(int, report.flagged_facets)),
        "patches": [
            {
                "k": p.k,
                "component_id": p.component_id,
                "faces": [_face_tuple_to_json(ft) for ft in p.faces],
            }
            for p in report.patches
        ],
    }


def patches_from_json(data: dict) -> PatchReport:
    _check_schema(data, "patches")
    patches = [
        Patch(
            k=int(p["k"]),
            component_id=int(p["component_id"]),
            faces=[_face_tuple_from_json(f) for f in p["faces"]],
        )
        for p in data["patches"]
    ]
    return PatchReport(
        dimension=int(data["dimension"]),
        counts={int(k): int(v) for k, v in data["counts"].items()},
        patches=patches,
        delta=float(data["delta"]),
        arcs=[list(a) for a in data["arcs"]],
        flagged_facets=list(data["flagged_facets"]),
        suspicious=bool(data["suspicious"]),
    )


# -- partition -------------------------------------------------------------------


def partition_to_json(report: PartitionReport) -> dict:
    edges = [
        {
            "endpoints": _arr(e.endpoints),
            "normal": _arr(e.normal),
            "breakpoints": [float(b) for b in e.breakpoints],
            "breakpoint_points": _arr(e.breakpoint_points),
            "segment_signs": list(map(int, e.segment_signs)),
            "segment_midpoints": _arr(e.segment_midpoints),
            "tangent": e.tangent,
            "max_abs_g": e.max_abs_g,
            "tol_used": e.tol_used,
            "face": None if e.face is None else _face_tuple_to_json(e.face),
            "component_id": e.component_id,
        }
        for e in report.edges
    ]
    faces = [
        {
            "simplex": _arr(f.simplex),
            "normal": _arr(f.normal),
            "k": f.k,
            "grid_res": f.grid_res,
            "regions": [
                {
                    "sign": r.sign,
                    "size": r.size,
                    "witness": _arr(r.witness),
                    "witness_value": r.witness_value,
                    "witness_barycentric": _arr(r.witness_barycentric),
                }
                for r in f.regions
            ],
            "zero_polylines": [_arr(c) for c in f.zero_polylines],
            "zero_points": _arr(f.zero_points),
            "tangent": f.tangent,
            "max_abs_g": f.max_abs_g,
            "tol_used": f.tol_used,
            "face": None if f.face is None else _face_tuple_to_json(f.face),
            "component_id": f.component_id,
        }
        for f in report.faces
    ]
    return {
        "schema": SCHEMAS["partition"],
        "dimension": report.dimension,
        "forward_closed": report.forward_closed,
        "outward_count": report.outward_count,
        "tangent_count": report.tangent_count,
        "skipped_arcs": report.skipped_arcs,
        "skipped_faces": report.skipped_faces,
        "tol": report.tol,
        "eps_gap": report.eps_gap,
        "edges": edges,
        "faces": faces,
    }


def partition_from_json(data: dict) -> PartitionReport:
    _check_schema(data, "partition")
    n = int(data["dimension"])
    edges = [
        EdgePartition(
            endpoints=np.asarray(e["endpoints"], dtype=float),
            normal=np.asarray(e["normal"], dtype=float),
            breakpoints=[float(b) for b in e["breakpoints"]],
            breakpoint_points=np.asarray(e["breakpoint_points"], dtype=float).reshape(-1, n),
            segment_signs=[int(s) for s in e["segment_signs"]],
            segment_midpoints=np.asarray(e["segment_midpoints"], dtype=float),
            tangent=bool(e["tangent"]),
            max_abs_g=float(e["max_abs_g"]),
            tol_used=float(e["tol_used"]),
            face=_face_tuple_from_json(e["face"]),
            component_id=int(e["component_id"]),
        )
        for e in data["edges"]
    ]
    faces = [
        FacePartition(
            simplex=np.asarray(f["simplex"], dtype=float),
            normal=np.asarray(f["normal"], dtype=float),
            k=int(f["k"]),
            grid_res=int(f["grid_res"]),
            regions=[
                FaceRegion(
                    sign=int(r["sign"]),
                    size=int(r["size"]),
                    witness=np.asarray(r["witness"], dtype=float),
                    witness_value=float(r["witness_value"]),
                    witness_barycentric=np.asarray(r["witness_barycentric"], dtype=float),
                )
                for r in f["regions"]
            ],
            zero_polylines=[np.asarray(c, dtype=float) for c in f["zero_polylines"]],
            zero_points=np.asarray(f["zero_points"], dtype=float).reshape(-1, n),
            tangent=bool(f["tangent"]),
            max_abs_g=float(f["max_abs_g"]),
            tol_used=float(f["tol_used"]),
            face=_face_tuple_from_json(f["face"]),
            component_id=int(f["component_id"]),
        )
        for f in data["faces"]
    ]
    return PartitionReport(
        dimension=n,
        forward_closed=bool(data["forward_closed"]),
        edges=edges,
        faces=faces,
        outward_count=int(data["outward_count"]),
        tangent_count=int(data["tangent_count"]),
        skipped_arcs=int(data["skipped_arcs"]),
        skipped_faces=int(data["skipped_faces"]),
        tol=float(data["tol"]),
        eps_gap=float(data["eps_gap"]),
    )


# -- reports ---------------------------------------------------------------------


def report_to_json(report: RunReport, include_timings: bool = True) -> dict:
    data = asdict(report)
    data["patch_counts"] = {str(k): v for k, v in sorted(report.patch_counts.items())}
    if not include_timings:
        data.pop("timings")
    else:
        data["timings"] = {k: float(v) for k, v in report.timings.items()}
    data["schema"] = SCHEMAS["report"]
    return data


def report_from_json(data: dict) -> RunReport:
    _check_schema(data, "report")
    d = dict(data)
    d.pop("schema")
    d["patch_counts"] = {int(k): int(v) for k, v in d["patch_counts"].items()}
    d.setdefault("timings", {})
    return RunReport(**d)


def census_to_json(result: CensusResult) -> dict:
    return {
        "schema": SCHEMAS["census"],
        "n": result.n,
        "d": result.d,
        "trials": result.trials,
        "seed": result.seed,
        "rows": [list(r) for r in result.rows],
        "max_1": result.max_1,
        "max_2": result.max_2,
    }


# -- system specs ----------------------------------------------------------------


def spec_to_json(spec: SystemSpec) -> dict:
    data = {
        "schema": SCHEMAS["spec"],
        "kind": spec.kind,
        "name": spec.name,
        "starts": [_arr(s) for s in spec.starts],
        "t_end": spec.t_end,
        "n_samples": spec.n_samples,
        "max_gap": spec.max_gap,
        "detect_cycle": spec.detect_cycle,
        "reduce": spec.reduce,
        "eps": spec.eps,
        "delta": spec.delta,
        "grid_res": spec.grid_res,
        "tol": spec.tol,
        "seed": spec.seed,
        "field": None,
        "hamiltonian": None,
        "cutting": None,
        "network": None,
        "curve": None,
        "matrix": None,
    }
    if spec.field is not None:
        data["field"] = [polynomial_to_text(c) for c in spec.field.components]
    if spec.hamiltonian is not None:
        data["hamiltonian"] = polynomial_to_text(spec.hamiltonian)
    if spec.cutting is not None:
        data["cutting"] = [polynomial_to_text(c) for c in spec.cutting]
    if spec.network is not None:
        data["network"] = network_to_text(spec.network)
    if spec.curve is not None:
        data["curve"] = {
            "A": _arr(spec.curve.A),
            "B": _arr(spec.curve.B),
            "C": _arr(spec.curve.C),
        }
    if spec.matrix is not None:
        data["matrix"] = _arr(spec.matrix)
    return data


def spec_from_json(data: dict) -> SystemSpec:
    _check_schema(data, "spec")
    kind = data["kind"]
    kwargs = dict(
        kind=kind,
        name=data.get("name", ""),
        starts=tuple(np.asarray(s, dtype=float) for s in data.get("starts", [])),
        t_end=float(data.get("t_end") or 0.0),
        n_samples=int(data.get("n_samples") or 0),
        max_gap=None if data.get("max_gap") is None else float(data["max_gap"]),
        detect_cycle=bool(data.get("detect_cycle", False)),
        reduce=bool(data.get("reduce", False)),
        eps=float(data.get("eps", 1e-9)),
        delta=None if data.get("delta") is None else float(data["delta"]),
        grid_res=None if data.get("grid_res") is None else int(data["grid_res"]),
        tol=float(data.get("tol", 1e-9)),
        seed=int(data.get("seed", 0)),
    )
    if data.get("field") is not None:
        texts = data["field"]
        dim = len(texts)
        comps = tuple(parse_polynomial(t, dimension=dim) for t in texts)
        kwargs["field"] = VectorField(dim, comps)
    if data.get("hamiltonian") is not None:
        kwargs["hamiltonian"] = parse_polynomial(data["hamiltonian"], dimension=2)
    if data.get("cutting") is not None:
        texts = data["cutting"]
        dim = len(texts) + 1
        kwargs["cutting"] = tuple(parse_polynomial(t, dimension=dim) for t in texts)
    if data.get("network") is not None:
        kwargs["network"] = parse_network(data["network"])
    if data.get("curve") is not None:
        c = data["curve"]
        kwargs["curve"] = TrigCurve(
            A=np.asarray(c["A"], dtype=float),
            B=np.asarray(c["B"], dtype=float),
            C=np.asarray(c["C"], dtype=float),
        )
    if data.get("matrix") is not None:
        kwargs["matrix"] = np.asarray(data["matrix"], dtype=float)
    return SystemSpec(**kwargs)


# -- OFF meshes ------------------------------------------------------------------


def _ordered_facet(hull: PolytopeData, f: int) -> List[int]:
    ids = hull.facet_vertex_ids(f)
    V = hull.vertices[ids]
    c = V.mean(axis=0)
    normal = hull.facet_normals[f]
    # chart of the facet plane
    ref = np.zeros(3)
    ref[int(np.argmin(np.abs(normal)))] = 1.0
    u = np.cross(normal, ref)
    u /= np.linalg.norm(u)
    w = np.cross(normal, u)
    ang = np.arctan2((V - c) @ w, (V - c) @ u)
    order = np.argsort(ang)
    ring = [int(ids[i]) for i in order]
    # orient the polygon so its area vector points along the outward normal
    area = np.zeros(3)
    for a, b in zip(ring, ring[1:] + ring[:1]):
        area += np.cross(hull.vertices[a], hull.vertices[b])
    if area @ normal < 0:
        ring.reverse()
    return ring


def hull_to_off(hull: PolytopeData) -> str:
    if hull.dimension != 3:
        raise BadInputError("OFF export covers dimension 3")
    lines = ["OFF", f"# {SCHEMAS['hull']}+off"]
    lines.append(f"{hull.vertex_count} {hull.facet_count} {hull.edge_count}")
    for v in hull.vertices:
        lines.append(" ".join(f"{float(x)!r}" for x in v))
    for f in range(hull.facet_count):
        ring = _ordered_facet(hull, f)
        lines.append(str(len(ring)) + " " + " ".join(map(str, ring)))
    return "\n".join(lines) + "\n"


def write_off(path: PathLike, hull: PolytopeData) -> None:
    Path(path).write_text(hull_to_off(hull))
