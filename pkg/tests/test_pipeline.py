"""Pipeline wiring, determinism, and the random-curve census."""

import numpy as np
import pytest

from convtraj import formats
from convtraj.errors import BadInputError
from convtraj.pipeline import SystemSpec, census, run_example, vertex_sample_indices


def test_report_mirrors_stage_artifacts(preset):
    res = preset("vandevusse")
    r = res.report
    assert r.hull_vertices == res.hull.vertex_count
    assert r.hull_facets == res.hull.facet_count
    assert r.hull_edges == res.hull.edge_count
    assert r.patch_counts == dict(res.patches.counts)
    assert r.forward_closed == res.partition.forward_closed
    assert r.outward_count == res.partition.outward_count
    assert r.reduced_dimension == res.hull.dimension
    assert r.sample_count == len(res.sample.points)


def test_identical_runs_identical_reports(preset):
    first = formats.report_to_json(preset("vandevusse").report, include_timings=False)
    second = formats.report_to_json(run_example("vandevusse").report, include_timings=False)
    assert formats.dump_json(first) == formats.dump_json(second)


def test_vertex_sample_indices_are_exact_and_distinct(preset):
    res = preset("trig123")
    idx = vertex_sample_indices(res.sample, res.hull)
    assert len(idx) == res.hull.vertex_count
    assert len(set(idx.tolist())) == len(idx)
    assert np.allclose(res.sample.points[idx], res.hull.vertices, atol=1e-9)


def test_census_smoke_and_serialization():
    result = census(3, 3, 2, seed=7, n_samples=160)
    assert result.rows == [(0, 10, 4), (1, 4, 2)]
    assert result.max_1 == 10
    assert result.max_2 == 4
    data = formats.census_to_json(result)
    assert sorted(data.keys()) == ["d", "max_1", "max_2", "n", "rows", "schema", "seed", "trials"]


def test_census_input_guards():
    with pytest.raises(BadInputError):
        census(2, 4, 1)
    with pytest.raises(BadInputError):
        census(3, 2, 1)


def test_spec_validation_errors():
    with pytest.raises(BadInputError):
        SystemSpec(kind="nope", name="x")
    with pytest.raises(BadInputError):
        SystemSpec(kind="crn", name="x")  # payload missing
    with pytest.raises(BadInputError):
        SystemSpec(kind="trig", name="x")


def test_unknown_preset_rejected():
    with pytest.raises(BadInputError):
        run_example("nope")
