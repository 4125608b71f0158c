"""Constructive pipeline: end-to-end runs, traces, and failure reporting."""

import warnings

import pytest

from transversals.collection import Collection, verify_certificate
from transversals.errors import ColourCountMismatch, InvalidInput
from transversals.exact import find_transversal_cycle
from transversals.gen import GenSpec, generate
from transversals.hypergraph import complete_graph
from transversals.links import single_edge_link, triangle_link
from transversals.pipeline import (
    PipelineConfig,
    solve_transversal_hamilton,
    step_trace,
)

LINK21 = single_edge_link(2, 1)


def dense_instance(n, seed):
    return generate(
        GenSpec(n=n, k=2, m=n, delta_fraction=0.7, family="random", seed=seed)
    )


def test_pipeline_solves_dense_instance():
    C = dense_instance(80, seed=0)
    run = solve_transversal_hamilton(C, LINK21, cfg=PipelineConfig(seed=0))
    assert run and run.outcome == "success"
    assert verify_certificate(C, run.certificate, LINK21)


def test_pipeline_trace_has_all_steps():
    C = dense_instance(80, seed=1)
    run = solve_transversal_hamilton(C, LINK21, cfg=PipelineConfig(seed=1))
    assert run
    steps = [r.step for r in step_trace(run)]
    assert steps == sorted(steps)
    assert steps[-1] == 10
    for rec in step_trace(run):
        assert rec.to_json()["name"]


def test_pipeline_rejects_other_links():
    C = Collection(6, 2, tuple(complete_graph(6) for _ in range(12)))
    with pytest.raises(InvalidInput):
        solve_transversal_hamilton(C, triangle_link())


def test_pipeline_rejects_wrong_colour_count():
    C = Collection(8, 2, tuple(complete_graph(8) for _ in range(7)))
    with pytest.raises(ColourCountMismatch):
        solve_transversal_hamilton(C, LINK21)


def test_pipeline_failure_reports_step():
    # far below the degree threshold: the pipeline should fail with a
    # structured report rather than crash
    C = generate(
        GenSpec(n=30, k=2, m=30, delta_fraction=0.15, family="random", seed=2)
    )
    run = solve_transversal_hamilton(C, LINK21, cfg=PipelineConfig(seed=2, retries=2))
    if not run:
        assert run.failure is not None
        assert 1 <= run.failure.step <= 10
        assert run.failure.to_json()["reason"]


def test_pipeline_agrees_with_exact_oracle_small_n():
    for seed in range(3):
        C = generate(
            GenSpec(n=10, k=2, m=10, delta_fraction=0.7, family="random", seed=seed)
        )
        exact = find_transversal_cycle(C, LINK21)
        run = solve_transversal_hamilton(C, LINK21, cfg=PipelineConfig(seed=seed))
        assert bool(run) == (exact.status == "found")


def test_pipeline_is_deterministic():
    C = dense_instance(80, seed=3)
    a = solve_transversal_hamilton(C, LINK21, cfg=PipelineConfig(seed=3))
    b = solve_transversal_hamilton(C, LINK21, cfg=PipelineConfig(seed=3))
    assert bool(a) == bool(b)
    if a:
        assert a.certificate == b.certificate and a.attempts == b.attempts


def test_config_hierarchy_warning():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        cfg = PipelineConfig(gamma=0.5)  # gamma > rho breaks the ordering
    assert not cfg.hierarchy_ok
    assert any("gamma" in str(w.message) for w in caught)
