"""Tests for the property catalogue and the suite runner."""
import json

import pytest

from jordan_cone.core.algebra import AlgebraDescriptor
from jordan_cone.core.errors import UnknownSuite
from jordan_cone.core import properties as properties_module
from jordan_cone.core.properties import HILBERT_PAIRS_PER_MAP, PROPERTIES, SUITES, PropertyCheck, checks_for
from jordan_cone.core.sampling import Rng
from jordan_cone.core.suite_runner import (
    JobStatus,
    PropertyJob,
    SuiteReport,
    SuiteRunner,
    build_jobs,
    run_suite,
)

DIAG2 = AlgebraDescriptor.diagonal(2)
DIAG3 = AlgebraDescriptor.diagonal(3)
SPIN3 = AlgebraDescriptor.spin(3)


def _strip_time(report: SuiteReport) -> dict:
    data = report.to_dict()
    data.pop("wall_time_ms")
    return data


def test_every_suite_has_checks():
    for suite in SUITES:
        assert checks_for(suite)
    assert len(checks_for("all")) == len(PROPERTIES)


def test_unknown_suite_raises():
    with pytest.raises(UnknownSuite):
        checks_for("nope")
    with pytest.raises(KeyError):
        run_suite("nope", [DIAG2])


def test_fixed_and_conditional_targets():
    fixed = PROPERTIES["extreme_points_vertex_enumeration"]
    assert fixed.targets([SPIN3]) == [DIAG3, AlgebraDescriptor.diagonal(4)]
    closed_form = PROPERTIES["inversion_closed_form"]
    assert closed_form.targets([DIAG2, DIAG3, SPIN3]) == [DIAG2, SPIN3]


def test_build_jobs_scales_tolerance():
    jobs = build_jobs("cone", [DIAG3], samples=5, tol_scale=10.0)
    assert jobs
    for job in jobs:
        assert job.samples == 5
        assert job.tolerance == pytest.approx(job.check.tolerance * 10.0)
        assert job.status is JobStatus.PENDING


def test_small_algebra_suite_passes():
    report = run_suite("algebra", [DIAG2, SPIN3], samples=4, seed=0)
    assert report.passed, report.failures
    assert {r["algebra"] for r in report.records} == {"Diagonal(2)", "Spin(3)"}
    data = report.to_dict()
    assert set(data) == {"suite", "seed", "records", "wall_time_ms", "pass"}
    assert set(data["records"][0]) == {"name", "algebra", "samples", "max_residual", "tolerance", "pass"}


def test_same_seed_same_report():
    first = run_suite("spectral", [DIAG3], samples=6, seed=99)
    second = run_suite("spectral", [DIAG3], samples=6, seed=99)
    assert _strip_time(first) == _strip_time(second)


def test_worker_count_does_not_change_report():
    serial = run_suite("cone", [DIAG3, SPIN3], samples=6, seed=5, workers=1)
    pooled = run_suite("cone", [DIAG3, SPIN3], samples=6, seed=5, workers=3)
    assert _strip_time(serial) == _strip_time(pooled)


def test_job_seed_depends_on_name_and_algebra():
    runner = SuiteRunner(seed=7)
    check = PROPERTIES["jordan_identity"]
    a = PropertyJob(check, DIAG2, 1, 1e-9)
    b = PropertyJob(check, DIAG3, 1, 1e-9)
    assert runner.job_seed(a) != runner.job_seed(b)
    assert runner.job_seed(a) == SuiteRunner(seed=7).job_seed(PropertyJob(check, DIAG2, 5, 1.0))


def test_failing_and_raising_checks_are_recorded():
    def always_large(algebra, rng, samples):
        return 1.0

    def raises(algebra, rng, samples):
        raise ValueError("boom")

    def not_finite(algebra, rng, samples):
        return float("nan")

    seen = []
    runner = SuiteRunner(seed=0, on_job_done=seen.append)
    for fn in (always_large, raises, not_finite):
        check = PropertyCheck("algebra", fn.__name__, fn, 1, 1e-9)
        runner.add_job(PropertyJob(check, DIAG2, 1, 1e-9))
    runner.run()

    assert len(seen) == 3
    large, boom, nan = runner.jobs
    assert large.status is JobStatus.DONE and not large.passed
    assert boom.status is JobStatus.ERROR and "boom" in boom.record()["error"]
    assert nan.status is JobStatus.ERROR and nan.record()["max_residual"] is None
    assert runner.stats() == {"total": 3, "done": 1, "errors": 2, "failed": 1, "passed": 0}

    report = SuiteReport("algebra", 0, [job.record() for job in runner.jobs])
    assert not report.passed
    assert len(report.failures) == 3
    assert json.loads(report.to_json())["pass"] is False


def test_clear_all_empties_queue():
    runner = SuiteRunner()
    runner.add_job(PropertyJob(PROPERTIES["frames_and_atoms"], DIAG2, 1, 1e-12))
    runner.clear_all()
    assert runner.jobs == []


def test_nominal_sample_counts():
    assert PROPERTIES["jordan_identity"].samples == 1000
    assert PROPERTIES["jb_norm_axioms"].samples == 1000
    assert PROPERTIES["hilbert_isometry_soundness"].samples == 100
    assert HILBERT_PAIRS_PER_MAP == 100


def test_hilbert_soundness_draws_pairs_per_map(monkeypatch):
    drawn = []
    real_random_ray = properties_module._random_ray

    def counting_ray(algebra, rng):
        drawn.append(algebra)
        return real_random_ray(algebra, rng)

    monkeypatch.setattr(properties_module, "_random_ray", counting_ray)
    residual = PROPERTIES["hilbert_isometry_soundness"].fn(DIAG2, Rng(3), 2)
    assert len(drawn) == 2 * 2 * HILBERT_PAIRS_PER_MAP
    assert residual < 1e-8


@pytest.mark.parametrize(
    "name",
    [
        "jb_norm_axioms",
        "variation_bound",
        "maximal_deviation_states",
        "quadratic_rep_preserves_interior",
        "projective_invariance",
        "affine_isometry_preserves_deviation",
    ],
)
def test_norm_and_deviation_checks_pass(name):
    check = PROPERTIES[name]
    for algebra in (DIAG3, SPIN3, AlgebraDescriptor.sym(3)):
        assert check.fn(algebra, Rng(11), 10) <= check.tolerance
