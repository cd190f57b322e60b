"""
suite_runner.py — Queue-based property-suite execution for JordanCone
"""
from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum, auto
from typing import Callable, Optional

from jordan_cone.core.algebra import AlgebraDescriptor
from jordan_cone.core.errors import JordanConeError
from jordan_cone.core.properties import PropertyCheck, checks_for
from jordan_cone.core.sampling import Rng
from jordan_cone.core.utils import Stopwatch, derive_seed

log = logging.getLogger(__name__)


class JobStatus(Enum):
    PENDING = auto()
    RUNNING = auto()
    DONE    = auto()
    ERROR   = auto()


@dataclass
class PropertyJob:
    """One (property, algebra) pair in the run queue."""
    check: PropertyCheck
    algebra: AlgebraDescriptor
    samples: int
    tolerance: float
    status: JobStatus = JobStatus.PENDING
    max_residual: Optional[float] = None
    error_msg: str = ""
    elapsed_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return self.max_residual is not None and self.max_residual <= self.tolerance

    def record(self) -> dict:
        entry = {
            "name": self.check.name,
            "algebra": self.algebra.label,
            "samples": self.samples,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }
        if self.error_msg:
            entry["error"] = self.error_msg
        return entry


@dataclass
class SuiteReport:
    suite: str
    seed: int
    records: list[dict] = field(default_factory=list)
    wall_time_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r["pass"] for r in self.records)

    @property
    def failures(self) -> list[dict]:
        return [r for r in self.records if not r["pass"]]

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "records": list(self.records),
            "wall_time_ms": round(self.wall_time_ms, 3),
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


class SuiteRunner:
    """
    Runs a queue of property jobs. Each job draws from its own stream,
    seed XOR H("<property>/<algebra>"), so worker count and completion
    order never change the report.
    """

    def __init__(self, seed: int = 0, workers: int = 1,
                 on_job_started: Callable[[PropertyJob], None] | None = None,
                 on_job_done: Callable[[PropertyJob], None] | None = None):
        self.seed = seed
        self.workers = max(1, int(workers))
        self.on_job_started = on_job_started
        self.on_job_done = on_job_done
        self._jobs: list[PropertyJob] = []

    # ── Job Management ────────────────────────────────────────────────────────

    def add_job(self, job: PropertyJob) -> int:
        """Add a job to the queue. Returns its index."""
        self._jobs.append(job)
        return len(self._jobs) - 1

    def clear_all(self):
        self._jobs.clear()

    @property
    def jobs(self) -> list[PropertyJob]:
        return self._jobs

    # ── Control ───────────────────────────────────────────────────────────────

    def job_seed(self, job: PropertyJob) -> int:
        return derive_seed(self.seed, f"{job.check.name}/{job.algebra.label}")

    def _run_job(self, job: PropertyJob) -> PropertyJob:
        job.status = JobStatus.RUNNING
        if self.on_job_started:
            self.on_job_started(job)
        log.info("start %s on %s (%d samples)", job.check.name, job.algebra.label, job.samples)
        watch = Stopwatch()
        watch.start()
        try:
            residual = float(job.check.fn(job.algebra, Rng(self.job_seed(job)), job.samples))
            if not math.isfinite(residual):
                raise FloatingPointError(f"non-finite residual {residual}")
            job.max_residual = residual
            job.status = JobStatus.DONE
        except (JordanConeError, ArithmeticError, ValueError) as exc:
            job.status = JobStatus.ERROR
            job.error_msg = f"{type(exc).__name__}: {exc}"
            log.warning("%s on %s raised %s", job.check.name, job.algebra.label, job.error_msg)
        job.elapsed_ms = watch.elapsed_ms()
        log.info("done %s on %s: residual %s (tol %.1e)",
                 job.check.name, job.algebra.label, job.max_residual, job.tolerance)
        if self.on_job_done:
            self.on_job_done(job)
        return job

    def run(self) -> list[PropertyJob]:
        """Run every pending job; results stay in queue order."""
        pending = [job for job in self._jobs if job.status == JobStatus.PENDING]
        if self.workers == 1:
            for job in pending:
                self._run_job(job)
        else:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                list(pool.map(self._run_job, pending))
        return self._jobs

    # ── Statistics ────────────────────────────────────────────────────────────

    def stats(self) -> dict:
        total = len(self._jobs)
        done = sum(1 for j in self._jobs if j.status == JobStatus.DONE)
        errors = sum(1 for j in self._jobs if j.status == JobStatus.ERROR)
        failed = sum(1 for j in self._jobs if j.status == JobStatus.DONE and not j.passed)
        return {
            "total": total,
            "done": done,
            "errors": errors,
            "failed": failed,
            "passed": done - failed,
        }


def build_jobs(suite: str, algebras: list[AlgebraDescriptor], samples: int | None = None,
               tol_scale: float = 1.0) -> list[PropertyJob]:
    """Expand a suite into jobs, property order first, algebra order second."""
    jobs = []
    for check in checks_for(suite):
        count = check.samples if samples is None else max(1, int(samples))
        for algebra in check.targets(algebras):
            jobs.append(PropertyJob(check, algebra, count, check.tolerance * tol_scale))
    return jobs


def run_suite(name: str, algebras: list[AlgebraDescriptor], samples: int | None = None, seed: int = 0,
              tol_scale: float = 1.0, workers: int = 1,
              on_job_done: Callable[[PropertyJob], None] | None = None) -> SuiteReport:
    """Run one suite (or "all") and collect a SuiteReport; raises UnknownSuite."""
    runner = SuiteRunner(seed=seed, workers=workers, on_job_done=on_job_done)
    for job in build_jobs(name, algebras, samples, tol_scale):
        runner.add_job(job)
    watch = Stopwatch()
    watch.start()
    runner.run()
    report = SuiteReport(name, seed, [job.record() for job in runner.jobs], watch.elapsed_ms())
    log.info("suite %s: %s", name, runner.stats())
    return report
