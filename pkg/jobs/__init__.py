"""One handler per CLI subcommand, dispatched through ``execute``."""
from __future__ import annotations

import time
import uuid
from typing import Any, Callable

from jobs import gl, igusa, invariants, roots, strata, versality
from jobs.schemas import JobSpec
from utils.errors import InputError, exit_code_for
from utils.settings import Settings
from utils.telemetry import log_error, log_event, telemetry_context

Handler = Callable[[JobSpec, Settings], dict[str, Any]]


def _handlers() -> dict[str, Handler]:
    return {
        "invariants": invariants.run,
        "roots": roots.run_roots,
        "certificate": roots.run_certificate,
        "strata": strata.run,
        "gl": gl.run_gl,
        "igusa": igusa.run,
        "cartan": gl.run_cartan,
        "versality": versality.run,
    }


def settings_for(job: JobSpec, base: Settings) -> Settings:
    """Job flags layered over the resolved settings."""
    return base.override(
        precision=job.precision,
        extension_bound=job.extension_bound,
        element_budget=job.budget,
        open_slopes=job.open_slopes,
    )


def execute(job: JobSpec, base: Settings) -> dict[str, Any]:
    handler = _handlers().get(job.subcommand)
    if handler is None:
        raise InputError("unsupported_subcommand", f"Unsupported subcommand: {job.subcommand}", details={"allowed": sorted(_handlers())})
    start = time.time()
    with telemetry_context(job_id=uuid.uuid4().hex[:12], subcommand=job.subcommand):
        log_event("job_started", payload_keys=sorted(job.payload) if isinstance(job.payload, dict) else None)
        try:
            result = handler(job, settings_for(job, base))
        except Exception as exc:
            log_error("job_failed", exc, status=exit_code_for(exc), latency_ms=round((time.time() - start) * 1000, 2))
            raise
        log_event("job_completed", latency_ms=round((time.time() - start) * 1000, 2))
    return result
