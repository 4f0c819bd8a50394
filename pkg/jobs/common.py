from __future__ import annotations

from typing import Any, TypeVar

from pydantic import BaseModel, ValidationError

from jobs.schemas import BasePayload, JobSpec
from utils.errors import InputError, validation_details
from utils.settings import Settings

PayloadT = TypeVar("PayloadT", bound=BaseModel)


def parse_payload(model: type[PayloadT], job: JobSpec) -> tuple[PayloadT, dict[str, Any]]:
    """Validate the payload shape; returns the model and the raw mapping for the codec."""
    if job.payload is None:
        raise InputError("missing_payload", f"{job.subcommand} needs --input or --json", details={"path": "payload"})
    try:
        parsed = model.model_validate(job.payload)
    except ValidationError as exc:
        details = [{**d, "loc": f"payload.{d['loc']}" if d["loc"] else "payload"} for d in validation_details(exc)]
        raise InputError("invalid_payload", f"{job.subcommand} payload rejected", details=details) from exc
    return parsed, job.payload


def require(job: JobSpec, *flags: str) -> list[Any]:
    missing = [f for f in flags if getattr(job, f) is None]
    if missing:
        raise InputError(
            "missing_flags",
            f"{job.subcommand} needs " + ", ".join(f"--{f.replace('_', '-')}" for f in missing),
            details={"missing": missing},
        )
    return [getattr(job, f) for f in flags]


def precision_for(job: JobSpec, settings: Settings, base: BasePayload) -> int:
    """--prec wins, then the payload's base, then settings."""
    if job.precision is not None:
        return job.precision
    return base.prec if base.prec is not None else settings.precision


def degree_cap_for(settings: Settings, base: BasePayload) -> int:
    return base.degree_cap if base.degree_cap is not None else settings.degree_cap
