"""`igusa`: valuations along the level tower of the one-dimensional connected case."""
from __future__ import annotations

from typing import Any

from algebra.codec import load_base, load_series
from algebra.ff import ff_make
from algebra.monodromy import igusa_tower
from algebra.series import SeriesCtx
from jobs.common import parse_payload, precision_for
from jobs.schemas import IgusaPayload, JobSpec
from utils.errors import InputError
from utils.settings import Settings


def run(job: JobSpec, settings: Settings) -> dict[str, Any]:
    levels = job.levels or 1
    if job.payload is None:
        # --p alone means the standard instance a1 = t, alpha = 1 over F_p((t))
        if job.p is None:
            raise InputError("missing_flags", "igusa needs --p or a payload", details={"missing": ["p"]})
        ctx = SeriesCtx(ff_make(job.p, 1), 1, job.precision or settings.precision)
        a1, alpha = ctx.uniformizer(), ctx.one()
    else:
        data, raw = parse_payload(IgusaPayload, job)
        ctx = load_base(raw["base"], "payload.base", precision_for(job, settings, data.base))
        if not isinstance(ctx, SeriesCtx):
            raise InputError("unsupported_base", "igusa needs a series base", details={"path": "payload.base"})
        a1 = load_series(raw["a1"], ctx, "payload.a1")
        alpha = load_series(raw.get("alpha", 1), ctx, "payload.alpha")
    tower = igusa_tower(ctx.p, a1, alpha, levels)
    return {"p": ctx.p, "levels": levels, **tower.as_dict()}
