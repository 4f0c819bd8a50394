"""`invariants`: Hasse invariant, a-number and fiber heights of a BT-group descriptor."""
from __future__ import annotations

import math
from typing import Any

from algebra.btgroup import a_number, fiber_heights, hasse_invariant, specialize
from algebra.codec import load_base, load_btdesc, load_element, load_series
from algebra.ff import FieldDesc
from algebra.mpoly import MPolyRing
from algebra.semilinear import SigmaMat, is_etale_presentation, presentation
from algebra.series import SeriesCtx
from jobs.common import degree_cap_for, parse_payload, precision_for
from jobs.schemas import BTDescPayload, JobSpec
from utils.errors import InputError
from utils.settings import Settings


def _point(raw: Any, B, path: str) -> Any:
    if raw is None or raw in ("closed", "generic"):
        return raw
    if isinstance(B.base, MPolyRing) and isinstance(raw, list):
        F = B.base.residue
        return [load_element(x, F, f"{path}.{i}") for i, x in enumerate(raw)]
    raise InputError("bad_point", f"{path}: use 'closed', 'generic' or a residue point", details={"path": path})


def _specialized(data: BTDescPayload, raw: dict[str, Any], B, job: JobSpec, settings: Settings):
    spec = data.specialize
    ctx = load_base(raw["specialize"]["base"], "payload.specialize.base", precision_for(job, settings, spec.base))
    if not isinstance(ctx, SeriesCtx):
        raise InputError("unsupported_base", "specialize targets a series base", details={"path": "payload.specialize.base"})
    values = {k: load_series(v, ctx, f"payload.specialize.values.{k}") for k, v in raw["specialize"]["values"].items()}
    return specialize(B, values)


def run(job: JobSpec, settings: Settings) -> dict[str, Any]:
    data, raw = parse_payload(BTDescPayload, job)
    B = load_btdesc(raw, "payload", precision_for(job, settings, data.base), degree_cap_for(settings, data.base))
    if data.specialize is not None:
        B = _specialized(data, raw, B, job, settings)
    point = _point(data.point, B, "payload.point")
    heights = fiber_heights(B, point, settings.extension_bound, settings.search_budget)
    out: dict[str, Any] = {
        "c": B.c,
        "d": B.d,
        "height": B.height,
        "a_number": a_number(B),
        **heights.as_dict(),
    }
    if not isinstance(B.base, MPolyRing):
        h = hasse_invariant(B)
        out["h"] = h
        out["ordinary"] = h == 0
        out["generically_ordinary"] = not (isinstance(h, float) and math.isinf(h))
    if B.c:
        hw: SigmaMat = B.hw
        out["etale_presentation"] = is_etale_presentation(hw)
        out["presentation"] = [r.render() for r in presentation(hw)]
    out["base"] = "field" if isinstance(B.base, FieldDesc) else "series" if isinstance(B.base, SeriesCtx) else "mpoly"
    return out
