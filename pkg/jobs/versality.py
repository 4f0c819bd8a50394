"""`versality`: Jacobian rank of a multivariate companion descriptor."""
from __future__ import annotations

from typing import Any

from algebra.btgroup import is_universal, jacobian_rank, universal_deformation_hw, versality_check
from algebra.codec import load_btdesc
from algebra.ff import ff_make
from algebra.mpoly import MPolyRing
from jobs.common import degree_cap_for, parse_payload, precision_for
from jobs.schemas import BTDescPayload, JobSpec
from utils.errors import InputError
from utils.settings import Settings


def run(job: JobSpec, settings: Settings) -> dict[str, Any]:
    if job.universal is not None:
        B = universal_deformation_hw(job.universal, ff_make(job.p or 2, 1), settings.degree_cap)
    else:
        data, raw = parse_payload(BTDescPayload, job)
        B = load_btdesc(raw, "payload", precision_for(job, settings, data.base), degree_cap_for(settings, data.base))
    if not isinstance(B.base, MPolyRing):
        raise InputError("unsupported_base", "versality is checked over an mpoly base", details={"path": "payload.base"})
    return {
        "c": B.c,
        "d": B.d,
        "nvars": B.base.nvars,
        "jacobian_rank": jacobian_rank(B),
        "versal": versality_check(B),
        "universal": is_universal(B),
        "hw": [[str(x) for x in r] for r in B.hw.entries],
    }
