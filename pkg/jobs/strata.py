"""`strata`: the Newton polygons of NP(c + d, d) with their order and dimensions."""
from __future__ import annotations

from typing import Any

from algebra.codec import dump_npgon, dump_rational
from algebra.strata import diamond_dim, enumerate_np, hasse_edges, special_beta
from jobs.common import require
from jobs.schemas import JobSpec
from utils.settings import Settings


def run(job: JobSpec, settings: Settings) -> dict[str, Any]:
    c, d = require(job, "c", "d")
    open_slopes = settings.open_slopes
    polygons = enumerate_np(c, d, open_slopes)
    rows = []
    for b in polygons:
        _, dim = diamond_dim(b)
        rows.append({"beta": [dump_rational(s) for s in b.slopes], "dim": dim})
    out: dict[str, Any] = {
        "c": c,
        "d": d,
        "open_slopes": open_slopes,
        "polygons": rows,
        "edges": [list(e) for e in hasse_edges(polygons)],
    }
    if c >= 1 and d >= 2:
        beta = special_beta(c, d)
        out["special"] = {**dump_npgon(beta), "dim": diamond_dim(beta)[1]}
    return out
