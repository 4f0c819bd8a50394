"""`roots` and `certificate`: Galois data of an additive polynomial."""
from __future__ import annotations

from typing import Any

from algebra.codec import dump_tame_roots, load_additive, load_element
from algebra.ff import ff_make
from algebra.monodromy import cartan_report, monodromy_certificate, tame_generator_matrix, tame_roots
from algebra.npoly import np_root_valuations
from algebra.series import ls_val
from jobs.common import parse_payload, precision_for
from jobs.schemas import AdditivePayload, JobSpec, RootsPayload
from utils.settings import Settings


def run_roots(job: JobSpec, settings: Settings) -> dict[str, Any]:
    data, raw = parse_payload(RootsPayload, job)
    P = load_additive(raw, "payload", precision_for(job, settings, data.base))
    T = tame_roots(P, settings.extension_bound)
    out: dict[str, Any] = {
        "poly": str(P),
        "root_valuations": np_root_valuations(P.dense()).as_dict(),
        "tame_roots": dump_tame_roots(T),
        "valuations": sorted(ls_val(r) for r in T.nonzero_roots),
        "generator": None,
        "cartan": None,
    }
    if T.dim:
        zeta = None if data.zeta is None else load_element(data.zeta, T.ctx.residue, "payload.zeta")
        M = tame_generator_matrix(T, zeta, settings.match_min_terms)
        out["generator"] = {**M.as_dict(), "order": M.order()}
        out["cartan"] = cartan_report(M)
    return out


def run_certificate(job: JobSpec, settings: Settings) -> dict[str, Any]:
    data, raw = parse_payload(AdditivePayload, job)
    P = load_additive(raw, "payload", precision_for(job, settings, data.base))
    search = ff_make(P.p, job.search_deg) if job.search_deg is not None else None
    cert = monodromy_certificate(P, search)
    out = {"poly": str(P), **cert.as_dict()}
    if search is not None:
        out["search_field"] = {"p": search.p, "n": search.n}
    return out
