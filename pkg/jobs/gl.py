"""`gl` and `cartan`: finite-level group checks."""
from __future__ import annotations

from typing import Any

from algebra.codec import load_modmatrix
from algebra.gltheory import (
    ModMatrix,
    check_lemma63,
    check_lemma65,
    check_small_level_remark,
    closure,
    count_invertible,
    gl_order,
    nonsplit_cartan_gen,
)
from algebra.monodromy import cartan_report
from jobs.common import parse_payload, require
from jobs.schemas import GeneratorsPayload, JobSpec
from utils.errors import InputError
from utils.settings import Settings

# largest p^(m n^2) counted exhaustively by `gl --check order`
_EXHAUSTIVE_LIMIT = 100_000


def _generators(job: JobSpec) -> list[ModMatrix]:
    data, raw = parse_payload(GeneratorsPayload, job)
    p = data.p if data.p is not None else job.p
    m = data.m if data.m is not None else job.m
    gens = [load_modmatrix(g, f"payload.gens.{i}", p, m) for i, g in enumerate(raw["gens"])]
    if not gens:
        raise InputError("no_generators", "payload.gens is empty", details={"path": "payload.gens"})
    return gens


def run_gl(job: JobSpec, settings: Settings) -> dict[str, Any]:
    check = job.check or "lemma65"
    budget = settings.element_budget
    if check == "lemma65":
        n, p = require(job, "n", "p")
        return {"check": check, "n": n, "p": p, **check_lemma65(n, p, budget)}
    if check == "order":
        n, p = require(job, "n", "p")
        m = job.m or 1
        out: dict[str, Any] = {"check": check, "n": n, "p": p, "m": m, "order": gl_order(n, p, m)}
        if (p ** m) ** (n * n) <= min(budget, _EXHAUSTIVE_LIMIT):
            out["exhaustive_count"] = count_invertible(n, p, m, budget)
        return out
    gens = _generators(job)
    if check == "closure":
        group = closure(gens, budget)
        g = gens[0]
        return {"check": check, **group.as_dict(), "gl_order": gl_order(g.n, g.p, g.m)}
    if check == "lemma63":
        return {"check": check, **check_lemma63(gens, budget)}
    return {"check": check, **check_small_level_remark(gens, budget)}


def run_cartan(job: JobSpec, settings: Settings) -> dict[str, Any]:
    n, p = require(job, "n", "p")
    M = nonsplit_cartan_gen(n, p)
    return {"n": n, "p": p, "generator": M.as_dict(), **cartan_report(M)}
