"""Pydantic shapes for CLI jobs and their JSON payloads.

These check structure only (which keys, which containers). Entry values
(series terms, field elements, monomials) are decoded by ``algebra.codec``,
which reports its own field paths.
"""
from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

Subcommand = Literal["invariants", "roots", "certificate", "strata", "gl", "igusa", "cartan", "versality"]
GLCheck = Literal["lemma65", "lemma63", "closure", "order", "small_levels"]


class JobSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    subcommand: Subcommand
    payload: Any = None
    precision: int | None = Field(default=None, ge=1, le=4096)
    extension_bound: int | None = Field(default=None, ge=1, le=32)
    budget: int | None = Field(default=None, ge=1)
    open_slopes: bool | None = None
    check: GLCheck | None = None
    n: int | None = Field(default=None, ge=1)
    p: int | None = Field(default=None, ge=2)
    m: int | None = Field(default=None, ge=1)
    c: int | None = Field(default=None, ge=0)
    d: int | None = Field(default=None, ge=0)
    levels: int | None = Field(default=None, ge=1)
    universal: int | None = Field(default=None, ge=1)
    search_deg: int | None = Field(default=None, ge=1, le=8)


class BasePayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["field", "series", "mpoly"] = "series"
    p: int
    n: int = 1
    e: int | None = None
    prec: int | None = None
    nvars: int | None = None
    degree_cap: int | None = None


class SpecializePayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    base: BasePayload
    values: dict[str, Any]


class BTDescPayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    base: BasePayload
    rows: list[list[Any]]
    c: int | None = None
    d: int = 1
    point: Any = None
    specialize: SpecializePayload | None = None


class AdditivePayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    base: BasePayload
    coeffs: list[Any] | None = None
    dense: list[Any] | None = None

    @model_validator(mode="after")
    def _one_form(self) -> "AdditivePayload":
        if (self.coeffs is None) == (self.dense is None):
            raise ValueError("give exactly one of coeffs and dense")
        return self


class RootsPayload(AdditivePayload):
    zeta: Any = None


class IgusaPayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    base: BasePayload
    a1: Any
    alpha: Any = 1


class GeneratorsPayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    p: int | None = None
    m: int | None = None
    gens: list[Any]
