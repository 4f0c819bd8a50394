from __future__ import annotations

from typing import Any

from pydantic import ValidationError


class AlgebraError(ValueError):
    """Coded failure raised by the algebra layer.

    ``exit_code`` is the CLI status the error maps to; subclasses pin it.
    """

    exit_code = 1

    def __init__(self, code: str, message: str, details: Any = None, hint: str | None = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.details = details
        self.hint = hint


class InputError(AlgebraError):
    exit_code = 1


class PrecisionError(AlgebraError):
    exit_code = 2


class BudgetError(AlgebraError):
    exit_code = 2


def _loc(parts: Any) -> str:
    return ".".join(str(p) for p in parts)


def validation_details(exc: ValidationError) -> list[dict[str, Any]]:
    return [{"loc": _loc(err.get("loc", ())), "msg": err.get("msg", ""), "type": err.get("type", "")} for err in exc.errors()]


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, AlgebraError):
        return exc.exit_code
    return 1


def error_envelope(exc: BaseException) -> dict[str, Any]:
    status = exit_code_for(exc)
    if isinstance(exc, AlgebraError):
        error: dict[str, Any] = {"code": exc.code, "message": exc.message}
        if exc.details is not None:
            error["details"] = exc.details
        if exc.hint:
            error["hint"] = exc.hint
    elif isinstance(exc, ValidationError):
        error = {"code": "validation_error", "message": "Payload validation failed", "details": validation_details(exc)}
    else:
        error = {"code": "execution_error", "message": f"{type(exc).__name__}: {exc}"}
    return {"error": error, "status": status}
