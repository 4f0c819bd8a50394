from __future__ import annotations

import contextlib
import contextvars
import dataclasses
import json
import math
import os
import time
import uuid
from fractions import Fraction
from pathlib import Path
from typing import Any

PACKAGE_VERSION = "0.3.0"

_MAX_STRING = 2000
_MAX_LIST = 100
_MAX_DICT = 200
_TELEMETRY_CONTEXT: contextvars.ContextVar[dict[str, Any]] = contextvars.ContextVar(
    "bt_monodromy_telemetry_context", default={}
)


def enabled() -> bool:
    return os.getenv("BTMONO_TELEMETRY", "1").strip().lower() not in {"0", "false", "off", "no"}


def events_path() -> Path:
    default = Path("/tmp/bt-monodromy") / "events.jsonl"
    return Path(os.getenv("BTMONO_TELEMETRY_EVENTS", str(default))).expanduser().resolve()


def sanitize(value: Any, *, depth: int = 0) -> Any:
    if depth > 8:
        return "<max_depth>"
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return [value.numerator, value.denominator]
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        if len(value) > _MAX_STRING:
            return {"truncated": True, "length": len(value), "preview": value[:_MAX_STRING]}
        return value
    if isinstance(value, Path):
        return str(value)
    if dataclasses.is_dataclass(value) and hasattr(value, "as_dict"):
        return sanitize(value.as_dict(), depth=depth + 1)
    if isinstance(value, dict):
        out: dict[str, Any] = {}
        for idx, (k, v) in enumerate(value.items()):
            if idx >= _MAX_DICT:
                out["<truncated_keys>"] = len(value) - _MAX_DICT
                break
            out[str(k)] = sanitize(v, depth=depth + 1)
        return out
    if isinstance(value, (list, tuple, set, frozenset)):
        seq = list(value)
        out_list = [sanitize(v, depth=depth + 1) for v in seq[:_MAX_LIST]]
        if len(seq) > _MAX_LIST:
            out_list.append({"truncated_items": len(seq) - _MAX_LIST})
        return out_list
    return str(value)[:_MAX_STRING]


def current_context() -> dict[str, Any]:
    return dict(_TELEMETRY_CONTEXT.get() or {})


@contextlib.contextmanager
def telemetry_context(**fields: Any):
    """Stamp every event emitted inside the block with ``fields``.

    Library code deep inside a job does not know the job id; the context
    variable carries it. Explicit ``log_event`` fields still win.
    """
    parent = dict(_TELEMETRY_CONTEXT.get() or {})
    clean = {k: v for k, v in fields.items() if v not in (None, "")}
    token = _TELEMETRY_CONTEXT.set({**parent, **sanitize(clean)})
    try:
        yield
    finally:
        _TELEMETRY_CONTEXT.reset(token)


def log_event(event_type: str, **fields: Any) -> dict[str, Any]:
    event = {
        "event_id": f"evt_{uuid.uuid4().hex[:12]}",
        "event_type": event_type,
        "timestamp": int(time.time() * 1000),
        "package_version": PACKAGE_VERSION,
    }
    event.update(current_context())
    event.update(sanitize(fields))
    if not enabled():
        return event
    path = events_path()
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, sort_keys=True, separators=(",", ":")) + "\n")
    except OSError:
        # best effort
        pass
    return event


def log_error(event_type: str, exc: BaseException, **fields: Any) -> dict[str, Any]:
    code = getattr(exc, "code", type(exc).__name__)
    message = getattr(exc, "message", str(exc))
    return log_event(event_type, error={"code": code, "message": message}, **fields)


def load_events(path: Path | None = None) -> list[dict[str, Any]]:
    p = path or events_path()
    if not p.exists():
        return []
    events = []
    for line in p.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line:
            continue
        try:
            events.append(json.loads(line))
        except json.JSONDecodeError:
            continue
    return events
