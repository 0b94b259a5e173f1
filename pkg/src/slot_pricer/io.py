"""Instance files (JSON, schema ``slot-pricing/1``) and result serialisation."""

from __future__ import annotations

import hashlib
import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import jsonschema

from slot_pricer.distance import FAMILIES, distance_from_dict
from slot_pricer.errors import ValidationError
from slot_pricer.interval import Interval
from slot_pricer.measure import density_from_dict
from slot_pricer.model import Instance, RegionReport

SCHEMA_TAG = "slot-pricing/1"

_NUMBER = {"type": "number"}
INSTANCE_SCHEMA = {
    "type": "object",
    "required": ["schema", "distance", "slots", "measure"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_TAG},
        "name": {"type": "string"},
        "description": {"type": "string"},
        "distance": {
            "type": "object",
            "required": ["family", "a", "c"],
            "additionalProperties": False,
            "properties": {
                "family": {"enum": sorted(FAMILIES)},
                "a": {"type": "number", "exclusiveMinimum": 0},
                "c": _NUMBER,
            },
        },
        "slots": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["t", "capacity"],
                "additionalProperties": False,
                "properties": {"t": _NUMBER, "capacity": {"type": "number", "minimum": 0}},
            },
        },
        "measure": {
            "type": "object",
            "required": ["breakpoints", "densities"],
            "additionalProperties": False,
            "properties": {
                "breakpoints": {"type": "array", "minItems": 2, "items": _NUMBER},
                "densities": {"type": "array", "minItems": 1, "items": {"type": "number", "minimum": 0}},
            },
        },
    },
}


@dataclass(frozen=True)
class InstanceFile:
    instance: Instance
    name: str | None = None
    description: str | None = None
    source: str | None = field(default=None, compare=False)


def instance_to_dict(doc: InstanceFile) -> dict:
    inst = doc.instance
    out: dict[str, Any] = {"schema": SCHEMA_TAG}
    if doc.name is not None:
        out["name"] = doc.name
    if doc.description is not None:
        out["description"] = doc.description
    out["distance"] = inst.distance.to_dict()
    out["slots"] = [{"t": t, "capacity": c} for t, c in zip(inst.times, inst.capacities)]
    out["measure"] = inst.population.to_dict()
    return out


def instance_hash(instance: Instance) -> str:
    payload = instance_to_dict(InstanceFile(instance))
    canon = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


_WS = re.compile(r"[ \t\r\n]*")


def locate(text: str, path: tuple) -> int | None:
    """1-based line where the value at ``path`` starts, or None if it cannot be found."""
    dec = json.JSONDecoder()
    try:
        pos = _WS.match(text, 0).end()
        for key in path:
            if isinstance(key, str):
                if text[pos] != "{":
                    break
                pos = _WS.match(text, pos + 1).end()
                while text[pos] != "}":
                    name, pos = dec.raw_decode(text, pos)
                    pos = _WS.match(text, pos).end() + 1  # skip ':'
                    pos = _WS.match(text, pos).end()
                    if name == key:
                        break
                    _, pos = dec.raw_decode(text, pos)
                    pos = _WS.match(text, pos).end()
                    if text[pos] == ",":
                        pos = _WS.match(text, pos + 1).end()
                else:
                    return None
            else:
                if text[pos] != "[":
                    break
                pos = _WS.match(text, pos + 1).end()
                for _ in range(key):
                    _, pos = dec.raw_decode(text, pos)
                    pos = _WS.match(text, pos).end() + 1  # skip ','
                    pos = _WS.match(text, pos).end()
        return text.count("\n", 0, pos) + 1
    except (ValueError, IndexError):
        return None


def _with_line(message: str, text: str, path: tuple, source: str) -> str:
    line = locate(text, path)
    where = f"{source}:{line}" if line is not None else source
    return f"{where}: {message}"


def parse_instance(text: str, source: str = "<instance>") -> InstanceFile:
    """Parse and fully validate an instance document; raises ValidationError."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{source}:{exc.lineno}: invalid JSON: {exc.msg}") from exc
    validator = jsonschema.Draft202012Validator(INSTANCE_SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        err = errors[0]
        path = tuple(err.absolute_path)
        field_name = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in path).lstrip(".") or "<root>"
        raise ValidationError(_with_line(f"{field_name}: {err.message}", text, path, source), path)
    try:
        instance = Instance(
            distance_from_dict(data["distance"]),
            tuple(s["t"] for s in data["slots"]),
            tuple(s["capacity"] for s in data["slots"]),
            density_from_dict(data["measure"]),
        )
    except ValidationError as exc:
        raise ValidationError(_with_line(str(exc), text, exc.path, source), exc.path) from exc
    return InstanceFile(instance, data.get("name"), data.get("description"), source)


def load_instance(path: str | Path) -> InstanceFile:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"{path}: cannot read instance file ({exc.strerror})") from exc
    return parse_instance(text, str(path))


def dump_instance(doc: InstanceFile) -> str:
    return json.dumps(instance_to_dict(doc), indent=2) + "\n"


def num(x: float) -> float | str:
    """JSON-safe number: infinities become the strings ``"inf"`` / ``"-inf"``."""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def interval_json(iv: Interval) -> list | None:
    return None if iv.is_empty else [num(iv.lo), num(iv.hi)]


def region_json(report: RegionReport) -> dict:
    return {
        "revenue": report.revenue,
        "feasible": report.feasible,
        "slots": [
            {
                "slot": j + 1,
                "price": p,
                "envelope_region": interval_json(s.envelope),
                "served_region": interval_json(s.served),
                "load": s.load,
                "capacity": s.capacity,
                "capacity_ok": s.capacity_ok,
            }
            for j, (p, s) in enumerate(zip(report.prices, report.slots))
        ],
    }


def dumps_result(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"
