"""File formats: scenario JSON, sniffer traces, sweep tables.

Every writer here is byte-stable: the same values produce the same
bytes on every platform, which is what makes golden-file comparison of
whole runs possible.

Scenario schema::

    {
      "pus": [[free_channels, unit_price], ...],
      "nbc": <int>,
      "latency": {"transit": <real>, "pu_proc": <real>, "su_proc": <real>},
      "payment_mode": "unit" | "total",
      "seed": <int>
    }

`latency`, `payment_mode` and `seed` are optional (defaults: 1.0/0.5/0.5,
"unit", 0); prices and channel counts are integers.
"""

from __future__ import annotations

import json
from typing import BinaryIO, Sequence

from .agents import PaymentMode, PuProfile, SuDemand
from .engine import InvalidScenario, LatencyModel, Scenario, TraceRecord
from .protocol import pu_id


class ScenarioError(Exception):
    """Base for scenario file problems."""


class ScenarioSyntaxError(ScenarioError):
    """Document is not valid JSON; carries line and column."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ScenarioSemanticError(ScenarioError):
    """Document is valid JSON but violates a scenario invariant."""


class ArityMismatch(ValueError):
    """A CSV row does not match the header width."""


_TOP_KEYS = {"pus", "nbc", "latency", "payment_mode", "seed"}
_LATENCY_KEYS = {"transit", "pu_proc", "su_proc"}


def _require_int(value: object, what: str) -> int:
    # bool is an int subclass; reject it explicitly
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioSemanticError(f"{what} must be an integer")
    return value


def _require_real(value: object, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioSemanticError(f"{what} must be a number")
    return float(value)


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document.

    Raises ScenarioSyntaxError for malformed JSON (with position) and
    ScenarioSemanticError naming the violated invariant otherwise.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioSyntaxError(exc.msg, exc.lineno, exc.colno) from exc

    if not isinstance(doc, dict):
        raise ScenarioSemanticError("top level must be an object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ScenarioSemanticError(f"unknown keys: {sorted(unknown)}")
    for key in ("pus", "nbc"):
        if key not in doc:
            raise ScenarioSemanticError(f"missing required key '{key}'")

    raw_pus = doc["pus"]
    if not isinstance(raw_pus, list):
        raise ScenarioSemanticError("pus must be a list")
    if not raw_pus:
        raise ScenarioSemanticError("pus must be nonempty")
    pus = []
    for position, entry in enumerate(raw_pus, start=1):
        if not isinstance(entry, list) or len(entry) != 2:
            raise ScenarioSemanticError(
                f"pus[{position - 1}] must be a [free_channels, unit_price] pair"
            )
        free = _require_int(entry[0], f"PU{position} free_channels")
        price = _require_int(entry[1], f"PU{position} unit_price")
        if free < 0:
            raise ScenarioSemanticError(f"PU{position} free_channels must be >= 0")
        if price <= 0:
            raise ScenarioSemanticError(f"PU{position} unit_price must be > 0")
        pus.append(PuProfile(pu_id(position), free, price))

    nbc = _require_int(doc["nbc"], "nbc")
    if nbc < 1:
        raise ScenarioSemanticError("nbc must be >= 1")

    defaults = LatencyModel()
    latency = defaults
    if "latency" in doc:
        raw_lat = doc["latency"]
        if not isinstance(raw_lat, dict):
            raise ScenarioSemanticError("latency must be an object")
        unknown = set(raw_lat) - _LATENCY_KEYS
        if unknown:
            raise ScenarioSemanticError(f"unknown latency keys: {sorted(unknown)}")
        try:
            latency = LatencyModel(
                transit_delay=_require_real(
                    raw_lat.get("transit", defaults.transit_delay), "latency.transit"
                ),
                pu_proc_delay=_require_real(
                    raw_lat.get("pu_proc", defaults.pu_proc_delay), "latency.pu_proc"
                ),
                su_proc_delay=_require_real(
                    raw_lat.get("su_proc", defaults.su_proc_delay), "latency.su_proc"
                ),
            )
        except InvalidScenario as exc:
            raise ScenarioSemanticError(str(exc)) from exc

    payment_mode = PaymentMode.UNIT_PRICE
    if "payment_mode" in doc:
        raw_mode = doc["payment_mode"]
        if raw_mode not in ("unit", "total"):
            raise ScenarioSemanticError('payment_mode must be "unit" or "total"')
        payment_mode = PaymentMode(raw_mode)

    seed = 0
    if "seed" in doc:
        seed = _require_int(doc["seed"], "seed")
        if not 0 <= seed < 2**64:
            raise ScenarioSemanticError("seed must fit in an unsigned 64-bit integer")

    try:
        return Scenario(
            pus=tuple(pus),
            demand=SuDemand(nbc),
            latency=latency,
            payment_mode=payment_mode,
            seed=seed,
        )
    except (InvalidScenario, ValueError) as exc:
        raise ScenarioSemanticError(str(exc)) from exc


def serialize_scenario(scenario: Scenario) -> str:
    """Inverse of parse_scenario; always emits every field."""
    doc = {
        "pus": [[pu.free_channels, pu.unit_price] for pu in scenario.pus],
        "nbc": scenario.demand.nbc,
        "latency": {
            "transit": scenario.latency.transit_delay,
            "pu_proc": scenario.latency.pu_proc_delay,
            "su_proc": scenario.latency.su_proc_delay,
        },
        "payment_mode": scenario.payment_mode.value,
        "seed": scenario.seed,
    }
    return json.dumps(doc, indent=2) + "\n"


def write_trace(records: Sequence[TraceRecord], sink: BinaryIO) -> int:
    """Emit the sniffer trace as JSON Lines; returns bytes written.

    One object per record, keys exactly t/from/to/perf/body in that
    order, `t` with exactly three fractional digits, a bare newline
    after every record.
    """
    written = 0
    for record in records:
        line = (
            f'{{"t":"{record.time:.3f}",'
            f'"from":{json.dumps(str(record.sender))},'
            f'"to":{json.dumps(str(record.receiver))},'
            f'"perf":{json.dumps(record.performative.value)},'
            f'"body":{json.dumps(record.body_summary)}}}\n'
        )
        written += sink.write(line.encode("utf-8"))
    return written


def _csv_cell(value: object) -> str:
    if isinstance(value, bool):
        raise TypeError("CSV cells must be numbers or text")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.3f}"
    if isinstance(value, str):
        if any(ch in value for ch in ',"\r\n'):
            return '"' + value.replace('"', '""') + '"'
        return value
    raise TypeError(f"CSV cells must be numbers or text, got {type(value).__name__}")


def write_csv(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    """Render a small numeric table: \\n line endings, one per row
    including the last, integers unpadded, reals with three fractional
    digits."""
    width = len(header)
    lines = [",".join(_csv_cell(name) for name in header)]
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ArityMismatch(f"row {i} has {len(row)} cells, header has {width}")
        lines.append(",".join(_csv_cell(cell) for cell in row))
    return "\n".join(lines) + "\n"
