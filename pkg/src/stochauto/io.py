"""Canonical JSON text format for transducers and acceptors."""

from __future__ import annotations

import json
from pathlib import Path

from .acceptor import StochasticAcceptor, validate_acceptor
from .automaton import AutomatonError, StochasticAutomaton, validate
from .ratlin import RatMatrix, format_rat, rat


class ParseError(ValueError):
    """Malformed file; the message names the offending field."""


def _rational(value, where: str):
    if isinstance(value, bool) or isinstance(value, float):
        raise ParseError(f"{where}: expected a rational string, got {value!r}")
    try:
        return rat(value)
    except (ValueError, TypeError, ZeroDivisionError):
        raise ParseError(f"{where}: malformed rational {value!r}") from None


def _names(doc: dict, key: str) -> tuple:
    if key not in doc:
        raise ParseError(f"missing field {key!r}")
    seq = doc[key]
    if not isinstance(seq, list) or not all(isinstance(s, str) for s in seq):
        raise ParseError(f"{key}: expected a list of names")
    if len(set(seq)) != len(seq):
        raise ParseError(f"{key}: duplicate names")
    return tuple(seq)


def _grid(value, n: int, where: str) -> RatMatrix:
    if not isinstance(value, list) or len(value) != n:
        raise ParseError(f"{where}: expected {n} rows")
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"{where}[{i}]: expected {n} entries")
        rows.append([_rational(x, f"{where}[{i}][{j}]") for j, x in enumerate(row)])
    return RatMatrix(rows)


def from_dict(doc: dict):
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    kind = doc.get("kind")
    if kind == "transducer":
        states = _names(doc, "states")
        inputs = _names(doc, "input")
        outputs = _names(doc, "output")
        raw = doc.get("kernels")
        if not isinstance(raw, dict):
            raise ParseError("kernels: expected an object keyed by input symbol")
        kernels = {}
        for a, by_out in raw.items():
            if a not in inputs:
                raise ParseError(f"kernels.{a}: unknown input symbol")
            if not isinstance(by_out, dict):
                raise ParseError(f"kernels.{a}: expected an object keyed by output symbol")
            for b, grid in by_out.items():
                if b not in outputs:
                    raise ParseError(f"kernels.{a}.{b}: unknown output symbol")
                kernels[(a, b)] = _grid(grid, len(states), f"kernels.{a}.{b}")
        try:
            return StochasticAutomaton(states, inputs, outputs, kernels)
        except AutomatonError as e:
            raise ParseError(str(e)) from None
    if kind == "acceptor":
        states = _names(doc, "states")
        inputs = _names(doc, "input")
        raw = doc.get("matrices")
        if not isinstance(raw, dict):
            raise ParseError("matrices: expected an object keyed by symbol")
        mats = {}
        for a, grid in raw.items():
            if a not in inputs:
                raise ParseError(f"matrices.{a}: unknown input symbol")
            mats[a] = _grid(grid, len(states), f"matrices.{a}")
        for key in ("initial", "final"):
            if not isinstance(doc.get(key), list) or len(doc[key]) != len(states):
                raise ParseError(f"{key}: expected {len(states)} entries")
        initial = [_rational(x, f"initial[{i}]") for i, x in enumerate(doc["initial"])]
        final = [_rational(x, f"final[{i}]") for i, x in enumerate(doc["final"])]
        try:
            return StochasticAcceptor(states, inputs, mats, initial, final)
        except AutomatonError as e:
            raise ParseError(str(e)) from None
    raise ParseError(f"kind: expected 'transducer' or 'acceptor', got {kind!r}")


def to_dict(obj) -> dict:
    if isinstance(obj, StochasticAutomaton):
        return {
            "kind": "transducer",
            "states": list(obj.states),
            "input": list(obj.inputs),
            "output": list(obj.outputs),
            "kernels": {
                a: {b: obj.kernels[(a, b)].to_strings() for b in obj.outputs} for a in obj.inputs
            },
        }
    if isinstance(obj, StochasticAcceptor):
        return {
            "kind": "acceptor",
            "states": list(obj.states),
            "input": list(obj.inputs),
            "matrices": {a: obj.matrices[a].to_strings() for a in obj.inputs},
            "initial": [format_rat(x) for x in obj.initial],
            "final": [format_rat(x) for x in obj.final],
        }
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _dump(value, indent: int) -> str:
    """JSON with one line per matrix row."""
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f'{pad}  {json.dumps(k, ensure_ascii=False)}: {_dump(v, indent + 1)}' for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, list) and value and all(isinstance(r, list) for r in value):
        rows = [f"{pad}  {json.dumps(r, ensure_ascii=False)}" for r in value]
        return "[\n" + ",\n".join(rows) + "\n" + pad + "]"
    return json.dumps(value, ensure_ascii=False)


def dumps(obj) -> str:
    return _dump(to_dict(obj), 0) + "\n"


def loads(text: str, check: bool = True):
    """Parse a document; with ``check`` value-level violations raise ParseError."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
    obj = from_dict(doc)
    if check:
        report = validate(obj) if isinstance(obj, StochasticAutomaton) else validate_acceptor(obj)
        if not report.ok:
            raise ParseError("; ".join(report.violations))
    return obj


def load(path, check: bool = True):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"{path}: {e.strerror}") from None
    try:
        return loads(text, check)
    except ParseError as e:
        raise ParseError(f"{path}: {e}") from None


def dump(obj, path) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")
