"""Reading and writing chain files.

A chain file is a UTF-8 JSON document::

    {"states": ["a", "b"], "rates": [["-2", "2"], ["1", "-1"]], "target": ["0.5", "0.5"]}

``states`` and ``target`` are optional.  Numbers may be JSON numbers or decimal
strings; strings of the form ``"p/q"`` are read as exact fractions.  Writers emit
decimal strings with 17 significant digits, which round-trip every double.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .core import Generator, validate_generator
from .errors import MarkovError, ParseError, ZeroTargetMass

log = logging.getLogger(__name__)

RENORMALIZE_TOL = 1e-6
EXACT_TOL = 1e-9


def parse_number(token: Any) -> float:
    if isinstance(token, bool):
        raise ParseError(f"not a number: {token!r}")
    if isinstance(token, (int, float)):
        return float(token)
    if isinstance(token, str):
        text = token.strip()
        try:
            return float(Fraction(text)) if "/" in text else float(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a number: {token!r}") from exc
    raise ParseError(f"not a number: {token!r}")


def format_number(x: float) -> str:
    return format(float(x), ".17g")


def parse_vector(tokens) -> np.ndarray:
    if isinstance(tokens, str):
        tokens = [t for t in tokens.replace(";", ",").split(",") if t.strip()]
    if not isinstance(tokens, (list, tuple)):
        raise ParseError("expected a list of numbers")
    return np.array([parse_number(t) for t in tokens], dtype=float)


def normalize_target(target: np.ndarray, n: int | None = None) -> np.ndarray:
    """Check a target vector; sums off by at most 1e-6 are renormalised with a warning."""
    target = np.asarray(target, dtype=float)
    if n is not None and target.size != n:
        raise ParseError(f"target has {target.size} entries, chain has {n} states")
    if np.any(target <= 0):
        raise ZeroTargetMass(f"target has non-positive mass at state {int(np.flatnonzero(target <= 0)[0])}")
    total = float(target.sum())
    if abs(total - 1.0) > RENORMALIZE_TOL:
        raise ParseError(f"target sums to {total!r}")
    if abs(total - 1.0) > EXACT_TOL:
        log.warning("target sums to %r; renormalising", total)
        target = target / total
    return target


@dataclass(frozen=True, eq=False)
class ChainFile:
    generator: Generator
    target: np.ndarray | None = None

    @property
    def states(self):
        return self.generator.labels


def chain_from_dict(doc: dict) -> ChainFile:
    if not isinstance(doc, dict) or "rates" not in doc:
        raise ParseError("chain document must be an object with a 'rates' key")
    rows = doc["rates"]
    if not isinstance(rows, list) or not rows:
        raise ParseError("'rates' must be a non-empty list of rows")
    matrix = []
    for i, row in enumerate(rows):
        try:
            matrix.append(parse_vector(row))
        except ParseError as exc:
            raise ParseError(f"row {i}: {exc}") from exc
    n = len(matrix)
    for i, row in enumerate(matrix):
        if row.size != n:
            raise ParseError(f"row {i} has {row.size} entries, expected {n}")
    try:
        gen = validate_generator(np.array(matrix), doc.get("states"))
    except MarkovError as exc:
        raise type(exc)(f"invalid rates: {exc}") from exc
    target = doc.get("target")
    if target is not None:
        target = normalize_target(parse_vector(target), n)
    return ChainFile(gen, target)


def read_chain(path) -> ChainFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
        doc = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return chain_from_dict(doc)


def chain_to_dict(gen: Generator, target=None, **extra) -> dict:
    doc: dict[str, Any] = {}
    if gen.labels is not None:
        doc["states"] = list(gen.labels)
    doc["rates"] = [[format_number(v) for v in row] for row in gen.rates]
    if target is not None:
        doc["target"] = [format_number(v) for v in target]
    doc.update(extra)
    return doc


def write_chain(path, gen: Generator, target=None, **extra) -> None:
    Path(path).write_text(json.dumps(chain_to_dict(gen, target, **extra), indent=2) + "\n", encoding="utf-8")


def read_vector_arg(value: str) -> np.ndarray:
    """Inline comma-separated vector, or a path to a JSON list / chain file with a target."""
    p = Path(value)
    if p.exists():
        try:
            doc = json.loads(p.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"{value}: {exc}") from exc
        if isinstance(doc, dict):
            for key in ("target", "proposal", "weights"):
                if key in doc:
                    return parse_vector(doc[key])
            raise ParseError(f"{value}: no vector found")
        return parse_vector(doc)
    return parse_vector(value)
