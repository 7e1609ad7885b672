"""Reading scenario, acceptance-set and measure files.

Scenario JSON::

    {"probabilities": [...],
     "positions": {"X": {"initial_value": 10, "payoff": [...]}},
     "assets":    {"S": {"initial_price": 1,  "payoff": [...]}}}

Scenario CSV has the header ``scenario,probability,<name1>,<name2>,...``
and one row per scenario; initial values come from a sidecar JSON of the
form ``{"positions": {"X": {"initial_value": 10}}, "assets": {"S":
{"initial_price": 1}}}``.  Every column must be named in the sidecar.

All parse failures raise :class:`InputError` carrying the offending line
or field path.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np

from .acceptance import AcceptanceSet, acceptance_from_config
from .errors import InputError, RiskError
from .scenario import DualMeasure, EligibleAsset, Position, ScenarioSpace

PathLike = Union[str, Path]


@dataclass
class ScenarioBook:
    space: ScenarioSpace
    positions: Dict[str, Position] = field(default_factory=dict)
    assets: Dict[str, EligibleAsset] = field(default_factory=dict)

    def position(self, name: str) -> Position:
        try:
            return self.positions[name]
        except KeyError:
            raise InputError(f"no position named {name!r}; known: {sorted(self.positions)}") from None

    def asset(self, name: str) -> EligibleAsset:
        try:
            return self.assets[name]
        except KeyError:
            raise InputError(f"no asset named {name!r}; known: {sorted(self.assets)}") from None


def _read_json(path: PathLike):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read file ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _field(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise InputError(f"{where}: missing field '{key}'")
    return obj[key]


def _build(where: str, factory, *args):
    try:
        return factory(*args)
    except (RiskError, TypeError, ValueError) as exc:
        raise InputError(f"{where}: {exc}") from None


def load_scenarios(path: PathLike, meta: Optional[PathLike] = None) -> ScenarioBook:
    """Load a scenario file; ``.csv`` files need a sidecar (default ``<stem>.meta.json``)."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return _load_csv(path, Path(meta) if meta else path.with_suffix(".meta.json"))
    return scenarios_from_dict(_read_json(path), str(path))


def scenarios_from_dict(doc, source: str = "<scenarios>") -> ScenarioBook:
    probs = _field(doc, "probabilities", source)
    space = _build(f"{source}: probabilities", ScenarioSpace, probs)
    book = ScenarioBook(space)
    for name, entry in (doc.get("positions") or {}).items():
        where = f"{source}: positions.{name}"
        payoff = _build(f"{where}.payoff", space.payoff, _field(entry, "payoff", where))
        book.positions[name] = _build(where, Position, _field(entry, "initial_value", where), payoff)
    for name, entry in (doc.get("assets") or {}).items():
        where = f"{source}: assets.{name}"
        payoff = _build(f"{where}.payoff", space.payoff, _field(entry, "payoff", where))
        book.assets[name] = _build(where, EligibleAsset, _field(entry, "initial_price", where), payoff)
    return book


def _load_csv(path: Path, meta_path: Path) -> ScenarioBook:
    meta = _read_json(meta_path)
    try:
        handle = path.open(newline="")
    except OSError as exc:
        raise InputError(f"{path}: cannot read file ({exc.strerror})") from None
    with handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if header[:2] != ["scenario", "probability"] or len(header) < 3:
            raise InputError(f"{path}: line 1: header must start with 'scenario,probability,<name>'")
        names = header[2:]
        rows = []
        for row in reader:
            if not row or all(not cell.strip() for cell in row):
                continue
            line = reader.line_num
            if len(row) != len(header):
                raise InputError(f"{path}: line {line}: expected {len(header)} fields, got {len(row)}")
            try:
                rows.append([float(cell) for cell in row[1:]])
            except ValueError:
                bad = next(h for h, c in zip(header[1:], row[1:]) if not _is_float(c))
                raise InputError(f"{path}: line {line}: field '{bad}' is not a number") from None
    if not rows:
        raise InputError(f"{path}: no scenario rows")
    table = np.array(rows)
    positions = meta.get("positions") or {}
    assets = meta.get("assets") or {}
    doc = {"probabilities": table[:, 0].tolist(), "positions": {}, "assets": {}}
    for j, name in enumerate(names, start=1):
        if name in positions:
            doc["positions"][name] = {"initial_value": _field(positions[name], "initial_value", f"{meta_path}: positions.{name}"),
                                      "payoff": table[:, j].tolist()}
        elif name in assets:
            doc["assets"][name] = {"initial_price": _field(assets[name], "initial_price", f"{meta_path}: assets.{name}"),
                                   "payoff": table[:, j].tolist()}
        else:
            raise InputError(f"{meta_path}: column '{name}' has no entry under 'positions' or 'assets'")
    return scenarios_from_dict(doc, str(path))


def _is_float(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def load_acceptance(path: PathLike, space: ScenarioSpace, alpha: Optional[float] = None) -> AcceptanceSet:
    doc = _read_json(path)
    return _build(str(path), acceptance_from_config, doc, space, alpha)


def load_measures(path: PathLike, space: ScenarioSpace) -> np.ndarray:
    """Read ``{"measures": [[...], ...]}`` and validate each row."""
    doc = _read_json(path)
    rows = _field(doc, "measures", str(path))
    if not isinstance(rows, list) or not rows:
        raise InputError(f"{path}: 'measures' must be a non-empty list")
    out = [_build(f"{path}: measures[{i}]", DualMeasure.on, space, row).weights for i, row in enumerate(rows)]
    return np.vstack(out)
