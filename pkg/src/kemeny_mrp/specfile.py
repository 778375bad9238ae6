"""JSON spec files and the built-in examples.

A spec file is one JSON object.  ``kind`` selects the required fields::

    dtmc   P
    mrp    P and mu, or P and P1 (mu may accompany P1 if it matches)
    ctmc   Q
    bd     alpha, beta

``tol`` and ``seed`` are optional for every kind; anything else is an error.
"""

import json
import re
from dataclasses import dataclass

import numpy as np

from .chain import ROW_TOL, make_spec, validate_chain
from .ctmc import BirthDeathParams, bd_generator, mrp_from_generator, validate_generator
from .errors import ChainError, SpecFormatError

REQUIRED = {
    "dtmc": {"P"},
    "mrp": {"P"},
    "ctmc": {"Q"},
    "bd": {"alpha", "beta"},
}
OPTIONAL = {"tol", "seed"}
EXTRA = {"mrp": {"mu", "P1"}}

BUILTINS = {
    "dtmc2": {"kind": "dtmc", "P": [[0.5, 0.5], [0.25, 0.75]]},
    "mrp2": {"kind": "mrp", "P": [[0.5, 0.5], [0.25, 0.75]], "mu": [2, 4]},
    "ctmc2": {"kind": "ctmc", "Q": [[-1, 1], [2, -2]]},
    "bd3": {"kind": "bd", "alpha": [1, 2], "beta": [1, 2]},
}


@dataclass(frozen=True, eq=False)
class SpecFile:
    """A parsed spec: the MRP form plus the generator or rates it came from."""

    kind: str
    spec: object
    generator: object = None
    bd: object = None
    tol: float = ROW_TOL
    seed: int | None = None
    name: str = "<spec>"


def _key_line(text, key):
    if text is None:
        return None
    match = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, match.start()) + 1 if match else None


def _matrix(doc, key, text):
    value = doc[key]
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise SpecFormatError(f"{key!r} must be a nonempty list of rows", _key_line(text, key))
    width = len(value[0])
    for i, row in enumerate(value):
        if len(row) != width:
            raise SpecFormatError(f"{key!r} row {i + 1} has {len(row)} entries, expected {width}",
                                  _key_line(text, key))
        if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in row):
            raise SpecFormatError(f"{key!r} row {i + 1} contains a non-number", _key_line(text, key))
    return np.array(value, dtype=float)


def _vector(doc, key, text):
    value = doc[key]
    if not isinstance(value, list) or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in value):
        raise SpecFormatError(f"{key!r} must be a list of numbers", _key_line(text, key))
    return np.array(value, dtype=float)


def parse_spec(doc, text=None, name="<spec>"):
    """Build a :class:`SpecFile` from a decoded JSON object.

    Validation failures are re-raised with the line of the offending key
    attached as ``exc.line`` when ``text`` is available.
    """
    if not isinstance(doc, dict):
        raise SpecFormatError("spec must be a JSON object", 1)
    kind = doc.get("kind")
    if kind not in REQUIRED:
        raise SpecFormatError(f"'kind' must be one of {sorted(REQUIRED)}, got {kind!r}",
                              _key_line(text, "kind"))
    keys = set(doc) - {"kind"}
    allowed = REQUIRED[kind] | OPTIONAL | EXTRA.get(kind, set())
    missing = REQUIRED[kind] - keys
    if missing:
        raise SpecFormatError(f"kind {kind!r} requires field(s) {sorted(missing)}", _key_line(text, "kind"))
    unknown = sorted(keys - allowed)
    if unknown:
        raise SpecFormatError(f"field {unknown[0]!r} is not allowed for kind {kind!r}",
                              _key_line(text, unknown[0]))
    if kind == "mrp" and not keys & {"mu", "P1"}:
        raise SpecFormatError("kind 'mrp' requires 'mu' or 'P1'", _key_line(text, "kind"))

    tol = doc.get("tol", ROW_TOL)
    if isinstance(tol, bool) or not isinstance(tol, (int, float)) or not tol > 0:
        raise SpecFormatError("'tol' must be a positive number", _key_line(text, "tol"))
    seed = doc.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64):
        raise SpecFormatError("'seed' must be an unsigned 64-bit integer", _key_line(text, "seed"))

    anchor = {"dtmc": "P", "mrp": "P", "ctmc": "Q", "bd": "alpha"}[kind]
    try:
        gen = bd = None
        if kind in ("dtmc", "mrp"):
            p = _matrix(doc, "P", text)
            chain = validate_chain(p, tol)
            anchor = "mu" if "mu" in doc else "P1"
            mu = _vector(doc, "mu", text) if "mu" in doc else None
            p1 = _matrix(doc, "P1", text) if "P1" in doc else None
            spec = make_spec(chain, mu=mu, p1=p1, kind=kind)
        elif kind == "ctmc":
            gen = validate_generator(_matrix(doc, "Q", text), tol)
            spec = mrp_from_generator(gen)
        else:
            try:
                bd = BirthDeathParams(tuple(_vector(doc, "alpha", text)), tuple(_vector(doc, "beta", text)))
            except ValueError as exc:
                raise SpecFormatError(str(exc)) from exc
            gen = bd_generator(bd)
            spec = mrp_from_generator(gen)
    except ChainError as exc:
        if getattr(exc, "line", None) is None:
            exc.line = _key_line(text, anchor)
        raise
    return SpecFile(kind, spec, gen, bd, float(tol), seed, name)


def _with_tol(doc, tol):
    if tol is not None and isinstance(doc, dict):
        doc = {**doc, "tol": tol}
    return doc


def load_spec(path, tol=None):
    """Parse a spec file; ``tol`` overrides the file's own tolerance."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"invalid JSON: {exc.msg} (column {exc.colno})", exc.lineno) from exc
    return parse_spec(_with_tol(doc, tol), text, name=str(path))


def builtin(name, tol=None):
    doc = BUILTINS[name]
    text = dump_spec(doc)
    return parse_spec(_with_tol(json.loads(text), tol), text, name=name)


def dump_spec(doc):
    """Canonical text for a spec document: one matrix row per line."""
    def fmt(v):
        return json.dumps(v)

    lines = ["{"]
    items = list(doc.items())
    for k, (key, value) in enumerate(items):
        comma = "," if k < len(items) - 1 else ""
        if isinstance(value, list) and value and isinstance(value[0], list):
            rows = [f"    {fmt(r)}" for r in value]
            lines.append(f'  "{key}": [')
            lines.append(",\n".join(rows))
            lines.append(f"  ]{comma}")
        else:
            lines.append(f'  "{key}": {fmt(value)}{comma}')
    lines.append("}")
    return "\n".join(lines) + "\n"
