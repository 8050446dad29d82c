"""JSON input documents: parsing with located diagnostics, and serialization.

Schema (all indices 0-based, all degrees explicit)::

    {
      "coeff": "Z" | "Q" | "Fp:<p>",
      "algebras": {
        "<name>": {
          "degrees": [int, ...],
          "names": [str, ...],                 # optional
          "unit": [coeff, ...],                # optional, found from the table otherwise
          "product": [[i, j, [coeff, ...]], ...],   # e_i e_j, nonzero products only
          "differential": [[row, col, coeff], ...]  # d(e_col) has coeff on e_row
        }
      },
      "bimodules": {
        "<name>": {
          "source": "<algebra>", "target": "<algebra>",
          "degrees": [int, ...],
          "relations": [[row, col, coeff], ...],    # optional; columns are relations
          "differential": [[row, col, coeff], ...],
          "left": {"<basis name of target>": [[row, col, coeff], ...]},
          "right": {"<basis name of source>": [[row, col, coeff], ...]}
        }
      },
      "maps": {
        "<name>": {"kind": "algebra" | "twocell", "source": ..., "target": ...,
                   "degree": int, "entries": [[row, col, coeff], ...]}
      },
      "params": {"<key>": "<value>"}
    }

The algebra name ``k`` is reserved for the ground ring.  Missing action
entries for the unit are filled in with the identity.  Rational
coefficients are written as strings ``"a/b"``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bicat import Bimodule, TwoCell
from .complex import ChainComplex
from .dga import DGAlgebra, DGAlgebraMap, ground, validate_dga
from .rings import CoeffRing

__all__ = ["ParseError", "InputDocument", "parse_input", "parse_text", "serialize", "dumps"]


class ParseError(ValueError):
    """Schema violation, undefined reference or failed axiom, with a location."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where
        self.message = message


@dataclass
class InputDocument:
    ring: CoeffRing
    algebras: dict = field(default_factory=dict)
    bimodules: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def algebra(self, name: str) -> DGAlgebra:
        if name == "k":
            return self._ground()
        if name not in self.algebras:
            raise KeyError(f"undefined algebra {name!r}")
        return self.algebras[name]

    def _ground(self):
        g = self.__dict__.get("_k")
        if g is None:
            g = ground(self.ring)
            self.__dict__["_k"] = g
        return g

    def bimodule(self, name: str) -> Bimodule:
        if name not in self.bimodules:
            raise KeyError(f"undefined bimodule {name!r}")
        return self.bimodules[name]

    def map(self, name: str):
        if name not in self.maps:
            raise KeyError(f"undefined map {name!r}")
        return self.maps[name]

    def __eq__(self, other):
        return isinstance(other, InputDocument) and dumps(self) == dumps(other)


# -- coefficients -------------------------------------------------------------


def _coeff_in(ring: CoeffRing, v, where):
    try:
        if isinstance(v, str):
            return ring.scalar(Fraction(v))
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise TypeError
        if isinstance(v, float) and not v.is_integer():
            raise ParseError(where, "non-integer floats are not allowed; write rationals as 'a/b'")
        return ring.scalar(int(v))
    except ParseError:
        raise
    except (TypeError, ValueError, ZeroDivisionError):
        raise ParseError(where, f"bad coefficient {v!r} for {ring}")


def _coeff_out(ring: CoeffRing, v):
    if ring.kind == "Q":
        f = Fraction(v)
        return f.numerator if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    return int(v)


def _sparse_in(ring, entries, shape, where):
    m = ring.zeros(shape)
    if entries is None:
        return m
    if not isinstance(entries, list):
        raise ParseError(where, "expected a list of [row, col, coeff] entries")
    for t, e in enumerate(entries):
        loc = f"{where}[{t}]"
        if not (isinstance(e, list) and len(e) == 3):
            raise ParseError(loc, "expected [row, col, coeff]")
        r, c, v = e
        if not (isinstance(r, int) and isinstance(c, int)) or not (0 <= r < shape[0] and 0 <= c < shape[1]):
            raise ParseError(loc, f"index out of range for shape {shape}")
        m[r, c] = m[r, c] + _coeff_in(ring, v, loc)
    return ring.reduce(m)


def _sparse_out(ring, m):
    rows, cols = np.nonzero(m != 0)
    return [[int(r), int(c), _coeff_out(ring, m[r, c])] for r, c in zip(rows, cols)]


def _vec_in(ring, vals, n, where):
    if not (isinstance(vals, list) and len(vals) == n):
        raise ParseError(where, f"expected a list of {n} coefficients")
    return ring.array([_coeff_in(ring, v, f"{where}[{i}]") for i, v in enumerate(vals)])


def _int_list(vals, where):
    if not isinstance(vals, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in vals):
        raise ParseError(where, "expected a list of integers")
    return vals


# -- parsing ------------------------------------------------------------------


def _parse_algebra(ring, name, spec, where):
    if not isinstance(spec, dict):
        raise ParseError(where, "expected an object")
    degs = _int_list(spec.get("degrees"), f"{where}.degrees")
    N = len(degs)
    if N == 0:
        raise ParseError(f"{where}.degrees", "an algebra needs at least one basis element")
    names = spec.get("names") or [f"{name}{i}" for i in range(N)]
    if len(names) != N or len(set(names)) != N:
        raise ParseError(f"{where}.names", "names must be distinct, one per basis element")
    mult = ring.zeros((N, N, N))
    prods = spec.get("product", [])
    if not isinstance(prods, list):
        raise ParseError(f"{where}.product", "expected a list of [i, j, vector]")
    for t, e in enumerate(prods):
        loc = f"{where}.product[{t}]"
        if not (isinstance(e, list) and len(e) == 3 and isinstance(e[0], int) and isinstance(e[1], int)):
            raise ParseError(loc, "expected [i, j, [coeff, ...]]")
        i, j, vec = e
        if not (0 <= i < N and 0 <= j < N):
            raise ParseError(loc, "basis index out of range")
        mult[i, j, :] = _vec_in(ring, vec, N, f"{loc}[2]")
    d = _sparse_in(ring, spec.get("differential"), (N, N), f"{where}.differential")
    unit = None
    if "unit" in spec:
        unit = _vec_in(ring, spec["unit"], N, f"{where}.unit")
    try:
        A = DGAlgebra(ring, degs, mult, d, unit, list(names), check=False)
    except ValueError as e:
        raise ParseError(where, str(e))
    rep = validate_dga(A)
    if not rep:
        raise ParseError(where, f"axiom failure: {rep.first()}")
    A.doc_name = name
    return A


def _action_in(ring, alg, spec, n, where):
    mats = np.array([ring.zeros((n, n)) for _ in range(alg.dim)]) if n else ring.zeros((alg.dim, 0, 0))
    given = set()
    spec = spec or {}
    if not isinstance(spec, dict):
        raise ParseError(where, "expected an object keyed by basis names")
    for key, entries in spec.items():
        if key not in alg.names:
            raise ParseError(f"{where}.{key}", f"{key!r} is not a basis element of the algebra")
        i = alg.names.index(key)
        mats[i] = _sparse_in(ring, entries, (n, n), f"{where}.{key}")
        given.add(i)
    # the unit acts as the identity unless stated
    nz = np.nonzero(alg.unit != 0)[0]
    if len(nz) == 1 and alg.unit[nz[0]] == ring.one() and int(nz[0]) not in given and n:
        mats[nz[0]] = ring.eye(n)
    return mats


def _parse_bimodule(doc, name, spec, where):
    ring = doc.ring
    if not isinstance(spec, dict):
        raise ParseError(where, "expected an object")
    for key in ("source", "target"):
        if key not in spec:
            raise ParseError(where, f"missing {key!r}")
    try:
        A, B = doc.algebra(spec["source"]), doc.algebra(spec["target"])
    except KeyError as e:
        raise ParseError(where, f"undefined reference: {e.args[0]}")
    degs = _int_list(spec.get("degrees"), f"{where}.degrees")
    n = len(degs)
    rel_entries = spec.get("relations") or []
    nrel = 1 + max((e[1] for e in rel_entries if isinstance(e, list) and len(e) == 3 and isinstance(e[1], int)), default=-1)
    rel = _sparse_in(ring, rel_entries, (n, nrel), f"{where}.relations")
    d = _sparse_in(ring, spec.get("differential"), (n, n), f"{where}.differential")
    try:
        C = ChainComplex(ring, degs, d, rel, check=True)
    except ValueError as e:
        raise ParseError(where, f"axiom failure: {e}")
    left = _action_in(ring, B, spec.get("left"), n, f"{where}.left")
    right = _action_in(ring, A, spec.get("right"), n, f"{where}.right")
    M = Bimodule(A, B, C, left, right, check=False, name=name)
    rep = M.validate()
    if not rep:
        raise ParseError(where, f"axiom failure: {rep.first()}")
    return M


def _parse_map(doc, name, spec, where):
    ring = doc.ring
    kind = spec.get("kind", "twocell")
    try:
        if kind == "algebra":
            A, B = doc.algebra(spec["source"]), doc.algebra(spec["target"])
            m = _sparse_in(ring, spec.get("entries"), (B.dim, A.dim), f"{where}.entries")
            f = DGAlgebraMap(A, B, m, check=False)
            rep = f.validate()
            if not rep:
                raise ParseError(where, f"axiom failure: {rep.first()}")
            f.doc_name = name
            return f
        if kind == "twocell":
            X, Y = doc.bimodule(spec["source"]), doc.bimodule(spec["target"])
            deg = int(spec.get("degree", 0))
            m = _sparse_in(ring, spec.get("entries"), (Y.n, X.n), f"{where}.entries")
            try:
                return TwoCell(X, Y, m, deg, check=True)
            except ValueError as e:
                raise ParseError(where, f"axiom failure: {e}")
    except KeyError as e:
        raise ParseError(where, f"undefined reference: {e.args[0]}")
    raise ParseError(f"{where}.kind", f"unknown map kind {kind!r}")


def parse_input(data, ring: CoeffRing | None = None) -> InputDocument:
    """Validate and load a document (a dict, JSON text, or a path-like object)."""
    if isinstance(data, (bytes, str)) and not str(data).lstrip().startswith("{"):
        with open(data, encoding="utf-8") as fh:
            data = fh.read()
    if isinstance(data, (bytes, str)):
        return parse_text(data, ring)
    if not isinstance(data, dict) or not data:
        raise ParseError("", "empty document")
    known = {"coeff", "algebras", "bimodules", "maps", "params"}
    extra = set(data) - known
    if extra:
        raise ParseError("", f"unknown top-level keys {sorted(extra)}")
    if not any(data.get(k) for k in ("algebras", "bimodules")):
        raise ParseError("", "empty document: no algebras or bimodules")
    if ring is None:
        if "coeff" not in data:
            raise ParseError("coeff", "missing coefficient ring")
        try:
            ring = CoeffRing.parse(data["coeff"])
        except ValueError as e:
            raise ParseError("coeff", str(e))
    doc = InputDocument(ring)
    for name, spec in (data.get("algebras") or {}).items():
        if name == "k":
            raise ParseError(f"algebras.{name}", "'k' is reserved for the ground ring")
        doc.algebras[name] = _parse_algebra(ring, name, spec, f"algebras.{name}")
    for name, spec in (data.get("bimodules") or {}).items():
        doc.bimodules[name] = _parse_bimodule(doc, name, spec, f"bimodules.{name}")
    for name, spec in (data.get("maps") or {}).items():
        if not isinstance(spec, dict):
            raise ParseError(f"maps.{name}", "expected an object")
        doc.maps[name] = _parse_map(doc, name, spec, f"maps.{name}")
    params = data.get("params") or {}
    if not isinstance(params, dict):
        raise ParseError("params", "expected an object")
    doc.params = {str(k): str(v) for k, v in params.items()}
    return doc


def parse_text(text, ring: CoeffRing | None = None) -> InputDocument:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    if not text.strip():
        raise ParseError("", "empty document")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno} column {e.colno}", f"invalid JSON: {e.msg}")
    return parse_input(data, ring)


# -- serialization --------------------------------------------------------------


def _algebra_out(A: DGAlgebra):
    R = A.ring
    prods = []
    for i in range(A.dim):
        for j in range(A.dim):
            v = A.mult[i, j, :]
            if np.any(v != 0):
                prods.append([i, j, [_coeff_out(R, x) for x in v]])
    return {
        "degrees": [int(t) for t in A.degrees],
        "names": list(A.names),
        "unit": [_coeff_out(R, x) for x in A.unit],
        "product": prods,
        "differential": _sparse_out(R, A.d),
    }


def _action_out(R, alg, mats):
    out = {}
    for i in range(alg.dim):
        m = mats[i]
        if m.size and not (np.array_equal(alg.unit, R.array([1 if t == i else 0 for t in range(alg.dim)])) and R.equal(m, R.eye(m.shape[0]))):
            e = _sparse_out(R, m)
            if e:
                out[alg.names[i]] = e
    return out


def _alg_name(doc, A):
    for name, B in doc.algebras.items():
        if B is A:
            return name
    if A is doc._ground() or (A.dim == 1 and getattr(A, "doc_name", None) is None):
        return "k"
    raise ValueError("algebra not registered in the document")


def serialize(doc: InputDocument) -> dict:
    R = doc.ring
    out = {"coeff": R.tag}
    out["algebras"] = {name: _algebra_out(A) for name, A in doc.algebras.items()}
    bims = {}
    for name, M in doc.bimodules.items():
        bims[name] = {
            "source": _alg_name(doc, M.source),
            "target": _alg_name(doc, M.target),
            "degrees": [int(t) for t in M.degrees],
            "relations": _sparse_out(R, M.relations),
            "differential": _sparse_out(R, M.d),
            "left": _action_out(R, M.target, M.left),
            "right": _action_out(R, M.source, M.right),
        }
    out["bimodules"] = bims
    maps = {}
    for name, f in doc.maps.items():
        if isinstance(f, DGAlgebraMap):
            maps[name] = {
                "kind": "algebra",
                "source": _alg_name(doc, f.source),
                "target": _alg_name(doc, f.target),
                "entries": _sparse_out(R, f.matrix),
            }
        else:
            maps[name] = {
                "kind": "twocell",
                "source": _name_of(doc.bimodules, f.source),
                "target": _name_of(doc.bimodules, f.target),
                "degree": int(f.degree),
                "entries": _sparse_out(R, f.matrix),
            }
    out["maps"] = maps
    out["params"] = dict(sorted(doc.params.items()))
    return out


def _name_of(table, obj):
    for name, v in table.items():
        if v is obj:
            return name
    raise ValueError("object not registered in the document")


def dumps(doc: InputDocument) -> str:
    return json.dumps(serialize(doc), sort_keys=True, indent=1)
