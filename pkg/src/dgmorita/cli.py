"""Command line front end: ``python -m dgmorita`` or the ``dgmorita`` script.

Every verdict comes from a library call; this module only loads documents,
dispatches and formats.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from .bicat import odot, rhom, unit_cell
from .complex import homology
from .derived import derived_tensor, end_dga, ext, formality_zigzag
from .dga import DGAlgebra, DGAlgebraMap, ground, homology_dga
from .io import InputDocument, ParseError, parse_input, parse_text
from .model import Window, cell_generators, cofibrant_replace
from .morita import (
    CERTIFIED,
    INCONCLUSIVE,
    REFUTED,
    base_change_functors,
    canonical_dual_pair,
    check_dual_pair,
    enrichment_transform,
    quillen_equiv_check,
    tilting_pipeline,
    watts_consistency,
)
from .registry import BUILTIN_NAMES, builtin, builtin_examples
from .rings import CoeffRing

EXIT_PASS, EXIT_REFUTED, EXIT_INCONCLUSIVE, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 3, 4

_STATUS_EXIT = {
    "pass": EXIT_PASS,
    CERTIFIED: EXIT_PASS,
    "refuted": EXIT_REFUTED,
    REFUTED: EXIT_REFUTED,
    "inconclusive": EXIT_INCONCLUSIVE,
    INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class UsageError(Exception):
    pass


@dataclass
class Report:
    command: list
    status: str = "pass"
    sections: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def exit_code(self) -> int:
        return _STATUS_EXIT.get(self.status, EXIT_PASS)

    def as_dict(self) -> dict:
        return {"command": self.command, "status": self.status, "exit_code": self.exit_code, "result": self.sections}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if hasattr(x, "item"):
        return x.item()
    if isinstance(x, int):
        return x
    return str(x)


def report_emit(r: Report, fmt: str = "human") -> str:
    if fmt == "json":
        return json.dumps(_jsonable(r.as_dict()), sort_keys=True, indent=2)
    lines = [f"$ {' '.join(r.command)}", f"status: {r.status}"]

    def walk(obj, indent):
        pad = "  " * indent
        if isinstance(obj, dict):
            for k, v in obj.items():
                if isinstance(v, (dict, list)) and v and not _flat(v):
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k}: {_short(v)}")
        elif isinstance(obj, list):
            for v in obj:
                if isinstance(v, (dict, list)) and not _flat(v):
                    lines.append(f"{pad}-")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}- {_short(v)}")

    walk(_jsonable(r.sections), 1)
    lines.append(f"time: {r.elapsed:.3f}s")
    return "\n".join(lines)


def _flat(v):
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) for x in v)
    return False


def _short(v):
    if isinstance(v, list):
        return "[" + ", ".join(str(x) for x in v) + "]"
    return str(v)


# -- helpers ----------------------------------------------------------------


def _homology_dict(C):
    H = homology(C)
    return {str(n): str(H.module(n)) for n in H.nonzero_degrees()}


def _split_args(args):
    pos, kv = [], {}
    for a in args:
        if "=" in a:
            k, v = a.split("=", 1)
            kv[k] = v
        else:
            pos.append(a)
    return pos, kv


def _pick(doc: InputDocument, kv, pos, key, i=None, kind="bimodule"):
    name = kv.get(key)
    if name is None and i is not None and i < len(pos):
        name = pos[i]
    if name is None:
        name = doc.params.get(key)
    if name is None:
        table = doc.bimodules if kind == "bimodule" else doc.algebras
        if len(table) == 1:
            name = next(iter(table))
    if name is None:
        raise UsageError(f"missing argument {key}=<{kind}>")
    try:
        return doc.bimodule(name) if kind == "bimodule" else doc.algebra(name)
    except KeyError as e:
        raise UsageError(str(e.args[0]))


def _object(doc, name):
    if name in doc.algebras or name == "k":
        return doc.algebra(name)
    if name in doc.bimodules:
        return doc.bimodule(name)
    raise UsageError(f"undefined object {name!r}")


def _window(opts, doc, default=None):
    text = opts.window or doc.params.get("window") or default
    if text is None:
        return None
    try:
        return Window.parse(text, cap=opts.stages or 8)
    except ValueError as e:
        raise UsageError(f"invalid window {text!r}: {e}")


def _default_window(opts, doc, *Ms):
    w = _window(opts, doc)
    if w is not None:
        return w
    degs = [int(t) for M in Ms for t in M.degrees]
    lo, hi = (min(degs), max(degs)) if degs else (0, 0)
    return Window(lo - 1, hi + 2, opts.stages or 8)


def _algebra_map(doc, kv, pos):
    name = kv.get("f") or (pos[0] if pos else None) or doc.params.get("f")
    if name is None:
        raise UsageError("missing argument f=<map|id>")
    if name == "id":
        A = _pick(doc, kv, [], "A", kind="algebra")
        return DGAlgebraMap.identity(A)
    try:
        f = doc.map(name)
    except KeyError as e:
        raise UsageError(str(e.args[0]))
    if not isinstance(f, DGAlgebraMap):
        raise UsageError(f"{name!r} is not an algebra map")
    return f


# -- commands ----------------------------------------------------------------


def cmd_validate(doc, opts, pos, kv, rep):
    rep.sections = {
        "coeff": doc.ring.tag,
        "algebras": {n: {"dim": A.dim, "degrees": sorted(set(int(t) for t in A.degrees))} for n, A in doc.algebras.items()},
        "bimodules": {n: {"source": _alg_label(doc, M.source), "target": _alg_label(doc, M.target), "rank": M.n} for n, M in doc.bimodules.items()},
        "maps": sorted(doc.maps),
        "valid": True,
    }


def _alg_label(doc, A):
    for n, B in doc.algebras.items():
        if B is A:
            return n
    return "k"


def cmd_homology(doc, opts, pos, kv, rep):
    name = kv.get("X") or (pos[0] if pos else None) or doc.params.get("algebra")
    if name is None:
        raise UsageError("homology needs an object name")
    obj = _object(doc, name)
    C = obj.complex if isinstance(obj, DGAlgebra) else obj.carrier
    rep.sections = {"object": name, "homology": _homology_dict(C)}


def cmd_tensor(doc, opts, pos, kv, rep):
    L, M = _pick(doc, kv, pos, "L", 0), _pick(doc, kv, pos, "M", 1)
    w = _default_window(opts, doc, L, M)
    dv = derived_tensor(L, M, w)
    rep.sections = {
        "homology": _homology_dict(dv.result.carrier),
        "valid": list(dv.valid),
        "certificate": dv.certificate.as_dict(),
    }
    if not dv.full:
        rep.status = "inconclusive"


def cmd_hom(doc, opts, pos, kv, rep):
    M, W = _pick(doc, kv, pos, "M", 0), _pick(doc, kv, pos, "W", 1)
    H = rhom(M, W)
    rep.sections = {"rank": H.n, "homology": _homology_dict(H.carrier)}


def cmd_ext(doc, opts, pos, kv, rep):
    T, U = _pick(doc, kv, pos, "T", 0), _pick(doc, kv, pos, "U", 1)
    w = _default_window(opts, doc, T, U)
    dv = ext(T, U, w)
    H = dv.result
    rep.sections = {
        "homology": {str(n): str(H.module(n)) for n in H.nonzero_degrees()},
        "grading": "homological (Ext^i in degree -i)",
        "valid": list(dv.valid),
        "certificate": dv.certificate.as_dict(),
    }
    if not dv.full:
        rep.status = "inconclusive"


def cmd_end(doc, opts, pos, kv, rep):
    T = _pick(doc, kv, pos, "T", 0)
    w = _default_window(opts, doc, T)
    er = end_dga(T, w)
    E = er.algebra
    dims = {}
    for t in E.degrees:
        dims[str(int(t))] = dims.get(str(int(t)), 0) + 1
    rep.sections = {
        "dim": E.dim,
        "dims_by_degree": dims,
        "homology": _homology_dict(E.complex),
        "certificate": er.certificate.as_dict(),
    }
    if not er.certificate.full:
        rep.status = "inconclusive"


def cmd_replace(doc, opts, pos, kv, rep):
    M = _pick(doc, kv, pos, "M", 0)
    w = _default_window(opts, doc, M)
    r = cofibrant_replace(M, w)
    rep.sections = {
        "cells": [int(t) for t in r.Q.cell.gen_degrees],
        "stages": r.stages,
        "rank": r.Q.n,
        "certificate": r.certificate.as_dict(),
    }
    if not r.certificate.full:
        rep.status = "inconclusive"


def cmd_check(doc, opts, pos, kv, rep):
    if not pos:
        raise UsageError("check needs one of: dualpair, tilting, basechange, enrichment, watts")
    what, pos = pos[0], pos[1:]
    fn = _CHECKS.get(what)
    if fn is None:
        raise UsageError(f"unknown check {what!r}")
    fn(doc, opts, pos, kv, rep)


def check_dualpair(doc, opts, pos, kv, rep):
    if pos and pos[0] == "basechange" or "f" in kv:
        f = _algebra_map(doc, kv, pos[1:] if pos and pos[0] == "basechange" else pos)
        P = base_change_functors(f).pair
        label = "base change"
    else:
        X = _pick(doc, kv, pos, "X", 0)
        try:
            P = canonical_dual_pair(X)
        except ValueError as e:
            rep.status = "refuted"
            rep.sections = {"pair": "canonical", "error": str(e)}
            return
        label = "canonical"
    r = check_dual_pair(P, opts.mode)
    rep.sections = {"pair": label, **r.as_dict()}
    rep.status = "pass" if r.ok else "refuted"


def check_tilting(doc, opts, pos, kv, rep):
    S = _pick(doc, kv, [], "S", kind="algebra")
    T = _pick(doc, kv, pos, "T", 0)
    w = _default_window(opts, doc, T)
    v = tilting_pipeline(S, T, w)
    rep.sections = {k: x for k, x in v.as_dict().items() if k != "status"}
    rep.sections["E_dim"] = v.E.dim if v.E is not None else None
    rep.status = v.status


def check_basechange(doc, opts, pos, kv, rep):
    f = _algebra_map(doc, kv, pos)
    A, B = f.source, f.target
    k = ground(A.ring)
    sa = [_sphere(A, k)] + [M for M in doc.bimodules.values() if M.source is A and M.target.dim == 1]
    sb = [_sphere(B, k)] + [M for M in doc.bimodules.values() if M.source is B and M.target.dim == 1]
    w = _default_window(opts, doc, *sa, *sb)
    r = quillen_equiv_check(f, sa, sb, w)
    rep.sections = r.as_dict()
    if not r.ok:
        rep.status = "refuted"
    elif not all(c[3].full for c in r.counits):
        rep.status = "inconclusive"


def _sphere(A, k, n=0):
    M = cell_generators(A, k, n, "sphere")
    M.name = f"S^{n}"
    return M


def check_enrichment(doc, opts, pos, kv, rep):
    Q = _pick(doc, kv, pos, "Q", 0)
    C = Q.target
    frames = []
    for key in ("T", "U", "V"):
        frames.append(doc.bimodule(kv[key]) if key in kv else unit_cell(C))
    r = enrichment_transform(Q, *frames, perturb=kv.get("perturb"))
    rep.sections = r.as_dict()
    rep.status = "pass" if r.ok else "refuted"


def check_watts(doc, opts, pos, kv, rep):
    Q = _pick(doc, kv, pos, "Q", 0)
    k = ground(Q.ring)
    samples = []
    for n in (0, 1):
        M = _sphere(Q.target, k, n)
        samples.append((M, odot(M, Q)))
    w = _default_window(opts, doc, Q)
    r = watts_consistency(samples, Q, w)
    rep.sections = r.as_dict()
    rep.status = "pass" if r.consistent else "refuted"


_CHECKS = {
    "dualpair": check_dualpair,
    "tilting": check_tilting,
    "basechange": check_basechange,
    "enrichment": check_enrichment,
    "watts": check_watts,
}


def demo_report(name: str, opts) -> Report:
    doc = parse_input(builtin(name))
    rep = Report(["demo", name])
    if name == "dugger_shipley":
        C = doc.algebra("C")
        Hd, _ = homology_dga(C)
        squares = {}
        for i in range(Hd.dim):
            sq = Hd.mult[i, i, :]
            squares[Hd.names[i]] = "0" if not any(sq != 0) else str([int(x) for x in sq])
        rep.sections = {
            "homology": _homology_dict(C.complex),
            "homology_dga": {
                "base_ring": f"Z/{Hd.ring.p}" if Hd.ring.kind == "Fp" else str(Hd.ring),
                "degrees": [int(t) for t in Hd.degrees],
                "generators": list(Hd.names),
                "squares": squares,
            },
            "formality_criterion": formality_zigzag(C).status,
        }
    elif name == "truncation_zigzag":
        v = formality_zigzag(doc.algebra("E"))
        rep.sections = {
            "status": v.status,
            "homology_degrees": v.homology_degrees,
            "legs_quasi_iso": {"inclusion": v.legs[0], "projection": v.legs[1]} if v.legs else {},
            "E_plus_dim": v.truncation.Eplus.dim if v.truncation else None,
        }
        rep.status = "pass" if v.formal else "refuted"
    else:
        check_tilting(doc, opts, [], {}, rep)
    return rep


_COMMANDS = {
    "validate": cmd_validate,
    "homology": cmd_homology,
    "tensor": cmd_tensor,
    "hom": cmd_hom,
    "ext": cmd_ext,
    "end": cmd_end,
    "replace": cmd_replace,
    "check": cmd_check,
}


_OPTION_DEFAULTS = {"input": None, "builtin": None, "coeff": None, "window": None, "stages": None, "format": "human", "mode": "strict"}


def build_parser() -> argparse.ArgumentParser:
    # options are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--input", "-i", help="JSON input document")
    common.add_argument("--builtin", "-b", help="use a built-in document instead of --input")
    common.add_argument("--coeff", help="coefficient ring: Z, Q or Fp:<p>")
    common.add_argument("--window", help="degree window lo:hi")
    common.add_argument("--stages", type=int, help="cap on cell attachment stages")
    common.add_argument("--format", choices=["human", "json"])
    common.add_argument("--mode", choices=["strict", "homotopy"])
    p = argparse.ArgumentParser(prog="dgmorita", parents=[common], description="Exact computations with DG bimodules.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in list(_COMMANDS) + ["demo", "list"]:
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("args", nargs="*", help="object names and key=value arguments")
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    p = build_parser()
    try:
        # positionals may be split by options, e.g. ``check dualpair -b doc row``
        opts, extra = p.parse_known_args(argv)
        bad = [x for x in extra if x.startswith("-")]
        if bad:
            p.error(f"unrecognized arguments: {' '.join(bad)}")
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_PASS
    opts.args = list(getattr(opts, "args", [])) + extra
    for key, value in _OPTION_DEFAULTS.items():
        if not hasattr(opts, key):
            setattr(opts, key, value)
    argv = list(argv if argv is not None else sys.argv[1:])
    t0 = time.perf_counter()
    try:
        if opts.command == "list":
            rep = Report(["list"], sections={n: d for n, (d, _) in builtin_examples().items()})
        elif opts.command == "demo":
            if len(opts.args) != 1 or opts.args[0] not in BUILTIN_NAMES:
                raise UsageError(f"demo needs one of: {', '.join(BUILTIN_NAMES)}")
            rep = demo_report(opts.args[0], opts)
        else:
            doc = _load(opts)
            pos, kv = _split_args(opts.args)
            rep = Report([opts.command] + list(opts.args))
            _COMMANDS[opts.command](doc, opts, pos, kv, rep)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    rep.elapsed = time.perf_counter() - t0
    print(report_emit(rep, opts.format), file=out)
    return rep.exit_code


def _load(opts) -> InputDocument:
    ring = None
    if opts.coeff:
        try:
            ring = CoeffRing.parse(opts.coeff)
        except ValueError as e:
            raise ParseError("--coeff", str(e))
    if opts.builtin:
        try:
            data = builtin(opts.builtin)
        except KeyError as e:
            raise UsageError(str(e.args[0]))
        return parse_input(data, ring)
    if opts.input:
        try:
            with open(opts.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise UsageError(f"cannot read {opts.input}: {e.strerror}")
        return parse_text(text, ring)
    raise UsageError("give --input FILE or --builtin NAME")


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
