"""Command-line front end.

Subcommands: ``bound``, ``table``, ``code-info``, ``radius``, ``plan``,
``decode`` and ``simulate``.  Output is text by default; ``--format json``
emits ``{"cmd", "inputs", "result"}`` records and ``--format csv`` a header
row plus data rows.  Exit status is 0 on success, 1 on a domain error and 2
on a usage error.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import sys
import time
from fractions import Fraction
from typing import Sequence

import numpy as np

from .avcode import Code, code_from_json, code_new, dmin_bound, family_build, parse_family_spec
from .errors import AVCodesError, NoCorrection, RadiusInfeasible
from .gf import Field, parse_field
from .listdec import DecoderPlan, decode, max_radius, plan
from .zbounds import BoundMethod, GridShape, dzero, improvement_stats, truncate

# (m, r, q) grid of the improvement tables
TABLE12_M = (2, 3)
TABLE12_R = (2, 3, 4, 5)
TABLE12_Q = (2, 3, 4, 5)

RADIUS_R = (2, 3, 4, 9, 20)
RADIUS_PRESETS = {
    "t3": {"shape": (128, 64), "columns": (3, 4, 7, 20)},
    "t4": {"shape": (128, 64), "columns": ((4, 7), (5, 9), (8, 15), (21, 41))},
    "t5": {"shape": (80, 80), "columns": (3, 4, 7, 20)},
}


# -- argument types ------------------------------------------------------------


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _shape(text: str) -> GridShape:
    try:
        return GridShape(_ints(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _field(text: str):
    try:
        return parse_field(text)
    except (ValueError, AVCodesError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _family(text: str) -> dict:
    try:
        return parse_family_spec(text)
    except (ValueError, OSError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _method(text: str) -> BoundMethod:
    try:
        return BoundMethod.parse(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown method {text!r}")


def _sets(text: str) -> list:
    """``full;full`` or ``0,1,2;full``: one entry per coordinate, ``;``-separated."""
    out = []
    for part in text.split(";"):
        part = part.strip()
        out.append("full" if part == "full" else list(_ints(part)))
    return out


def _word(text: str) -> list[int]:
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    text = text.strip()
    if text.startswith("["):
        return [int(x) for x in json.loads(text)]
    return [int(x) for x in text.replace("\n", ",").split(",") if x.strip()]


# -- output ----------------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (GridShape,)):
        return list(x.sizes)
    if isinstance(x, BoundMethod):
        return x.value
    if isinstance(x, Field):
        return x.spec
    raise TypeError(f"not serialisable: {type(x)}")


class Emitter:
    def __init__(self, fmt: str, cmd: str, inputs: dict, out):
        self.fmt, self.cmd, self.inputs, self.out = fmt, cmd, inputs, out

    def emit(self, result, text: str | None = None, rows: list[dict] | None = None):
        if self.fmt == "json":
            rec = {"cmd": self.cmd, "inputs": self.inputs, "result": result}
            self.out.write(json.dumps(rec, default=_jsonable, sort_keys=True) + "\n")
        elif self.fmt == "csv":
            rows = rows if rows is not None else [result if isinstance(result, dict) else {"value": result}]
            buf = io.StringIO()
            writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({k: _cell(v) for k, v in row.items()})
            self.out.write(buf.getvalue())
        else:
            self.out.write((text if text is not None else str(result)) + "\n")


def _cell(v):
    try:
        return json.dumps(v, default=_jsonable) if isinstance(v, (list, dict)) else _jsonable(v)
    except TypeError:
        return v


# -- subcommands -----------------------------------------------------------------


def cmd_bound(args, em: Emitter):
    value = dzero(args.i, args.r, args.shape, args.method)
    em.emit(value, text=str(value))


def _radius_cell(r, shape, family, method):
    try:
        return max_radius(r, shape, family, method)
    except NoCorrection:
        return 0


def cmd_table(args, em: Emitter):
    if args.which in ("max", "mean"):
        rows = []
        for m in args.m or TABLE12_M:
            for r in args.r or TABLE12_R:
                for q in args.q or TABLE12_Q:
                    v = improvement_stats(m, q, r, args.which, args.reading or "integer")
                    rows.append({"m": m, "r": r, "q": q, "value": truncate(v)})
        if len(rows) == 1:
            em.emit(rows[0]["value"], rows=rows)
        else:
            em.emit(rows, text="\n".join(f"{x['m']} {x['r']} {x['q']} {x['value']}" for x in rows), rows=rows)
        return
    em.emit(*radius_table(args.which, args.r, args.max_d_r, args.reading))


def _preset_families(which: str, column, shape: GridShape, reading: str | None):
    """``(family for the distance rows, family for the radius cells)``."""
    if which == "t3":
        fam = family_build({"type": "weighted", "weights": [1, 2], "u": column}, shape)
        return fam, fam
    if which == "t5":
        fam = family_build({"type": "total", "u": column}, shape)
        return fam, fam
    k1, k2 = column
    # k1 bounds the exponent over the 64-point set, as the distance row demands
    code_fam = family_build({"type": "box", "bounds": [k2, k1]}, shape)
    if (reading or "box") == "box":
        return code_fam, code_fam
    if reading == "square":
        return code_fam, family_build({"type": "box", "bounds": [k1, k1]}, shape)
    raise ValueError(f"unknown t4 reading {reading!r}")


def radius_table(which: str, rs=None, max_d_r: int = 4, reading: str | None = None):
    if which not in RADIUS_PRESETS:
        raise ValueError(f"unknown table {which!r}")
    preset = RADIUS_PRESETS[which]
    shape = GridShape(preset["shape"])
    rows = []
    for column in preset["columns"]:
        code_fam, rad_fam = _preset_families(which, column, shape, reading)
        d = dmin_bound(code_fam)
        label = column if isinstance(column, int) else f"({column[0]},{column[1]})"
        for r in rs or RADIUS_R:
            cells = {}
            for key, method in (("D", BoundMethod.RECURSIVE_D), ("C", BoundMethod.CLOSED_FORM_C), ("S", BoundMethod.SCHWARTZ_ZIPPEL)):
                cells[key] = _radius_cell(r, shape, rad_fam, method) if key != "D" or r <= max_d_r else None
            rows.append({"column": str(label), "r": r, **cells, "half_d": (d - 1) // 2, "dim": len(code_fam)})
    lines = ["column r D C S half_d dim"]
    lines += [" ".join("" if row[k] is None else str(row[k]) for k in row) for row in rows]
    return rows, "\n".join(lines), rows


def _build_code(args) -> Code:
    if getattr(args, "code", None):
        with open(args.code) as fh:
            return code_from_json(json.load(fh))
    if args.field is None or args.family is None:
        raise _Usage("--field and --family (or --code) are required")
    if args.sets is not None:
        sets = args.sets
    elif args.shape is not None:
        sets = [list(range(s)) for s in args.shape]
    else:
        raise _Usage("--sets or --shape is required")
    return code_new(args.field, sets, args.family)


def cmd_code_info(args, em: Emitter):
    code = _build_code(args)
    fam = code.family
    info = {
        "field": code.field.spec,
        "shape": list(code.shape.sizes),
        "n": code.n,
        "k": code.k,
        "dmin_bound": dmin_bound(fam),
        "half_d": (dmin_bound(fam) - 1) // 2,
        "border": [list(M) for M in fam.border],
        "divisor_closed": fam.divisor_closed,
    }
    em.emit(info, text="\n".join(f"{k}: {v}" for k, v in info.items()))


def _shape_and_family(args):
    if getattr(args, "code", None) or getattr(args, "field", None) is not None:
        code = _build_code(args)
        return code.shape, code.family
    if args.shape is None or args.family is None:
        raise _Usage("--shape and --family are required")
    return args.shape, family_build(args.family, args.shape)


def cmd_radius(args, em: Emitter):
    shape, fam = _shape_and_family(args)
    E = max_radius(args.r, shape, fam, args.method)
    em.emit(E, text=str(E))


def cmd_plan(args, em: Emitter):
    shape, fam = _shape_and_family(args)
    E = args.E if args.E is not None else max_radius(args.r, shape, fam, args.method)
    dplan = plan(args.r, E, shape, fam, args.method)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(dplan.dumps())
    summary = {"r": dplan.r, "E": dplan.E, "t": dplan.t, "sizes": [len(s) for s in dplan.supports],
               "unknowns": dplan.n_unknowns, "equations": dplan.n_equations}
    em.emit(dplan.to_json() if not args.out and em.fmt == "json" else summary,
            text="\n".join(f"{k}: {v}" for k, v in summary.items()))


def cmd_decode(args, em: Emitter):
    code = _build_code(args)
    if args.plan:
        with open(args.plan) as fh:
            dplan = DecoderPlan.from_json(fh.read())
    else:
        E = args.E if args.E is not None else max_radius(args.r, code.shape, code.family, args.method)
        dplan = plan(args.r, E, code.shape, code.family, args.method)
    out = decode(code, dplan, args.received)
    result = [{"codeword": w.codeword.tolist(), "message": code.poly_message(w.poly), "distance": w.distance}
              for w in out]
    em.emit(result, rows=result or [{"codeword": "", "message": "", "distance": ""}],
            text="\n".join(f"{w['distance']} {' '.join(map(str, w['codeword']))}" for w in result) or "(empty list)")


def simulate(code: Code, r: int, E: int | None = None, trials: int = 100, seed: int = 0,
             method=BoundMethod.RECURSIVE_D, force: bool = False) -> dict:
    """Encode random messages, add exactly ``E`` errors, decode, and count list hits.

    Randomness comes from ``numpy.random.default_rng(seed)`` (PCG64).  With
    ``force`` an ``E`` beyond the guaranteed radius is injected against the
    plan for the largest feasible radius.
    """
    rmax = max_radius(r, code.shape, code.family, method)
    if E is None:
        E = rmax
    if E > rmax and not force:
        raise RadiusInfeasible(f"E={E} exceeds the decoding radius {rmax}")
    if not 0 <= E <= code.n:
        raise RadiusInfeasible(f"E={E} outside [0, n]")
    dplan = plan(r, min(E, rmax), code.shape, code.family, method)
    f = code.field
    rng = np.random.default_rng(seed)
    hits, sizes, elapsed = 0, [], 0.0
    for _ in range(trials):
        msg = rng.integers(0, f.q, size=code.k)
        cw = code.encode(msg)
        rec = cw.copy()
        pos = rng.choice(code.n, size=E, replace=False)
        rec[pos] = f.vadd(rec[pos], rng.integers(1, f.q, size=E))
        t0 = time.perf_counter()
        out = decode(code, dplan, rec)
        elapsed += time.perf_counter() - t0
        hits += out.contains(cw)
        sizes.append(len(out))
    return {
        "trials": trials,
        "E": E,
        "max_radius": rmax,
        "half_d": (dmin_bound(code.family) - 1) // 2,
        "successes": hits,
        "success_rate": hits / trials if trials else 1.0,
        "mean_list_size": float(np.mean(sizes)) if sizes else 0.0,
        "mean_decode_seconds": elapsed / trials if trials else 0.0,
    }


def cmd_simulate(args, em: Emitter):
    code = _build_code(args)
    stats = simulate(code, args.r, args.E, args.trials, args.seed, args.method, args.force)
    if not args.timing:
        stats.pop("mean_decode_seconds")
    em.emit(stats, text="\n".join(f"{k}: {v}" for k, v in stats.items()))


# -- parser ------------------------------------------------------------------------


class _Usage(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="avcodes", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, r=True, method=True):
        sp.add_argument("--format", choices=("text", "json", "csv"), default=argparse.SUPPRESS)
        if r:
            sp.add_argument("--r", type=int, default=2)
        if method:
            sp.add_argument("--method", type=_method, default=BoundMethod.RECURSIVE_D)

    def code_flags(sp):
        sp.add_argument("--code", help="JSON code spec file")
        sp.add_argument("--field", type=_field)
        sp.add_argument("--sets", type=_sets)
        sp.add_argument("--shape", type=_shape)
        sp.add_argument("--family", type=_family)

    sp = sub.add_parser("bound", help="zero-count bound for one leading exponent")
    common(sp)
    sp.add_argument("--i", type=_ints, required=True)
    sp.add_argument("--shape", type=_shape, required=True)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("table", help="improvement tables (max, mean) or radius tables (t3, t4, t5)")
    common(sp, r=False, method=False)
    sp.add_argument("--which", choices=("max", "mean", "t3", "t4", "t5"), required=True)
    sp.add_argument("--m", type=_ints)
    sp.add_argument("--q", type=_ints)
    sp.add_argument("--r", type=_ints)
    sp.add_argument("--reading", help="max/mean: integer|printed; t4: box|square")
    sp.add_argument("--max-d-r", type=int, default=4, help="largest r for the D column")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("code-info", help="dimension, distance bound and border")
    common(sp, r=False, method=False)
    code_flags(sp)
    sp.set_defaults(func=cmd_code_info)

    sp = sub.add_parser("radius", help="largest decodable error count")
    common(sp)
    code_flags(sp)
    sp.set_defaults(func=cmd_radius)

    sp = sub.add_parser("plan", help="run the preparation step")
    common(sp)
    code_flags(sp)
    sp.add_argument("--E", type=int)
    sp.add_argument("--out", help="write the plan as JSON")
    sp.set_defaults(func=cmd_plan)

    sp = sub.add_parser("decode", help="list-decode a received word")
    common(sp)
    code_flags(sp)
    sp.add_argument("--E", type=int)
    sp.add_argument("--plan", help="plan JSON from the plan subcommand")
    sp.add_argument("--received", type=_word, required=True, help="comma list, JSON list or @file")
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("simulate", help="encode, corrupt and decode random messages")
    common(sp)
    code_flags(sp)
    sp.add_argument("--E", type=int)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--force", action="store_true", help="allow E beyond the decoding radius")
    sp.add_argument("--timing", action="store_true", help="report mean decode time (not reproducible)")
    sp.set_defaults(func=cmd_simulate)
    return p


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(stderr), contextlib.redirect_stdout(stdout):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    inputs = {k: v for k, v in vars(args).items() if k not in ("func", "cmd", "format")}
    em = Emitter(args.format, args.cmd, inputs, stdout)
    try:
        args.func(args, em)
    except _Usage as exc:
        stderr.write(f"usage error: {exc}\n")
        return 2
    except (AVCodesError, ValueError, OSError) as exc:
        stderr.write(f"{type(exc).__name__}: {exc}\n")
        return 1
    return 0


def main() -> None:  # pragma: no cover
    sys.exit(run())
