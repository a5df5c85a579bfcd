"""``combforge`` command line interface.

Every subcommand writes one JSON document (stdout or ``--out``).  Exit codes:
0 success, 2 invalid input, 3 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, combs, critpoly, jacobi, minimax, potential
from ._errors import ConvergenceError, InputError
from .realset import IntervalUnion

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


@dataclass
class RunConfig:
    command: str
    inputs: dict
    out: str | None = None
    csv: str | None = None
    grid: int = 256
    tol: float = 1e-12
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.tol > 0:
            raise InputError("tolerances must be positive")
        if self.grid < 16:
            raise InputError("grid sizes must be at least 16")


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if x is None:
        return "null"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return "null"
        text = format(x, ".17g")
        if text in ("-0", "0"):
            return "0.0" if text == "0" else "-0.0"
        if not any(ch in text for ch in ".en"):
            text += ".0"
        return text
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_fmt(v)}" for k, v in x.items()) + "}"
    if isinstance(x, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    raise TypeError(f"cannot serialise {type(x).__name__}")


def dumps(obj) -> str:
    """JSON with every float written to 17 significant digits."""
    return _fmt(obj)


def _load_json(text: str):
    src = text
    if text.startswith("@"):
        src = Path(text[1:]).read_text()
    elif not text.lstrip().startswith(("{", "[")) and os.path.exists(text):
        src = Path(text).read_text()
    try:
        return json.loads(src)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from None


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.replace(";", ",").split(",") if v.strip()]
    except ValueError:
        raise InputError(f"not a comma separated list of numbers: {text!r}") from None


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise InputError(f"not a complex number: {text!r}") from None


def _write_csv(path: str, header: tuple[str, str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for x, v in rows:
            w.writerow([format(float(x), ".17g"), format(float(v), ".17g")])


def _cmd_green(args, cfg: RunConfig) -> dict:
    E = IntervalUnion.from_json(_load_json(args.set))
    data = potential.equilibrium(E, tol=cfg.tol)
    comb = potential.green_comb(data)
    out = {
        "capacity": data.capacity,
        "robin": data.robin,
        "band_measures": list(data.band_measures),
        "gap_zeros": list(data.gap_zeros),
        "comb": comb.to_json(),
    }
    if args.eval:
        pts = [_complex(v) for v in args.eval]
        out["eval"] = [
            {"z": [z.real, z.imag], "green": float(potential.green(data, z))} for z in pts
        ]
    if cfg.csv:
        j = np.arange(cfg.grid)
        rows = []
        for a, b in E.bands:
            t = 0.5 * (a + b) - 0.5 * (b - a) * np.cos(np.pi * (j + 0.5) / cfg.grid)
            rows.extend(zip(t, potential.density(data, t)))
        _write_csv(cfg.csv, ("t", "density"), rows)
    return out


def _cmd_cheby(args, cfg: RunConfig) -> dict:
    if args.weighted is not None:
        alpha, beta = args.weighted
        r = minimax.weighted_remez(args.n, alpha, beta)
        E = IntervalUnion(((0.0, 1.0),))
        heights = None
    else:
        if args.set is None:
            raise InputError("cheby needs --set unless --weighted is given")
        E = IntervalUnion.from_json(_load_json(args.set))
        r = minimax.remez(E, args.n)
        heights = list(minimax.comb_check(E, r).heights)
    out = {
        "coeffs": r.P.to_list(),
        "L": r.L,
        "extreme_points": list(r.extreme_points),
        "comb_heights": heights,
    }
    if cfg.csv:
        rows = []
        for a, b in E.bands:
            x = np.linspace(a, b, cfg.grid)
            rows.extend(zip(x, r.evaluate(x)))
        _write_csv(cfg.csv, ("x", "P"), rows)
    return out


def _cmd_critpoly(args, cfg: RunConfig) -> dict:
    seq = critpoly.CriticalSequence(tuple(_floats(args.values)), args.kind)
    res = critpoly.construct_from_critical_values(seq, strict=not args.non_strict)
    out = {
        "coeffs": res.poly.to_list(),
        "critical_points": list(res.critical_points),
        "residual": res.residual,
    }
    if args.vcomb:
        out["vcomb"] = critpoly.vcomb_of(res.poly).to_json()
    if cfg.csv:
        x = np.linspace(-0.25, 1.25, cfg.grid)
        _write_csv(cfg.csv, ("x", "P"), zip(x, res.poly(x)))
    return out


def _cmd_jacobi(args, cfg: RunConfig) -> dict:
    if args.from_heights is not None:
        if args.p or args.q:
            raise InputError("--from-heights excludes --p/--q")
        D = jacobi.discriminant_from_heights(_floats(args.from_heights))
        bands = jacobi._bands_from_edges(D, jacobi._band_edges(D))
        return {"discriminant": D.to_list(), "bands": [list(b) for b in bands.bands]}
    if args.p is None or args.q is None:
        raise InputError("jacobi needs --p and --q, or --from-heights")
    J = jacobi.PeriodicJacobi(tuple(_floats(args.q)), tuple(_floats(args.p)))
    D = jacobi.discriminant(J)
    bands = jacobi.spectrum(J)
    if cfg.csv:
        lo, hi = bands.inf, bands.sup
        pad = 0.1 * (hi - lo)
        x = np.linspace(lo - pad, hi + pad, cfg.grid)
        _write_csv(cfg.csv, ("x", "discriminant"), zip(x, D(x)))
    return {
        "discriminant": D.to_list(),
        "bands": [list(b) for b in bands.bands],
        "comb_heights": list(jacobi.comb_heights(D)),
    }


def _cmd_comb(args, cfg: RunConfig) -> dict:
    if args.muckenhoupt is not None:
        return {"sup": combs.muckenhoupt_sup(_floats(args.muckenhoupt))}
    if args.comb is None:
        raise InputError("--widom and --sector need --comb <json>")
    c = combs.GeneralComb.from_json(_load_json(args.comb))
    if args.widom:
        v = combs.widom_sum(c)
        return {"widom": v, "infinite": math.isinf(v)}
    v = combs.sector_H(c, args.sector)
    return {"sector": v, "infinite": math.isinf(v), "x": args.sector}


def _cmd_gen(args, cfg: RunConfig) -> dict:
    if args.kind == "julia":
        c = combs.julia_comb(args.h0, args.depth)
    else:
        c = combs.cantor_comb(args.depth)
    return {"comb": c.to_json()}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="combforge", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"combforge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="write JSON here instead of stdout")
        p.add_argument("--csv", help="write (x, value) plot rows to this CSV file")
        p.add_argument("--grid", type=int, default=256, help="CSV points per band (>= 16)")
        return p

    g = common(sub.add_parser("green", help="equilibrium measure, Green function and Green comb"))
    g.add_argument("--set", required=True, help='set JSON {"bands": [[a,b],...]}, inline or a file')
    g.add_argument("--eval", nargs="+", metavar="z", help="points where G is evaluated")
    g.add_argument("--tol", type=float, default=1e-12, help="Robin-constant refinement tolerance")

    c = common(sub.add_parser("cheby", help="polynomial of least deviation"))
    c.add_argument("--set", help="set JSON")
    c.add_argument("-n", type=int, required=True, help="degree")
    c.add_argument("--weighted", nargs=2, type=float, metavar=("alpha", "beta"), help="weighted problem on [0,1]")

    cp = common(sub.add_parser("critpoly", help="polynomial with prescribed critical values"))
    cp.add_argument("--values", required=True, help='comma separated critical values "c1,c2,..."')
    cp.add_argument("--kind", choices=[critpoly.UP_DOWN, critpoly.ALTERNATING], default=critpoly.UP_DOWN)
    cp.add_argument("--non-strict", action="store_true", help="allow equality in the kind's inequality")
    cp.add_argument("--vcomb", action="store_true", help="include the V-comb")

    j = common(sub.add_parser("jacobi", help="periodic Jacobi discriminant and spectrum"))
    j.add_argument("--p", help="off-diagonal period, comma separated")
    j.add_argument("--q", help="diagonal period, comma separated")
    j.add_argument("--from-heights", help="MO-comb heights h1,...")

    cb = common(sub.add_parser("comb", help="Widom, sector and Muckenhoupt checks"))
    cb.add_argument("--comb", help="GeneralComb JSON {base, slits, plateaus}")
    mode = cb.add_mutually_exclusive_group(required=True)
    mode.add_argument("--widom", action="store_true")
    mode.add_argument("--sector", type=float, metavar="x")
    mode.add_argument("--muckenhoupt", metavar="d1,d2,...")

    gen = common(sub.add_parser("gen", help="example comb generators"))
    gen.add_argument("kind", choices=["julia", "cantor"])
    gen.add_argument("--depth", type=int, required=True)
    gen.add_argument("--h0", type=float, default=1.0, help="base height of the Julia comb")
    return parser


_HANDLERS = {
    "green": _cmd_green,
    "cheby": _cmd_cheby,
    "critpoly": _cmd_critpoly,
    "jacobi": _cmd_jacobi,
    "comb": _cmd_comb,
    "gen": _cmd_gen,
}
_PLUMBING = {"out", "csv", "grid", "command"}
_LIST_OPTIONS = {"--values", "--p", "--q", "--from-heights", "--muckenhoupt", "--sector"}


def _glue_negative(argv: list[str]) -> list[str]:
    # "--values -1,1" would otherwise be read as an unknown option "-1,1".
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok in _LIST_OPTIONS and nxt is not None and nxt.startswith("-") and (nxt[1:2].isdigit() or nxt[1:2] == "."):
            out.append(f"{tok}={nxt}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv=None, stdout=None) -> int:
    """Parse ``argv``, run the subcommand and return the exit code."""
    stdout = stdout if stdout is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_negative(list(sys.argv[1:] if argv is None else argv)))
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    inputs = {k: v for k, v in sorted(vars(args).items()) if k not in _PLUMBING}
    try:
        cfg = RunConfig(
            command=args.command,
            inputs=inputs,
            out=args.out,
            csv=args.csv,
            grid=args.grid,
            tol=getattr(args, "tol", 1e-12),
        )
        result = _HANDLERS[args.command](args, cfg)
    except ConvergenceError as exc:
        print(f"combforge: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InputError, ValueError, OSError) as exc:
        print(f"combforge: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    doc = {"version": __version__, "command": args.command, "inputs": inputs}
    doc.update(result)
    text = dumps(doc) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        stdout.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
