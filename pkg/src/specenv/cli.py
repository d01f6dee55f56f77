"""Command-line front end: ``specenv <subcommand> ...``.

Exit codes: 0 success, 1 invalid input, 2 numerical failure (including failed
verification checks).  Every JSON report embeds the resolved configuration.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import finite_module as fm
from .errors import ConfigurationError, NumericalFailure
from .fourier import DEFAULT_N, DEFAULT_R, Grid, GridFunction, fmt, norm_l2, read_grid_function
from .involution import (sandwich_hs_bound, sandwich_kernel, smoothed_hs_predicted,
                         smoothed_kernel)
from .l1bounds import l1_bound_check
from .similarity import check_containment, envelope, operator_envelope
from .verify import SUITES, run_suite
from .windows import FAMILIES, gamma, phi, psi, trapezoid_symbol, window_pair

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# -- output helpers -------------------------------------------------------------------

def _plain(obj):
    """Convert to JSON-ready values with 15 significant digits."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return float(fmt(x)) if math.isfinite(x) else None
    if isinstance(obj, (complex, np.complexfloating)):
        return [_plain(obj.real), _plain(obj.imag)]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, Path):
        return str(obj)
    return obj


def write_json(path, payload) -> None:
    text = json.dumps(_plain(payload), indent=2, sort_keys=True) + "\n"
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def write_rows(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(x) for x in r])


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "func"}


def _load_v(path, N: Optional[int] = None) -> GridFunction:
    v = read_grid_function(path)
    if N is not None and N != v.grid.N:
        grid = Grid(v.grid.R, N)
        v = GridFunction(grid, v.at(grid.nodes))
    return v


# -- subcommands ----------------------------------------------------------------------

def cmd_windows(args) -> int:
    symbol, h = window_pair(args.family, args.a, args.n)
    grid = Grid(args.R, args.N)
    t, xi = grid.nodes, grid.frequencies
    ht = np.asarray(h(t), dtype=complex)
    sv = np.asarray(symbol(xi), dtype=complex)
    write_rows(args.out, ["t", "time_re", "time_im", "xi", "symbol_re", "symbol_im"],
               zip(t, ht.real, ht.imag, xi, sv.real, sv.imag))
    return EXIT_OK


def cmd_l1bound(args) -> int:
    res = l1_bound_check(read_grid_function(args.input))
    write_json(args.out, dict(res.as_dict(), config=_config(args)))
    return EXIT_OK


_KERNEL_H = {"phi": phi, "psi": psi, "gamma": gamma}


def cmd_kernel(args) -> int:
    v = _load_v(args.v)
    h = _KERNEL_H[args.h](args.a)
    vn = norm_l2(v)
    if args.sandwich:
        op = sandwich_kernel(h, v)
        predicted = sandwich_hs_bound(h, vn)
    else:
        op = smoothed_kernel(h, v)
        predicted = smoothed_hs_predicted(h, vn)
    hs = op.hs_norm()
    if args.out:
        s = v.grid.nodes
        with open(args.out, "w", newline="") as fh:
            fh.write("s,u,re,im\n")
            for j0, j1, blk in op.blocks():
                ss, uu = np.meshgrid(s[j0:j1], s, indexing="ij")
                cols = np.column_stack([ss.ravel(), uu.ravel(), blk.real.ravel(), blk.imag.ravel()])
                np.savetxt(fh, cols, fmt="%.15g", delimiter=",")
    report = {"hs_norm": hs, "hs_predicted": predicted,
              "rel_err": (hs - predicted) / predicted if predicted else None,
              "kind": "bound" if args.sandwich else "identity", "config": _config(args)}
    write_json(args.report, report)
    return EXIT_OK


def _read_ap1(path) -> fm.APFunction:
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"file not found: {path}")
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["re", "im", "t"]:
        raise ConfigurationError(f"{path}: expected header 're,im,t'")
    try:
        data = np.array([[float(c) for c in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise ConfigurationError(f"{path}: {exc}") from None
    if data.ndim != 2 or data.shape[1] != 3:
        raise ConfigurationError(f"{path}: expected three columns")
    return fm.APFunction(data[:, 0] + 1j * data[:, 1], data[:, 2])


def parse_symbol(spec: str):
    name, _, arg = spec.partition(":")
    if name == "id" and not arg:
        return fm.identity
    if name == "square" and not arg:
        return fm.square
    if name == "exp":
        return fm.exponential(float(arg) if arg else 1.0)
    if name == "trapezoid" and arg:
        return trapezoid_symbol(float(arg))
    if name == "ap1" and arg:
        return _read_ap1(arg)
    raise ConfigurationError(
        f"unknown symbol {spec!r}; expected id, square, exp, trapezoid:<a> or ap1:<file>")


def cmd_specmap(args) -> int:
    try:
        freqs = [float(x) for x in args.freqs.split(",") if x.strip()]
    except ValueError:
        raise ConfigurationError(f"cannot parse frequencies {args.freqs!r}") from None
    res = fm.check_spectral_mapping(fm.FiniteModuleRep(freqs), parse_symbol(args.symbol))
    write_json(args.out, dict(res.as_dict(), config=_config(args)))
    return EXIT_OK


def _read_diag(path) -> np.ndarray:
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"file not found: {path}")
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["a"]:
        raise ConfigurationError(f"{path}: expected header 'a'")
    try:
        return np.array([float(r[0]) for r in rows[1:] if r])
    except (ValueError, IndexError) as exc:
        raise ConfigurationError(f"{path}: {exc}") from None


def _read_matrix(path, m: int) -> np.ndarray:
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"file not found: {path}")
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["row", "col", "re", "im"]:
        raise ConfigurationError(f"{path}: expected header 'row,col,re,im'")
    B = np.zeros((m, m), dtype=complex)
    try:
        for r in rows[1:]:
            if r:
                j, k = int(r[0]), int(r[1])
                B[j, k] = float(r[2]) + 1j * float(r[3])
    except (ValueError, IndexError) as exc:
        raise ConfigurationError(f"{path}: {exc}") from None
    return B


def cmd_envelope(args) -> int:
    report = {"config": _config(args), "a_star": None, "residual": None}
    if args.v:
        if args.matrixA or args.matrixB:
            raise ConfigurationError("use either --v or --matrixA/--matrixB")
        v = _load_v(args.v, args.N)
        res = operator_envelope(v)
        env, eigs, cont = res.env, res.eigs, res.containment
        if res.report is not None:
            report["a_star"] = res.report.a_star
            report["residual"] = res.report.residual
            report["hs_psiV"] = res.report.hs_psiV
        report["advisory"] = True
    elif args.matrixA and args.matrixB:
        A = _read_diag(args.matrixA)
        B = _read_matrix(args.matrixB, A.size)
        env = envelope(A, B)
        cont = check_containment(A, B, env)
        eigs = cont.eigs
    else:
        raise ConfigurationError("need --v, or both --matrixA and --matrixB")
    report.update(hs_B=env.hs_total, violations=cont.violations, margin=cont.margin,
                  b=env.b, b_l2=env.l2_tail)
    if args.out:
        write_rows(args.out, ["r", "f"], env.table())
    if args.eigs:
        # round the keys so conjugate pairs with last-bit differences sort stably
        order = np.lexsort((eigs.imag, np.round(eigs.real, 12)))
        write_rows(args.eigs, ["re", "im"], zip(eigs.real[order], eigs.imag[order]))
    write_json(args.report, report)
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = run_suite(args.suite, {"R": args.R, "N": args.N})
    write_json(args.out, [c.as_dict() for c in checks])
    return EXIT_OK if all(c.passed for c in checks) else EXIT_NUMERIC


# -- parser -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="specenv", description="Window functions, similarity transforms and "
                "spectrum envelopes for reflection-perturbed differentiation.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    w = sub.add_parser("windows", help="sample a window symbol and its time-domain transform")
    w.add_argument("--family", choices=FAMILIES, required=True)
    w.add_argument("--a", type=float, required=True)
    w.add_argument("--n", type=float, default=2.0)
    w.add_argument("--R", type=float, default=DEFAULT_R)
    w.add_argument("--N", type=int, default=DEFAULT_N)
    w.add_argument("--out", required=True)
    w.set_defaults(func=cmd_windows)

    l1 = sub.add_parser("l1bound", help="check the L1 bound for a sampled function")
    l1.add_argument("--input", required=True)
    l1.add_argument("--out", default="-")
    l1.set_defaults(func=cmd_l1bound)

    k = sub.add_parser("kernel", help="assemble T(h)V or V T(h) V and its HS norm")
    k.add_argument("--h", choices=sorted(_KERNEL_H), required=True)
    k.add_argument("--a", type=float, required=True)
    k.add_argument("--v", required=True)
    k.add_argument("--sandwich", action="store_true")
    k.add_argument("--out")
    k.add_argument("--report", default="-")
    k.set_defaults(func=cmd_kernel)

    s = sub.add_parser("specmap", help="compare sigma(T(h)) with h(Lambda)")
    s.add_argument("--freqs", required=True)
    s.add_argument("--symbol", required=True)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_specmap)

    e = sub.add_parser("envelope", help="spectrum envelope and containment")
    e.add_argument("--v")
    e.add_argument("--N", type=int)
    e.add_argument("--matrixA")
    e.add_argument("--matrixB")
    e.add_argument("--out")
    e.add_argument("--eigs")
    e.add_argument("--report", default="-")
    e.set_defaults(func=cmd_envelope)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=sorted(SUITES) + ["all"], required=True)
    v.add_argument("--R", type=float, default=DEFAULT_R)
    v.add_argument("--N", type=int, default=DEFAULT_N)
    v.add_argument("--out", default="-")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
