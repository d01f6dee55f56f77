"""Named verification suites; each returns a list of :class:`Check` records."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from . import finite_module as fm
from .errors import ConfigurationError
from .fourier import (DEFAULT_N, DEFAULT_R, Grid, GridFunction, Indicator, indicator, norm_l1,
                      norm_l2)
from .involution import (sandwich_hs_bound, sandwich_kernel, smoothed_hs_predicted,
                         smoothed_kernel, vr_predicted, vr_smallness)
from .l1bounds import l1_bound_check
from .similarity import (a_star, build_similarity, envelope, head_norms, run_trials,
                         tail_sequence, thread_count)
from .windows import (exact_norms, gamma, numeric_norms, omega_identity_residual,
                      omega_symbol, phi, psi, trapezoid_symbol)

NORM_GRID = Grid(math.pi * 1e4, 2 ** 20)
L1_GRID = Grid(400.0, 2 ** 16)
CORPUS_GRID = Grid(16384.0, 2 ** 19)


@dataclass(frozen=True)
class Check:
    check: str
    expected: object
    actual: object
    tol: Optional[float]
    passed: bool

    def as_dict(self) -> dict:
        return {"check": self.check, "expected": self.expected, "actual": self.actual,
                "tol": self.tol, "pass": self.passed}


def rel_check(name: str, expected: float, actual: float, tol: float) -> Check:
    ok = abs(actual - expected) <= tol * abs(expected)
    return Check(name, expected, actual, tol, bool(ok))


def le_check(name: str, bound: float, actual: float, slack: float = 0.0) -> Check:
    return Check(name, f"<= {bound!r}", actual, slack, bool(actual <= bound * (1 + slack)))


def abs_check(name: str, expected: float, actual: float, tol: float) -> Check:
    return Check(name, expected, actual, tol, bool(abs(actual - expected) <= tol))


# -- suites -------------------------------------------------------------------------

def suite_norms(cfg: dict) -> List[Check]:
    out = []
    targets = {
        "||tau_1||_2": (trapezoid_symbol(1.0), "l2", 2 * math.sqrt(2 / 3)),
        "||tau_1'||_2": (trapezoid_symbol(1.0), "l2_deriv", math.sqrt(2)),
        "||omega_1||_2": (omega_symbol(1.0), "l2", math.sqrt(4 - 4 * math.log(2))),
        "||omega_1'||_2": (omega_symbol(1.0), "l2_deriv", math.sqrt(2 / 3)),
    }
    cache = {}
    for name, (sym, key, value) in targets.items():
        if sym.family not in cache:
            cache[sym.family] = numeric_norms(sym, NORM_GRID)
        out.append(rel_check(name, value, cache[sym.family][key], 1e-4))
        out.append(rel_check(name + " (closed form)", value, exact_norms(sym)[key], 1e-14))
    pts = np.linspace(-5, 5, 10 ** 4)
    out.append(Check("xi*omega_1 = 1 - tau_1 (exact)", 0.0,
                     float(omega_identity_residual(1.0, pts)), 0.0,
                     omega_identity_residual(1.0, pts) == 0))
    return out


def l1_corpus() -> Dict[str, Callable]:
    """Integrable test functions whose transforms are in W^{1,2}."""
    return {
        "gaussian": lambda t: np.exp(-t ** 2 / 2),
        "gaussian_shifted": lambda t: np.exp(-(t - 3) ** 2) * (1 + 0.5j),
        "modulated_gaussian": lambda t: np.exp(-t ** 2 / 8 + 2j * t),
        "phi_1": lambda t: phi(1.0)(t),
        "phi_0.5": lambda t: phi(0.5)(t),
        "gamma_1": lambda t: gamma(1.0)(t),
        "gamma_2": lambda t: gamma(2.0)(t),
        "bump": lambda t: np.where(np.abs(t) < 1, np.exp(-1 / np.maximum(1 - t ** 2, 1e-300)), 0.0),
    }


def suite_l1(cfg: dict) -> List[Check]:
    out = []
    f_phi = GridFunction.from_function(L1_GRID, phi(1.0))
    vals = np.abs(psi(1.0)(L1_GRID.nodes))
    vals[L1_GRID.N // 2] = 0.5       # |psi_1| at the jump, by continuity of |psi_1|
    out.append(le_check("||phi_1||_1 <= sqrt(3)", math.sqrt(3), norm_l1(f_phi)))
    out.append(le_check("||psi_1||_1 <= 1.35", 1.35, L1_GRID.spacing * float(np.sum(vals))))
    out.append(le_check("||psi_1||_inf <= 1/pi + 1", 1 / math.pi + 1, float(np.max(vals))))
    for name, func in l1_corpus().items():
        res = l1_bound_check(GridFunction.from_function(CORPUS_GRID, func))
        out.append(Check(f"||f||_1^2 <= 2||F f||_2||(F f)'||_2 [{name}]",
                         f"<= {res.bound!r}", res.l1, 1e-6, res.holds))
    return out


def _indicator_setup(cfg: dict):
    grid = Grid(cfg.get("R", DEFAULT_R), cfg.get("N", DEFAULT_N))
    return grid, indicator(grid, -1, 1)


def suite_kernels(cfg: dict) -> List[Check]:
    grid, v = _indicator_setup(cfg)
    vn = Indicator(-1, 1).l2_norm
    ast = a_star(vn)
    out = []
    for a in (0.5, 1.0, ast):
        tag = "a*" if a == ast else f"{a:g}"
        for h, label in ((phi(a), "phi"), (psi(a), "psi")):
            hs = smoothed_kernel(h, v).hs_norm()
            out.append(rel_check(f"||T({label}_{tag})V||_2", smoothed_hs_predicted(h, vn), hs, 1e-3))
    hs = sandwich_kernel(psi(1.0), v).hs_norm()
    out.append(le_check("||V T(psi_1) V||_2 <= (pi+1)/(pi sqrt2) ||v||^2",
                        sandwich_hs_bound(psi(1.0), vn), hs))
    # V multiplies by the samples of v, so their quadrature norm is the one that enters
    vs = norm_l2(v)
    out.append(rel_check("||VR(i;A)||_2 = ||v_grid||_2/sqrt2", vr_predicted(vs, 1.0),
                         vr_smallness(v, 1.0), 1e-3))
    out.append(rel_check("||VR(i;A)||_2 = ||v||_2/sqrt2", vr_predicted(vn, 1.0),
                         vr_smallness(v, 1.0), 1e-3))
    return out


def specmap_corpus():
    """(label, rep, symbol) triples for the spectral mapping suite."""
    reps = {"A": fm.FiniteModuleRep([-1, 0, 2]),
            "B": fm.FiniteModuleRep([0, math.pi]),
            "C": fm.FiniteModuleRep([1, 1, 5]),
            "D": fm.FiniteModuleRep(np.linspace(-3, 3, 7)),
            "E": fm.FiniteModuleRep(np.random.default_rng(7).uniform(-4, 4, 12))}
    symbols = {"id": fm.identity,
               "square": fm.square,
               "cubic": fm.polynomial([1, -2, 0, 1]),
               "tau_1": trapezoid_symbol(1.0),
               "exp": fm.exponential(1.0),
               "ap1": fm.APFunction([0.5, 0.25j, -0.125], [0.0, 1.0, -2.0])}
    for rk, rep in reps.items():
        for sk, h in symbols.items():
            yield f"{rk}/{sk}", rep, h


def suite_specmap(cfg: dict) -> List[Check]:
    out = []
    for label, rep, h in specmap_corpus():
        res = fm.check_spectral_mapping(rep, h)
        out.append(Check(f"sigma = h(Lambda) [{label}]", 0.0, res.hausdorff, 1e-9, res.equal))
    rep = fm.FiniteModuleRep([-1, 0, 2])
    res = fm.resolvent_norm_check(rep, fm.identity, 3 + 4j)
    out.append(rel_check("||(3+4i - A)^-1|| = 1/sqrt(17)", 1 / math.sqrt(17), res.norm, 1e-12))
    h = fm.APFunction([1.0], [1.0])
    out.append(abs_check("||1/(2 - e^{i xi})||_AP1 = 1", 1.0, fm.ap1_reciprocal_norm(h, 2.0), 1e-8))
    # 1 in sigma(T(1)) needs a frequency in 2 pi Z; 0 is put in explicitly
    rep = fm.FiniteModuleRep(np.append(0.0, np.random.default_rng(3).uniform(-10, 10, 8)))
    res = np.linalg.norm(np.linalg.inv(2 * np.eye(rep.m) - rep.T(1.0)), 2)
    out.append(abs_check("||(2 - T(1))^-1|| = 1", 1.0, float(res), 1e-12))
    return out


def suite_similarity(cfg: dict) -> List[Check]:
    grid, v = _indicator_setup(cfg)
    rep = build_similarity(v)
    vn = rep.v_norm
    return [
        abs_check("||T(psi_a*)V||_2 = 0.5", 0.5, rep.hs_psiV, 1e-2),
        le_check("||U^-1 - I||_2 <= 1", 1.0, rep.u_inv_minus_i_hs, 1e-2),
        le_check("||B||_2 <= 2.45 ||v||_2^2", 2.45 * vn ** 2, rep.b_hs, 1e-2),
        le_check("max |B_first - B_second|", 1e-8, rep.form_gap),
        le_check("similarity residual (Gaussian probe)", 1e-2, rep.residual),
    ]


def suite_envelope(cfg: dict) -> List[Check]:
    out = []
    A = np.array([0.0, 0.1])
    B = np.array([[0, 0.5], [-0.5, 0]], dtype=complex)
    env = envelope(A, B)
    out.append(rel_check("f(0) = 2||B||_2 (2x2)", 2 * math.sqrt(0.5), env(0.0), 1e-12))
    out.append(abs_check("f(3) = 0 (2x2)", 0.0, env(3.0), 0.0))
    trials = run_trials(range(50), m=200)
    out.append(Check("violations over 50 random trials", 0, sum(t.violations for t in trials),
                     0, all(t.violations == 0 for t in trials)))
    A_diag = np.random.default_rng(11).uniform(-20, 20, 200)
    rng = np.random.default_rng(12)
    Bm = rng.standard_normal((200, 200)) + 1j * rng.standard_normal((200, 200))
    b = tail_sequence(A_diag, Bm)
    heads = head_norms(A_diag, Bm)
    total = np.linalg.norm(Bm) ** 2
    gap = float(np.max(np.abs(heads ** 2 + b ** 2 - total)) / total)
    out.append(le_check("Pythagoras ||B||^2 = ||B_n||^2 + ||B~_n||^2 (rel)", 1e-12, gap))
    out.append(Check("b_n nonincreasing", True, bool(np.all(np.diff(b) <= 0)), 0,
                     bool(np.all(np.diff(b) <= 0))))
    l2 = float(np.sqrt(np.sum(b ** 2)))
    out.append(Check("l2 norm of (b_n) finite", "finite", l2, None, math.isfinite(l2)))
    return out


SUITES = {"norms": suite_norms, "l1": suite_l1, "kernels": suite_kernels,
          "specmap": suite_specmap, "similarity": suite_similarity,
          "envelope": suite_envelope}


def run_suite(name: str, cfg: Optional[dict] = None) -> List[Check]:
    """Run one suite (or ``all``); checks come back sorted by name."""
    cfg = cfg or {}
    if name == "all":
        names = sorted(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise ConfigurationError(f"unknown suite {name!r}; expected one of "
                                 f"{sorted(SUITES) + ['all']}")
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        results = list(pool.map(lambda n: SUITES[n](cfg), names))
    checks = [c for r in results for c in r]
    return sorted(checks, key=lambda c: c.check)
