"""Finite diagonal unitary representations as a concrete Banach module.

A frequency list ``lam_1..lam_m`` gives the representation ``T(t) = diag(exp(i lam_j t))``.
Every vector has a finite Beurling spectrum, the generator is ``diag(lam)`` and the
calculus sends a symbol ``h`` to ``diag(h(lam_j))``.  This is where the spectral
mapping statements can be checked exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, Sequence

import numpy as np

from .errors import ConfigurationError, DomainError, ProximityError, SingularityError
from .fourier import Grid, FreqGridFunction, dft_inverse, norm_l1
from .windows import trapezoid_symbol

ZERO_TOL = 1e-12
SET_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class FiniteModuleRep:
    frequencies: np.ndarray

    def __post_init__(self):
        lam = np.array(self.frequencies, dtype=float).ravel()
        if lam.size < 1:
            raise ConfigurationError("a representation needs at least one frequency")
        if not np.all(np.isfinite(lam)):
            raise ConfigurationError("frequencies must be finite")
        lam.setflags(write=False)
        object.__setattr__(self, "frequencies", lam)

    @property
    def m(self) -> int:
        return self.frequencies.size

    def T(self, t: float) -> np.ndarray:
        return np.diag(np.exp(1j * self.frequencies * t))

    def generator(self) -> np.ndarray:
        return np.diag(self.frequencies.astype(complex))


@dataclass(frozen=True, eq=False)
class APFunction:
    """h(xi) = sum_n c_n exp(i xi t_n) with finitely many terms."""

    coefficients: np.ndarray
    exponents: np.ndarray

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=complex).ravel()
        t = np.array(self.exponents, dtype=float).ravel()
        if c.shape != t.shape:
            raise ConfigurationError("coefficients and exponents differ in length")
        object.__setattr__(self, "coefficients", c)
        object.__setattr__(self, "exponents", t)

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.coefficients)))

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        out = np.exp(1j * np.multiply.outer(xi, self.exponents)) @ self.coefficients
        return out if out.ndim else complex(out)


# -- point sets -----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SpectrumSet:
    """Finite point set in C; points closer than ``tol/2`` are merged on construction."""

    points: np.ndarray
    tol: float = SET_TOL

    def __post_init__(self):
        pts = np.array(self.points, dtype=complex).ravel()
        order = np.lexsort((pts.imag, pts.real))
        kept: List[complex] = []
        for z in pts[order]:
            if not kept or np.min(np.abs(np.array(kept) - z)) >= self.tol / 2:
                kept.append(z)
        arr = np.array(kept, dtype=complex)
        arr.setflags(write=False)
        object.__setattr__(self, "points", arr)

    def __len__(self):
        return self.points.size

    def to_list(self) -> list:
        return [[float(z.real), float(z.imag)] for z in self.points]


def hausdorff(a: SpectrumSet, b: SpectrumSet) -> float:
    if len(a) == 0 and len(b) == 0:
        return 0.0
    if len(a) == 0 or len(b) == 0:
        return math.inf
    d = np.abs(a.points[:, None] - b.points[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def greedy_match(a: SpectrumSet, b: SpectrumSet, tol: float) -> bool:
    """Pair points closest-first; True when every point finds a partner within ``tol``."""
    if len(a) != len(b):
        return False
    d = np.abs(a.points[:, None] - b.points[None, :])
    pairs = sorted(((d[i, j], i, j) for i in range(len(a)) for j in range(len(b))))
    used_a, used_b = set(), set()
    for dist, i, j in pairs:
        if i in used_a or j in used_b:
            continue
        if dist >= tol:
            return False
        used_a.add(i)
        used_b.add(j)
    return len(used_a) == len(a)


# -- calculus ---------------------------------------------------------------------------

def _symbol_values(h: Callable, lam: np.ndarray) -> np.ndarray:
    try:
        with np.errstate(all="ignore"):
            vals = np.asarray(h(lam), dtype=complex)
    except ZeroDivisionError:
        raise DomainError("symbol has a pole at a frequency of the representation") from None
    vals = np.broadcast_to(vals, lam.shape)
    if not np.all(np.isfinite(vals)):
        bad = lam[~np.isfinite(vals)]
        raise DomainError(f"symbol is undefined at frequencies {bad.tolist()}")
    return vals


def calculus_operator(h: Callable, rep: FiniteModuleRep) -> np.ndarray:
    return np.diag(_symbol_values(h, rep.frequencies))


def beurling_spectrum(rep: FiniteModuleRep, x) -> np.ndarray:
    x = np.asarray(x, dtype=complex).ravel()
    if x.size != rep.m:
        raise ConfigurationError(f"vector has length {x.size}, representation has {rep.m}")
    return np.unique(rep.frequencies[np.abs(x) > ZERO_TOL])


def operator_module(rep: FiniteModuleRep) -> FiniteModuleRep:
    """Frequencies of X -> T(t) X T(-t) on m x m matrices, in row-major order of X."""
    lam = rep.frequencies
    return FiniteModuleRep(np.subtract.outer(lam, lam).ravel())


def matrix_beurling_spectrum(rep: FiniteModuleRep, X) -> np.ndarray:
    X = np.asarray(X, dtype=complex)
    if X.shape != (rep.m, rep.m):
        raise ConfigurationError(f"expected a {rep.m}x{rep.m} matrix")
    diffs = np.subtract.outer(rep.frequencies, rep.frequencies)
    return np.unique(diffs[np.abs(X) > ZERO_TOL])


def commutator_matrix(A) -> np.ndarray:
    """Matrix of X -> AX - XA acting on row-major vec(X)."""
    A = np.asarray(A, dtype=complex)
    eye = np.eye(A.shape[0])
    return np.kron(A, eye) - np.kron(eye, A.T)


@dataclass(frozen=True)
class SpectralMappingReport:
    sigma: SpectrumSet
    image: SpectrumSet
    hausdorff: float
    equal: bool

    def as_dict(self) -> dict:
        return {"sigma": self.sigma.to_list(), "image": self.image.to_list(),
                "hausdorff": self.hausdorff, "equal": self.equal}


def check_spectral_mapping(rep: FiniteModuleRep, h: Callable,
                           tol: float = SET_TOL) -> SpectralMappingReport:
    op = calculus_operator(h, rep)
    sigma = SpectrumSet(np.linalg.eigvals(op), tol)
    image = SpectrumSet(_symbol_values(h, rep.frequencies), tol)
    dist = hausdorff(sigma, image)
    equal = dist < tol and greedy_match(sigma, image, tol)
    return SpectralMappingReport(sigma, image, dist, bool(equal))


@dataclass(frozen=True)
class ResolventCheck:
    norm: float
    dist_bound: float
    tight: bool


def resolvent_norm_check(rep: FiniteModuleRep, h: Callable, lam: complex,
                         rtol: float = 1e-12) -> ResolventCheck:
    vals = _symbol_values(h, rep.frequencies)
    dist = float(np.min(np.abs(lam - vals)))
    if dist <= 1e-14 * max(1.0, abs(lam)):
        raise SingularityError(f"{lam} lies in the spectrum")
    res = np.linalg.inv(lam * np.eye(rep.m) - np.diag(vals))
    norm = float(np.linalg.norm(res, 2))
    bound = 1.0 / dist
    return ResolventCheck(norm, bound, abs(norm - bound) <= rtol * bound)


# -- almost periodic symbols ---------------------------------------------------------

def ap1_apply(h: APFunction, rep: FiniteModuleRep) -> np.ndarray:
    """sum_n c_n T(t_n)."""
    out = np.zeros((rep.m, rep.m), dtype=complex)
    for c, t in zip(h.coefficients, h.exponents):
        out += c * rep.T(t)
    return out


def common_step(exponents: Sequence[float], max_denominator: int = 1000) -> float:
    """Largest tau > 0 with every exponent an integer multiple of tau."""
    t = np.abs(np.asarray(exponents, dtype=float))
    t = t[t > 0]
    if t.size == 0:
        return 1.0
    base = float(t.min())
    ratios = t / base
    for q in range(1, max_denominator + 1):
        scaled = ratios * q
        if np.all(np.abs(scaled - np.round(scaled)) < 1e-9 * np.maximum(1, scaled)):
            return base / q
    raise ConfigurationError("exponents are not commensurate")


def ap1_reciprocal_coefficients(h: APFunction, lam: complex, samples: int = 2 ** 16,
                                margin: float = 1e-6):
    """Fourier coefficients of 1/(lam - h) over one period, in order of increasing |k|.

    Returns ``(k, coeffs)`` where ``coeffs[i]`` multiplies ``exp(i k[i] tau xi)``.
    """
    tau = common_step(h.exponents)
    theta = 2 * math.pi * np.arange(samples) / samples
    hv = h(theta / tau)
    gap = float(np.min(np.abs(lam - hv)))
    if gap <= margin:
        raise ProximityError(f"{lam} is within {gap:.3g} of the range of h")
    coeffs = np.fft.fft(1.0 / (lam - hv)) / samples
    k = np.fft.fftfreq(samples, 1.0 / samples).astype(int)
    order = np.argsort(np.abs(k), kind="stable")
    return k[order], coeffs[order]


def ap1_reciprocal_norm(h: APFunction, lam: complex, samples: int = 2 ** 16,
                        tail_tol: float = 1e-10) -> float:
    """AP1 norm of 1/(lam - h) for commensurate exponents."""
    k, c = ap1_reciprocal_coefficients(h, lam, samples)
    mags = np.abs(c)
    # tails[i] = sum of |c| beyond position i
    tails = np.concatenate([np.cumsum(mags[::-1])[::-1][1:], [0.0]])
    cut = int(np.argmax(tails < tail_tol))
    return float(np.sum(mags[:cut + 1]))


# -- spectral admissibility -------------------------------------------------------------

MH_EXPONENTS = tuple(range(-3, 7))


@dataclass(frozen=True)
class MhEstimate:
    M: float
    a_list: tuple
    norms: tuple


def _check_proximity(h: Callable, lam: complex, support, margin: float = 1e-6):
    for lo, hi in support:
        xi = np.linspace(lo, hi, 20001)
        gap = float(np.min(np.abs(lam - _symbol_values(h, xi))))
        if gap <= margin:
            raise ProximityError(f"{lam} is within {gap:.3g} of h on [{lo}, {hi}]")


def mh_estimate(h: Callable, lam: complex, support: Iterable, grid: Optional[Grid] = None,
                exponents: Sequence[int] = MH_EXPONENTS) -> MhEstimate:
    """Lower estimate of sup_a ||F^-1(tau_a / (lam - h))||_1 over a = 2^k.

    The supremum runs over all a > 0; only the finite geometric family is
    evaluated, so the result can only underestimate it.
    """
    support = [tuple(map(float, s)) for s in support]
    _check_proximity(h, lam, support)
    grid = grid or Grid(400.0, 2 ** 16)
    xi = grid.frequencies
    a_list, norms = [], []
    for k in exponents:
        a = 2.0 ** k
        tau = trapezoid_symbol(a)(xi)
        g = np.zeros(xi.shape, dtype=complex)
        on = tau != 0
        g[on] = tau[on] / (lam - _symbol_values(h, xi[on]))
        a_list.append(a)
        norms.append(norm_l1(dft_inverse(FreqGridFunction(grid, g))))
    return MhEstimate(float(max(norms)), tuple(a_list), tuple(norms))


# -- stock symbols ------------------------------------------------------------------------

def identity(xi):
    return np.asarray(xi, dtype=float) + 0j


def square(xi):
    return np.asarray(xi, dtype=float) ** 2 + 0j


def polynomial(coeffs: Sequence[complex]) -> Callable:
    """Symbol sum_k coeffs[k] xi^k."""
    c = list(coeffs)
    return lambda xi: np.polyval(c[::-1], np.asarray(xi, dtype=float)) + 0j


def exponential(t0: float = 1.0) -> Callable:
    return lambda xi: np.exp(1j * t0 * np.asarray(xi, dtype=float))


def resolvent_symbol(z: complex) -> Callable:
    return lambda xi: 1.0 / (np.asarray(xi, dtype=float) - z)
