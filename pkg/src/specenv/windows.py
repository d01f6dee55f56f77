"""Window symbols and their inverse Fourier transforms.

Frequency side (exact, piecewise rational):

* trapezoid ``tau_a``: 1 on |xi| <= a, linear down to 0 at |xi| = 2a;
* ``omega_a(xi) = (1 - tau_a(xi)) / xi``, which vanishes on |xi| <= a and equals 1/xi beyond 2a;
* triangle ``(1 - |xi|/a)`` on [-a, a];
* generalized trapezoid ``tau_{a,n}`` with plateau [-a, a] and ramps ending at +-na.

Time side (closed forms):

* ``phi_a(t) = 2 sin(3at/2) sin(at/2) / (pi a t^2)`` with transform ``tau_a``;
* ``psi_a`` with transform ``omega_a``, expressed through the sine integral;
* ``gamma_a(t) = (a/2pi) (sin(at/2)/(at/2))^2`` with transform the triangle.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from gmpy2 import mpq

from .errors import ConfigurationError
from .fourier import FreqGridFunction, Grid, frequency_derivative, norm_l2
from .special import sine_integral

_SMALL = 1e-6

Coeffs = Tuple[Fraction, Fraction, Fraction]


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise ConfigurationError(f"{name} must be positive, got {value}")
    return value


def _segment_tag(c: Coeffs) -> str:
    c0, c1, c2 = c
    if c2 == 0:
        return "constant" if c1 == 0 else "linear"
    if c0 == 0 and c1 == 0:
        return "reciprocal"
    if c1 == 0:
        return "affine-minus-reciprocal"
    raise ConfigurationError(f"unsupported segment {c}")


@dataclass(frozen=True)
class PiecewiseSymbol:
    """Piecewise formula ``c0 + c1*xi + c2/xi`` between sorted breakpoints.

    Segment ``i`` covers ``(b[i-1], b[i]]`` with ``b[-1] = -inf`` and ``b[len] = +inf``;
    a point on a breakpoint belongs to the segment on its left.  Coefficients are
    exact fractions so identities between symbols can be checked in rational
    arithmetic.
    """

    family: str
    params: Tuple[float, ...]
    breakpoints: Tuple[Fraction, ...]
    segments: Tuple[Coeffs, ...]
    parity: str

    def __post_init__(self):
        if len(self.segments) != len(self.breakpoints) + 1:
            raise ConfigurationError("need one more segment than breakpoints")
        if list(self.breakpoints) != sorted(self.breakpoints):
            raise ConfigurationError("breakpoints must be sorted")
        for i, c in enumerate(self.segments):
            _segment_tag(c)
            lo = self.breakpoints[i - 1] if i > 0 else None
            hi = self.breakpoints[i] if i < len(self.breakpoints) else None
            if c[2] != 0 and (lo is None or lo < 0) and (hi is None or hi >= 0):
                raise ConfigurationError("reciprocal term on a segment containing 0")

    @property
    def tags(self) -> Tuple[str, ...]:
        return tuple(_segment_tag(c) for c in self.segments)

    def _segment_index(self, xi: np.ndarray) -> np.ndarray:
        return np.searchsorted(np.array([float(b) for b in self.breakpoints]), xi, side="left")

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        idx = self._segment_index(xi)
        out = np.zeros(xi.shape)
        for i, (c0, c1, c2) in enumerate(self.segments):
            mask = idx == i
            if not np.any(mask):
                continue
            x = xi[mask]
            val = float(c0) + float(c1) * x
            if c2 != 0:
                val = val + float(c2) / x
            out[mask] = val
        return out if out.ndim else float(out)

    def exact(self, xi) -> Fraction:
        """Evaluate at a rational point in exact arithmetic."""
        x = Fraction(xi)
        i = 0
        while i < len(self.breakpoints) and x > self.breakpoints[i]:
            i += 1
        c0, c1, c2 = self.segments[i]
        val = c0 + c1 * x
        if c2 != 0:
            val += c2 / x
        return val

    def outer_reciprocal(self) -> Tuple[Fraction, Fraction]:
        """``c2`` of the two unbounded segments when they are pure ``c2/xi``, else 0."""
        def tail(c):
            return c[2] if c[0] == 0 and c[1] == 0 else Fraction(0)
        return tail(self.segments[0]), tail(self.segments[-1])


def trapezoid_symbol(a: float) -> PiecewiseSymbol:
    a = _positive("a", a)
    fa = Fraction(a)
    z = Fraction(0)
    return PiecewiseSymbol(
        "trapezoid", (a,), (-2 * fa, -fa, fa, 2 * fa),
        ((z, z, z), (Fraction(2), 1 / fa, z), (Fraction(1), z, z),
         (Fraction(2), -1 / fa, z), (z, z, z)),
        "even")


def omega_symbol(a: float) -> PiecewiseSymbol:
    a = _positive("a", a)
    fa = Fraction(a)
    z = Fraction(0)
    one = Fraction(1)
    return PiecewiseSymbol(
        "omega", (a,), (-2 * fa, -fa, fa, 2 * fa),
        ((z, z, one), (-1 / fa, z, -one), (z, z, z), (1 / fa, z, -one), (z, z, one)),
        "odd")


def triangle_symbol(a: float) -> PiecewiseSymbol:
    a = _positive("a", a)
    fa = Fraction(a)
    z = Fraction(0)
    return PiecewiseSymbol(
        "triangle", (a,), (-fa, z, fa),
        ((z, z, z), (Fraction(1), 1 / fa, z), (Fraction(1), -1 / fa, z), (z, z, z)),
        "even")


def generalized_trapezoid(a: float, n: float) -> PiecewiseSymbol:
    a = _positive("a", a)
    n = float(n)
    if not (math.isfinite(n) and n > 1):
        raise ConfigurationError(f"n must exceed 1, got {n}")
    fa, fn = Fraction(a), Fraction(n)
    z = Fraction(0)
    slope = 1 / ((fn - 1) * fa)
    return PiecewiseSymbol(
        "gentrap", (a, n), (-fn * fa, -fa, fa, fn * fa),
        ((z, z, z), (fn / (fn - 1), slope, z), (Fraction(1), z, z),
         (fn / (fn - 1), -slope, z), (z, z, z)),
        "even")


def exact_norms(symbol: PiecewiseSymbol) -> dict:
    """Closed-form L2 norms of a window symbol and of its derivative."""
    fam = symbol.family
    a = symbol.params[0]
    if fam == "trapezoid":
        return {"l2": 2 * math.sqrt(2 * a / 3), "l2_deriv": math.sqrt(2 / a)}
    if fam == "omega":
        return {"l2": math.sqrt((4 - 4 * math.log(2)) / a),
                "l2_deriv": math.sqrt(2 / (3 * a ** 3))}
    if fam == "triangle":
        return {"l2": math.sqrt(2 * a / 3), "l2_deriv": math.sqrt(2 / a)}
    if fam == "gentrap":
        n = symbol.params[1]
        return {"l2": math.sqrt(2 * a * (n + 2) / 3),
                "l2_deriv": math.sqrt(2 / ((n - 1) * a))}
    raise ConfigurationError(f"no closed-form norms for family {fam!r}")


def numeric_norms(symbol: PiecewiseSymbol, grid: Grid) -> dict:
    """Quadrature norms of a symbol sampled on ``grid.frequencies``.

    The derivative uses the same centered differences as the L1 estimator.  An
    unbounded ``c/xi`` segment is integrated in closed form beyond the sampled
    band (the sum is read as a midpoint rule, so the band ends half a cell out).
    """
    F = FreqGridFunction.from_symbol(grid, symbol)
    l2_sq = norm_l2(F) ** 2
    d_sq = norm_l2(frequency_derivative(F)) ** 2
    left, right = symbol.outer_reciprocal()
    h = grid.freq_spacing
    for c, edge in ((left, abs(grid.frequencies[0]) + h / 2),
                    (right, grid.frequencies[-1] + h / 2)):
        c = float(c)
        l2_sq += c * c / edge
        d_sq += c * c / (3 * edge ** 3)
    return {"l2": math.sqrt(l2_sq), "l2_deriv": math.sqrt(d_sq)}


def _mpq_pieces(symbol: PiecewiseSymbol):
    return ([mpq(b) for b in symbol.breakpoints],
            [tuple(mpq(c) for c in seg) for seg in symbol.segments])


def _eval_mpq(pieces, x):
    breaks, segs = pieces
    c0, c1, c2 = segs[bisect.bisect_left(breaks, x)]
    val = c0 + c1 * x
    return val + c2 / x if c2 else val


def omega_identity_residual(a: float, points: Sequence[float]) -> Fraction:
    """max |xi*omega_a(xi) - (1 - tau_a(xi))| over ``points`` in exact arithmetic.

    Each float sample is converted to the rational it represents exactly.
    """
    om, tau = _mpq_pieces(omega_symbol(a)), _mpq_pieces(trapezoid_symbol(a))
    worst = mpq(0)
    for p in np.asarray(points, dtype=float).ravel().tolist():
        x = mpq(p)
        d = abs(x * _eval_mpq(om, x) - (1 - _eval_mpq(tau, x)))
        if d > worst:
            worst = d
    return Fraction(int(worst.numerator), int(worst.denominator))


def omega_identity_symbolic(a: float) -> bool:
    """Check xi*omega_a = 1 - tau_a as polynomial identities on every segment."""
    om, tau = omega_symbol(a), trapezoid_symbol(a)
    if om.breakpoints != tau.breakpoints:
        return False
    for (c0, c1, c2), (d0, d1, d2) in zip(om.segments, tau.segments):
        # xi*(c0 + c1 xi + c2/xi) = c2 + c0 xi + c1 xi^2 ;  1 - tau = (1 - d0) - d1 xi  (d2 = 0)
        if d2 != 0 or (c2, c0, c1) != (1 - d0, -d1, 0):
            return False
    return True


# -- time domain -------------------------------------------------------------------

def _as_array(t):
    return np.asarray(t, dtype=float)


def _ret(out, t):
    return out if np.ndim(t) else out.item()


def phi_time(a: float, t):
    a = _positive("a", a)
    t = _as_array(t)
    x = a * t
    small = np.abs(x) < _SMALL
    safe = np.where(small, 1.0, t)
    val = 2 * np.sin(1.5 * a * safe) * np.sin(0.5 * a * safe) / (math.pi * a * safe ** 2)
    limit = 3 * a / (2 * math.pi) * (1 - (5.0 / 12.0) * x ** 2)
    return _ret(np.where(small, limit, val), t)


def gamma_time(a: float, t):
    a = _positive("a", a)
    t = _as_array(t)
    x = a * t
    small = np.abs(x) < _SMALL
    half = np.where(small, 1.0, 0.5 * x)
    val = a / (2 * math.pi) * (np.sin(half) / half) ** 2
    limit = a / (2 * math.pi) * (1 - x ** 2 / 12.0)
    return _ret(np.where(small, limit, val), t)


def psi_time(a: float, t):
    """psi_a(t); purely imaginary and odd, with psi_a(0) = 0 (mean of the limits +-i/2)."""
    a = _positive("a", a)
    t = _as_array(t)
    s = np.sign(t)
    x = a * np.abs(t)
    small = x < _SMALL
    xs = np.where(small, 1.0, x)
    bracket = (2 * np.sin(1.5 * xs) * np.sin(0.5 * xs) / xs
               + sine_integral(xs) - 2 * sine_integral(2 * xs) + 0.5 * math.pi)
    bracket = np.where(small, 0.5 * math.pi - 1.5 * x, bracket)
    return _ret(1j / math.pi * s * bracket, t)


def gentrap_time(a: float, n: float, t):
    """Inverse transform of tau_{a,n}, written as a combination of two triangle kernels."""
    a = _positive("a", a)
    if not n > 1:
        raise ConfigurationError(f"n must exceed 1, got {n}")
    return (n * gamma_time(n * a, t) - gamma_time(a, t)) / (n - 1)


@dataclass(frozen=True)
class TimeFunction:
    """A vectorized time-domain function with the facts kernels need about it.

    ``jump`` is h(0+) - h(0-); at t = 0 itself ``func`` returns the mean of the
    one-sided limits.  ``l2`` is the exact L2 norm and ``sup`` an upper bound for
    sup |h|.
    """

    name: str
    func: Callable = field(repr=False)
    l2: Optional[float] = None
    sup: Optional[float] = None
    jump: complex = 0.0

    def __call__(self, t):
        return self.func(t)


def phi(a: float) -> TimeFunction:
    a = _positive("a", a)
    return TimeFunction(f"phi_{a:g}", lambda t: phi_time(a, t),
                        l2=exact_norms(trapezoid_symbol(a))["l2"] / math.sqrt(2 * math.pi),
                        sup=3 * a / (2 * math.pi))


def psi(a: float) -> TimeFunction:
    a = _positive("a", a)
    return TimeFunction(f"psi_{a:g}", lambda t: psi_time(a, t),
                        l2=exact_norms(omega_symbol(a))["l2"] / math.sqrt(2 * math.pi),
                        sup=1 / math.pi + 1, jump=1j)


def gamma(a: float) -> TimeFunction:
    a = _positive("a", a)
    return TimeFunction(f"gamma_{a:g}", lambda t: gamma_time(a, t),
                        l2=exact_norms(triangle_symbol(a))["l2"] / math.sqrt(2 * math.pi),
                        sup=a / (2 * math.pi))


def gentrap(a: float, n: float) -> TimeFunction:
    sym = generalized_trapezoid(a, n)
    return TimeFunction(f"phi_{a:g},{n:g}", lambda t: gentrap_time(a, n, t),
                        l2=exact_norms(sym)["l2"] / math.sqrt(2 * math.pi),
                        sup=sym.params[0] * (n + 1) / (2 * math.pi))


FAMILIES = ("trapezoid", "omega", "triangle", "gentrap")


def window_pair(family: str, a: float, n: float = 2.0):
    """Return ``(symbol, time_function)`` for one of :data:`FAMILIES`."""
    if family == "trapezoid":
        return trapezoid_symbol(a), phi(a)
    if family == "omega":
        return omega_symbol(a), psi(a)
    if family == "triangle":
        return triangle_symbol(a), gamma(a)
    if family == "gentrap":
        return generalized_trapezoid(a, n), gentrap(a, n)
    raise ConfigurationError(f"unknown family {family!r}; expected one of {FAMILIES}")
