"""Uniform grids on [-R, R), the continuous-convention Fourier transform and quadrature norms.

The transform convention is

    F f(xi) = integral f(t) exp(-i t xi) dt,     f(t) = (1/2pi) integral F f(xi) exp(i t xi) dxi,

so that ||F f||_2 = sqrt(2 pi) ||f||_2.  On the grid ``t_k = -R + k*dt`` the forward
transform is the trapezoid sum ``dt * sum_k f(t_k) exp(-i t_k xi_j)`` evaluated at the
frequencies ``xi_j = 2 pi j / (N dt)``, ``j = -N/2 .. N/2 - 1``, and the inverse is its
exact discrete inverse.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Union

import numpy as np

from .errors import ConfigurationError

DEFAULT_R = 40.0
DEFAULT_N = 4096


@dataclass(frozen=True)
class Grid:
    """Symmetric uniform grid with ``N`` nodes ``-R, -R + dt, ..., R - dt``."""

    R: float
    N: int

    def __post_init__(self):
        if not (isinstance(self.R, (int, float)) and math.isfinite(self.R) and self.R > 0):
            raise ConfigurationError(f"half width R must be positive, got {self.R!r}")
        if isinstance(self.N, bool) or int(self.N) != self.N:
            raise ConfigurationError(f"N must be an integer, got {self.N!r}")
        if self.N < 4 or self.N % 2:
            raise ConfigurationError(f"N must be an even integer >= 4, got {self.N}")
        object.__setattr__(self, "R", float(self.R))
        object.__setattr__(self, "N", int(self.N))

    @property
    def spacing(self) -> float:
        return 2.0 * self.R / self.N

    @property
    def nodes(self) -> np.ndarray:
        # k - N/2 keeps t_{N/2} == 0 exactly
        return (np.arange(self.N) - self.N // 2) * self.spacing

    @property
    def freq_indices(self) -> np.ndarray:
        return np.arange(-(self.N // 2), self.N // 2)

    @property
    def freq_spacing(self) -> float:
        return math.pi / self.R

    @property
    def frequencies(self) -> np.ndarray:
        return self.freq_indices * self.freq_spacing

    @property
    def nyquist(self) -> float:
        return math.pi / self.spacing

    def reflection_index(self) -> np.ndarray:
        """Index map k -> N - k of t -> -t; the node -R (k = 0) maps to itself."""
        idx = (self.N - np.arange(self.N)) % self.N
        return idx


def make_grid(R: float, N: int) -> Grid:
    return Grid(R, N)


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex samples on a grid.

    ``source`` optionally keeps the sampled function itself; off-node evaluation
    (see :meth:`at`) then uses it exactly instead of interpolating the samples.
    """

    grid: Grid
    values: np.ndarray
    source: Optional[Callable] = field(default=None, repr=False)

    def __post_init__(self):
        vals = _frozen(self.values)
        if vals.shape != (self.grid.N,):
            raise ConfigurationError(
                f"expected {self.grid.N} samples, got shape {vals.shape}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, grid: Grid, func: Callable) -> "GridFunction":
        return cls(grid, func(grid.nodes), source=func)

    @property
    def t(self) -> np.ndarray:
        return self.grid.nodes

    def at(self, points) -> np.ndarray:
        """Evaluate off the grid: exactly if the source is known, else linear interpolation.

        Beyond the outermost nodes the interpolant is zero.
        """
        points = np.asarray(points, dtype=float)
        if self.source is not None:
            return np.asarray(self.source(points), dtype=complex)
        t = self.grid.nodes
        re = np.interp(points, t, self.values.real, left=0.0, right=0.0)
        im = np.interp(points, t, self.values.imag, left=0.0, right=0.0)
        return re + 1j * im

    def __add__(self, other: "GridFunction") -> "GridFunction":
        _check_same_grid(self.grid, other.grid)
        return GridFunction(self.grid, self.values + other.values)

    def scale(self, c: complex) -> "GridFunction":
        return GridFunction(self.grid, c * self.values)


@dataclass(frozen=True, eq=False)
class FreqGridFunction:
    """Samples of a function of frequency at ``grid.frequencies``."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = _frozen(self.values)
        if vals.shape != (self.grid.N,):
            raise ConfigurationError(
                f"expected {self.grid.N} samples, got shape {vals.shape}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_symbol(cls, grid: Grid, symbol: Callable) -> "FreqGridFunction":
        return cls(grid, symbol(grid.frequencies))

    @property
    def xi(self) -> np.ndarray:
        return self.grid.frequencies

    def __add__(self, other: "FreqGridFunction") -> "FreqGridFunction":
        _check_same_grid(self.grid, other.grid)
        return FreqGridFunction(self.grid, self.values + other.values)


def _check_same_grid(g1: Grid, g2: Grid):
    if g1 != g2:
        raise ConfigurationError(f"grid mismatch: {g1} vs {g2}")


def _alternating(grid: Grid) -> np.ndarray:
    # exp(i R xi_j) = (-1)^j
    return np.where(grid.freq_indices % 2, -1.0, 1.0)


def dft_forward(f: GridFunction) -> FreqGridFunction:
    g = f.grid
    spec = np.fft.fftshift(np.fft.fft(f.values))
    return FreqGridFunction(g, g.spacing * _alternating(g) * spec)


def dft_inverse(F: FreqGridFunction) -> GridFunction:
    g = F.grid
    vals = np.fft.ifft(np.fft.ifftshift(_alternating(g) * F.values)) / g.spacing
    return GridFunction(g, vals)


Sampled = Union[GridFunction, FreqGridFunction]


def _weight(f: Sampled) -> float:
    if isinstance(f, GridFunction):
        return f.grid.spacing
    if isinstance(f, FreqGridFunction):
        return f.grid.freq_spacing
    raise TypeError(f"expected GridFunction or FreqGridFunction, got {type(f).__name__}")


def norm_l2(f: Sampled) -> float:
    return math.sqrt(_weight(f) * float(np.sum(np.abs(f.values) ** 2)))


def norm_l1(f: Sampled) -> float:
    return _weight(f) * float(np.sum(np.abs(f.values)))


def norm_inf(f: Sampled) -> float:
    return float(np.max(np.abs(f.values)))


class Indicator:
    """Indicator of ``[lo, hi]`` taking the value 1/2 exactly at the endpoints.

    The half value at a jump is the trapezoid-consistent choice, so samples on a
    grid whose nodes hit an endpoint integrate to ``hi - lo`` exactly.
    """

    def __init__(self, lo: float, hi: float):
        if not hi > lo:
            raise ConfigurationError(f"empty interval [{lo}, {hi}]")
        self.lo = float(lo)
        self.hi = float(hi)

    @property
    def l2_norm(self) -> float:
        return math.sqrt(self.hi - self.lo)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        inside = ((t > self.lo) & (t < self.hi)).astype(float)
        return inside + 0.5 * ((t == self.lo) | (t == self.hi))

    def __repr__(self):
        return f"Indicator({self.lo}, {self.hi})"


def indicator(grid: Grid, lo: float, hi: float) -> GridFunction:
    return GridFunction.from_function(grid, Indicator(lo, hi))


# -- CSV exchange ---------------------------------------------------------------

def fmt(x: float) -> str:
    return f"{x:.15g}"


def write_grid_function(path, f: GridFunction) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "re", "im"])
        for t, v in zip(f.grid.nodes, f.values):
            w.writerow([fmt(t), fmt(v.real), fmt(v.imag)])


def write_freq_function(path, F: FreqGridFunction) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["xi", "re", "im"])
        for xi, v in zip(F.grid.frequencies, F.values):
            w.writerow([fmt(xi), fmt(v.real), fmt(v.imag)])


def _read_columns(path, first: str):
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"file not found: {path}")
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != [first, "re", "im"]:
        raise ConfigurationError(f"{path}: expected header '{first},re,im'")
    try:
        data = np.array([[float(c) for c in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise ConfigurationError(f"{path}: {exc}") from None
    if data.ndim != 2 or data.shape[1] != 3:
        raise ConfigurationError(f"{path}: expected three columns")
    return data[:, 0], data[:, 1] + 1j * data[:, 2]


def _grid_from_nodes(t: np.ndarray, path) -> Grid:
    N = len(t)
    if N < 4 or N % 2:
        raise ConfigurationError(f"{path}: need an even number >= 4 of rows, got {N}")
    grid = Grid(-float(t[0]), N)
    if not np.allclose(t, grid.nodes, rtol=0, atol=1e-9 * grid.R):
        raise ConfigurationError(f"{path}: nodes are not a symmetric uniform grid on [-R, R)")
    return grid


def read_grid_function(path) -> GridFunction:
    t, vals = _read_columns(path, "t")
    return GridFunction(_grid_from_nodes(t, path), vals)


def read_freq_function(path) -> FreqGridFunction:
    xi, vals = _read_columns(path, "xi")
    N = len(xi)
    if N < 4 or N % 2:
        raise ConfigurationError(f"{path}: need an even number >= 4 of rows, got {N}")
    dxi = xi[1] - xi[0]
    grid = Grid(math.pi / dxi, N)
    if not np.allclose(xi, grid.frequencies, rtol=0, atol=1e-9 * grid.nyquist):
        raise ConfigurationError(f"{path}: frequencies do not match a grid")
    return FreqGridFunction(grid, vals)


def frequency_derivative(F: FreqGridFunction) -> FreqGridFunction:
    """Second-order centered differences in xi (one-sided at the two ends)."""
    return FreqGridFunction(F.grid, np.gradient(F.values, F.grid.freq_spacing, edge_order=2))
