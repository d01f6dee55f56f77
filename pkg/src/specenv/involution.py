"""Grid discretizations of the reflection perturbation and the operators built from it.

All operators act on samples at ``grid.nodes``.  Integral operators keep their
kernel as a row generator so the action and the Hilbert-Schmidt norm can be
computed in blocks without ever holding the full N x N kernel; the dense
kernel is produced on request.

Kernels that jump across a line of grid nodes (``psi_a`` jumps by ``i`` at 0) store
the midpoint value there.  That keeps the action second-order accurate, but the
plain sum of ``|k|^2`` then misses ``|J|^2 / 4`` per node of the jump line, so the
Hilbert-Schmidt norm adds that amount back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ConfigurationError
from .fourier import Grid, GridFunction, norm_l2
from .windows import TimeFunction, phi, psi

BLOCK_ROWS = 256


class KernelOperator:
    """Linear operator on grid samples; ``kind`` is integral, pointwise, multiplier or dense."""

    kind: str = ""
    grid: Grid

    def apply(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_matrix(self) -> np.ndarray:
        """Dense N x N matrix of the action."""
        raise NotImplementedError

    def hs_norm(self) -> float:
        raise NotImplementedError

    def __call__(self, x):
        if isinstance(x, GridFunction):
            return GridFunction(self.grid, self.apply(x.values))
        return self.apply(np.asarray(x, dtype=complex))


@dataclass(frozen=True, eq=False)
class IntegralOperator(KernelOperator):
    """(Kx)_j = dt * sum_k k(s_j, u_k) x_k with kernel rows supplied by ``rows(j0, j1)``."""

    grid: Grid
    rows: Callable[[int, int], np.ndarray] = field(repr=False)
    jump_weight: Optional[np.ndarray] = field(default=None, repr=False)
    jump: complex = 0.0
    name: str = ""
    kind: str = "integral"

    @property
    def weight(self) -> float:
        return self.grid.spacing

    def blocks(self):
        N = self.grid.N
        for j0 in range(0, N, BLOCK_ROWS):
            j1 = min(N, j0 + BLOCK_ROWS)
            yield j0, j1, self.rows(j0, j1)

    def kernel(self) -> np.ndarray:
        N = self.grid.N
        out = np.empty((N, N), dtype=complex)
        for j0, j1, blk in self.blocks():
            out[j0:j1] = blk
        return out

    def to_matrix(self) -> np.ndarray:
        out = self.kernel()
        out *= self.weight
        return out

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        out = np.empty(x.shape, dtype=complex)
        for j0, j1, blk in self.blocks():
            out[j0:j1] = blk @ x
        return self.weight * out

    def hs_sq_correction(self) -> float:
        if self.jump_weight is None or self.jump == 0:
            return 0.0
        w = np.abs(self.jump_weight) ** 2
        return self.weight ** 2 * float(np.sum(w)) * abs(self.jump) ** 2 / 4

    def hs_norm(self) -> float:
        total = 0.0
        for _, _, blk in self.blocks():
            total += float(np.sum(blk.real ** 2 + blk.imag ** 2))
        return math.sqrt(self.weight ** 2 * total + self.hs_sq_correction())


@dataclass(frozen=True, eq=False)
class PointwiseOperator(KernelOperator):
    """(Px)_k = w_k x_{index_k}."""

    grid: Grid
    weights: np.ndarray
    index: np.ndarray
    kind: str = "pointwise"

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.weights * np.asarray(x)[self.index]

    def apply_rows(self, M: np.ndarray) -> np.ndarray:
        """P @ M without forming P."""
        return self.weights[:, None] * M[self.index]

    def to_matrix(self) -> np.ndarray:
        N = self.grid.N
        out = np.zeros((N, N), dtype=complex)
        out[np.arange(N), self.index] = self.weights
        return out

    def hs_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.weights) ** 2)))


@dataclass(frozen=True, eq=False)
class MultiplierOperator(KernelOperator):
    """Fourier multiplier: F^-1 diag(m(xi_j)) F."""

    grid: Grid
    symbol: np.ndarray
    kind: str = "multiplier"

    def _fft_order(self):
        return np.fft.ifftshift(self.symbol)

    def apply(self, x: np.ndarray) -> np.ndarray:
        # the alternating signs and dt factors of the transform cancel in F^-1 m F
        x = np.asarray(x, dtype=complex)
        m = self._fft_order()
        if x.ndim == 2:
            return np.fft.ifft(m[:, None] * np.fft.fft(x, axis=0), axis=0)
        return np.fft.ifft(m * np.fft.fft(x))

    def to_matrix(self) -> np.ndarray:
        return self.apply(np.eye(self.grid.N, dtype=complex))

    def hs_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.symbol) ** 2)))


@dataclass(frozen=True, eq=False)
class DenseOperator(KernelOperator):
    grid: Grid
    matrix: np.ndarray
    kind: str = "dense"

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(x, dtype=complex)

    def to_matrix(self) -> np.ndarray:
        return self.matrix

    def hs_norm(self) -> float:
        return float(np.linalg.norm(self.matrix))


# -- constructors ---------------------------------------------------------------------

def reflection_operator(v: GridFunction) -> PointwiseOperator:
    """(Vx)(t) = v(t) x(-t); the node -R has no mirror on the grid and is set to 0."""
    w = np.array(v.values, dtype=complex)
    w[0] = 0.0
    return PointwiseOperator(v.grid, w, v.grid.reflection_index())


def _half_grid(grid: Grid, centered: bool) -> np.ndarray:
    # 2N - 1 points spaced dt/2: -R .. R - dt (sums) or -(N-1)dt/2 .. (N-1)dt/2 (differences)
    m = np.arange(2 * grid.N - 1)
    if centered:
        return (m - (grid.N - 1)) * grid.spacing / 2
    return -grid.R + m * grid.spacing / 2


def _evaluate(h, points) -> np.ndarray:
    return np.asarray(h(points), dtype=complex)


def smoothed_kernel(h: Callable, v: GridFunction) -> IntegralOperator:
    """T(h)V with kernel k(s, u) = h((s + u)/2) v((s - u)/2) / 2."""
    grid = v.grid
    N = grid.N
    h_sum = _evaluate(h, _half_grid(grid, centered=False))
    v_diff = v.at(_half_grid(grid, centered=True))

    def rows(j0, j1):
        J = np.arange(j0, j1)[:, None]
        K = np.arange(N)[None, :]
        return 0.5 * h_sum[J + K] * v_diff[J - K + N - 1]

    # the jump of h at 0 sits on j + k = N, where v((s - u)/2) = v(s_j)
    jump = getattr(h, "jump", 0.0)
    jw = 0.5 * v.at(grid.nodes[1:]) if jump else None
    return IntegralOperator(grid, rows, jw, jump, name=f"T({getattr(h, 'name', 'h')})V")


def sandwich_kernel(h: Callable, v: GridFunction) -> IntegralOperator:
    """V T(h) V with kernel k(s, u) = v(s) h((u - s)/2) v(-(s + u)/2) / 2."""
    grid = v.grid
    N = grid.N
    h_diff = _evaluate(h, _half_grid(grid, centered=True))
    v_neg = v.at(-_half_grid(grid, centered=False))
    v_node = np.array(v.values, dtype=complex)

    def rows(j0, j1):
        J = np.arange(j0, j1)[:, None]
        K = np.arange(N)[None, :]
        return 0.5 * v_node[j0:j1, None] * h_diff[K - J + N - 1] * v_neg[J + K]

    jump = getattr(h, "jump", 0.0)
    jw = 0.5 * v_node * v.at(-grid.nodes) if jump else None
    return IntegralOperator(grid, rows, jw, jump, name=f"VT({getattr(h, 'name', 'h')})V")


def differentiation_operator(grid: Grid) -> MultiplierOperator:
    """A = -i d/dt as the multiplier xi."""
    return MultiplierOperator(grid, grid.frequencies.astype(complex))


def resolvent_A(z: complex, grid: Grid) -> MultiplierOperator:
    """R(z; A) as the multiplier 1/(xi - z), so (A - z) R = I."""
    z = complex(z)
    if abs(z.imag) <= 1e-9:
        raise ConfigurationError(f"z = {z} is too close to the real axis")
    return MultiplierOperator(grid, 1.0 / (grid.frequencies - z))


def resolvent_kernel(lam: float) -> Callable:
    """Inverse transform of 1/(xi - i lam) for lam > 0: i exp(-lam t) for t > 0.

    The value at the jump t = 0 is the midpoint i/2.
    """
    def f(t):
        t = np.asarray(t, dtype=float)
        pos = np.exp(-lam * np.where(t > 0, t, 0.0))
        return 1j * np.where(t > 0, pos, np.where(t == 0, 0.5, 0.0))
    return f


def vr_operator(v: GridFunction, lam: float) -> IntegralOperator:
    """V R(i lam; A) with kernel v(s) f(-s - u), f the resolvent kernel."""
    if not lam > 0:
        raise ConfigurationError(f"lambda must be positive, got {lam}")
    grid = v.grid
    N = grid.N
    # -s_j - u_k = 2R - (j + k) dt
    f_vals = resolvent_kernel(lam)(2 * grid.R - np.arange(2 * N - 1) * grid.spacing)
    v_node = np.array(v.values, dtype=complex)

    def rows(j0, j1):
        J = np.arange(j0, j1)[:, None]
        K = np.arange(N)[None, :]
        return v_node[j0:j1, None] * f_vals[J + K]

    return IntegralOperator(grid, rows, v_node, 1j, name=f"VR(i{lam:g})")


def vr_smallness(v: GridFunction, lam: float) -> float:
    """Hilbert-Schmidt norm of V R(i lam; A); tends to ||v||_2 / sqrt(2 lam)."""
    return vr_operator(v, lam).hs_norm()


def vr_predicted(v_norm: float, lam: float) -> float:
    return v_norm / math.sqrt(2 * lam)


# -- predicted norms ----------------------------------------------------------------

def smoothed_hs_predicted(h: TimeFunction, v_norm: float) -> float:
    """||T(h)V||_2 = ||h||_2 ||v||_2 / sqrt 2."""
    return h.l2 * v_norm / math.sqrt(2)


def sandwich_hs_bound(h: TimeFunction, v_norm: float) -> float:
    """||V T(h) V||_2 <= ||h||_inf ||v||_2^2 / sqrt 2."""
    return h.sup * v_norm ** 2 / math.sqrt(2)


# -- commutator identity ----------------------------------------------------------

def sobolev_norm(x: np.ndarray, grid: Grid) -> float:
    """Discrete ||x||_2 + ||Ax||_2."""
    x = np.asarray(x, dtype=complex)
    ax = differentiation_operator(grid).apply(x)
    return _l2(x, grid) + _l2(ax, grid)


def _l2(x: np.ndarray, grid: Grid) -> float:
    return math.sqrt(grid.spacing * float(np.sum(np.abs(x) ** 2)))


def commutator_residual(v: GridFunction, a: float, x: np.ndarray) -> float:
    """||A K_psi x - K_psi A x - V x + K_phi x||_2 / ||x||_{W^{1,2}}.

    K_h is the smoothed kernel of h = psi_a, phi_a; the expression vanishes
    identically for the continuous operators.
    """
    grid = v.grid
    x = np.asarray(x, dtype=complex)
    A = differentiation_operator(grid)
    k_psi = smoothed_kernel(psi(a), v)
    k_phi = smoothed_kernel(phi(a), v)
    V = reflection_operator(v)
    r = A.apply(k_psi.apply(x)) - k_psi.apply(A.apply(x)) - V.apply(x) + k_phi.apply(x)
    denom = sobolev_norm(x, grid)
    if denom == 0:
        raise ConfigurationError("zero test vector")
    return _l2(r, grid) / denom
