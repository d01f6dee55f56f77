"""Similarity transform of A - V to A - B with B Hilbert-Schmidt, and spectrum envelopes.

With K_h the smoothed kernel of h and S = V K_psi,

    U = I + K_psi,      B = U^-1 (S + K_phi) = K_phi + U^-1 (S - K_psi K_phi),

and ``(A - V) U = U (A - B)``.  For a self-adjoint A and Hilbert-Schmidt B the
spectrum of A + B lies in ``{|Im z| <= f(Re z)}`` where ``f`` is built from the
tail sequence ``b_n = ||B - E_n B E_n||_2`` of B outside the spectral window
``[-n, n]`` of A.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigurationError, NumericalFailure
from .fourier import Grid, GridFunction, norm_l2
from .involution import (DenseOperator, differentiation_operator, reflection_operator,
                         smoothed_kernel)
from .windows import phi, psi

A_STAR_FACTOR = 4 * (1 - math.log(2)) / math.pi
FORM_TOL = 1e-8


def a_star(v) -> float:
    """Window parameter at which ||T(psi_a) V||_2 = 1/2; accepts a GridFunction or ||v||_2."""
    nv = norm_l2(v) if isinstance(v, GridFunction) else float(v)
    if not nv > 0:
        raise ConfigurationError("v must be nonzero")
    return A_STAR_FACTOR * nv * nv


def default_probe(grid: Grid) -> np.ndarray:
    """Unit Gaussian bump used when no test vector is supplied."""
    return np.exp(-grid.nodes ** 2 / 2).astype(complex)


@dataclass(eq=False)
class SimilarityReport:
    grid: Grid
    v_norm: float
    a_star: float
    hs_psiV: float
    U: DenseOperator = field(repr=False)
    U_inv: DenseOperator = field(repr=False)
    B: DenseOperator = field(repr=False)
    b_hs: float
    u_inv_minus_i_hs: float
    inverse_residual: float
    form_gap: Optional[float]
    residual: float
    v: GridFunction = field(repr=False)

    def as_dict(self) -> dict:
        return {"a_star": self.a_star, "hs_psiV": self.hs_psiV, "b_hs": self.b_hs,
                "u_inv_minus_i_hs": self.u_inv_minus_i_hs,
                "inverse_residual": self.inverse_residual, "form_gap": self.form_gap,
                "residual": self.residual, "v_norm": self.v_norm}


def _frobenius_minus_identity(M: np.ndarray) -> float:
    d = M.diagonal().copy()
    np.fill_diagonal(M, d - 1)
    out = float(np.linalg.norm(M))
    np.fill_diagonal(M, d)
    return out


def build_similarity(v: GridFunction, a: Optional[float] = None,
                     check_forms: bool = True) -> SimilarityReport:
    """Assemble U, U^-1 and B densely on ``v.grid``.

    ``a`` defaults to :func:`a_star`.  With ``check_forms`` the first form of B
    is also assembled and the largest entry of the difference is recorded.
    """
    grid = v.grid
    N = grid.N
    a = a_star(v) if a is None else float(a)
    k_psi = smoothed_kernel(psi(a), v)
    hs_psi = k_psi.hs_norm()
    if not hs_psi < 1:
        raise NumericalFailure(f"||T(psi_a)V||_2 = {hs_psi:.6g} >= 1; U may not be invertible")
    V = reflection_operator(v)

    m_psi = k_psi.to_matrix()
    m_phi = smoothed_kernel(phi(a), v).to_matrix()
    S = V.apply_rows(m_psi)
    D = None
    if check_forms:
        D = m_psi @ m_phi
        np.subtract(S, D, out=D)
    U = m_psi
    U[np.diag_indices(N)] += 1
    del m_psi
    try:
        U_inv = np.linalg.inv(U)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"U is singular: {exc}") from None
    if not np.all(np.isfinite(U_inv)):
        raise NumericalFailure(f"U is numerically singular (cond ~ {np.linalg.cond(U):.3g})")

    form_gap = None
    if check_forms:
        B1 = U_inv @ D
        del D
        B1 += m_phi
    S += m_phi
    del m_phi
    B = U_inv @ S
    del S
    if check_forms:
        form_gap = float(np.max(np.abs(B - B1)))
        del B1

    probe = np.random.default_rng(0).standard_normal((N, 4))
    inv_res = float(np.linalg.norm(U_inv @ (U @ probe) - probe) / np.linalg.norm(probe))

    report = SimilarityReport(
        grid=grid, v_norm=norm_l2(v), a_star=a, hs_psiV=hs_psi,
        U=DenseOperator(grid, U), U_inv=DenseOperator(grid, U_inv), B=DenseOperator(grid, B),
        b_hs=float(np.linalg.norm(B)), u_inv_minus_i_hs=_frobenius_minus_identity(U_inv),
        inverse_residual=inv_res, form_gap=form_gap, residual=math.nan, v=v)
    report.residual = similarity_residual(report, default_probe(grid))
    return report


def similarity_residual(report: SimilarityReport, x) -> float:
    """||(A - V) U x - U (A - B) x||_2 / (||x||_2 + ||A x||_2)."""
    grid = report.grid
    x = np.asarray(x.values if isinstance(x, GridFunction) else x, dtype=complex)
    A = differentiation_operator(grid)
    V = reflection_operator(report.v)
    ax = A.apply(x)
    denom = _l2(x, grid) + _l2(ax, grid)
    if denom == 0:
        raise ConfigurationError("zero test vector")
    ux = report.U.apply(x)
    lhs = A.apply(ux) - V.apply(ux)
    rhs = report.U.apply(ax - report.B.apply(x))
    return _l2(lhs - rhs, grid) / denom


def _l2(x, grid: Grid) -> float:
    return math.sqrt(grid.spacing * float(np.sum(np.abs(x) ** 2)))


# -- envelopes ----------------------------------------------------------------------

def _validate(A_diag, B):
    A_diag = np.asarray(A_diag)
    if np.iscomplexobj(A_diag):
        if np.any(A_diag.imag != 0):
            raise ConfigurationError("A_diag must be real")
        A_diag = A_diag.real
    A_diag = A_diag.astype(float).ravel()
    B = np.asarray(B, dtype=complex)
    if B.shape != (A_diag.size, A_diag.size):
        raise ConfigurationError(
            f"B has shape {B.shape}, expected {(A_diag.size, A_diag.size)}")
    if not (np.all(np.isfinite(A_diag)) and np.all(np.isfinite(B))):
        raise ConfigurationError("A_diag and B must be finite")
    return A_diag, B


def n_max(A_diag) -> int:
    return int(math.ceil(float(np.max(np.abs(A_diag))))) + 1 if np.size(A_diag) else 1


def tail_sequence(A_diag, B) -> np.ndarray:
    """b_n = ||B - E_n B E_n||_2 for n = 1..n_max, E_n the projection onto |A| <= n.

    Computed from sums of nonnegative terms only, so small tails carry no
    cancellation error.
    """
    A_diag, B = _validate(A_diag, B)
    m = A_diag.size
    order = np.argsort(np.abs(A_diag), kind="stable")
    P = np.abs(B[np.ix_(order, order)]) ** 2
    # with the sorted order E_n keeps the first c indices
    row_tail = np.concatenate([np.cumsum(P.sum(axis=1)[::-1])[::-1], [0.0]])
    upper = np.cumsum(P, axis=0)                       # upper[c-1, k] = sum_{j<c} P[j, k]
    upper = np.cumsum(upper[:, ::-1], axis=1)[:, ::-1]  # ... summed over k' >= k
    sorted_abs = np.abs(A_diag[order])
    ns = np.arange(1, n_max(A_diag) + 1)
    b = np.empty(ns.size)
    for i, n in enumerate(ns):
        c = int(np.searchsorted(sorted_abs, n, side="right"))
        corner = upper[c - 1, c] if 0 < c < m else 0.0
        b[i] = math.sqrt(row_tail[c] + corner)
    return b


def head_norms(A_diag, B) -> np.ndarray:
    """||E_n B E_n||_2 for n = 1..n_max, by direct masking."""
    A_diag, B = _validate(A_diag, B)
    out = []
    for n in range(1, n_max(A_diag) + 1):
        E = np.abs(A_diag) <= n
        out.append(float(np.linalg.norm(B[np.ix_(E, E)])))
    return np.array(out)


@dataclass(frozen=True)
class Envelope:
    """Even step function f with spec(A + B) inside {|Im z| <= f(Re z)}.

    For |r| > n + 2||B||_2 the region outside the envelope only needs
    |Im z| > 3 b_n; ``f(r)`` takes the largest such n, otherwise 2 ||B||_2.
    """

    hs_total: float
    b: np.ndarray

    def __call__(self, r):
        r = np.abs(np.asarray(r, dtype=float))
        cap = 2 * self.hs_total
        # largest integer n with n < |r| - 2||B||
        n = np.ceil(r - cap).astype(np.int64) - 1
        nb = self.b.size
        idx = np.clip(n, 1, nb) - 1
        tail = 3 * self.b[idx] if nb else np.zeros_like(r)
        out = np.where(n >= 1, np.minimum(cap, tail), cap)
        return out if out.ndim else float(out)

    @property
    def l2_tail(self) -> float:
        return float(np.sqrt(np.sum(self.b ** 2)))

    def table(self, step: float = 0.05) -> np.ndarray:
        """Samples (r, f(r)) on a uniform grid covering every breakpoint and beyond."""
        r_max = self.b.size + 2 * self.hs_total + 1
        k = int(math.ceil(r_max / step))
        r = np.arange(-k, k + 1) * step
        return np.column_stack([r, self(r)])


def envelope(A_diag, B) -> Envelope:
    A_diag, B = _validate(A_diag, B)
    b = tail_sequence(A_diag, B)
    return Envelope(float(np.linalg.norm(B)), b)


@dataclass(frozen=True)
class Containment:
    violations: int
    margin: float
    eigs: np.ndarray

    def as_dict(self) -> dict:
        return {"violations": self.violations, "margin": self.margin}


def check_containment(A_diag, B, env: Envelope, eigs=None) -> Containment:
    """Count eigenvalues of diag(A) + B outside the envelope.

    ``margin`` is the smallest ``f(Re z) - |Im z|`` over the spectrum; it is
    negative exactly when something leaks out.
    """
    A_diag, B = _validate(A_diag, B)
    if eigs is None:
        try:
            eigs = np.linalg.eigvals(np.diag(A_diag.astype(complex)) + B)
        except np.linalg.LinAlgError as exc:
            raise NumericalFailure(f"eigensolver failed: {exc}") from None
    f = env(eigs.real)
    im = np.abs(eigs.imag)
    violations = int(np.sum(im > f * (1 + 1e-9) + 1e-9))
    margin = float(np.min(f - im)) if eigs.size else math.inf
    return Containment(violations, margin, np.asarray(eigs))


def random_trial(seed: int, m: int = 200, hs: float = 1.0, spread: float = 20.0):
    """Random A_diag uniform in [-spread, spread] and complex Gaussian B scaled to ||B||_2 = hs."""
    rng = np.random.default_rng(seed)
    A_diag = rng.uniform(-spread, spread, m)
    B = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    B *= hs / np.linalg.norm(B)
    return A_diag, B


def run_trial(seed: int, m: int = 200, hs: float = 1.0) -> Containment:
    A_diag, B = random_trial(seed, m, hs)
    return check_containment(A_diag, B, envelope(A_diag, B))


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("SPECENV_THREADS", "1")))
    except ValueError:
        raise ConfigurationError("SPECENV_THREADS must be an integer") from None


def run_trials(seeds, m: int = 200, hs_values=(0.1, 1.0, 5.0)) -> list:
    """One trial per seed, cycling through ``hs_values``; results follow seed order."""
    seeds = list(seeds)
    jobs = [(s, hs_values[i % len(hs_values)]) for i, s in enumerate(seeds)]
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        return list(pool.map(lambda job: run_trial(job[0], m, job[1]), jobs))


@dataclass(frozen=True)
class OperatorEnvelope:
    env: Envelope
    eigs: np.ndarray
    containment: Containment
    report: Optional[SimilarityReport] = field(default=None, repr=False)


def to_fourier_basis(B: np.ndarray) -> np.ndarray:
    """W B W^* for the unitary DFT W; A becomes diag(ifftshift(xi))."""
    return np.fft.ifft(np.fft.fft(B, axis=0), axis=1)


def operator_envelope(v: GridFunction, report: Optional[SimilarityReport] = None,
                      eigs: bool = True) -> OperatorEnvelope:
    """Envelope of the finite section of A - B, with containment of its eigenvalues.

    The finite section only approximates the operator, so containment here is
    advisory.
    """
    grid = v.grid
    A_diag = np.fft.ifftshift(grid.frequencies)
    if not np.any(v.values):
        BF = np.zeros((grid.N, grid.N), dtype=complex)
    else:
        report = report or build_similarity(v, check_forms=False)
        BF = to_fourier_basis(report.B.matrix)
    # the spectrum of A - B is that of diag(A) + (-B); tails are unchanged by the sign
    np.negative(BF, out=BF)
    env = envelope(A_diag, BF)
    if eigs:
        ev = np.linalg.eigvals(np.diag(A_diag.astype(complex)) + BF)
    else:
        ev = np.array([], dtype=complex)
    cont = check_containment(A_diag, BF, env, eigs=ev)
    return OperatorEnvelope(env, ev, cont, report)
