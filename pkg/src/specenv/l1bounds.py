"""L1 norm of a function from the L2 norms of its transform and the transform's derivative.

For f in L2 with transform in W^{1,2},

    ||f||_1 <= (1/sqrt 2) (sqrt(a) ||F f||_2 + ||(F f)'||_2 / sqrt(a))     for every a > 0,

and the right side is smallest at a = ||(F f)'||_2 / ||F f||_2, where it equals
sqrt(2 ||F f||_2 ||(F f)'||_2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, PrecisionError
from .fourier import (FreqGridFunction, GridFunction, dft_forward, frequency_derivative,
                      norm_l1, norm_l2)

EDGE_DECAY = 1e-8
EDGE_FRACTION = 1.0 / 64
SLACK = 1e-6


@dataclass(frozen=True)
class L1Bound:
    bound: float
    a_opt: float
    l2_hat: float
    l2_hat_deriv: float


def split_bound(a: float, l2_hat: float, l2_hat_deriv: float) -> float:
    """The bound before optimizing over ``a``."""
    return (math.sqrt(a) * l2_hat + l2_hat_deriv / math.sqrt(a)) / math.sqrt(2)


def l1_bound(fhat: FreqGridFunction) -> L1Bound:
    n0 = norm_l2(fhat)
    n1 = norm_l2(frequency_derivative(fhat))
    if not (n0 > 0 and n1 > 0):
        raise ConfigurationError("transform and its derivative must be nonzero")
    if not (math.isfinite(n0) and math.isfinite(n1)):
        raise PrecisionError("non-finite quadrature norm")
    return L1Bound(math.sqrt(2 * n0 * n1), n1 / n0, n0, n1)


def edge_magnitude(f: GridFunction) -> float:
    """Largest |f| over the outer 1/64 of the window on either side."""
    t = f.grid.nodes
    edge = np.abs(t) >= f.grid.R * (1 - EDGE_FRACTION)
    return float(np.max(np.abs(f.values[edge])))


@dataclass(frozen=True)
class L1Check:
    l1: float
    bound: float
    holds: bool
    a_opt: float
    l2_hat: float
    l2_hat_deriv: float

    def as_dict(self) -> dict:
        return {"l1": self.l1, "l2_hat": self.l2_hat, "l2_hat_deriv": self.l2_hat_deriv,
                "bound": self.bound, "a_opt": self.a_opt, "holds": self.holds}


def l1_bound_check(f: GridFunction) -> L1Check:
    """Evaluate both sides of ||f||_1^2 <= 2 ||F f||_2 ||(F f)'||_2 on the grid."""
    if not np.any(f.values):
        raise ConfigurationError("zero input: the optimal parameter is undefined")
    edge = edge_magnitude(f)
    if edge > EDGE_DECAY:
        raise PrecisionError(
            f"|f| = {edge:.3g} near the grid edge exceeds {EDGE_DECAY:g}; enlarge R")
    b = l1_bound(dft_forward(f))
    l1 = norm_l1(f)
    holds = l1 * l1 <= b.bound ** 2 * (1 + SLACK)
    return L1Check(l1, b.bound, bool(holds), b.a_opt, b.l2_hat, b.l2_hat_deriv)
