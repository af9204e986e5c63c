"""Non-submodularity parameters and the approximation-ratio formulas.

``gamma`` (diminishing-return ratio) is the largest value in [0, 1] with
``gain_e(T) <= gain_e(S) / gamma`` and ``alpha`` (curvature) the smallest
value in [0, 1] with ``gain_e(T) >= (1 - alpha) gain_e(S)``, both over all
``S <= T`` whose difference fits inside the group budgets and all
``e`` outside ``T``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import get_kernels
from .errors import GammaZero, InstanceTooLarge
from .matroid import PartitionMatroid

ENUMERATION_CAP = 10**7
ALPHA_ZERO = 1e-9


@dataclass(frozen=True)
class NonSubmodParams:
    gamma: float
    alpha: float
    provenance: str = "exact"
    degenerate: bool = False

    def __post_init__(self):
        if not (0.0 <= self.gamma <= 1.0 and 0.0 <= self.alpha <= 1.0):
            raise ValueError(f"parameters out of [0, 1]: {self}")


def clamp01(x: float) -> float:
    return min(1.0, max(0.0, float(x)))


def value_table(o, n: int) -> np.ndarray:
    """``o`` evaluated on every subset of ``range(n)``, indexed by bitmask."""
    table = np.empty(1 << n)
    for mask in range(1 << n):
        table[mask] = o.value(frozenset(e for e in range(n) if mask >> e & 1))
    return table


def exact_gamma_alpha(m: PartitionMatroid, o, *, cap: int = ENUMERATION_CAP,
                      zero_tol: float | None = None, backend: str | None = None
                      ) -> NonSubmodParams:
    """Exact ``(gamma, alpha)`` by enumerating every qualifying triple.

    Cost is ``3**n * n``; instances above ``cap`` raise
    :class:`InstanceTooLarge`.  Gains at or below ``zero_tol`` (default
    ``1e-12`` times the largest objective magnitude) count as zero, and a
    triple where both gains are zero constrains neither parameter.
    """
    n = m.n
    if 3**n * n > cap:
        raise InstanceTooLarge(f"3^{n} * {n} triples exceed the cap of {cap}")
    table = value_table(o, n)
    if zero_tol is None:
        zero_tol = 1e-12 * max(1.0, float(np.max(np.abs(table))))
    k = get_kernels(backend)
    gmin, amin = k.gamma_alpha_scan(
        np.ascontiguousarray(table, dtype=np.float64),
        np.ascontiguousarray(m.group_of, dtype=np.int64),
        np.asarray(m.budgets, dtype=np.int64),
        float(zero_tol),
    )
    gamma = 1.0 if math.isinf(gmin) else clamp01(gmin)
    alpha = 0.0 if math.isinf(amin) else clamp01(1.0 - amin)
    return NonSubmodParams(gamma, alpha, "exact")


def iter_triples(m: PartitionMatroid):
    """Yield every qualifying ``(S, T, e)`` as bitmasks (for auditing)."""
    n = m.n
    for T in range(1 << n):
        S = T
        while True:
            D = T ^ S
            counts = [0] * m.k
            for e in range(n):
                if D >> e & 1:
                    counts[m.group_of[e]] += 1
            if all(c <= b for c, b in zip(counts, m.budgets)):
                for e in range(n):
                    if not T >> e & 1:
                        yield S, T, e
            if S == 0:
                break
            S = (S - 1) & T


def prob_beta(gamma_p: float, alpha_p: float, n_bar: int) -> float:
    if gamma_p <= 0:
        return math.inf
    return (1.0 / gamma_p + alpha_p - 1.0) * (1.0 - 1.0 / (n_bar + 2))


def prob_ratio(gamma_p: float, alpha_p: float, n_bar: int) -> float:
    """Approximation factor ``beta + 1`` of the power-law algorithms;
    ``inf`` when ``gamma' = 0``."""
    return prob_beta(gamma_p, alpha_p, n_bar) + 1.0


def _r2(scaled_gamma: float, alpha: float, b: int, b_hat: int) -> float:
    if alpha < ALPHA_ZERO:
        return scaled_gamma * b_hat / b
    return (1.0 - (1.0 - alpha * scaled_gamma / b) ** b_hat) / alpha


def greedy_ratios(gamma: float, alpha: float, b: int, b_hat: int) -> tuple[float, float]:
    if gamma <= 0:
        raise GammaZero("greedy ratios need gamma > 0")
    r1 = gamma / (1.0 + gamma * alpha)
    return r1, _r2(gamma, alpha, b, b_hat)


def thrgreedy_ratios(gamma: float, alpha: float, eps: float, b: int, b_hat: int
                     ) -> tuple[float, float]:
    if gamma <= 0:
        raise GammaZero("threshold-greedy ratios need gamma > 0")
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    r1 = gamma * (1 - eps) ** 2 / (1.0 + gamma * alpha * (1 - eps))
    return r1, _r2(gamma * (1 - eps), alpha, b, b_hat)


@dataclass(frozen=True)
class RatioReport:
    beta: float
    prob_ratio: float
    greedy_r1: float
    greedy_r2: float
    thr_r1: float
    thr_r2: float

    @property
    def greedy_ratio(self) -> float:
        return 1.0 / max(self.greedy_r1, self.greedy_r2)

    @property
    def thrgreedy_ratio(self) -> float:
        return 1.0 / max(self.thr_r1, self.thr_r2)


def ratio_report(params: NonSubmodParams, m: PartitionMatroid, eps: float = 0.5
                 ) -> RatioReport:
    """All approximation ratios for ``params`` on ``m``.  With ``gamma = 0`` every
    guarantee is vacuous: r-terms are 0 and ratios infinite."""
    g, a = params.gamma, params.alpha
    beta = prob_beta(g, a, m.n_bar)
    if g <= 0:
        return RatioReport(beta, math.inf, 0.0, 0.0, 0.0, 0.0)
    gr = greedy_ratios(g, a, m.b, m.b_hat)
    tr = thrgreedy_ratios(g, a, eps, m.b, m.b_hat)
    return RatioReport(beta, beta + 1.0, *gr, *tr)
