"""Objective oracles: the black-box set functions the algorithms maximize.

An oracle is anything with ``value(S) -> float``.  Oracles may also offer
``gains(S, fS, candidates)`` to return several marginal gains against the
same base set at once; ``BaseOracle`` supplies a default built on ``value``
so the fast path is purely an optimization.  Query accounting always
charges one query per set evaluated, whichever path is taken.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ElementAlreadyInSet, NegativeWeight


class BaseOracle:
    """Mixin giving a ``value``-only oracle the batched-gain interface."""

    n: int | None = None

    def value(self, S) -> float:
        raise NotImplementedError

    def gains(self, S, fS: float, candidates: Sequence[int]) -> np.ndarray:
        base = set(S)
        out = np.empty(len(candidates))
        for j, e in enumerate(candidates):
            out[j] = self.value(base | {e}) - fS
        return out

    def __call__(self, S):
        return self.value(S)


def batch_gains(o, S, fS, candidates) -> np.ndarray:
    """Marginal gains of ``candidates`` against ``S`` for any oracle."""
    if hasattr(o, "gains"):
        return np.asarray(o.gains(S, fS, candidates), dtype=float)
    return BaseOracle.gains(o, S, fS, candidates)


def marginal_gain(o, e: int, S, cached_fS: float) -> float:
    """``f(S + e) - f(S)`` using the caller's cached ``f(S)``; one query."""
    if e in S:
        raise ElementAlreadyInSet(f"element {e} already in set")
    return float(batch_gains(o, S, cached_fS, [e])[0])


class CountingOracle(BaseOracle):
    """Counts evaluations of the wrapped oracle.

    Each ``value`` call is one query; a batched ``gains`` call is one query
    per candidate.
    """

    def __init__(self, inner):
        self.inner = inner
        self.n = getattr(inner, "n", None)
        self.count = 0

    def reset(self):
        self.count = 0

    def value(self, S) -> float:
        self.count += 1
        return self.inner.value(S)

    def gains(self, S, fS, candidates):
        self.count += len(candidates)
        return batch_gains(self.inner, S, fS, candidates)


class NormalizedOracle(BaseOracle):
    """``f(S) - f(empty)``; the empty-set value is taken once, at construction."""

    def __init__(self, inner):
        self.inner = inner
        self.n = getattr(inner, "n", None)
        self.offset = float(inner.value(frozenset()))

    def value(self, S) -> float:
        return self.inner.value(S) - self.offset

    def gains(self, S, fS, candidates):
        # gains are offset-invariant
        return batch_gains(self.inner, S, fS + self.offset, candidates)

    def raw_value(self, S) -> float:
        return self.inner.value(S)


def normalize(o) -> NormalizedOracle:
    return NormalizedOracle(o)


class ModularOracle(BaseOracle):
    def __init__(self, weights):
        w = np.asarray(weights, dtype=float)
        if np.any(w < 0):
            raise NegativeWeight("modular weights must be nonnegative")
        self.weights = w
        self.n = len(w)

    def value(self, S):
        return float(sum(self.weights[e] for e in S))

    def gains(self, S, fS, candidates):
        return self.weights[list(candidates)].astype(float)


class CoverageOracle(BaseOracle):
    """``|union of cover(e) for e in S|``."""

    def __init__(self, covers: Mapping[int, Iterable] | Sequence[Iterable]):
        if isinstance(covers, Mapping):
            n = max(covers) + 1 if covers else 0
            self.covers = [frozenset(covers.get(e, ())) for e in range(n)]
        else:
            self.covers = [frozenset(c) for c in covers]
        self.n = len(self.covers)

    def value(self, S):
        seen = set()
        for e in S:
            seen |= self.covers[e]
        return float(len(seen))


class CardinalitySquaredOracle(BaseOracle):
    """``|S|**2``; monotone and supermodular."""

    def __init__(self, n: int | None = None):
        self.n = n

    def value(self, S):
        return float(len(set(S)) ** 2)


def make_modular(weights) -> ModularOracle:
    return ModularOracle(weights)


def make_coverage(covers) -> CoverageOracle:
    return CoverageOracle(covers)


def make_cardinality_squared(n: int | None = None) -> CardinalitySquaredOracle:
    return CardinalitySquaredOracle(n)


class TableOracle(BaseOracle):
    """Oracle backed by a dense table of values indexed by bitmask."""

    def __init__(self, table):
        self.table = np.asarray(table, dtype=float)
        self.n = int(round(np.log2(len(self.table))))

    def value(self, S):
        mask = 0
        for e in S:
            mask |= 1 << e
        return float(self.table[mask])


class SumOracle(BaseOracle):
    """Nonnegative weighted sum of oracles; monotone if every part is."""

    def __init__(self, parts, weights=None):
        self.parts = list(parts)
        self.weights = [1.0] * len(self.parts) if weights is None else [float(w) for w in weights]
        if any(w < 0 for w in self.weights):
            raise NegativeWeight("sum weights must be nonnegative")
        self.n = next((p.n for p in self.parts if getattr(p, "n", None)), None)

    def value(self, S):
        S = frozenset(S)
        return float(sum(w * p.value(S) for w, p in zip(self.weights, self.parts)))
