"""Maximization algorithms under a partition matroid.

``greedy`` and ``threshold_greedy`` are deterministic.  ``prob``,
``fast_prob`` and ``residual_greedy`` draw from a seeded generator (see
:mod:`partmax.rng`); the same seed and inputs reproduce the same run.

Query counts cover marginal-gain evaluations only: ``f(empty)`` at start and
the final ``f(solution)`` recomputation are bookkeeping and not charged.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    EmptyCandidatePool,
    InstanceTooLarge,
    InvalidDelta,
)
from .matroid import PartitionMatroid, Subset
from .oracle import CountingOracle
from .rng import make_rng

#: below this, ``1 - gamma'(1 - alpha')`` is treated as zero and the power
#: distribution collapses to its argmax limit
EXPONENT_DEGENERACY = 1e-9
BRUTE_FORCE_CAP = 10**6


class Step(NamedTuple):
    t: int
    element: int
    group: int
    gain: float
    pool_size: int


@dataclass
class RunResult:
    algorithm: str
    solution: tuple
    objective: float
    queries: int
    trace: list = field(default_factory=list)
    rounds: int | None = None

    @property
    def pool_sizes(self):
        return [s.pool_size for s in self.trace]


class _Run:
    """Per-run state: current set, cached f(S), counter and trace."""

    def __init__(self, m: PartitionMatroid, o):
        self.m = m
        self.o = o
        self.counter = CountingOracle(o)
        self.S = Subset(m)
        self.fS = float(o.value(frozenset()))
        self.trace: list[Step] = []

    def gains(self, candidates) -> np.ndarray:
        if len(candidates) == 0:
            return np.empty(0)
        g = self.counter.gains(self.S.frozen(), self.fS, candidates)
        # Monte Carlo oracles can give -1e-16 style gains
        return np.maximum(g, 0.0)

    def add(self, e, gain, pool_size):
        i = self.S.add(int(e))
        self.trace.append(Step(len(self.trace), int(e), i, float(gain), int(pool_size)))
        self.fS += float(gain)

    def result(self, name, rounds=None) -> RunResult:
        sol = tuple(sorted(self.S))
        return RunResult(name, sol, float(self.o.value(frozenset(sol))),
                         self.counter.count, self.trace, rounds)


def greedy(m: PartitionMatroid, o) -> RunResult:
    """Add the best-gain addable element until every group is full."""
    run = _Run(m, o)
    while True:
        cands = sorted(e for i in run.S.open_groups() for e in run.S.remaining(i))
        if not cands:
            break
        g = run.gains(cands)
        j = int(np.argmax(g))  # first max = lowest id
        run.add(cands[j], g[j], len(cands))
    return run.result("greedy")


def threshold_rounds_bound(b: int, eps: float) -> int:
    return math.ceil(math.log(b / (eps * (1 - eps))) / -math.log(1 - eps)) + 1


def threshold_greedy(m: PartitionMatroid, o, eps: float = 0.5) -> RunResult:
    """Decreasing-threshold greedy.

    Each round scans open groups in ascending order and their elements in
    ascending id, accepting any element whose gain against the current set
    reaches the threshold.  The threshold starts at the largest singleton
    gain and shrinks by ``1 - eps`` per round; the run stops when the set is
    maximal or the threshold drops below ``eps (1 - eps) tau0 / b``.
    Gains already known for the current set are reused, so the singleton
    pass doubles as the start of the first round.
    """
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    run = _Run(m, o)
    ground = list(range(m.n))
    g0 = run.gains(ground)
    tau0 = float(g0.max())
    cache = dict(zip(ground, g0))
    cache_size = 0

    tau = tau0
    floor = eps * (1 - eps) * tau0 / m.b
    rounds = 0
    while run.S.open_groups() and tau >= floor:
        rounds += 1
        for i in run.S.open_groups():
            for e in m.groups[i]:
                if run.S.residual(i) == 0:
                    break
                if e in run.S:
                    continue
                if len(run.S) != cache_size:
                    cache.clear()
                    cache_size = len(run.S)
                if e not in cache:
                    cache[e] = run.gains([e])[0]
                if cache[e] >= tau:
                    run.add(e, cache[e], 1)
        tau *= 1 - eps
    return run.result("thr", rounds=rounds)


def power_exponent(pool_size: int, gamma_p: float, alpha_p: float) -> float:
    """``ceil((pool_size + 1) / (1 - gamma'(1 - alpha'))) - 1``, or ``inf``."""
    denom = 1.0 - gamma_p * (1.0 - alpha_p)
    if denom < EXPONENT_DEGENERACY:
        return math.inf
    x = (pool_size + 1) / denom
    # absorb rounding noise such as 4.000000000000001
    return math.ceil(x - 1e-9 * max(1.0, x)) - 1


def power_probabilities(gains, a) -> np.ndarray:
    """Exact selection distribution used by :func:`sample_power_index`."""
    g = np.maximum(np.asarray(gains, dtype=float), 0.0)
    if g.size == 0:
        raise EmptyCandidatePool("no candidates")
    if math.isinf(a) and g.max() > 0:
        # argmax limit, ties to the lowest index
        p = np.zeros_like(g)
        p[int(np.argmax(g))] = 1.0
        return p
    if math.isinf(a) or a == 0 or not np.any(g > 0):
        return np.full(g.size, 1.0 / g.size)
    with np.errstate(divide="ignore"):
        logw = a * np.log(g)
    logw -= logw.max()
    w = np.exp(logw)
    return w / w.sum()


def sample_power_index(gains, a, rng) -> int:
    """Index ``j`` drawn with probability ``gains[j]**a / sum(gains**a)``.

    Sampling runs in log space with Gumbel-max so that exponents in the
    thousands do not overflow.  ``a = inf`` gives the argmax (lowest index
    on ties); all-zero gains, or ``a = 0``, give the uniform distribution.
    """
    g = np.maximum(np.asarray(gains, dtype=float), 0.0)
    if g.size == 0:
        raise EmptyCandidatePool("no candidates")
    rng = make_rng(rng)
    if math.isinf(a):
        if g.max() > 0:
            return int(np.argmax(g))
        return int(rng.integers(g.size))
    if a == 0 or not np.any(g > 0):
        return int(rng.integers(g.size))
    with np.errstate(divide="ignore"):
        logw = a * np.log(g)
    return int(np.argmax(logw + rng.gumbel(size=g.size)))


def _check_params(gamma_p, alpha_p):
    if not 0 <= gamma_p <= 1 or not 0 <= alpha_p <= 1:
        raise ValueError(f"gamma' and alpha' must lie in [0, 1], got "
                         f"({gamma_p}, {alpha_p})")


def prob(m: PartitionMatroid, o, gamma_p: float, alpha_p: float, rng=0) -> RunResult:
    """Randomized power-law selection over each open group, round robin."""
    _check_params(gamma_p, alpha_p)
    rng = make_rng(rng)
    run = _Run(m, o)
    while True:
        groups = run.S.open_groups()
        if not groups:
            break
        for i in groups:
            pool = run.S.remaining(i)
            a = power_exponent(len(pool), gamma_p, alpha_p)
            g = run.gains(pool)
            j = sample_power_index(g, a, rng)
            run.add(pool[j], g[j], len(pool))
    return run.result("prob")


def fast_pool_size(n_i: int, s: int, b_i: int, b: int, delta: float) -> int:
    """Candidate-pool size for one sampled step of :func:`fast_prob`."""
    want = math.ceil((n_i - s) / (b_i - s) * math.log(b / delta))
    return min(want, n_i - s)


def sample_pool(rest: Sequence[int], size: int, rng) -> list:
    """``size`` elements of ``rest`` uniformly without replacement, ascending."""
    if size >= len(rest):
        return list(rest)
    idx = np.sort(rng.choice(len(rest), size=size, replace=False))
    return [rest[j] for j in idx]


def fast_prob(m: PartitionMatroid, o, gamma_p: float, alpha_p: float,
              delta: float = 0.001, rng=0) -> RunResult:
    """:func:`prob` restricted to a uniformly sampled candidate pool per step.

    The pool is drawn without replacement and is large enough that, with
    probability at least ``1 - delta`` over the whole run, it always meets
    the unchosen part of any fixed maximal superset of the current solution.
    """
    if not 0 < delta < 1:
        raise InvalidDelta(f"delta must lie in (0, 1), got {delta}")
    _check_params(gamma_p, alpha_p)
    rng = make_rng(rng)
    run = _Run(m, o)
    while True:
        groups = run.S.open_groups()
        if not groups:
            break
        for i in groups:
            rest = run.S.remaining(i)
            size = fast_pool_size(m.group_sizes[i], run.S.counts[i],
                                  m.budgets[i], m.b, delta)
            pool = sample_pool(rest, size, rng)
            a = power_exponent(len(pool), gamma_p, alpha_p)
            g = run.gains(pool)
            j = sample_power_index(g, a, rng)
            run.add(pool[j], g[j], len(pool))
    return run.result("fastprob")


def residual_greedy(m: PartitionMatroid, o, rng=0) -> RunResult:
    """Residual random greedy baseline.

    Each step builds the max-weight base of the residual constraint (the
    top ``residual(i)`` gains of every open group, ties to lowest id) and
    adds one of its elements uniformly at random.
    """
    rng = make_rng(rng)
    run = _Run(m, o)
    while True:
        groups = run.S.open_groups()
        if not groups:
            break
        per_group = [run.S.remaining(i) for i in groups]
        cands = [e for rest in per_group for e in rest]
        g = dict(zip(cands, run.gains(cands)))
        base = []
        for i, rest in zip(groups, per_group):
            ranked = sorted(rest, key=lambda e: (-g[e], e))
            base.extend(ranked[:run.S.residual(i)])
        base.sort()
        e = base[int(rng.integers(len(base)))]
        run.add(e, g[e], len(cands))
    return run.result("resgreedy")


def count_maximal_sets(m: PartitionMatroid) -> int:
    return math.prod(math.comb(n_i, b_i) for n_i, b_i in zip(m.group_sizes, m.budgets))


def brute_force(m: PartitionMatroid, o, cap: int = BRUTE_FORCE_CAP) -> RunResult:
    """Best maximal set by enumeration; ties go to the lexicographically
    smallest sorted solution."""
    total = count_maximal_sets(m)
    if total > cap:
        raise InstanceTooLarge(f"{total} maximal sets exceed the cap of {cap}")
    counter = CountingOracle(o)
    best_val, best = -math.inf, None
    choices = [itertools.combinations(g, b) for g, b in zip(m.groups, m.budgets)]
    for combo in itertools.product(*choices):
        S = tuple(sorted(itertools.chain.from_iterable(combo)))
        v = counter.value(frozenset(S))
        if v > best_val or (v == best_val and S < best):
            best_val, best = v, S
    return RunResult("brute", best, float(best_val), counter.count, [], None)


ALGORITHMS = {
    "greedy": greedy,
    "thr": threshold_greedy,
    "prob": prob,
    "fastprob": fast_prob,
    "resgreedy": residual_greedy,
    "brute": brute_force,
}


def audit_queries(m: PartitionMatroid, res: RunResult, eps: float | None = None) -> list[str]:
    """Check a run's query count against its algorithm's bound.

    Returns the list of violated conditions (empty when the run is clean).
    """
    bad = []
    pools = sum(res.pool_sizes)
    name = res.algorithm
    if name == "greedy":
        if res.queries > m.n * m.b:
            bad.append(f"greedy queries {res.queries} > n*b = {m.n * m.b}")
        if res.queries != pools:
            bad.append(f"greedy queries {res.queries} != evaluated candidates {pools}")
    elif name == "prob":
        cap = sum(n_i * b_i for n_i, b_i in zip(m.group_sizes, m.budgets))
        if res.queries > cap:
            bad.append(f"prob queries {res.queries} > sum n_i b_i = {cap}")
        if res.queries != pools:
            bad.append(f"prob queries {res.queries} != pool total {pools}")
    elif name == "fastprob":
        if res.queries != pools:
            bad.append(f"fastprob queries {res.queries} != sum of pool sizes {pools}")
    elif name == "resgreedy":
        if res.queries > m.n * m.b:
            bad.append(f"resgreedy queries {res.queries} > n*b = {m.n * m.b}")
    elif name == "thr":
        bound = threshold_rounds_bound(m.b, eps if eps is not None else 0.5)
        if res.rounds > bound:
            bad.append(f"thr rounds {res.rounds} > {bound}")
        if res.queries > m.n * (res.rounds + 1):
            bad.append(f"thr queries {res.queries} > n*(rounds+1)")
    if name != "brute" and len(res.trace) > m.b:
        bad.append(f"trace longer than b={m.b}")
    if not m.is_feasible(res.solution):
        bad.append("solution infeasible")
    return bad
