"""Influence boosting on a directed graph.

Every edge ``(u, v)`` carries two activation probabilities ``p0 <= p1``;
the edge uses ``p1`` when its head ``v`` is boosted and ``p0`` otherwise.
The objective is the expected number of nodes reachable from a fixed seed
set, as a function of the boosted set.

Monte Carlo estimates use coupled live-edge realizations: each sample fixes
one uniform draw ``u_e`` per edge, and the edge is live iff
``u_e < p1`` (head boosted) or ``u_e < p0`` (otherwise).  One realization
therefore answers every boosted set, and the estimate is monotone in the
boosted set sample by sample.
"""

from __future__ import annotations

import itertools
import json
import math
import warnings
from pathlib import Path

import numpy as np

from ._backend import get_kernels
from .errors import ConfigError, InstanceTooLarge, MalformedLine
from .oracle import BaseOracle
from .quantify import NonSubmodParams, clamp01
from .rng import make_rng

EXACT_EDGE_CAP = 12


class BoostedGraph:
    """Directed graph with two-level edge weights and a seed set.

    Edges are stored sorted by source so that ``out_ptr``/``out_dst`` form a
    CSR adjacency; ``p0``/``p1`` are aligned with that order.
    """

    def __init__(self, n, src, dst, p0=None, p1=None, seeds=None):
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        if src.shape != dst.shape:
            raise ValueError("src and dst must have the same length")
        if len(src) and (min(src.min(), dst.min()) < 0 or max(src.max(), dst.max()) >= n):
            raise ValueError(f"edge endpoint outside [0, {n})")
        order = np.lexsort((dst, src))
        self.n = int(n)
        self.src = src[order]
        self.dst = dst[order]
        self.out_ptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(self.src, minlength=self.n), out=self.out_ptr[1:])
        self.in_degree = np.bincount(self.dst, minlength=self.n).astype(np.int64)
        self.out_degree = np.bincount(self.src, minlength=self.n).astype(np.int64)
        self.p0 = self.p1 = None
        if p0 is not None:
            self.set_weights(np.asarray(p0, float)[order], np.asarray(p1, float)[order])
        if seeds is None:
            seeds = [self.top_degree_node()] if self.n else []
        self.seeds = np.array(sorted(set(int(s) for s in seeds)), dtype=np.int64)
        if len(self.seeds) == 0:
            raise ConfigError("seed set must be non-empty")

    @property
    def num_edges(self) -> int:
        return len(self.src)

    def set_weights(self, p0, p1):
        p0 = np.asarray(p0, dtype=float)
        p1 = np.asarray(p1, dtype=float)
        if p0.shape != self.src.shape or p1.shape != self.src.shape:
            raise ValueError("one weight pair per edge is required")
        if np.any(p0 < 0) or np.any(p1 < p0) or np.any(p1 > 1):
            raise ConfigError("edge weights must satisfy 0 <= p0 <= p1 <= 1")
        self.p0, self.p1 = p0, p1

    def top_degree_node(self) -> int:
        """Node of highest total degree, ties to the lowest id."""
        return int(np.argmax(self.in_degree + self.out_degree))

    def edges(self):
        return list(zip(self.src.tolist(), self.dst.tolist()))

    def to_json(self) -> dict:
        out = {"n": self.n, "seeds": self.seeds.tolist(), "edges": []}
        for j, (u, v) in enumerate(self.edges()):
            e = [u, v]
            if self.p0 is not None:
                e += [float(self.p0[j]), float(self.p1[j])]
            out["edges"].append(e)
        return out


def load_snap_edgelist(path, treat_undirected: bool = True, seeds=None) -> BoostedGraph:
    """Read a SNAP-style edge list: two integer ids per line, ``#`` comments.

    Node ids are remapped to ``0..n-1`` in ascending order of the original
    id.  Self-loops are dropped with a warning; repeated edges are merged.
    """
    pairs = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tok = line.split()
            try:
                if len(tok) < 2:
                    raise ValueError
                u, v = int(tok[0]), int(tok[1])
            except ValueError:
                raise MalformedLine(f"{path}:{lineno}: expected two integers, got {line!r}")
            pairs.append((u, v))
    ids = sorted({x for p in pairs for x in p})
    remap = {x: i for i, x in enumerate(ids)}
    edges = set()
    loops = 0
    for u, v in pairs:
        if u == v:
            loops += 1
            continue
        edges.add((remap[u], remap[v]))
        if treat_undirected:
            edges.add((remap[v], remap[u]))
    if loops:
        warnings.warn(f"dropped {loops} self-loop(s) from {path}")
    edges = sorted(edges)
    src = [e[0] for e in edges]
    dst = [e[1] for e in edges]
    if seeds is not None:
        seeds = [remap[s] for s in seeds]
    return BoostedGraph(len(ids), src, dst, seeds=seeds)


def load_json_instance(path) -> BoostedGraph:
    """Graph from ``{"n", "seeds", "edges": [[u, v, p0, p1], ...]}``."""
    with open(path) as fh:
        data = json.load(fh)
    try:
        edges = data["edges"]
        src = [int(e[0]) for e in edges]
        dst = [int(e[1]) for e in edges]
        weighted = all(len(e) >= 4 for e in edges) and len(edges) > 0
        p0 = [float(e[2]) for e in edges] if weighted else None
        p1 = [float(e[3]) for e in edges] if weighted else None
        return BoostedGraph(int(data["n"]), src, dst, p0, p1, data.get("seeds"))
    except (KeyError, IndexError, TypeError) as exc:
        raise ConfigError(f"{path}: bad instance file ({exc})")


def save_json_instance(g: BoostedGraph, path):
    Path(path).write_text(json.dumps(g.to_json()))


def assign_degree_weights(g: BoostedGraph) -> BoostedGraph:
    """``p0 = 1/d_v`` and ``p1 = min(2/d_v, 1)`` for each edge into ``v``."""
    d = g.in_degree[g.dst].astype(float)
    g.set_weights(1.0 / d, np.minimum(2.0 / d, 1.0))
    return g


def random_graph(n: int, m: int = 3, rng=0) -> BoostedGraph:
    """Preferential-attachment undirected graph, as two directed edges per
    link; each new node attaches to ``m`` distinct existing nodes."""
    rng = make_rng(rng)
    targets = list(range(m))
    repeated: list[int] = []
    edges = []
    for v in range(m, n):
        for u in set(targets):
            edges.append((v, u))
        repeated.extend(targets)
        repeated.extend([v] * m)
        chosen: set[int] = set()
        while len(chosen) < m:
            chosen.add(repeated[int(rng.integers(len(repeated)))])
        targets = sorted(chosen)
    src = [u for u, v in edges] + [v for u, v in edges]
    dst = [v for u, v in edges] + [u for u, v in edges]
    return BoostedGraph(n, src, dst)


class RealizationSet:
    """Per-sample, per-edge uniform draws and the resulting edge states."""

    def __init__(self, uniforms):
        self.uniforms = np.atleast_2d(np.asarray(uniforms, dtype=float))

    @classmethod
    def sample(cls, num_edges: int, count: int = 100, seed: int = 0):
        """Draws from one Philox stream keyed by ``seed``; sample ``s`` uses
        stream positions ``[s * E, (s + 1) * E)``, so a larger ``count``
        extends the set without changing earlier samples."""
        u = make_rng(seed).random(count * num_edges)
        return cls(u.reshape(count, num_edges))

    def __len__(self):
        return self.uniforms.shape[0]

    def states(self, g: BoostedGraph) -> np.ndarray:
        """Edge states: 0 always live, 1 live iff head boosted, 2 dead."""
        if g.p0 is None:
            raise ConfigError("edge weights are not assigned")
        u = self.uniforms
        st = np.full(u.shape, 2, dtype=np.int8)
        st[u < g.p1] = 1
        st[u < g.p0] = 0
        return np.ascontiguousarray(st)


def _boost_mask(n, S) -> np.ndarray:
    mask = np.zeros(n, dtype=np.uint8)
    idx = list(S)
    if idx:
        mask[idx] = 1
    return mask


class MonteCarloOracle(BaseOracle):
    """Mean reach over a fixed set of coupled live-edge samples."""

    def __init__(self, g: BoostedGraph, r: RealizationSet, backend: str | None = None):
        self.g = g
        self.n = g.n
        self.state = r.states(g)
        self.samples = len(r)
        self._k = get_kernels(backend)

    def per_sample(self, S) -> np.ndarray:
        return self._k.reach_counts(self.g.out_ptr, self.g.dst, self.state,
                                    self.g.seeds, _boost_mask(self.n, S))

    def value(self, S) -> float:
        return float(self.per_sample(S).sum()) / self.samples

    def gains(self, S, fS, candidates):
        tot = self._k.reach_gains(self.g.out_ptr, self.g.dst, self.state,
                                  self.g.seeds, _boost_mask(self.n, S),
                                  np.asarray(candidates, dtype=np.int64))
        return tot / self.samples


def monte_carlo_oracle(g, r, backend=None) -> MonteCarloOracle:
    return MonteCarloOracle(g, r, backend)


class ExactOracle(BaseOracle):
    """Expected reach by summing over all ``2**|E|`` live-edge subgraphs,
    each weighted by its probability under the boosted set."""

    def __init__(self, g: BoostedGraph, backend: str | None = None):
        E = g.num_edges
        if E > EXACT_EDGE_CAP:
            raise InstanceTooLarge(f"{E} edges exceed the exact cap of {EXACT_EDGE_CAP}")
        if g.p0 is None:
            raise ConfigError("edge weights are not assigned")
        self.g = g
        self.n = g.n
        masks = np.arange(1 << E)
        self.live = ((masks[:, None] >> np.arange(E)) & 1).astype(bool)
        state = np.where(self.live, 0, 2).astype(np.int8)
        k = get_kernels(backend)
        self.reach = k.reach_counts(g.out_ptr, g.dst, np.ascontiguousarray(state),
                                    g.seeds, np.zeros(g.n, dtype=np.uint8)).astype(float)

    def value(self, S) -> float:
        boosted = _boost_mask(self.n, S).astype(bool)
        p = np.where(boosted[self.g.dst], self.g.p1, self.g.p0)
        rho = np.where(self.live, p, 1.0 - p).prod(axis=1)
        return float(rho @ self.reach)


def exact_oracle(g, backend=None) -> ExactOracle:
    return ExactOracle(g, backend)


def _reach_python(g: BoostedGraph, live_edges) -> int:
    adj: dict[int, list[int]] = {}
    for j in live_edges:
        adj.setdefault(int(g.src[j]), []).append(int(g.dst[j]))
    seen = set(g.seeds.tolist())
    stack = list(seen)
    while stack:
        u = stack.pop()
        for v in adj.get(u, ()):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen)


def three_state_value(g: BoostedGraph, S, return_total: bool = False):
    """Reference expected reach over all ``3**|E|`` edge-state assignments.

    Each edge is always live (prob ``p0``), boost-live (``p1 - p0``) or
    dead (``1 - p1``); boost-live edges count when their head is in ``S``.
    With ``return_total`` also returns the summed assignment probability.
    """
    if g.num_edges > EXACT_EDGE_CAP:
        raise InstanceTooLarge(f"{g.num_edges} edges exceed the exact cap")
    S = set(S)
    probs = np.stack([g.p0, g.p1 - g.p0, 1.0 - g.p1], axis=1)
    total = value = 0.0
    for states in itertools.product(range(3), repeat=g.num_edges):
        pr = 1.0
        live = []
        for j, st in enumerate(states):
            pr *= probs[j, st]
            if st == 0 or (st == 1 and int(g.dst[j]) in S):
                live.append(j)
        if pr == 0.0:
            continue
        total += pr
        value += pr * _reach_python(g, live)
    return (value, total) if return_total else value


def lemma3_bounds(g: BoostedGraph, b: int, zero_p0_factor: float | None = None,
                  orientation: str = "proof") -> NonSubmodParams:
    """``(gamma', alpha')`` from the edge-weight ratios.

    Let ``L = min(b * max_in_degree, |E|)``, ``lo`` the product of the ``L``
    smallest ``(1 - p1)/(1 - p0)`` and ``hi`` the product of the ``L``
    largest ``p1/p0``.  Boosting up to ``b`` extra nodes rescales each
    realization's probability by a factor in ``[lo, hi]``, so
    ``gain_u(T) / gain_u(S)`` lies in ``[lo, hi]`` for every qualifying
    ``S <= T``.  Hence ``gamma' = 1/hi`` and ``alpha' = 1 - lo``.

    ``orientation="statement"`` instead reads the ratio the other way round
    (``gamma' = lo``, ``alpha' = 1 - 1/hi``).  That reading is kept for
    comparison only; it can overstate gamma.

    An edge with ``p0 = 0 < p1`` has an unbounded ``p1/p0``; by default it
    makes ``hi`` infinite, otherwise ``zero_p0_factor`` replaces the ratio.
    """
    if orientation not in ("proof", "statement"):
        raise ValueError(f"unknown orientation {orientation!r}")
    if g.p0 is None:
        raise ConfigError("edge weights are not assigned")
    E = g.num_edges
    if E == 0:
        return NonSubmodParams(1.0, 0.0, "bound")
    L = min(int(b) * int(g.in_degree.max()), E)
    p0, p1 = g.p0, g.p1
    same = p1 == p0
    with np.errstate(divide="ignore", invalid="ignore"):
        down = np.where(same, 1.0, (1.0 - p1) / (1.0 - p0))
        up = np.where(same, 1.0, p1 / p0)
    if zero_p0_factor is not None:
        up = np.where(np.isinf(up), float(zero_p0_factor), up)
    lo = float(np.prod(np.sort(down)[:L]))
    log_hi = float(np.sum(np.log(np.sort(up)[::-1][:L])))
    inv_hi = math.exp(-log_hi)

    if orientation == "proof":
        gamma, alpha = inv_hi, 1.0 - lo
    else:
        gamma, alpha = lo, 1.0 - inv_hi
    return NonSubmodParams(clamp01(gamma), clamp01(alpha), "bound")


def balanced_random_groups(n: int, k: int, rng=0) -> list[list[int]]:
    """Random assignment of ``n`` elements to ``k`` groups whose sizes
    differ by at most one."""
    if not 1 <= k <= n:
        raise ConfigError(f"need 1 <= k <= n, got k={k}, n={n}")
    perm = make_rng(rng).permutation(n)
    groups = [sorted(perm[i::k].tolist()) for i in range(k)]
    return groups


def equal_budgets(b: int, k: int) -> list[int]:
    """``b`` split into ``k`` near-equal parts, remainder to the first groups."""
    if b < k:
        raise ConfigError(f"budget {b} cannot give each of {k} groups one element")
    q, r = divmod(b, k)
    return [q + 1 if i < r else q for i in range(k)]
