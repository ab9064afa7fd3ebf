"""The cutset functional ``phi_p^v(S)`` and related bounds.

``phi_p^v(S)`` adds up, over the non-interior vertices ``y`` of ``S``, the
probability that ``v`` reaches a neighbour of ``y`` by an open path that stays in
the interior of ``S``.  Every vertex of such a path is open, ``v`` and the last
vertex included.  Frontier vertices are never interior, so they count as
non-interior vertices of ``S`` even when all their listed neighbours lie in ``S``.
"""

import hashlib
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .engine import EXACT_LIMIT, check_p, connected_set_weights, connectivity_probability
from .errors import (BadParameters, EmptyFamily, InteriorTooLargeForExact,
                     PreconditionViolated, VertexNotInS)
from .graph import interior
from .rng import derive_seed, uniform

CUTSET_EXACT_LIMIT = 14


@dataclass(frozen=True)
class PhiEstimate:
    value: object
    method: str
    stderr: float
    p: object
    v: int
    digest: str

    def __float__(self):
        return float(self.value)


def set_digest(S):
    return hashlib.sha1(",".join(map(str, sorted(S))).encode()).hexdigest()[:12]


def _one(p):
    return Fraction(1) if isinstance(p, Fraction) else 1.0


def boundary_terms(g, S):
    """Interior of ``S`` and, for every non-interior ``y``, its neighbours in the interior."""
    inner = interior(g, S)
    terms = {y: frozenset(w for w in g.rotation[y] if w in inner) for y in sorted(set(S) - inner)}
    return inner, terms


def _exact_terms(g, p, v, inner, terms):
    """``P(v reaches N(y) inside the interior)`` for each ``y``, by cluster enumeration."""
    one = _one(p)
    out = {y: 0 * one for y in terms}
    for C, closed in connected_set_weights(g, v, inner):
        w = p ** len(C) * (one - p) ** len(closed)
        for y, nb in terms.items():
            if C & nb:
                out[y] += w
    return out


def _open_cluster(g, v, inner, is_open):
    if not is_open(v):
        return set()
    seen, queue = {v}, deque([v])
    cluster = {v}
    while queue:
        x = queue.popleft()
        for y in g.rotation[x]:
            if y in inner and y not in seen:
                seen.add(y)
                if is_open(y):
                    cluster.add(y)
                    queue.append(y)
    return cluster


def phi_value(g, p, v, S, mode="exact", trials=10000, seed=0):
    v = g.check_vertex(v)
    S = {g.check_vertex(x) for x in S}
    check_p(p)
    if v not in S:
        raise VertexNotInS(f"vertex {v} is not in S")
    inner, terms = boundary_terms(g, S)
    digest = set_digest(S)
    if v not in inner:
        return PhiEstimate(_one(p) if mode == "exact" else 1.0, mode, 0.0, p, v, digest)
    if mode == "exact":
        if len(inner) > EXACT_LIMIT:
            raise InteriorTooLargeForExact(f"|interior| = {len(inner)} > {EXACT_LIMIT}")
        probs = _exact_terms(g, p, v, inner, terms)
        return PhiEstimate(sum(probs.values(), 0 * _one(p)), "exact", 0.0, p, v, digest)
    if mode != "monte_carlo":
        raise PreconditionViolated(f"unknown mode {mode!r}")
    ys = list(terms)
    hits = np.zeros(len(ys))
    for t in range(trials):
        s = derive_seed(seed, t)
        C = _open_cluster(g, v, inner, lambda x, s=s: uniform(s, x) <= p)
        if C:
            for k, y in enumerate(ys):
                if C & terms[y]:
                    hits[k] += 1
    phat = hits / trials
    stderr = math.sqrt(float(np.sum(phat * (1 - phat))) / trials)
    return PhiEstimate(float(phat.sum()), "monte_carlo", stderr, p, v, digest)


@dataclass(frozen=True)
class CutsetReport:
    lhs: object
    rhs: object
    holds: bool
    terms: dict
    tolerance: float


def cutset_inequality_check(g, p, u, S, A, B, mode="exact", trials=10000, seed=0):
    """Compare ``P(u <-> B in A)`` with its cutset bound through the boundary of ``S``."""
    u = g.check_vertex(u)
    S = {g.check_vertex(x) for x in S}
    A = {g.check_vertex(x) for x in A}
    B = {g.check_vertex(x) for x in B}
    check_p(p)
    if u not in S or not S <= A or S & B:
        raise PreconditionViolated("need u in S, S inside A and B disjoint from S")
    exact = mode == "exact"
    if exact and len(A) > CUTSET_EXACT_LIMIT:
        raise PreconditionViolated(f"exact mode needs |A| <= {CUTSET_EXACT_LIMIT}, got {len(A)}")
    inner, terms = boundary_terms(g, S)

    def reach(x, seed_offset):
        return connectivity_probability(g, x, B, p, A, trials, derive_seed(seed, seed_offset),
                                        exact=exact)

    lhs_est = reach(u, 0)
    if u in inner:
        if exact:
            first = _exact_terms(g, p, u, inner, terms)
            first_err = {y: 0.0 for y in terms}
        else:
            ys = list(terms)
            first, first_err = {}, {}
            for k, y in enumerate(ys):
                est = connectivity_probability(g, u, terms[y], p, inner | {u}, trials,
                                               derive_seed(seed, 1, k)) if terms[y] else None
                first[y] = est.value if est else 0.0
                first_err[y] = est.stderr if est else 0.0
    else:
        first = {y: (_one(p) if exact else 1.0) if y == u else 0 * _one(p) for y in terms}
        first_err = {y: 0.0 for y in terms}
    rhs = 0 * _one(p) if exact else 0.0
    var = lhs_est.stderr ** 2
    out_terms = {}
    for k, y in enumerate(terms):
        if not first[y]:
            out_terms[y] = (first[y], 0 * _one(p))
            continue
        second = reach(y, 2 + k)
        out_terms[y] = (first[y], second.value)
        rhs += first[y] * second.value
        var += (first_err[y] * second.value) ** 2 + (first[y] * second.stderr) ** 2
    tol = 0.0 if exact else 3 * math.sqrt(var)
    holds = lhs_est.value <= rhs if exact else lhs_est.value <= rhs + tol
    return CutsetReport(lhs_est.value, rhs, bool(holds), out_terms, tol)


@dataclass(frozen=True)
class ScanReport:
    sizes: tuple
    p_grid: tuple
    values: np.ndarray
    stderr: np.ndarray
    proxy: float
    monotone: tuple


def phi_threshold_scan(g, v, S_family, p_grid, eps, mode="exact", trials=2000, seed=0):
    """Largest grid ``p`` at which some set of the family has ``phi <= 1 - eps``."""
    family = [frozenset(S) for S in S_family]
    if not family:
        raise EmptyFamily("S_family is empty")
    if not 0 < eps < 1:
        raise BadParameters(f"eps must lie in (0, 1), got {eps}")
    p_grid = tuple(p_grid)
    values = np.zeros((len(family), len(p_grid)))
    errs = np.zeros_like(values)
    for a, S in enumerate(family):
        for b, p in enumerate(p_grid):
            est = phi_value(g, p, v, S, mode, trials, derive_seed(seed, a, b))
            values[a, b] = float(est.value)
            errs[a, b] = est.stderr
    monotone = tuple(bool(np.all(np.diff(row) >= 0)) for row in values)
    if mode == "exact" and not all(monotone):
        raise PreconditionViolated("exact phi decreased in p")
    below = [p for b, p in enumerate(p_grid) if values[:, b].min() <= 1 - eps]
    proxy = max(below) if below else math.nan
    return ScanReport(tuple(len(S) for S in family), p_grid, values, errs, proxy, monotone)


@dataclass(frozen=True)
class BoundParams:
    p: float
    p1: float
    eps: float
    M: int = None
    alpha_hat: float = None
    beta_hat: float = None

    def __post_init__(self):
        if not (0 < self.p1 <= self.p < 1):
            raise BadParameters(f"need 0 < p1 <= p < 1, got p1={self.p1}, p={self.p}")
        if not 0 < self.eps < 1:
            raise BadParameters(f"eps must lie in (0, 1), got {self.eps}")
        if self.M is not None and self.M < 2:
            raise BadParameters(f"M must be >= 2, got {self.M}")

    @property
    def bound(self):
        return supercritical_lower_bound(self)

    @property
    def theta(self):
        return None if self.M is None else 4 / self.M + self.eps

    @property
    def converges(self):
        return None if self.M is None else self.M * self.theta ** 2 < 1


def supercritical_lower_bound(params):
    """``1 - ((1 - p) / (1 - p1)) ** (1 - eps)``."""
    return 1 - ((1 - params.p) / (1 - params.p1)) ** (1 - params.eps)


class BlockBound(NamedTuple):
    value: float
    base: float
    vacuous: bool


def le85_bound(M, eps, n):
    """``(4/M + 9 eps/M) ** n``, flagged vacuous when the base is at least 1."""
    if M < 2 or eps <= 0 or n < 1:
        raise BadParameters(f"need M >= 2, eps > 0 and n >= 1, got M={M}, eps={eps}, n={n}")
    base = 4 / M + 9 * eps / M
    return BlockBound(base ** n, base, base >= 1)
