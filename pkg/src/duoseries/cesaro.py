"""Cesaro means of partial sums, natural-density calculators, success sets.

sigma_n(f) = (1/(n+1)) sum_{j<=n} S_j(f) has the closed coefficient form
(1 - j/(n+1)) a_j, which is what :func:`cesaro_mean` uses; the direct
averaging of partial sums serves as the independent oracle in the tests.

Density estimates are finite-horizon proxies: counts over a horizon ladder
with tail-min/tail-max standing in for liminf/limsup.  They satisfy the
exact finite identities (complement, monotone counts) but assert nothing
asymptotic; reports carry ``finite_horizon=True`` to make that explicit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import UsageError
from .series import CompactGrid, FormalSeries, Polynomial


def cesaro_mean(f: FormalSeries, n: int) -> Polynomial:
    """sigma_n(f) as a polynomial: coefficient j is (1 - j/(n+1)) a_j."""
    if n < 0:
        raise UsageError("cesaro index must be >= 0")
    coeffs = [(1.0 - j / (n + 1)) * f.coefficient(j) for j in range(n + 1)]
    return Polynomial.from_coeffs(coeffs)


def cesaro_mean_direct(f: FormalSeries, n: int) -> Polynomial:
    """Oracle form: average the partial sums S_0..S_n coefficient-wise."""
    acc = [0.0] * (n + 1)
    for j in range(n + 1):
        for k in range(j + 1):
            acc[k] += f.coefficient(k)
    return Polynomial.from_coeffs([c / (n + 1) for c in acc])


@dataclass(frozen=True)
class IndexSet:
    """Sorted duplicate-free positive integers (explicit finite view)."""

    members: tuple

    def __post_init__(self):
        ms = self.members
        if any(ms[i] >= ms[i + 1] for i in range(len(ms) - 1)):
            raise UsageError("index set must be sorted and duplicate-free")

    @staticmethod
    def from_iterable(it) -> "IndexSet":
        return IndexSet(tuple(sorted(set(int(x) for x in it))))

    @staticmethod
    def from_predicate(pred: Callable[[int], bool], N: int) -> "IndexSet":
        return IndexSet(tuple(n for n in range(1, N + 1) if pred(n)))

    def count_upto(self, N: int) -> int:
        return int(np.searchsorted(np.asarray(self.members), N, side="right"))

    def complement_upto(self, N: int) -> "IndexSet":
        s = set(self.members)
        return IndexSet(tuple(n for n in range(1, N + 1) if n not in s))


@dataclass(frozen=True)
class DensityEstimate:
    horizons: tuple
    counts: tuple
    ratios: tuple
    lower_est: float
    upper_est: float
    finite_horizon: bool = True

    @property
    def N(self) -> int:
        return self.horizons[-1]

    @property
    def count(self) -> int:
        return self.counts[-1]


def density(A: IndexSet, ladder: Sequence[int]) -> DensityEstimate:
    """Counting ratios #{n in A : n <= N}/N over the ladder, tail-min/max proxies."""
    ladder = list(ladder)
    if not ladder or any(ladder[i] >= ladder[i + 1] for i in range(len(ladder) - 1)):
        raise UsageError("ladder must be a nonempty increasing sequence of horizons")
    counts = [A.count_upto(N) for N in ladder]
    ratios = [c / N for c, N in zip(counts, ladder)]
    return DensityEstimate(tuple(ladder), tuple(counts), tuple(ratios),
                           lower_est=min(ratios), upper_est=max(ratios))


def success_set(f: FormalSeries, h, K: CompactGrid, epsilon: float, N: int) -> IndexSet:
    """{n <= N : sup_K |sigma_n(f) - h| < eps}, built incrementally in n.

    Each sigma_n is obtained from the running partial-sum accumulator, so
    the whole sweep costs O(N * |K|).
    """
    if epsilon <= 0:
        raise UsageError("epsilon must be positive")
    pts = K.points_array()
    hv = np.asarray(h(pts)) if callable(h) else np.full(len(pts), h)
    coeffs = [f.coefficient(k) for k in range(N + 1)]
    power = np.ones_like(pts)
    S = np.full(len(pts), complex(coeffs[0]) if np.iscomplexobj(pts) else float(coeffs[0]))
    acc = S.copy()
    members = []
    for n in range(1, N + 1):
        power = power * pts
        S = S + coeffs[n] * power
        acc = acc + S
        sup = float(np.abs(acc / (n + 1) - hv).max())
        if sup < epsilon:
            members.append(n)
    return IndexSet(tuple(members))


@dataclass(frozen=True)
class CesaroReport:
    target_labels: tuple
    densities: tuple
    complement_identity_ok: bool
    disjoint_pairs: tuple


def frequent_cesaro_report(f: FormalSeries, targets, K: CompactGrid, epsilon: float,
                           ladder: Sequence[int]) -> CesaroReport:
    """Density estimates of success sets per target, plus calculator identities.

    Asserted identities only: the complement identity at each finite horizon,
    and pairwise disjointness of success sets for targets separated by more
    than 2*eps on K.  Nothing asymptotic is claimed (finite horizons).
    """
    ladder = list(ladder)
    N = ladder[-1]
    labels, dens, sets = [], [], []
    for t in targets:
        label = getattr(t, "descriptor", None) or str(t)
        s = success_set(f, t, K, epsilon, N)
        labels.append(label)
        sets.append(s)
        dens.append(density(s, ladder))
    comp_ok = all(
        s.count_upto(NN) + s.complement_upto(NN).count_upto(NN) == NN
        for s in sets for NN in ladder)
    pts = K.points_array()
    disjoint = []
    for i in range(len(targets)):
        for j in range(i + 1, len(targets)):
            ti, tj = targets[i], targets[j]
            vi = np.asarray(ti(pts)) if callable(ti) else np.full(len(pts), ti)
            vj = np.asarray(tj(pts)) if callable(tj) else np.full(len(pts), tj)
            gap = float(np.abs(vi - vj).min())
            if 2 * epsilon < gap:
                inter = set(sets[i].members) & set(sets[j].members)
                disjoint.append(((labels[i], labels[j]), len(inter) == 0))
    return CesaroReport(tuple(labels), tuple(dens), comp_ok, tuple(disjoint))
