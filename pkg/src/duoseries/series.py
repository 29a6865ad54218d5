"""Polynomials, formal series, sample grids and sup-norm estimation.

This module is the substrate for everything else: exact valuation/degree
bookkeeping for polynomials (structural zeros are *exact*, never a float
tolerance), growable append-only coefficient sequences, discretized compact
sets (real intervals, complex circles and circle-arcs), and grid-based
sup-norm estimation with golden-section refinement.

Conventions
-----------
* The zero polynomial has ``valuation == degree == 0``.
* ``coeffs[k] == 0`` exactly (``==``, not approximately) for ``k < valuation``.
* Sup-norms are reported from finite grids, so they are lower bounds of the
  mathematical supremum; inequality checks downstream therefore carry a
  multiplicative slack factor (default 1.01).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DomainError, UsageError

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

#: degree cap for float-mode monomial coefficient output (configurable per call)
FLOAT_DEGREE_CAP = 120


def _is_exact(value) -> bool:
    return isinstance(value, (Fraction, int))


# ---------------------------------------------------------------------------
# stable (factored) evaluation forms
# ---------------------------------------------------------------------------


def _log_binomials(m: int) -> np.ndarray:
    """log C(m, k) for k = 0..m via cumulative log-factorials."""
    lg = np.concatenate([[0.0], np.cumsum(np.log(np.arange(1, m + 1)))]) if m else np.zeros(1)
    return lg[m] - lg - lg[::-1]


def bernstein_basis_eval(samples: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Evaluate sum_k samples[k] C(m,k) u^k (1-u)^(m-k) for u in [0,1].

    Log-space weights normalized per point; exact at the endpoints.  This is
    the convex-combination path: the result is always within
    [min(samples), max(samples)].
    """
    samples = np.asarray(samples, dtype=float)
    m = len(samples) - 1
    u = np.atleast_1d(np.asarray(u, dtype=float))
    out = np.empty(u.shape, dtype=float)
    interior = (u > 0.0) & (u < 1.0)
    out[u <= 0.0] = samples[0]
    out[u >= 1.0] = samples[-1]
    if interior.any():
        ui = u[interior]
        lb = _log_binomials(m)
        k = np.arange(m + 1)
        # chunk the (points, m+1) weight matrix to bound memory
        chunk = max(1, int(4_000_000 // (m + 1)))
        vals = np.empty(len(ui))
        for s in range(0, len(ui), chunk):
            ub = ui[s : s + chunk, None]
            lw = lb[None, :] + k[None, :] * np.log(ub) + (m - k)[None, :] * np.log1p(-ub)
            lw -= lw.max(axis=1, keepdims=True)
            w = np.exp(lw)
            vals[s : s + chunk] = (w @ samples) / w.sum(axis=1)
        out[interior] = vals
    return out


@dataclass(frozen=True)
class BernsteinForm:
    """p(x) = sum_k samples[k] C(m,k) (x/span)^k (1 - x/span)^(m-k) on [0, span]."""

    samples: tuple
    span: float

    def eval(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return bernstein_basis_eval(np.asarray(self.samples, dtype=float), x / self.span)


@dataclass(frozen=True)
class ChebWindowForm:
    """p(x) = x^l * sum_i coef[i] T_i(x / scale)."""

    valuation_floor: int
    scale: float
    coef: tuple

    def eval(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        body = np.polynomial.chebyshev.chebval(x / self.scale, np.asarray(self.coef, dtype=float))
        return (x**self.valuation_floor) * body


@dataclass(frozen=True)
class SquareCompositeForm:
    """p(x) = even(x^2) + x * odd(x^2) with stable sub-forms on [0, span^2]."""

    even: "BernsteinForm | ChebWindowForm | None"
    odd: "BernsteinForm | ChebWindowForm | None"

    def eval(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = x * x
        out = np.zeros_like(x, dtype=float)
        if self.even is not None:
            out = out + self.even.eval(y)
        if self.odd is not None:
            out = out + x * self.odd.eval(y)
        return out


# ---------------------------------------------------------------------------
# Polynomial
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Polynomial:
    """Finite coefficient vector with exact valuation/degree metadata.

    ``coeffs`` may hold floats or Fractions (exact-rational mode). A factored
    ``stable_form`` may be attached by the approximation engines; it is used
    by :func:`eval_stable` for well-conditioned evaluation at high degree.
    """

    coeffs: tuple
    stable_form: object | None = field(default=None, compare=False, repr=False)

    @staticmethod
    def from_coeffs(coeffs: Sequence, stable_form=None) -> "Polynomial":
        cs = list(coeffs)
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if not cs:
            cs = [0]
        if len(cs) == 1 and cs[0] == 0:
            cs = [0]
        return Polynomial(tuple(cs), stable_form)

    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial((0,))

    @staticmethod
    def monomial(k: int, c=1.0) -> "Polynomial":
        return Polynomial.from_coeffs([0] * k + [c])

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    @property
    def degree(self) -> int:
        if self.is_zero:
            return 0
        d = len(self.coeffs) - 1
        while d > 0 and self.coeffs[d] == 0:
            d -= 1
        return d

    @property
    def valuation(self) -> int:
        if self.is_zero:
            return 0
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        return 0

    @property
    def n_nonzero(self) -> int:
        return sum(1 for c in self.coeffs if c != 0)

    def float_coeffs(self) -> np.ndarray:
        return np.asarray([float(c) for c in self.coeffs], dtype=float)

    def evaluate(self, x, exact: bool = False):
        """Horner evaluation of the monomial form (real or complex points)."""
        if exact or isinstance(x, Fraction):
            acc = Fraction(0)
            xf = x if isinstance(x, Fraction) else Fraction(x)
            for c in reversed(self.coeffs):
                acc = acc * xf + (c if isinstance(c, Fraction) else Fraction(c))
            return acc
        xs = np.asarray(x)
        cs = self.float_coeffs().astype(complex if np.iscomplexobj(xs) else float)
        return np.polynomial.polynomial.polyval(xs, cs)

    def __call__(self, x):
        return self.evaluate(x)

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial.zero()
        return Polynomial.from_coeffs([k * c for k, c in enumerate(self.coeffs)][1:])

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return Polynomial.from_coeffs([x + y for x, y in zip(a, b)])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-1) * other

    def __rmul__(self, scalar) -> "Polynomial":
        return Polynomial.from_coeffs([scalar * c for c in self.coeffs])

    def __mul__(self, scalar) -> "Polynomial":
        return self.__rmul__(scalar)

    def __neg__(self) -> "Polynomial":
        return (-1) * self

    def to_json(self) -> dict:
        return {
            "coeffs": [str(c) if isinstance(c, Fraction) else c for c in self.coeffs],
            "valuation": self.valuation,
            "degree": self.degree,
        }

    @staticmethod
    def from_json(obj: dict) -> "Polynomial":
        cs = [Fraction(c) if isinstance(c, str) else c for c in obj["coeffs"]]
        p = Polynomial.from_coeffs(cs)
        if p.valuation != obj["valuation"] or p.degree != obj["degree"]:
            raise DomainError("polynomial JSON metadata inconsistent with coefficients")
        return p


def eval_stable(p: Polynomial, x, path: str = "auto"):
    """Evaluate ``p`` preferring its factored form when one is attached.

    ``path``: "auto" (factored if available), "monomial", or "factored".
    The two paths agree within roundoff relative to the conditioning measure
    sum_j |c_j| |x|^j; at low degree that means ~1e-6 relative agreement.
    """
    if path not in ("auto", "monomial", "factored"):
        raise UsageError(f"unknown eval path {path!r}")
    if path == "monomial" or (path == "auto" and p.stable_form is None):
        return p.evaluate(x)
    if p.stable_form is None:
        raise DomainError("polynomial carries no factored form")
    return p.stable_form.eval(x)


def dual_path_gap(p: Polynomial, x) -> float:
    """Max abs disagreement between monomial and factored evaluation at x."""
    a = np.atleast_1d(p.evaluate(x))
    b = np.atleast_1d(eval_stable(p, x, path="factored"))
    return float(np.max(np.abs(a - b)))


# ---------------------------------------------------------------------------
# FormalSeries
# ---------------------------------------------------------------------------


class FormalSeries:
    """Growable coefficient sequence (a_0, a_1, ...), append-only.

    Once a coefficient is written it is never modified; extensions pad
    untouched gaps with exact zeros.
    """

    def __init__(self, coeffs: Iterable = ()):  # noqa: D401
        self._coeffs: list = list(coeffs)

    @property
    def coeffs(self) -> tuple:
        return tuple(self._coeffs)

    @property
    def current_degree(self) -> int:
        return len(self._coeffs) - 1

    def coefficient(self, k: int):
        return self._coeffs[k] if 0 <= k < len(self._coeffs) else 0

    def extend_with(self, block: Polynomial) -> None:
        """Append a block whose support starts strictly beyond current_degree."""
        if not block.is_zero and block.valuation <= self.current_degree:
            raise DomainError(
                f"block valuation {block.valuation} does not exceed current degree {self.current_degree}"
            )
        if block.is_zero:
            return
        pad = block.valuation - (self.current_degree + 1)
        self._coeffs.extend([0] * pad)
        self._coeffs.extend(block.coeffs[block.valuation : block.degree + 1])

    def to_json(self) -> dict:
        return {
            "coeffs": [str(c) if isinstance(c, Fraction) else c for c in self._coeffs],
            "current_degree": self.current_degree,
        }


def partial_sum(f: FormalSeries, n: int) -> Polynomial:
    """S_n = sum_{k<=n} a_k x^k; coefficients not yet written count as 0."""
    if n < 0:
        raise UsageError("partial sum index must be >= 0")
    cs = [f.coefficient(k) for k in range(n + 1)]
    return Polynomial.from_coeffs(cs)


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Arc:
    """Circle arc {|z| = r, -delta/2 <= arg z <= delta/2}."""

    r: float
    delta: float

    def __post_init__(self):
        if not (self.r > 0):
            raise UsageError("arc radius must be positive")
        if not (0 < self.delta < 2 * math.pi):
            raise UsageError("arc angle must lie in (0, 2*pi)")


@dataclass(frozen=True)
class CompactGrid:
    """Discretized compact set with sample points and a spacing parameter."""

    kind: str
    points: tuple
    params: tuple = ()
    spacing: float = 0.0

    @staticmethod
    def interval(lo: float, hi: float, n: int = 512) -> "CompactGrid":
        if hi <= lo:
            raise UsageError("interval endpoints must satisfy lo < hi")
        pts = np.linspace(lo, hi, n)
        return CompactGrid("interval", tuple(pts), (("lo", lo), ("hi", hi)), (hi - lo) / (n - 1))

    @staticmethod
    def symmetric(A: float, n: int = 512) -> "CompactGrid":
        return CompactGrid.interval(-A, A, n)

    @staticmethod
    def positive(A: float, n: int = 512) -> "CompactGrid":
        return CompactGrid.interval(0.0, A, n)

    @staticmethod
    def circle(r: float, n: int = 1024) -> "CompactGrid":
        th = 2 * np.pi * np.arange(n) / n
        pts = r * np.exp(1j * th)
        return CompactGrid("circle", tuple(pts), (("r", r),), 2 * math.pi / n)

    @staticmethod
    def from_arc(arc: Arc, n: int = 1024) -> "CompactGrid":
        th = np.linspace(-arc.delta / 2, arc.delta / 2, n)
        pts = arc.r * np.exp(1j * th)
        return CompactGrid("arc", tuple(pts), (("r", arc.r), ("delta", arc.delta)), arc.delta / (n - 1))

    @staticmethod
    def finite(points: Sequence) -> "CompactGrid":
        pts = list(dict.fromkeys(points))
        return CompactGrid("points", tuple(pts), (), 0.0)

    def union(self, other: "CompactGrid") -> "CompactGrid":
        pts = list(dict.fromkeys(tuple(self.points) + tuple(other.points)))
        sp = max(self.spacing, other.spacing)
        return CompactGrid("union", tuple(pts), (("parts", (self.kind, other.kind)),), sp)

    @property
    def is_real_interval(self) -> bool:
        return self.kind == "interval"

    def points_array(self) -> np.ndarray:
        return np.asarray(self.points)

    def to_json(self) -> dict:
        return {"kind": self.kind, "parameters": dict((k, v) for k, v in self.params if k != "parts"),
                "count": len(self.points)}


def _golden_max(f: Callable[[float], float], a: float, b: float, iters: int = 60) -> float:
    """Golden-section search for the max of f on [a, b] (unimodal assumed)."""
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    best = max(f1, f2)
    for _ in range(iters):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = f(x1)
        best = max(best, f1, f2)
    return best


def sup_norm(p, K: CompactGrid, refine: bool = True) -> float:
    """Grid max of |p| over K, golden-refined around the best point on real intervals.

    The result is a certified lower bound of the true sup; see
    :func:`sup_norm_interval` for a two-sided estimate.
    """
    if len(K.points) == 0:
        raise UsageError("sup_norm requires a nonempty grid")
    pts = K.points_array()
    fn = p if callable(p) and not isinstance(p, Polynomial) else p.evaluate
    vals = np.abs(np.atleast_1d(fn(pts)))
    raw = float(vals.max())
    if not (refine and K.is_real_interval and len(K.points) >= 3):
        return raw
    i = int(vals.argmax())
    lo = pts[max(0, i - 1)].real
    hi = pts[min(len(pts) - 1, i + 1)].real
    refined = _golden_max(lambda x: float(abs(np.atleast_1d(fn(x))[0])), lo, hi)
    return max(raw, refined)


def sup_norm_interval(p: Polynomial, K: CompactGrid, slack: float = 1.01) -> tuple:
    """[lower, upper] bracket for sup_K |p|: grid value plus a derivative-based gap."""
    lo = sup_norm(p, K)
    dp = p.derivative()
    pts = K.points_array()
    dvals = np.abs(np.atleast_1d(dp.evaluate(pts)))
    m1 = float(dvals.max()) * slack
    if K.kind in ("circle", "arc"):
        r = dict(K.params).get("r", float(np.abs(pts).max()))
        gap = m1 * r * (K.spacing / 2)
    else:
        gap = m1 * (K.spacing / 2)
    return lo, lo + gap


# ---------------------------------------------------------------------------
# LambdaSequence
# ---------------------------------------------------------------------------

_ALLOWED_LAMBDA = {"n", "ceil", "floor", "log2"}


def _parse_lambda_expr(expr: str) -> Callable[[int], int]:
    import re

    cleaned = expr.replace("^", "**")
    names = set(re.findall(r"[A-Za-z_][A-Za-z0-9_]*", cleaned))
    if not names <= _ALLOWED_LAMBDA:
        raise UsageError(f"lambda expression uses unknown names: {sorted(names - _ALLOWED_LAMBDA)}")
    if not re.fullmatch(r"[0-9A-Za-z_+\-*/(). ]+", cleaned):
        raise UsageError(f"lambda expression has illegal characters: {expr!r}")
    code = compile(cleaned, "<lambda-spec>", "eval")

    def fn(n: int) -> int:
        val = eval(code, {"__builtins__": {}}, {"n": n, "ceil": math.ceil, "floor": math.floor, "log2": math.log2})
        ival = int(round(val))
        if abs(val - ival) > 1e-9:
            raise DomainError(f"lambda spec {expr!r} is not integer-valued at n={n}")
        return ival

    return fn


class LambdaSequence:
    """Strictly increasing sequence of positive integers, table or closed form."""

    def __init__(self, fn: Callable[[int], int] | None = None, table: Sequence[int] | None = None,
                 spec: str = ""):
        if (fn is None) == (table is None):
            raise UsageError("provide exactly one of fn or table")
        self._fn = fn
        self._table = list(table) if table is not None else None
        self.spec = spec
        self._cache: dict[int, int] = {}
        self._validated_to = 0

    @staticmethod
    def from_spec(spec) -> "LambdaSequence":
        if isinstance(spec, LambdaSequence):
            return spec
        if isinstance(spec, (list, tuple)):
            return LambdaSequence(table=list(spec), spec="table")
        s = str(spec).strip()
        if s in ("identity", "n"):
            return LambdaSequence(fn=lambda n: n, spec="n")
        return LambdaSequence(fn=_parse_lambda_expr(s), spec=s)

    def _value(self, n: int) -> int:
        if self._table is not None:
            if n > len(self._table):
                raise DomainError(f"lambda table has no entry for n={n}")
            return int(self._table[n - 1])
        return int(self._fn(n))

    def __call__(self, n: int) -> int:
        if n < 1:
            raise UsageError("lambda sequence is indexed from 1")
        if n > self._validated_to:
            prev = self._cache[self._validated_to] if self._validated_to >= 1 else 0
            for k in range(self._validated_to + 1, n + 1):
                v = self._value(k)
                if v <= prev:
                    raise DomainError(
                        f"lambda sequence not strictly increasing at n={k}: {prev} -> {v}")
                self._cache[k] = v
                prev = v
            self._validated_to = n
        return self._cache[n]

    @property
    def is_identity(self) -> bool:
        return self.spec == "n"


@dataclass(frozen=True)
class RatioProfile:
    """Table of lambda_n / n with its running maximum."""

    ratios: tuple
    running_max: tuple

    @property
    def max_ratio(self) -> float:
        return self.running_max[-1]


def ratio_profile(lam: LambdaSequence, N: int) -> RatioProfile:
    """lambda_n/n for n = 1..N plus the running max (witness-candidate diagnostic)."""
    if N < 1:
        raise UsageError("ratio profile horizon must be >= 1")
    ratios = []
    run = []
    best = -math.inf
    for n in range(1, N + 1):
        r = lam(n) / n
        ratios.append(r)
        best = max(best, r)
        run.append(best)
    return RatioProfile(tuple(ratios), tuple(run))


def grids_to_json(grid: CompactGrid) -> str:
    return json.dumps(grid.to_json(), sort_keys=True)
