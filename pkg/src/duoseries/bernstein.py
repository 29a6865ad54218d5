"""Valuation/degree-windowed Bernstein approximation of functions vanishing at 0.

Two public pipelines:

* :func:`constrained_approx_positive` -- on [0, A].  The target is flattened
  to exact zero on [0, eta/2] with a linear bridge on [eta/2, eta], then fit
  by the degree-m Bernstein polynomial

      B_m(h)(x) = A^{-m} sum_k C(m,k) h(Ak/m) x^k (A-x)^{m-k}.

  Samples below the valuation floor l sit inside the flattened zone, so the
  monomial coefficients below l vanish *exactly* (integer arithmetic, not a
  float tolerance).

* :func:`constrained_approx_symmetric` -- on [-A, A].  Pipeline: flatten
  near 0 (four branches), divide by x^2 and fit the quotient by an
  unconstrained Bernstein polynomial P on the affinely mapped interval
  (Weierstrass step, degree doubling), split W = x^2 P into even/odd parts
  W = Q1(x^2) + x Q2(x^2), re-approximate Q1 and Q2 on [0, A^2] with the
  halved index windows, and recombine as P1(x^2) + x P2(x^2).

Error budget per stage (eps = requested tolerance): flatten eps/2,
Weierstrass eps/4, each recombination leg eps/8.  The odd leg's stage metric
carries the sqrt(y) weight it enters the final triangle inequality with,
i.e. sup_y y^{1/2} |P2 - Q2| = sup_x |x (P2(x^2) - Q2(x^2))|.

Bernstein-to-monomial conversion is performed in exact integer arithmetics
(forward differences over a common dyadic denominator) and only *rounded*
to floats in float mode; in float mode the admissible degree is capped
(default 120) because monomial coefficients stop being usable in doubles
far beyond that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import (ApproxNotReachedError, DegreeCapError, DomainError,
                     InfeasibleWindowError, UsageError)
from .series import (FLOAT_DEGREE_CAP, BernsteinForm, CompactGrid, Polynomial,
                     SquareCompositeForm, bernstein_basis_eval, sup_norm)

ZERO_AT_ORIGIN_TOL = 1e-12


# ---------------------------------------------------------------------------
# targets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TargetFunction:
    """Continuous target on [-A, A] (or [0, A]) with h(0) = 0.

    ``fn`` must accept numpy arrays.  Construction validates h(0) = 0 within
    1e-12; everything downstream relies on it.
    """

    descriptor: str
    fn: Callable = field(compare=False, repr=False)
    A: float = 1.0

    def __post_init__(self):
        v = float(np.atleast_1d(self.fn(np.array([0.0])))[0])
        if abs(v) > ZERO_AT_ORIGIN_TOL:
            raise DomainError(f"target {self.descriptor!r} has h(0) = {v:g} != 0")

    def __call__(self, x):
        return np.asarray(self.fn(np.atleast_1d(np.asarray(x, dtype=float))), dtype=float)

    def value(self, x: float) -> float:
        return float(np.atleast_1d(self.fn(np.array([float(x)])))[0])

    def difference(self, other: "TargetFunction") -> "TargetFunction":
        return TargetFunction(f"({self.descriptor})-({other.descriptor})",
                              lambda x, a=self.fn, b=other.fn: np.asarray(a(x)) - np.asarray(b(x)),
                              self.A)

    def minus_polynomial(self, p: Polynomial) -> "TargetFunction":
        return TargetFunction(f"({self.descriptor})-poly(deg={p.degree})",
                              lambda x, a=self.fn, q=p: np.asarray(a(x)) - np.asarray(q.evaluate(x)),
                              self.A)

    @property
    def is_zero(self) -> bool:
        return self.descriptor == "zero"

    @staticmethod
    def named(name: str, A: float = 1.0) -> "TargetFunction":
        key = name.strip()
        base = {
            "zero": lambda x: np.zeros_like(x),
            "x": lambda x: x,
            "identity": lambda x: x,
            "minus_x": lambda x: -x,
            "x^2": lambda x: x * x,
            "square": lambda x: x * x,
            "x^3": lambda x: x**3,
            "sinpi": lambda x: np.sin(np.pi * x),
            "one_minus_cos": lambda x: 1.0 - np.cos(np.pi * x / A),
            "xexp": lambda x: x * np.exp(x),
        }
        if key in base:
            return TargetFunction("zero" if key == "zero" else key, base[key], A)
        if key.startswith("vanish:"):
            parts = key.split(":")[1].split(",")
            c = float(parts[0])
            p = float(parts[1]) if len(parts) > 1 else 2.0
            fn = lambda x, c=c, p=p: np.sign(x) * np.maximum(np.abs(x) - c, 0.0) ** p
            return TargetFunction(key, fn, A)
        if key.startswith("poly:"):
            cs = [float(t) for t in key.split(":")[1].split(",")]
            return TargetFunction.from_polynomial(Polynomial.from_coeffs(cs), A, descriptor=key)
        raise UsageError(f"unknown target descriptor {name!r}")

    @staticmethod
    def from_polynomial(p: Polynomial, A: float = 1.0, descriptor: str | None = None) -> "TargetFunction":
        return TargetFunction(descriptor or f"poly(deg={p.degree})",
                              lambda x, q=p: np.asarray(q.evaluate(x), dtype=float), A)

    @staticmethod
    def from_table(xs, ys, A: float = 1.0, descriptor: str = "table") -> "TargetFunction":
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape or not np.all(np.diff(xs) > 0):
            raise UsageError("table target needs strictly increasing x samples")
        return TargetFunction(descriptor, lambda x: np.interp(x, xs, ys), A)

    @staticmethod
    def from_callable(fn: Callable, descriptor: str, A: float = 1.0) -> "TargetFunction":
        return TargetFunction(descriptor, fn, A)


@dataclass(frozen=True)
class Window:
    """Monomial support constraint {l, ..., m}: valuation floor, degree ceiling."""

    l: int
    m: int

    def __post_init__(self):
        if self.l < 0 or self.m < self.l:
            raise UsageError(f"invalid window ({self.l}, {self.m})")


@dataclass(frozen=True)
class ModificationParams:
    """Flattening cutoff eta and the tolerance it was selected for."""

    eta: float
    epsilon: float


@dataclass
class ApproxReport:
    """Per-stage error accounting for one constrained approximation."""

    eta: float
    stage_errors: dict
    total_error: float
    window: tuple
    degree: int
    mode: str


@dataclass
class ApproxResult:
    polynomial: Polynomial
    report: ApproxReport


# ---------------------------------------------------------------------------
# eta selection and flattening
# ---------------------------------------------------------------------------


def select_eta(h: TargetFunction, epsilon: float, *, two_sided: bool = True,
               grid_n: int = 4097, weight_exponent: float = 0.0) -> ModificationParams:
    """Largest grid-detected eta with max_{[0,eta]} w(x)|h(x)| <= eps/4, halved.

    ``weight_exponent`` generalizes the criterion to x^w |h(x)| (used by the
    odd recombination leg, whose stage error carries a sqrt weight).
    Always returns eta > 0; fails if h(0) != 0 beyond tolerance.
    """
    if epsilon <= 0:
        raise UsageError("tolerance must be positive")
    if abs(h.value(0.0)) > ZERO_AT_ORIGIN_TOL:
        raise DomainError(f"target {h.descriptor!r} does not vanish at 0")
    A = h.A
    xs = np.linspace(0.0, A, grid_n)
    vals = np.abs(h(xs))
    if two_sided:
        vals = np.maximum(vals, np.abs(h(-xs)))
    if weight_exponent:
        vals = xs**weight_exponent * vals
    ok = np.maximum.accumulate(vals) <= epsilon / 4.0
    # the running max is nondecreasing, so ok is a True-prefix
    prefix = len(ok) if ok.all() else int(np.argmin(ok))
    eta_grid = xs[prefix - 1] if prefix >= 2 else xs[1] / 2.0
    eta = min(eta_grid, A) / 2.0
    return ModificationParams(eta=float(eta), epsilon=float(epsilon))


def modify_near_zero(h: TargetFunction, params: ModificationParams,
                     symmetric: bool = True) -> TargetFunction:
    """Flattened target: 0 on |x| <= eta/2, linear bridge(s), h beyond eta.

    One-sided bridge: 2 h(eta)/eta * (x - eta/2); symmetric adds the mirror
    branch -2 h(-eta)/eta * (x + eta/2) on [-eta, -eta/2].
    """
    eta = params.eta
    h_eta = h.value(eta)
    h_meta = h.value(-eta) if symmetric else 0.0

    def flattened(x, fn=h.fn, eta=eta, h_eta=h_eta, h_meta=h_meta, symmetric=symmetric):
        x = np.asarray(x, dtype=float)
        out = np.asarray(fn(x), dtype=float).copy()
        out[np.abs(x) <= eta / 2] = 0.0
        pos = (x >= eta / 2) & (x <= eta)
        out[pos] = 2 * h_eta / eta * (x[pos] - eta / 2)
        if symmetric:
            neg = (x <= -eta / 2) & (x >= -eta)
            out[neg] = -2 * h_meta / eta * (x[neg] + eta / 2)
        else:
            out[x < 0] = 0.0
        return out

    kind = "sym" if symmetric else "pos"
    return TargetFunction(f"flatten[{kind},eta={eta:.6g}]({h.descriptor})", flattened, h.A)


# ---------------------------------------------------------------------------
# exact Bernstein -> monomial conversion (forward differences)
# ---------------------------------------------------------------------------


def _samples_to_common_integers(samples) -> tuple[list[int], Fraction]:
    """Represent samples exactly as N_k / D with integer N_k and D a Fraction."""
    fracs = []
    for s in samples:
        if isinstance(s, Fraction):
            fracs.append(s)
        elif isinstance(s, int):
            fracs.append(Fraction(s))
        else:
            fracs.append(Fraction(float(s)))
    den = 1
    for f in fracs:
        den = den * f.denominator // math.gcd(den, f.denominator)
    ints = [int(f.numerator * (den // f.denominator)) for f in fracs]
    return ints, Fraction(den)


def bernstein_to_monomial(samples, A) -> list[Fraction]:
    """Exact monomial coefficients of B_m: c_j = C(m,j) * (fwd-diff^j N)(0) / (D A^j).

    Uses the finite-difference identity for the power-basis form of a
    Bernstein polynomial; all arithmetic on integers, one Fraction per
    output coefficient.
    """
    m = len(samples) - 1
    ints, den = _samples_to_common_integers(samples)
    A_frac = A if isinstance(A, Fraction) else Fraction(float(A))
    diffs = list(ints)
    out: list[Fraction] = []
    binom = 1
    for j in range(m + 1):
        out.append(Fraction(binom * diffs[0]) / (den * A_frac**j))
        if j < m:
            diffs = [diffs[i + 1] - diffs[i] for i in range(len(diffs) - 1)]
            binom = binom * (m - j) // (j + 1)
    return out


def bernstein_raw(h: TargetFunction, m: int, A: float, *, mode: str = "float",
                  degree_cap: int = FLOAT_DEGREE_CAP) -> Polynomial:
    """Degree-m Bernstein polynomial of h on [0, A], monomial + factored form.

    Float mode refuses m beyond ``degree_cap`` (monomial doubles degrade);
    rational mode is exact at any degree.
    """
    if m < 1:
        raise UsageError("Bernstein degree must be >= 1")
    if mode == "float" and m > degree_cap:
        raise DegreeCapError(
            f"degree {m} above float-mode cap {degree_cap}; use rational mode", degree=m)
    nodes = A * np.arange(m + 1) / m
    samples = [h.value(t) for t in nodes]
    return _polynomial_from_samples(samples, A, mode)


def _polynomial_from_samples(samples, A, mode: str) -> Polynomial:
    exact = bernstein_to_monomial(samples, A)
    form = BernsteinForm(tuple(float(s) for s in samples), float(A))
    if mode == "rational":
        return Polynomial.from_coeffs(exact, stable_form=form)
    return Polynomial.from_coeffs([float(c) for c in exact], stable_form=form)


# ---------------------------------------------------------------------------
# windowed fit machinery (shared by the public ops and the symmetric legs)
# ---------------------------------------------------------------------------


@dataclass
class _LegResult:
    samples: list
    polynomial: Polynomial
    stage_error: float
    eta: float


def _windowed_bernstein_leg(Q: Callable, l: int, m: int, span: float, tol: float,
                            *, weight_exponent: float, mode: str, degree_cap: int,
                            check_grid_n: int = 1025, leg_name: str = "leg") -> _LegResult:
    """Fit Q on [0, span] by B_m with samples below l forced to exact zero.

    Feasibility: the flattening zone [0, eta/2] must contain every sample
    strictly below the valuation floor, i.e. span*(l-1)/m <= eta/2.
    Stage error is measured against the *unmodified* Q in the weighted metric
    sup_y y^w |B - Q| (the metric this leg enters the final triangle with).
    """
    target = TargetFunction(f"{leg_name}", lambda x, f=Q: f(x), span)
    if mode == "float" and m > degree_cap:
        raise DegreeCapError(
            f"{leg_name}: degree {m} above float-mode cap {degree_cap}; use rational mode",
            degree=m)
    params = select_eta(target, tol, two_sided=False, weight_exponent=weight_exponent)
    eta = params.eta
    if l >= 1 and span * (l - 1) / m > eta / 2:
        raise InfeasibleWindowError(
            f"{leg_name}: samples below valuation floor {l} extend to "
            f"{span * (l - 1) / m:.3g} > eta/2 = {eta / 2:.3g}",
            l=l, m=m, eta=eta, span=span)
    flat = modify_near_zero(target, params, symmetric=False)
    nodes = span * np.arange(m + 1) / m
    samples = [flat.value(t) for t in nodes]
    for k in range(min(l, m + 1)):
        samples[k] = 0
    poly = _polynomial_from_samples(samples, span, mode)
    ys = np.linspace(0.0, span, check_grid_n)
    fit = bernstein_basis_eval(np.asarray([float(s) for s in samples]), ys / span)
    err = (ys**weight_exponent) * np.abs(fit - Q(ys))
    return _LegResult(samples, poly, float(err.max()), eta)


def constrained_approx_positive(h: TargetFunction, w: Window, A: float, epsilon: float,
                                *, mode: str = "float", degree_cap: int = FLOAT_DEGREE_CAP,
                                grid_n: int = 513) -> ApproxResult:
    """Windowed approximation of h on [0, A]: valuation >= w.l, degree <= w.m.

    Feasibility precheck: A*w.l/w.m <= eta/2 for the eta selected from
    (h, eps); raises INFEASIBLE_WINDOW otherwise.  A-posteriori the fit must
    satisfy sup_{[0,A]} |P - h| < eps or APPROX_NOT_REACHED is raised.
    """
    if h.is_zero:
        report = ApproxReport(eta=A / 2, stage_errors={"flatten": 0.0, "fit": 0.0},
                              total_error=0.0, window=(w.l, w.m), degree=0, mode=mode)
        return ApproxResult(Polynomial.zero(), report)
    params = select_eta(h, epsilon, two_sided=False)
    if A * w.l / w.m > params.eta / 2:
        raise InfeasibleWindowError(
            f"window ratio l/m = {w.l}/{w.m} too small: A*l/m = {A * w.l / w.m:.4g} "
            f"> eta/2 = {params.eta / 2:.4g}", l=w.l, m=w.m, eta=params.eta)
    flat = modify_near_zero(h, params, symmetric=False)
    grid = CompactGrid.positive(A, grid_n)
    mod_err = sup_norm(lambda x: h(x) - flat(x), grid, refine=False)
    leg = _windowed_bernstein_leg(
        lambda y: h(y), w.l, w.m, A, epsilon, weight_exponent=0.0, mode=mode,
        degree_cap=degree_cap, leg_name=f"positive({h.descriptor})")
    poly = leg.polynomial
    total = sup_norm(lambda x: np.asarray(eval_stable_vec(poly, x)) - h(x), grid)
    if poly.degree > w.m:
        raise DomainError("degree ceiling violated (internal)")
    if total >= epsilon:
        raise ApproxNotReachedError(
            f"measured error {total:.4g} >= eps = {epsilon:.4g} at degree {w.m} "
            "(degree too small for the target's modulus of continuity)",
            total_error=total, l=w.l, m=w.m)
    report = ApproxReport(eta=leg.eta,
                          stage_errors={"flatten": mod_err, "fit": leg.stage_error},
                          total_error=total, window=(w.l, w.m), degree=poly.degree, mode=mode)
    return ApproxResult(poly, report)


def eval_stable_vec(p: Polynomial, x):
    """Factored-form evaluation when available, else monomial (vectorized)."""
    if p.stable_form is not None:
        return p.stable_form.eval(x)
    return p.evaluate(x)


# ---------------------------------------------------------------------------
# symmetric pipeline
# ---------------------------------------------------------------------------


def _weierstrass_quotient_fit(flat: TargetFunction, eta: float, A: float, budget: float,
                              *, start_degree: int = 512, cap: int = 32768,
                              grid_n: int = 2049):
    """Unconstrained Bernstein fit P of g = flat/x^2 on the mapped interval.

    Doubles the fit degree until sup_x |x^2 P(x) - flat(x)| < budget (the
    paper-level Weierstrass step is an existence statement; degree doubling
    with an explicit cap realizes it constructively).  g is evaluated as 0
    inside |x| < eta/4 where flat vanishes identically (division guard).
    """

    def quotient(x):
        x = np.asarray(x, dtype=float)
        guard = np.abs(x) < eta / 4
        denom = np.where(guard, 1.0, x * x)
        return np.where(guard, 0.0, flat(x) / denom)

    xg = np.linspace(-A, A, grid_n)
    flat_vals = flat(xg)
    mW = start_degree
    while True:
        u_nodes = np.arange(mW + 1) / mW
        g_samples = quotient(2 * A * u_nodes - A)
        fit = bernstein_basis_eval(g_samples, (xg + A) / (2 * A))
        err = float(np.abs(xg * xg * fit - flat_vals).max())
        if err < budget:
            break
        if mW >= cap:
            raise ApproxNotReachedError(
                f"Weierstrass step stalled: weighted error {err:.4g} >= {budget:.4g} "
                f"at fit degree {mW}", stage="weierstrass", degree=mW)
        mW *= 2

    def W_eval(x):
        x = np.asarray(x, dtype=float)
        return x * x * bernstein_basis_eval(g_samples, (x + A) / (2 * A))

    return W_eval, err, mW


def constrained_approx_symmetric(h: TargetFunction, w: Window, A: float, epsilon: float,
                                 *, mode: str = "float", degree_cap: int = FLOAT_DEGREE_CAP,
                                 grid_n: int = 513, weierstrass_cap: int = 32768) -> ApproxResult:
    """Windowed approximation of h on [-A, A] via the even/odd square split.

    Stages and budgets: flatten (eps/2), Weierstrass x^2-weighted quotient
    fit (eps/4), even leg Q1 on [0, A^2] with window (floor(l/2)+1,
    floor(m/2)) (eps/8), odd leg Q2 with window (floor(l/2), floor((m-1)/2))
    and sqrt-weighted stage metric (eps/8).  Recombined support lies in
    [l, m] by the parity index arithmetic; valuation >= l is structural.
    """
    if w.l < 1:
        raise UsageError("symmetric window needs valuation floor >= 1")
    if h.is_zero:
        report = ApproxReport(eta=A / 2, stage_errors={}, total_error=0.0,
                              window=(w.l, w.m), degree=0, mode=mode)
        return ApproxResult(Polynomial.zero(), report)
    params = select_eta(h, epsilon, two_sided=True)
    eta = params.eta
    if A * w.l / w.m > eta / 2:
        raise InfeasibleWindowError(
            f"window ratio l/m = {w.l}/{w.m} too small: A*l/m = {A * w.l / w.m:.4g} "
            f"> eta/2 = {eta / 2:.4g}", l=w.l, m=w.m, eta=eta)
    flat = modify_near_zero(h, params, symmetric=True)
    grid = CompactGrid.symmetric(A, grid_n)
    mod_err = sup_norm(lambda x: h(x) - flat(x), grid, refine=False)
    if mod_err > epsilon / 2 * 1.01:
        raise ApproxNotReachedError(
            f"flattening stage error {mod_err:.4g} exceeds eps/2", stage="flatten")

    W_eval, weier_err, mW = _weierstrass_quotient_fit(
        flat, eta, A, epsilon / 4, cap=weierstrass_cap)

    def Q1(y):
        y = np.asarray(y, dtype=float)
        r = np.sqrt(np.maximum(y, 0.0))
        return 0.5 * (W_eval(r) + W_eval(-r))

    def Q2(y):
        y = np.asarray(y, dtype=float)
        r = np.sqrt(np.maximum(y, 0.0))
        out = np.zeros_like(y)
        pos = y > 0
        out[pos] = (W_eval(r[pos]) - W_eval(-r[pos])) / (2 * r[pos])
        return out

    B = A * A
    l1, m1 = w.l // 2 + 1, w.m // 2
    l2, m2 = w.l // 2, (w.m - 1) // 2
    if m1 < 1 or m2 < max(l2, 1):
        raise InfeasibleWindowError("window too short for the even/odd split", l=w.l, m=w.m)
    leg1 = _windowed_bernstein_leg(Q1, l1, m1, B, epsilon / 8, weight_exponent=0.0,
                                   mode=mode, degree_cap=degree_cap, leg_name="even-leg")
    leg2 = _windowed_bernstein_leg(Q2, l2, m2, B, epsilon / 8, weight_exponent=0.5,
                                   mode=mode, degree_cap=degree_cap, leg_name="odd-leg")
    for leg, name in ((leg1, "even-leg"), (leg2, "odd-leg")):
        if leg.stage_error > (epsilon / 8) * 1.01:
            raise ApproxNotReachedError(
                f"{name} stage error {leg.stage_error:.4g} exceeds eps/8 = {epsilon / 8:.4g}",
                stage=name, stage_error=leg.stage_error, l=w.l, m=w.m)

    coeffs = _recombine(leg1.polynomial, leg2.polynomial, w, mode)
    form = SquareCompositeForm(even=leg1.polynomial.stable_form, odd=leg2.polynomial.stable_form)
    poly = Polynomial.from_coeffs(coeffs, stable_form=form)
    if not poly.is_zero and (poly.valuation < w.l or poly.degree > w.m):
        raise DomainError(
            f"recombined support [{poly.valuation}, {poly.degree}] escapes window ({w.l}, {w.m})")
    total = sup_norm(lambda x: form.eval(x) - h(x), grid)
    if total >= epsilon:
        raise ApproxNotReachedError(
            f"measured error {total:.4g} >= eps = {epsilon:.4g} for window ({w.l}, {w.m})",
            total_error=total, l=w.l, m=w.m)
    report = ApproxReport(
        eta=eta,
        stage_errors={"flatten": mod_err, "weierstrass": weier_err,
                      "weierstrass_degree": mW,
                      "even_leg": leg1.stage_error, "odd_leg_weighted": leg2.stage_error},
        total_error=total, window=(w.l, w.m), degree=poly.degree, mode=mode)
    return ApproxResult(poly, report)


def _recombine(p1: Polynomial, p2: Polynomial, w: Window, mode: str) -> list:
    """x-coefficients of P1(x^2) + x P2(x^2)."""
    zero = Fraction(0) if mode == "rational" else 0.0
    out = [zero] * (w.m + 1)
    for k, c in enumerate(p1.coeffs):
        if c != 0:
            out[2 * k] = out[2 * k] + c
    for k, c in enumerate(p2.coeffs):
        if c != 0:
            out[2 * k + 1] = out[2 * k + 1] + c
    return out


# ---------------------------------------------------------------------------
# feasibility prechecks (used by the builder before any heavy computation)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    reason: str
    eta: float
    required_ratio: float


def window_feasibility(h: TargetFunction, w: Window, A: float, epsilon: float,
                       *, symmetric: bool = True) -> FeasibilityReport:
    """Cheap precheck of the documented window condition A*l/m <= eta/2.

    For the symmetric pipeline this also screens the recombination legs: the
    leg targets vanish only on [0, (eta/2)^2] of [0, A^2], so leg samples
    below their valuation floors must fit inside that zone.
    """
    if h.is_zero:
        return FeasibilityReport(True, "zero target", A / 2, 0.0)
    params = select_eta(h, epsilon, two_sided=symmetric)
    eta = params.eta
    need = 2 * A / eta
    if A * w.l / w.m > eta / 2:
        return FeasibilityReport(False, f"outer window: need m/l >= {need:.4g}", eta, need)
    if symmetric:
        B = A * A
        zone = (eta / 2) ** 2 / 2
        for name, (li, mi) in (("even", (w.l // 2 + 1, w.m // 2)),
                               ("odd", (w.l // 2, (w.m - 1) // 2))):
            if li >= 2 and B * (li - 1) / mi > zone:
                need_i = B * (li - 1) / zone
                return FeasibilityReport(
                    False, f"{name} leg: need m_leg >= {need_i:.4g}", eta, need_i)
    return FeasibilityReport(True, "ok", eta, need)
