"""Quantitative impossibility machinery for paired partial sums.

Contents:

* Turán's inequality for sparse polynomials on circles vs. circle arcs
  (constant (4 pi e / delta)^n, n = number of nonzero coefficients).
* The real-coefficient circle-vs-interval bound with constant 1 + sqrt(2)
  per degree (Aron-Beauzamy, k = 1).
* Cauchy coefficient bounds from a circle sup.
* The two analytic impossibility margins for linear witness growth:
  1/(6 C^d) in the real case (targets S_mu ~ x, S_lam ~ 0 on [-1,1]) and
  1/3 in the complex case (targets 1 at mu, 0 at lam on K united with a
  far-out circle arc).
* A discretized minimax LP over free coefficients that measures the best
  achievable joint error; it is the numerical oracle the analytic margins
  are checked against, and the block engine the series builder uses.

Complex moduli are outer-approximated by a regular polygon of half-planes
(order 16 by default), so LP optima are valid lower bounds of the true grid
minimax up to the factor cos(pi/order), which is reported alongside.

The LP itself is delegated to scipy's HiGHS dense solver behind the module's
error surface; every returned solution is re-verified by direct evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import linprog

from .errors import DomainError, LPSolveError, UsageError
from .series import Arc, ChebWindowForm, CompactGrid, Polynomial, sup_norm

#: circle-vs-interval constant for real-coefficient polynomials (one variable)
AB_CONSTANT = 1.0 + math.sqrt(2.0)


def turan_constant(delta: float) -> float:
    """C_delta = 4 pi e / delta for an arc of opening delta."""
    if not (0 < delta < 2 * math.pi):
        raise UsageError("arc opening must lie in (0, 2*pi)")
    return 4 * math.pi * math.e / delta


# ---------------------------------------------------------------------------
# inequality reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TuranReport:
    n_nonzero: int
    C_delta: float
    arc_sup: float
    circle_sup: float
    bound: float
    holds: bool


def turan_bound(Q: Polynomial, r: float, delta: float, *, circle_n: int = 1024,
                arc_n: int = 1024, slack: float = 1.01) -> TuranReport:
    """Check sup_{|z|=r} |Q| <= (4 pi e / delta)^n sup_{arc} |Q| on sampled grids.

    n counts the structurally nonzero coefficients of Q.  The comparison is
    done in log space so huge constants cannot overflow; ``bound`` saturates
    at inf when out of double range.
    """
    if r <= 0:
        raise UsageError("radius must be positive")
    C = turan_constant(delta)
    n = Q.n_nonzero
    circle = CompactGrid.circle(r, circle_n)
    arc = CompactGrid.from_arc(Arc(r, delta), arc_n)
    circle_sup = sup_norm(Q, circle)
    arc_sup = sup_norm(Q, arc)
    log_bound = n * math.log(C) + (math.log(arc_sup) if arc_sup > 0 else -math.inf)
    bound = math.exp(log_bound) if log_bound < 700 else math.inf
    if circle_sup == 0:
        holds = True
    else:
        holds = math.log(circle_sup) <= log_bound + math.log(slack)
    return TuranReport(n, C, arc_sup, circle_sup, bound, holds)


@dataclass(frozen=True)
class CircleIntervalReport:
    degree: int
    interval_sup: float
    circle_sup: float
    bound: float
    holds: bool


def real_to_complex_bound(P: Polynomial, *, circle_n: int = 1024, interval_n: int = 512,
                          slack: float = 1.01) -> CircleIntervalReport:
    """Check sup_{|z|=1} |P| <= (1+sqrt(2))^deg * sup_{[-1,1]} |P| (real coefficients)."""
    if any(isinstance(c, complex) for c in P.coeffs):
        raise UsageError("bound applies to real-coefficient polynomials")
    deg = P.degree
    interval_sup = sup_norm(P, CompactGrid.symmetric(1.0, interval_n))
    circle_sup = sup_norm(P, CompactGrid.circle(1.0, circle_n))
    log_bound = deg * math.log(AB_CONSTANT) + (math.log(interval_sup) if interval_sup > 0 else -math.inf)
    bound = math.exp(log_bound) if log_bound < 700 else math.inf
    holds = circle_sup == 0 or math.log(circle_sup) <= log_bound + math.log(slack)
    return CircleIntervalReport(deg, interval_sup, circle_sup, bound, holds)


@dataclass(frozen=True)
class CauchyReport:
    radius: float
    circle_sup: float
    bounds: tuple
    holds: bool


def cauchy_coefficient_bounds(p: Polynomial, r: float, *, circle_n: int = 1024,
                              slack: float = 1.01) -> CauchyReport:
    """|a_j| <= M / r^j with M the sampled circle sup at radius r."""
    if r <= 0:
        raise UsageError("radius must be positive")
    M = sup_norm(p, CompactGrid.circle(r, circle_n))
    bounds = tuple(M / r**j for j in range(p.degree + 1))
    holds = all(abs(c) <= b * slack for c, b in zip(p.coeffs, bounds))
    return CauchyReport(r, M, bounds, holds)


# ---------------------------------------------------------------------------
# analytic impossibility margins
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ImpossibilityBound:
    d: float
    constant: float
    margin: float
    trace: tuple
    R: float | None = None
    grid: CompactGrid | None = None


def impossibility_margin_real(d: float) -> ImpossibilityBound:
    """Margin 1/(6 C^d) for targets (0 at lam, x at mu) on [-1,1], lam_mu <= d*mu.

    Chain (replayed per witness pair): both sups < eps/4 together with the
    circle-vs-interval bound and Cauchy estimates force the tail block to be
    geometrically small on [-beta, beta], beta = 1/(2 C^d); the triangle
    inequality then yields beta <= 3 eps/4, so eps >= 2/(3 C^d) and the max
    joint error is at least 1/(6 C^d).
    """
    if d < 1:
        raise UsageError("linear ratio bound d must be >= 1")
    C = AB_CONSTANT
    beta = 1.0 / (2 * C**d)
    eps_min = 2.0 / (3 * C**d)
    margin = eps_min / 4
    trace = (
        f"C = 1+sqrt(2) = {C:.6f}, d = {d:g}",
        f"shrunken half-interval beta = 1/(2 C^d) = {beta:.6g}",
        "assume sup|S_mu - x| < eps/4 and sup|S_lam| < eps/4 on [-1,1]",
        "circle bound + Cauchy: |a_j| <= C^lam * eps/4, lam <= d*mu",
        "tail on [-beta,beta]: sum_{j>mu} (eps/4) 2^-j <= eps/4",
        "hence sup|S_mu| < eps/2 on [-beta,beta] and beta <= 3 eps/4",
        f"eps >= 2/(3 C^d) = {eps_min:.6g}; margin = eps/4 floor = {margin:.6g}",
    )
    return ImpossibilityBound(d=d, constant=C, margin=margin, trace=trace)


def impossibility_margin_complex(d: float, K: CompactGrid, delta: float,
                                 *, arc_n: int = 1024) -> ImpossibilityBound:
    """Margin 1/3 for targets (1 at mu, 0 at lam) on K united with the arc at R.

    R = 2 C_delta^d sup_K |z| makes the Cauchy tail geometric with ratio 1/2;
    the chain 1 <= sup|S_mu - 1| + sup|S_lam| + tail then forces the max
    joint error above 1/3 for every mu >= 1 with lam_mu <= d*mu.
    """
    if d < 1:
        raise UsageError("linear ratio bound d must be >= 1")
    pts = K.points_array()
    if np.min(np.abs(pts)) <= 1.0:
        raise DomainError("compact set must lie outside the closed unit disk")
    C = turan_constant(delta)
    supK = float(np.max(np.abs(pts)))
    R = 2.0 * C**d * supK
    grid = K.union(CompactGrid.from_arc(Arc(R, delta), arc_n))
    trace = (
        f"C_delta = 4*pi*e/delta = {C:.6f}, d = {d:g}, sup_K|z| = {supK:.6g}",
        f"R = 2 C_delta^d sup_K|z| = {R:.6g} (tail ratio 1/2)",
        "arc sup of S_lam < t lifts to the circle by the sparse-coefficient bound",
        "Cauchy: |a_j| <= C_delta^lam * t / R^j; tail over K <= t",
        "1 <= |S_mu - 1| + |S_lam| + tail <= 3t, so t >= 1/3",
    )
    return ImpossibilityBound(d=d, constant=C, margin=1.0 / 3.0, trace=trace, R=R, grid=grid)


def pair_error_floor(delta_fn: Callable, mu: int, lam: int, A: float,
                     *, grid_n: int = 2049, gammas: Sequence[float] | None = None) -> float:
    """Certified lower bound on max(err at mu, err at lam) for one target pair.

    delta_fn = g2 - g1 on [-A, A].  For any real series with a_0 = 0 whose
    tail block (indices mu+1..lam) is degree-bounded, the chain gives for
    each gamma in (0,1), with beta = gamma / C^(lam/(mu+1)) and
    q = gamma^(mu+1)/(1-gamma):

        t >= (sup_{[-beta A, beta A]} |delta| - q sup_{[-A,A]} |delta|) / (2 (1+q))

    The best gamma over a small grid is returned (clamped at 0).
    """
    xs = np.linspace(0.0, A, grid_n)
    vals = np.maximum(np.abs(np.atleast_1d(delta_fn(xs))),
                      np.abs(np.atleast_1d(delta_fn(-xs))))
    prefix_sup = np.maximum.accumulate(vals)
    D_inf = float(prefix_sup[-1])
    if D_inf == 0:
        return 0.0
    C = AB_CONSTANT
    rho = lam / (mu + 1)
    best = 0.0
    for g in (gammas or np.linspace(0.05, 0.95, 19)):
        q = g ** (mu + 1) / (1.0 - g)
        beta = g / C**rho
        idx = min(grid_n - 1, int(beta * (grid_n - 1)))
        sup_small = float(prefix_sup[idx])
        best = max(best, (sup_small - q * D_inf) / (2.0 * (1.0 + q)))
    return best


# ---------------------------------------------------------------------------
# minimax LP
# ---------------------------------------------------------------------------


@dataclass
class MinimaxProblem:
    """min over free coefficients of max(sup|S_mu - g2|, sup|S_lam - g1|) on a grid.

    Real grids: coefficients a_1..a_lam (a_0 fixed to 0).  Complex grids:
    a_0..a_lam free complex, moduli relaxed to a polygon of half-planes.
    """

    mu: int
    lambda_mu: int
    g1: object
    g2: object
    grid: CompactGrid
    polygon_order: int = 16

    def __post_init__(self):
        if not (1 <= self.mu < self.lambda_mu):
            raise UsageError("need lambda_mu > mu >= 1")
        if len(self.grid.points) == 0:
            raise UsageError("grid must be nonempty")


@dataclass
class MinimaxSolution:
    optimal_value: float
    coefficients: np.ndarray
    verified_objective: float
    polygon_correction: float
    is_complex: bool
    modulus_objective: float | None = None
    blocks: tuple = ()


_LP_STATUS = {1: "LP_CYCLING", 2: "LP_INFEASIBLE", 3: "LP_UNBOUNDED", 4: "LP_NUMERICAL"}


def _solve_lp(cost, A_ub, b_ub):
    res = linprog(cost, A_ub=A_ub, b_ub=b_ub,
                  bounds=[(None, None)] * A_ub.shape[1], method="highs")
    if res.status != 0:
        raise LPSolveError(f"LP solve failed: {res.message}",
                           code=_LP_STATUS.get(res.status, "LP_FAILURE"))
    return res


def _target_values(g, pts):
    if callable(g):
        return np.asarray(g(pts))
    return np.full(len(pts), g)


def minimax_double_fit(prob: MinimaxProblem) -> MinimaxSolution:
    pts = prob.grid.points_array()
    if np.iscomplexobj(pts) and np.abs(pts.imag).max() > 0:
        return _minimax_complex(prob, pts)
    return _minimax_real(prob, pts.real.astype(float))


def _minimax_real(prob: MinimaxProblem, x: np.ndarray) -> MinimaxSolution:
    mu, lam = prob.mu, prob.lambda_mu
    scale = float(np.abs(x).max())
    u = x / scale
    T = np.polynomial.chebyshev.chebvander(u, lam)
    # S_mu basis: T_i - T_i(0), i = 1..mu  (vanishing at 0, degree <= mu)
    T0 = np.polynomial.chebyshev.chebvander(np.array([0.0]), lam)[0]
    Pb = T[:, 1 : mu + 1] - T0[1 : mu + 1]
    # tail basis: u^(mu+1) T_i, i = 0..lam-mu-1 (valuation mu+1, degree <= lam)
    Qb = (u[:, None] ** (mu + 1)) * T[:, : lam - mu]
    nP, nQ = Pb.shape[1], Qb.shape[1]
    npts = len(x)
    g1v = _target_values(prob.g1, x).astype(float)
    g2v = _target_values(prob.g2, x).astype(float)
    rows, rhs = [], []
    for sign in (1.0, -1.0):
        Arow = np.zeros((npts, nP + nQ + 1))
        Arow[:, :nP] = sign * Pb
        Arow[:, -1] = -1.0
        rows.append(Arow)
        rhs.append(sign * g2v)
        Arow = np.zeros((npts, nP + nQ + 1))
        Arow[:, :nP] = sign * Pb
        Arow[:, nP : nP + nQ] = sign * Qb
        Arow[:, -1] = -1.0
        rows.append(Arow)
        rhs.append(sign * g1v)
    cost = np.zeros(nP + nQ + 1)
    cost[-1] = 1.0
    res = _solve_lp(cost, np.vstack(rows), np.concatenate(rhs))
    sol = res.x
    d1, d2, topt = sol[:nP], sol[nP : nP + nQ], float(sol[-1])
    smu_vals = Pb @ d1
    slam_vals = smu_vals + Qb @ d2
    verified = float(max(np.abs(smu_vals - g2v).max(), np.abs(slam_vals - g1v).max()))
    coeffs = _real_solution_coefficients(d1, d2, mu, lam, scale)
    blocks = _real_solution_blocks(d1, d2, mu, lam, scale)
    return MinimaxSolution(optimal_value=topt, coefficients=coeffs,
                           verified_objective=verified, polygon_correction=1.0,
                           is_complex=False, blocks=blocks)


def _cheb_combo_to_monomial(d: np.ndarray, shift: int, scale: float, size: int) -> np.ndarray:
    """Monomial coefficients of u^shift * sum_i d[i] T_i(u), u = x/scale."""
    out = np.zeros(size)
    if len(d) == 0 or not np.any(d):
        return out
    mono_u = np.polynomial.chebyshev.cheb2poly(d)
    for k, c in enumerate(mono_u):
        j = shift + k
        out[j] = c / scale**j
    return out


def _cheb_at_zero(i: int) -> float:
    if i % 2 == 1:
        return 0.0
    return float((-1) ** (i // 2))


def _real_solution_blocks(d1, d2, mu, lam, scale):
    """(S_mu part, tail part) as Polynomials; the tail keeps its window form."""
    p_coeffs = np.zeros(mu + 1)
    if np.any(d1):
        base = np.polynomial.chebyshev.cheb2poly(np.concatenate([[0.0], d1]))
        base[0] -= sum(d1[i - 1] * _cheb_at_zero(i) for i in range(1, len(d1) + 1))
        for k, c in enumerate(base):
            p_coeffs[k] = c / scale**k
    p = Polynomial.from_coeffs(list(p_coeffs))
    q_coeffs = _cheb_combo_to_monomial(d2, mu + 1, scale, lam + 1)
    q = Polynomial.from_coeffs(list(q_coeffs),
                               stable_form=ChebWindowForm(mu + 1, scale, tuple(d2)))
    return (p, q)


def _real_solution_coefficients(d1, d2, mu, lam, scale) -> np.ndarray:
    """Coefficients a_1..a_lam of the optimal pair (entry 0 is a_1)."""
    p, q = _real_solution_blocks(d1, d2, mu, lam, scale)
    full = np.zeros(lam + 1)
    for k, c in enumerate(p.coeffs):
        full[k] += float(c)
    for k, c in enumerate(q.coeffs):
        full[k] += float(c)
    return full[1:]


def _minimax_complex(prob: MinimaxProblem, z: np.ndarray) -> MinimaxSolution:
    mu, lam = prob.mu, prob.lambda_mu
    order = prob.polygon_order
    npts = len(z)
    rmax = float(np.abs(z).max())
    scales = rmax ** np.arange(lam + 1)
    Z = np.vander(z, lam + 1, increasing=True) / scales
    nv = 2 * (lam + 1)
    g1v = _target_values(prob.g1, z).astype(complex)
    g2v = _target_values(prob.g2, z).astype(complex)
    thetas = 2 * np.pi * np.arange(order) / order
    rows, rhs = [], []
    for js, gv in ((mu, g2v), (lam, g1v)):
        Zp = Z[:, : js + 1]
        for th in thetas:
            e = np.exp(-1j * th)
            Arow = np.zeros((npts, nv + 1))
            Arow[:, : js + 1] = (e * Zp).real
            Arow[:, lam + 1 : lam + 1 + js + 1] = -(e * Zp).imag
            Arow[:, -1] = -1.0
            rows.append(Arow)
            rhs.append((e * gv).real)
    cost = np.zeros(nv + 1)
    cost[-1] = 1.0
    res = _solve_lp(cost, np.vstack(rows), np.concatenate(rhs))
    sol = res.x
    a_scaled = sol[: lam + 1] + 1j * sol[lam + 1 : nv]
    topt = float(sol[-1])
    smu = Z[:, : mu + 1] @ a_scaled[: mu + 1]
    slam = Z @ a_scaled
    poly_metric = 0.0
    for th in thetas:
        e = np.exp(-1j * th)
        poly_metric = max(poly_metric,
                          float((e * (smu - g2v)).real.max()),
                          float((e * (slam - g1v)).real.max()))
    modulus = float(max(np.abs(smu - g2v).max(), np.abs(slam - g1v).max()))
    coeffs = a_scaled / scales
    return MinimaxSolution(optimal_value=topt, coefficients=coeffs,
                           verified_objective=poly_metric,
                           polygon_correction=math.cos(math.pi / order),
                           is_complex=True, modulus_objective=modulus)


# ---------------------------------------------------------------------------
# windowed fits for the series builder
# ---------------------------------------------------------------------------


@dataclass
class PairFit:
    optimum: float
    block1: Polynomial
    block2: Polynomial
    err_mu: float
    err_lam: float


def windowed_pair_fit(baseline_vals: np.ndarray, h2_vals: np.ndarray, h1_vals: np.ndarray,
                      x: np.ndarray, l1: int, mu: int, lam_eff: int, A: float) -> PairFit:
    """Joint minimax over block1 (support [l1, mu]) and block2 (support [mu+1, lam_eff]).

    Minimizes max(sup|base + B1 - h2|, sup|base + B1 + B2 - h1|) on the grid x.
    """
    if not (1 <= l1 <= mu < lam_eff):
        raise UsageError(f"bad block windows l1={l1} mu={mu} lam_eff={lam_eff}")
    u = x / A
    T = np.polynomial.chebyshev.chebvander(u, max(mu - l1, lam_eff - mu - 1))
    B1b = (u[:, None] ** l1) * T[:, : mu - l1 + 1]
    B2b = (u[:, None] ** (mu + 1)) * T[:, : lam_eff - mu]
    n1, n2 = B1b.shape[1], B2b.shape[1]
    npts = len(x)
    r2 = h2_vals - baseline_vals
    r1 = h1_vals - baseline_vals
    rows, rhs = [], []
    for sign in (1.0, -1.0):
        Arow = np.zeros((npts, n1 + n2 + 1))
        Arow[:, :n1] = sign * B1b
        Arow[:, -1] = -1.0
        rows.append(Arow)
        rhs.append(sign * r2)
        Arow = np.zeros((npts, n1 + n2 + 1))
        Arow[:, :n1] = sign * B1b
        Arow[:, n1 : n1 + n2] = sign * B2b
        Arow[:, -1] = -1.0
        rows.append(Arow)
        rhs.append(sign * r1)
    cost = np.zeros(n1 + n2 + 1)
    cost[-1] = 1.0
    res = _solve_lp(cost, np.vstack(rows), np.concatenate(rhs))
    d1, d2 = res.x[:n1], res.x[n1 : n1 + n2]
    b1_vals = B1b @ d1
    b2_vals = B2b @ d2
    err_mu = float(np.abs(baseline_vals + b1_vals - h2_vals).max())
    err_lam = float(np.abs(baseline_vals + b1_vals + b2_vals - h1_vals).max())
    block1 = _window_block(d1, l1, A, mu)
    block2 = _window_block(d2, mu + 1, A, lam_eff)
    return PairFit(optimum=float(res.x[-1]), block1=block1, block2=block2,
                   err_mu=err_mu, err_lam=err_lam)


def _window_block(d: np.ndarray, l: int, A: float, m: int) -> Polynomial:
    coeffs = _cheb_combo_to_monomial(np.asarray(d), l, A, m + 1)
    if not np.any(coeffs):
        return Polynomial.zero()
    return Polynomial.from_coeffs(list(coeffs), stable_form=ChebWindowForm(l, A, tuple(d)))


def windowed_minimax_fit(target_vals: np.ndarray, x: np.ndarray, l: int, m: int,
                         A: float) -> tuple[float, Polynomial]:
    """min over supp(p) in [l, m] of sup-grid |p - target|; returns (opt, p)."""
    if not (0 <= l <= m):
        raise UsageError(f"bad window ({l}, {m})")
    u = x / A
    T = np.polynomial.chebyshev.chebvander(u, m - l)
    B = (u[:, None] ** l) * T
    nv = B.shape[1]
    npts = len(x)
    rows, rhs = [], []
    for sign in (1.0, -1.0):
        Arow = np.zeros((npts, nv + 1))
        Arow[:, :nv] = sign * B
        Arow[:, -1] = -1.0
        rows.append(Arow)
        rhs.append(sign * target_vals)
    cost = np.zeros(nv + 1)
    cost[-1] = 1.0
    res = _solve_lp(cost, np.vstack(rows), np.concatenate(rhs))
    return float(res.x[-1]), _window_block(res.x[:nv], l, A, m)
