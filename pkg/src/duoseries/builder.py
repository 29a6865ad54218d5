"""Greedy construction of series whose paired partial sums hit scheduled targets.

For each request (h1, h2, A, eps) the builder picks a witness index mu with
lam_mu = lambda(mu), appends a block supported on [deg+1, mu] so that S_mu
approximates h2, then a block supported on [mu+1, lam_mu] so that S_lam_mu
approximates h1, and logs the measured sup errors.  Blocks never overlap, so
witness partial sums coincide with whole-block boundaries and are evaluated
through the blocks' factored forms (the accreted monomial coefficients grow
exponentially with the valuation and are kept only as the artifact's
coefficient output).

Witness search is smallest-feasible-first.  Before any fit, each candidate
mu is screened by the certified error floor from the inequality chain
(:func:`duoseries.certificates.pair_error_floor`); candidates whose floor
exceeds eps are provably hopeless, which is what terminates the scan within
the horizon when lambda grows only linearly.

Two block engines:

* ``minimax`` -- joint windowed Chebyshev LP over both blocks (default
  workhorse; feasible valuations are limited by double precision to roughly
  l log10(A/x*) <~ 9 digits of dynamic range, where x* is where the target
  leaves the tolerance band).
* ``bernstein`` -- the flatten/divide/split pipeline; honest but needs
  window ratios of order 1/eta^2, so it engages only for targets vanishing
  on a fat neighborhood of 0 or very wide windows.

``auto`` tries bernstein when its window precheck passes at the candidate
mu, else minimax.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .bernstein import (TargetFunction, Window, constrained_approx_symmetric,
                        window_feasibility)
from .certificates import pair_error_floor, windowed_minimax_fit, windowed_pair_fit
from .errors import (DomainError, LPSolveError, NoFeasibleWitnessError,
                     OverlapError, UsageError)
from .series import CompactGrid, FormalSeries, LambdaSequence, Polynomial, sup_norm

_REQUEST_COUNTER = itertools.count(1)


@dataclass(frozen=True)
class ApproximationRequest:
    """Target pair: h1 for the lam-witness, h2 for the mu-witness."""

    h1: TargetFunction
    h2: TargetFunction
    A: float
    epsilon: float
    request_id: int = field(default_factory=lambda: next(_REQUEST_COUNTER))

    def __post_init__(self):
        if self.epsilon <= 0 or self.A <= 0:
            raise UsageError("request needs positive A and epsilon")

    @property
    def degenerate(self) -> bool:
        return self.h1 is self.h2 or self.h1.descriptor == self.h2.descriptor


@dataclass(frozen=True)
class WitnessEntry:
    request_id: int
    mu: int
    lambda_mu: int
    err_at_mu: float
    err_at_lambda_mu: float
    epsilon: float


class WitnessLog:
    """Witness entries with strictly increasing indices and sub-eps errors."""

    def __init__(self):
        self.entries: list[WitnessEntry] = []

    def add(self, entry: WitnessEntry) -> None:
        if self.entries:
            prev = self.entries[-1]
            if entry.mu <= prev.lambda_mu:
                raise DomainError(
                    f"witness indices must increase: mu={entry.mu} after lam={prev.lambda_mu}")
        if entry.lambda_mu < entry.mu:
            raise DomainError("lambda witness below mu witness")
        if not (entry.err_at_mu < entry.epsilon and entry.err_at_lambda_mu < entry.epsilon):
            raise DomainError(
                f"logged errors ({entry.err_at_mu:.4g}, {entry.err_at_lambda_mu:.4g}) "
                f"not below eps={entry.epsilon:.4g}")
        self.entries.append(entry)

    def __len__(self):
        return len(self.entries)

    def rows(self) -> list[tuple]:
        return [(e.request_id, e.mu, e.lambda_mu, e.err_at_mu, e.err_at_lambda_mu)
                for e in self.entries]


@dataclass
class BuildConfig:
    engine: str = "auto"              # auto | minimax | bernstein
    grid_n: int = 513                 # verification grid (per-request interval)
    lp_grid_n: int = 257              # LP constraint grid
    horizon: int = 10_000             # witness scan bound
    lp_trial_budget: int = 48         # LP solves allowed per request
    max_block_degree: int = 1500      # effective degree cap for LP blocks
    ratio_cap: float = 8.0            # lam_eff <= ratio_cap*(mu+1)+16
    accept_factor: float = 0.85       # relaxed acceptance: errors <= eps*factor
    mode: str = "float"

    def __post_init__(self):
        if self.engine not in ("auto", "minimax", "bernstein"):
            raise UsageError(f"unknown engine {self.engine!r}")


@dataclass
class BuildState:
    series: FormalSeries
    log: WitnessLog
    lam: LambdaSequence
    config: BuildConfig
    blocks: list = field(default_factory=list)

    def baseline_eval(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros_like(x)
        for b in self.blocks:
            out = out + np.atleast_1d(
                b.stable_form.eval(x) if b.stable_form is not None else b.evaluate(x))
        return out


@dataclass
class _Plan:
    mu: int
    lambda_mu: int
    block1: Polynomial
    block2: Polynomial
    err_mu: float
    err_lam: float
    engine: str


def append_block(state: BuildState, block: Polynomial) -> BuildState:
    """Merge a block whose valuation strictly exceeds the current degree."""
    if block.is_zero:
        return state
    if block.valuation <= state.series.current_degree:
        raise OverlapError(
            f"block valuation {block.valuation} <= current degree {state.series.current_degree}",
            valuation=block.valuation, current_degree=state.series.current_degree)
    state.series.extend_with(block)
    state.blocks.append(block)
    return state


def plan_witness(state: BuildState, request: ApproximationRequest) -> int:
    """Smallest witness mu for which both block windows admit feasible fits."""
    return _plan(state, request).mu


def _request_grids(request: ApproximationRequest, config: BuildConfig):
    lp_grid = np.linspace(-request.A, request.A, config.lp_grid_n)
    verify = CompactGrid.symmetric(request.A, config.grid_n)
    return lp_grid, verify


def _measure(state: BuildState, extra_blocks, target: TargetFunction,
             verify: CompactGrid) -> float:
    def fn(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = state.baseline_eval(x)
        for b in extra_blocks:
            if not b.is_zero:
                out = out + np.atleast_1d(
                    b.stable_form.eval(x) if b.stable_form is not None else b.evaluate(x))
        return out - target(x)

    return sup_norm(fn, verify)


def _plan(state: BuildState, request: ApproximationRequest) -> _Plan:
    cfg = state.config
    lam = state.lam
    eps = request.epsilon
    A = request.A
    l1 = max(1, state.series.current_degree + 1)
    start = max(l1, (state.log.entries[-1].lambda_mu + 1) if state.log.entries else 1)
    lp_grid, verify = _request_grids(request, cfg)
    base_vals = state.baseline_eval(lp_grid)
    h1_vals = request.h1(lp_grid)
    h2_vals = request.h2(lp_grid)
    delta = request.h2.difference(request.h1)
    lp_trials = 0
    floors_blocked = 0
    best_relaxed: _Plan | None = None
    engines = ("bernstein", "minimax") if cfg.engine == "auto" else (cfg.engine,)

    for mu in range(start, cfg.horizon + 1):
        lam_mu = lam(mu)
        if lam_mu <= mu and not request.degenerate:
            continue
        if not request.degenerate:
            floor = pair_error_floor(delta, mu, lam_mu, A)
            if floor >= eps:
                floors_blocked += 1
                continue
        plan = None
        if "bernstein" in engines:
            plan = _try_bernstein(state, request, mu, lam_mu, l1, verify)
        if plan is None and "minimax" in engines:
            if lp_trials >= cfg.lp_trial_budget:
                break
            lp_trials += 1
            plan = _try_minimax(state, request, mu, lam_mu, l1, lp_grid, verify,
                                base_vals, h1_vals, h2_vals)
        if plan is None:
            continue
        if max(plan.err_mu, plan.err_lam) <= eps / 2 * 0.98:
            return plan
        if best_relaxed is None and max(plan.err_mu, plan.err_lam) <= eps * cfg.accept_factor:
            best_relaxed = plan
    if best_relaxed is not None:
        return best_relaxed
    raise NoFeasibleWitnessError(
        f"no feasible witness for request {request.request_id} within horizon "
        f"{cfg.horizon} (certified-infeasible at {floors_blocked} candidates, "
        f"{lp_trials} LP trials)",
        request_id=request.request_id, floors_blocked=floors_blocked, lp_trials=lp_trials)


def _try_minimax(state, request, mu, lam_mu, l1, lp_grid, verify,
                 base_vals, h1_vals, h2_vals) -> _Plan | None:
    cfg = state.config
    if mu < l1:
        return None
    if request.degenerate:
        if mu > cfg.max_block_degree:
            return None
        try:
            _, block1 = windowed_minimax_fit(h2_vals - base_vals, lp_grid, l1, mu, request.A)
        except LPSolveError:
            return None
        err1 = _measure(state, [block1], request.h2, verify)
        return _Plan(mu, lam_mu, block1, Polynomial.zero(), err1, err1, "minimax")
    lam_eff = min(lam_mu, int(cfg.ratio_cap * (mu + 1)) + 16, cfg.max_block_degree)
    if lam_eff <= mu:
        return None
    try:
        fit = windowed_pair_fit(base_vals, h2_vals, h1_vals, lp_grid,
                                l1, mu, lam_eff, request.A)
    except LPSolveError:
        return None
    err1 = _measure(state, [fit.block1], request.h2, verify)
    err2 = _measure(state, [fit.block1, fit.block2], request.h1, verify)
    return _Plan(mu, lam_mu, fit.block1, fit.block2, err1, err2, "minimax")


def _try_bernstein(state, request, mu, lam_mu, l1, verify) -> _Plan | None:
    cfg = state.config
    eps = request.epsilon
    A = request.A
    t1 = TargetFunction(f"(h2)-(S_{state.series.current_degree})",
                        lambda x, h=request.h2, st=state: np.asarray(h(x)) - st.baseline_eval(x),
                        A)
    f1 = window_feasibility(t1, Window(l1, mu), A, eps / 2)
    if not f1.feasible:
        return None
    blocks = []
    try:
        r1 = constrained_approx_symmetric(t1, Window(l1, mu), A, eps / 2, mode=cfg.mode)
        blocks.append(r1.polynomial)
        if request.degenerate:
            block2 = Polynomial.zero()
        else:
            t2 = request.h1.difference(request.h2)
            f2 = window_feasibility(t2, Window(mu + 1, lam_mu), A, eps / 2)
            if not f2.feasible:
                return None
            r2 = constrained_approx_symmetric(t2, Window(mu + 1, lam_mu), A, eps / 2,
                                              mode=cfg.mode)
            block2 = r2.polynomial
    except DomainError:
        return None
    err1 = _measure(state, [blocks[0]], request.h2, verify)
    err2 = _measure(state, [blocks[0], block2], request.h1, verify)
    return _Plan(mu, lam_mu, blocks[0], block2, err1, err2, "bernstein")


def build_double_universal(requests, lam, config: BuildConfig | None = None
                           ) -> tuple[FormalSeries, WitnessLog]:
    """Process requests in order; returns the accreted series and witness log."""
    config = config or BuildConfig()
    lam = LambdaSequence.from_spec(lam)
    state = BuildState(FormalSeries(), WitnessLog(), lam, config)
    for request in requests:
        plan = _plan(state, request)
        append_block(state, plan.block1)
        append_block(state, plan.block2)
        state.log.add(WitnessEntry(request.request_id, plan.mu, plan.lambda_mu,
                                   plan.err_mu, plan.err_lam, request.epsilon))
    return state.series, state.log


def single_universal_mode(requests, config: BuildConfig | None = None
                          ) -> tuple[FormalSeries, WitnessLog]:
    """Degenerate mode: h1 = h2 per request (lambda = identity)."""
    pairs = []
    for r in requests:
        if isinstance(r, TargetFunction):
            pairs.append(ApproximationRequest(h1=r, h2=r, A=r.A, epsilon=0.1))
        else:
            pairs.append(ApproximationRequest(h1=r.h2, h2=r.h2, A=r.A, epsilon=r.epsilon))
    return build_double_universal(pairs, LambdaSequence.from_spec("identity"), config)


def remeasure_witnesses(series: FormalSeries, log: WitnessLog, requests,
                        grid_n: int = 513) -> list[tuple[float, float]]:
    """Re-measure logged witness errors from the finished coefficient series.

    Partial sums are evaluated in exact rational arithmetic (the accreted
    monomial coefficients are exponentially large, so float Horner would
    cancel catastrophically); the grid and refinement match the builder's
    own measurement, so values reproduce the logged errors to grid tolerance.
    """
    from .series import partial_sum

    by_id = {r.request_id: r for r in requests}
    out = []
    for e in log.entries:
        r = by_id[e.request_id]
        grid = CompactGrid.symmetric(r.A, grid_n)
        for p, h in ((partial_sum(series, e.mu), r.h2),
                     (partial_sum(series, e.lambda_mu), r.h1)):
            def diff(x, p=p, h=h):
                xs = np.atleast_1d(np.asarray(x, dtype=float))
                exact = np.array([float(p.evaluate(float(t), exact=True)) for t in xs])
                return exact - h(xs)

            out.append(sup_norm(diff, grid))
    return [(out[2 * i], out[2 * i + 1]) for i in range(len(out) // 2)]
