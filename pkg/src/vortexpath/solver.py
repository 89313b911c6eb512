"""Damped Newton at fixed parameters and adaptive continuation along (alpha, t) paths."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.linalg import LinearOperator, gmres

from . import bundle as bd
from . import geometry as geo
from .equation import Family, Linearization, VortexParams, make_params, residual
from .errors import (
    AdmissibilityError,
    ConfigurationError,
    ConvergenceError,
    DenominatorError,
    PathFailure,
)
from .estimates import EstimateReport, assess, check_hypotheses

log = logging.getLogger(__name__)

DAMPING_FLOOR = 2.0**-20
LINEAR_RTOL = 1e-10


@dataclass
class SolverState:
    psi: np.ndarray = field(repr=False)
    residual_norm: float
    newton_iters: int
    alpha: float
    t: float
    report: EstimateReport | None = field(default=None, repr=False)

    @property
    def path_position(self) -> tuple[float, float]:
        return (self.alpha, self.t)


@dataclass(frozen=True)
class PathSpec:
    waypoints: tuple
    max_step: float = 0.1
    min_step: float = 1e-4
    newton_tol: float = 1e-10
    max_newton_iters: int = 30

    def __post_init__(self):
        pts = tuple((float(a), float(t)) for a, t in self.waypoints)
        if len(pts) < 2:
            raise ConfigurationError("a path needs at least two waypoints")
        for a, t in pts:
            if a < 0 or not 0.0 <= t <= 1.0:
                raise ConfigurationError(f"waypoint {(a, t)} outside alpha >= 0, 0 <= t <= 1")
        for p, q in zip(pts, pts[1:]):
            if p == q:
                raise ConfigurationError(f"consecutive waypoints coincide at {p}")
        if not 0 < self.min_step <= self.max_step:
            raise ConfigurationError("need 0 < min_step <= max_step")
        if not self.newton_tol > 0 or self.max_newton_iters < 1:
            raise ConfigurationError("need newton_tol > 0 and max_newton_iters >= 1")
        object.__setattr__(self, "waypoints", pts)

    def reversed(self) -> "PathSpec":
        return PathSpec(self.waypoints[::-1], self.max_step, self.min_step,
                        self.newton_tol, self.max_newton_iters)


def _linear_solve(lin: Linearization, rhs: np.ndarray) -> np.ndarray:
    n = rhs.size
    shape = rhs.shape
    A = LinearOperator((n, n), matvec=lambda v: lin.apply(v.reshape(shape)).ravel(), dtype=float)
    M = LinearOperator((n, n), matvec=lambda v: lin.precondition(v.reshape(shape)).ravel(), dtype=float)
    b = rhs.ravel()
    bnorm = np.linalg.norm(b)
    if bnorm == 0:
        return np.zeros(shape)
    x = np.zeros(n)
    # gmres measures the preconditioned residual; restart until the true one is small.
    for _ in range(4):
        x, info = gmres(A, b, x0=x, rtol=LINEAR_RTOL, restart=60, maxiter=20, M=M)
        rel = np.linalg.norm(b - A @ x) / bnorm
        if rel <= LINEAR_RTOL:
            return x.reshape(shape)
    raise ConvergenceError(f"linear solve stagnated at relative residual {rel:.3g} (near-singular Jacobian?)")


def newton_solve(p: VortexParams, b: bd.LineBundleData, psi_init=None,
                 tol: float = 1e-10, max_iters: int = 30) -> SolverState:
    """Damped Newton on the max-norm of the residual."""
    psi = np.zeros(b.grid.shape) if psi_init is None else geo.as_values(b.grid, psi_init).copy()
    r = residual(p, b, psi)
    norm = float(np.max(np.abs(r)))
    iters = 0
    while norm > tol:
        if iters >= max_iters:
            raise ConvergenceError(f"no convergence in {max_iters} Newton steps (|R| = {norm:.3g})", norm, iters)
        step = _linear_solve(Linearization(p, b, psi), -r)
        lam = 1.0
        while True:
            trial = psi + lam * step
            try:
                r_trial = residual(p, b, trial)
                n_trial = float(np.max(np.abs(r_trial)))
            except DenominatorError:
                n_trial = np.inf
            if n_trial < norm:
                break
            lam *= 0.5
            if lam < DAMPING_FLOOR:
                raise ConvergenceError(f"damping floor reached at |R| = {norm:.3g}", norm, iters)
        psi, r, norm = trial, r_trial, n_trial
        iters += 1
        log.debug("newton %d: |R| = %.3e (damping %.3g)", iters, norm, lam)
    return SolverState(psi, norm, iters, p.alpha, p.t)


def _as_family(family) -> Family:
    if isinstance(family, Family):
        return family
    tag, args = family
    return Family(tag, args)


def gate_hypotheses(spec: PathSpec, family: Family, b: bd.LineBundleData) -> None:
    """Reject a path before solving if a waypoint violates b - cd >= 0 or the family's own bounds."""
    for alpha, t in spec.waypoints:
        p = family.at(b, alpha, t)
        flags = check_hypotheses(p, b)
        if not flags.b_cd:
            raise AdmissibilityError(
                f"b - cd = {flags.margins['b_cd']} < 0 at (alpha, t) = {(alpha, t)}", flag="b_cd"
            )


def seed_state(spec: PathSpec, family: Family, b: bd.LineBundleData, psi_init=None) -> SolverState:
    alpha, t = spec.waypoints[0]
    p = family.at(b, alpha, t)
    if psi_init is None and family.tag == "cym":
        bradlow = make_params("bradlow", tau=family.args["tau"])
        psi_init = newton_solve(bradlow, b, None, spec.newton_tol, spec.max_newton_iters).psi
    state = newton_solve(p, b, psi_init, spec.newton_tol, spec.max_newton_iters)
    state.report = assess(p, b, state.psi)
    return state


def continue_path(spec: PathSpec, family, b: bd.LineBundleData, psi_init=None,
                  gate: bool = True) -> list[SolverState]:
    """Accepted states from the first waypoint to the last.

    Starts at ``psi_init`` (default: ``psi = 0``, or the Bradlow solution for the
    CYM family).  Steps start at ``max_step`` in (alpha, t)-distance, halve on a
    failed Newton solve and double after three consecutive successes.
    """
    family = _as_family(family)
    if gate:
        gate_hypotheses(spec, family, b)
    states = [seed_state(spec, family, b, psi_init)]
    h = spec.max_step
    streak = 0
    for start, end in zip(spec.waypoints, spec.waypoints[1:]):
        start, end = np.array(start), np.array(end)
        length = float(np.hypot(*(end - start)))
        pos = 0.0
        prev = None  # (psi, step) of the previous accepted state on this segment
        while pos < length:
            step = min(h, length - pos)
            last = pos + step >= length * (1 - 1e-12)
            alpha, t = (end if last else start + (pos + step) / length * (end - start)).tolist()
            guess = states[-1].psi
            if prev is not None:
                guess = guess + (step / prev[1]) * (states[-1].psi - prev[0])
            try:
                p = family.at(b, alpha, t)
                state = newton_solve(p, b, guess, spec.newton_tol, spec.max_newton_iters)
            except (ConvergenceError, DenominatorError) as exc:
                log.info("step %.3g to (%.4g, %.4g) failed: %s", step, alpha, t, exc)
                h = step / 2
                streak = 0
                if h < spec.min_step:
                    raise PathFailure(
                        f"step fell below min_step={spec.min_step} near (alpha, t) = ({alpha:.6g}, {t:.6g})",
                        states,
                    ) from exc
                continue
            state.report = assess(p, b, state.psi)
            prev = (states[-1].psi, step)
            states.append(state)
            pos = length if last else pos + step
            streak += 1
            if streak >= 3:
                h = min(2 * h, spec.max_step)
                streak = 0
    return states


@dataclass
class RoundTrip:
    forward: list
    perturbed: SolverState
    backward: list
    reforward: list

    @property
    def discrepancy(self) -> float:
        return float(np.max(np.abs(self.reforward[-1].psi - self.forward[-1].psi)))


def roundtrip(spec: PathSpec, family, b: bd.LineBundleData, perturbation) -> RoundTrip:
    """Forward path, perturb and re-solve at the end, run back to the start and forward again."""
    family = _as_family(family)
    forward = continue_path(spec, family, b)
    alpha, t = spec.waypoints[-1]
    p = family.at(b, alpha, t)
    pert = geo.as_values(b.grid, perturbation)
    perturbed = newton_solve(p, b, forward[-1].psi + pert, spec.newton_tol, spec.max_newton_iters)
    perturbed.report = assess(p, b, perturbed.psi)
    backward = continue_path(spec.reversed(), family, b, psi_init=perturbed.psi, gate=False)
    reforward = continue_path(spec, family, b, psi_init=backward[-1].psi, gate=False)
    return RoundTrip(forward, perturbed, backward, reforward)


def uniqueness_roundtrip(spec: PathSpec, family, b: bd.LineBundleData, perturbation) -> float:
    """``max |psi_roundtrip - psi_forward|`` at the path's endpoint."""
    return roundtrip(spec, family, b, perturbation).discrepancy
