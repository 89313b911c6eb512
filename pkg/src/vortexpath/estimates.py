"""Hypothesis flags and runtime monitors for the a priori estimates.

The flags are decided in exact arithmetic (sympy), so a boundary case such as
``b - (k + c) d = 0`` for the CYM family comes out as an exact zero rather than
a rounding-dependent sign.  The monitors record what each accepted state
actually does; they never predict the (non-constructive) constants.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np
import sympy as sp

from . import bundle as bd
from . import geometry as geo
from .equation import VortexParams, denominator, exact_number, exact_sign

PHI_BOUND_SLACK = 1e-8
DEGREE_TOL = 1e-8


@dataclass(frozen=True)
class HypothesisFlags:
    b_cd: bool
    b_kctd: bool
    de_a: bool
    theta0_is_omega: bool | None
    margins: dict = field(default_factory=dict)
    cym_upper: bool | None = None

    @property
    def all_pass(self) -> bool:
        flags = [self.b_cd, self.b_kctd, self.de_a]
        flags += [f for f in (self.theta0_is_omega, self.cym_upper) if f is not None]
        return all(flags)


@dataclass(frozen=True)
class Verdict:
    passed: bool
    value: float
    limit: float


@dataclass(frozen=True)
class EstimateReport:
    flags: HypothesisFlags
    max_s: float
    min_psi: float
    max_psi: float
    degree_error: float
    denom_min: float
    phi_bound: Verdict
    degree: Verdict
    denominator: Verdict | None

    @property
    def monitors_pass(self) -> bool:
        checks = [self.phi_bound.passed, self.degree.passed]
        if self.denominator is not None:
            checks.append(self.denominator.passed)
        return all(checks)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["flags"]["all_pass"] = self.flags.all_pass
        out["monitors_pass"] = self.monitors_pass
        return out


@lru_cache(maxsize=512)
def _exact_flags(a, b, c, d, e, k, t, family):
    margins = {
        "b_cd": b - c * d,
        "b_kctd": b - (k + c * t) * d,
        "de_a": d * e - a,
    }
    signs = {name: exact_sign(expr) for name, expr in margins.items()}
    # 2e > a for every coupling alpha > 0; equality at alpha = 0, the Bradlow start.
    cym_upper = exact_sign(2 * e - a) >= 0 if family == "cym" else None
    text = {name: str(sp.simplify(expr)) for name, expr in margins.items()}
    return signs, text, cym_upper


def check_hypotheses(p: VortexParams, b: bd.LineBundleData | None = None) -> HypothesisFlags:
    """Evaluate b - cd >= 0, b - (k + ct) d >= 0 and de > a exactly at ``p``'s (alpha, t)."""
    ex = p.exact_coefficients()
    signs, text, cym_upper = _exact_flags(
        ex["a"], ex["b"], ex["c"], ex["d"], ex["e"], ex["k"], exact_number(p.t), p.family
    )
    theta_ok = None if b is None else bool(np.max(np.abs(b.theta0 - 1.0)) <= 1e-12)
    return HypothesisFlags(
        b_cd=signs["b_cd"] >= 0,
        b_kctd=signs["b_kctd"] >= 0,
        de_a=signs["de_a"] > 0,
        theta0_is_omega=theta_ok,
        margins=text,
        cym_upper=cym_upper,
    )


def monitor_phi_bound(b: bd.LineBundleData, psi, p: VortexParams) -> Verdict:
    """Pass iff max |phi|^2_h <= d (+1e-8)."""
    max_s = float(np.max(bd.s_of_psi(b, psi)))
    return Verdict(max_s <= p.d + PHI_BOUND_SLACK, max_s, p.d + PHI_BOUND_SLACK)


def monitor_c0(psi) -> tuple[float, float]:
    psi = np.asarray(psi)
    return float(psi.min()), float(psi.max())


def degree_error(b: bd.LineBundleData, psi) -> float:
    total = geo.integrate(b.grid, bd.curvature_density(b, psi))
    return abs(total / (2.0 * np.pi) - b.degree)


def monitor_degree(b: bd.LineBundleData, psi) -> Verdict:
    err = degree_error(b, psi)
    return Verdict(err <= DEGREE_TOL, err, DEGREE_TOL)


def assess(p: VortexParams, b: bd.LineBundleData, psi) -> EstimateReport:
    psi = geo.as_values(b.grid, psi)
    flags = check_hypotheses(p, b)
    s = bd.s_of_psi(b, psi)
    lo, hi = monitor_c0(psi)
    deg = monitor_degree(b, psi)
    denom_min = float(np.min(denominator(p, s)))
    # The lower bound a on the denominator is only claimed when s <= d <= b/c.
    denom = Verdict(denom_min >= p.a * (1 - 1e-12), denom_min, p.a) if flags.b_cd else None
    return EstimateReport(
        flags=flags,
        max_s=float(s.max()),
        min_psi=lo,
        max_psi=hi,
        degree_error=deg.value,
        denom_min=denom_min,
        phi_bound=monitor_phi_bound(b, psi, p),
        degree=deg,
        denominator=denom,
    )


def empirical_c0(reports) -> tuple[float, float]:
    """Observed ``(C', C'')`` over a path: ``psi >= -C'`` and ``psi <= C''`` held on every state."""
    reports = list(reports)
    if not reports:
        raise ValueError("no reports")
    c_lower = -min(r.min_psi for r in reports)
    c_upper = max(r.max_psi for r in reports)
    if not (np.isfinite(c_lower) and np.isfinite(c_upper)):
        raise ValueError("non-finite psi on the path")
    return float(c_lower), float(c_upper)
