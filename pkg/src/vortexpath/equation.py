"""The vortex-type family as a scalar equation for psi, where h = h0 exp(-psi).

With ``s = |phi|^2_h``, ``Theta`` the curvature density and ``G`` the density of
``i nabla phi ^ nabla phi*``, the family reads

    Theta = (d - s) (e u^(1-t) + t k G) / (a + b t s - c t^2 s^2).

Substituting ``G = ddbar(s) + Theta s`` and clearing the denominator gives the
form solved here,

    R(psi) = Theta (D - t k s (d - s)) - (d - s) (e u^(1-t) + t k ddbar(s)),

with ``D = a + b t s - c t^2 s^2``.  ``D - t k s (d - s)`` is called the
cleared denominator below; it must stay positive.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

import numpy as np
import sympy as sp

from . import bundle as bd
from . import geometry as geo
from .errors import AdmissibilityError, ConfigurationError, DenominatorError

FAMILIES = ("general", "bradlow", "cym", "vbma")
COEFFS = ("a", "b", "c", "d", "e", "k")


@dataclass(frozen=True)
class VortexParams:
    a: float
    b: float
    c: float
    d: float
    e: float
    k: float
    t: float = 1.0
    alpha: float = 0.0
    u: np.ndarray | None = field(default=None, repr=False)
    family: str = "general"
    # Replaces e * u^(1-t) when set (manufactured solutions).
    forcing: np.ndarray | None = field(default=None, repr=False)
    # Exact sympy values of a..k; used by the hypothesis checks.
    exact: Mapping[str, sp.Expr] | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        bad = [name for name in ("a", "d", "e") if not getattr(self, name) > 0]
        bad += [name for name in ("b", "c", "k") if not getattr(self, name) >= 0]
        if bad:
            raise ConfigurationError(f"need a, d, e > 0 and b, c, k >= 0; violated: {', '.join(bad)}")
        if not 0.0 <= self.t <= 1.0:
            raise ConfigurationError(f"t must lie in [0, 1], got {self.t}")
        if self.alpha < 0:
            raise ConfigurationError(f"alpha must be >= 0, got {self.alpha}")
        if self.u is not None and not np.all(self.u > 0):
            raise AdmissibilityError("u must be positive everywhere", flag="u_positive")

    def exact_coefficients(self) -> dict[str, sp.Expr]:
        if self.exact is not None:
            return dict(self.exact)
        return {name: exact_number(getattr(self, name)) for name in COEFFS}

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in COEFFS + ("t", "alpha", "family")}


@dataclass(frozen=True)
class CYMInputs:
    alpha: float
    tau: float
    lam: float

    def __post_init__(self):
        alpha, tau, lam = (exact_number(v) for v in (self.alpha, self.tau, self.lam))
        if alpha < 0:
            raise ConfigurationError(f"alpha must be >= 0, got {self.alpha}")
        if not tau > 2:
            raise ConfigurationError(f"tau must exceed 2, got {self.tau}")
        if not 2 * lam - tau / 2 < 0:
            raise AdmissibilityError("need 2 lambda - tau/2 < 0", flag="cym_lambda")
        if not exact_sign(cym_a(alpha, tau, lam)) > 0:
            raise AdmissibilityError(
                f"alpha={self.alpha} violates 8 + 2 tau alpha (2 lambda - tau/2)/(2 pi)^2 > 0",
                flag="cym_admissible",
            )


def exact_number(x) -> sp.Expr:
    """Exact sympy value of an int/float/Fraction/sympy number (floats taken bit-exactly)."""
    if isinstance(x, sp.Basic):
        return x
    if isinstance(x, (bool, np.bool_)):
        raise ConfigurationError("boolean where a number was expected")
    if isinstance(x, (int, np.integer)):
        return sp.Integer(int(x))
    if isinstance(x, (float, np.floating)):
        return sp.Rational(float(x))
    if hasattr(x, "numerator"):
        return sp.Rational(int(x.numerator), int(x.denominator))
    return sp.sympify(x)


def exact_sign(expr) -> int:
    expr = sp.simplify(exact_number(expr))
    if expr == 0:
        return 0
    value = sp.N(expr, 50)
    return 1 if value > 0 else -1


def cym_a(alpha, tau, lam):
    w = 1 / (2 * sp.pi) ** 2
    return 8 + 2 * tau * alpha * (2 * lam - tau / 2) * w


def cym_max_alpha(tau: float, lam: float) -> float:
    """Supremum of the admissible CYM couplings (``inf`` when every alpha works)."""
    slope = 2 * tau * (2 * lam - tau / 2) / (2 * np.pi) ** 2
    return np.inf if slope >= 0 else -8.0 / slope


def _exact_cym(alpha, tau, lam) -> dict[str, sp.Expr]:
    w = 1 / (2 * sp.pi) ** 2
    return {
        "a": cym_a(alpha, tau, lam),
        "b": tau * alpha * w,
        "c": alpha * w / 2,
        "d": tau,
        "e": sp.Integer(4),
        "k": alpha * w / 2,
    }


def _exact_vbma(r1: int, r2: int) -> dict[str, sp.Expr]:
    mu = 2 * (2 * r1 * r2 + r1 + r2)
    return {
        "a": sp.Integer(2 * r2 * (2 + 2 * r2)),
        "b": sp.Integer(2),
        "c": sp.Integer(1),
        "d": sp.Integer(1),
        "e": sp.Integer(mu),
        "k": sp.Integer(1),
    }


def _as_int(name, value) -> int:
    if isinstance(value, bool) or int(value) != value:
        raise ConfigurationError(f"{name} must be an integer, got {value!r}")
    return int(value)


def make_params(family: str, *, alpha: float = 0.0, t: float | None = None,
                bundle: bd.LineBundleData | None = None, **args) -> VortexParams:
    """Coefficients of one member of a named family at path position ``(alpha, t)``.

    ``general`` takes ``a, b, c, d, e, k`` directly.  ``bradlow`` takes ``tau``,
    ``cym`` takes ``tau`` and ``lam`` (``alpha`` is the coupling), ``vbma``
    takes integers ``r1 > r2 >= 2``.  When ``bundle`` is given, ``u`` is built
    from the background curvature so that ``psi = 0`` solves the ``t = 0`` member.
    """
    if family not in FAMILIES:
        raise ConfigurationError(f"unknown family {family!r}; expected one of {FAMILIES}")
    t = 1.0 if t is None else float(t)

    if family == "general":
        missing = [name for name in COEFFS if name not in args]
        extra = set(args) - set(COEFFS)
        if missing or extra:
            raise ConfigurationError(f"general family needs exactly {COEFFS}; missing {missing}, unexpected {sorted(extra)}")
        exact = {name: exact_number(args[name]) for name in COEFFS}
    elif family == "bradlow":
        _expect(family, args, {"tau"})
        tau = exact_number(args["tau"])
        if not tau > 2:
            raise ConfigurationError(f"bradlow needs tau > 2, got {args['tau']}")
        exact = {"a": sp.Integer(2), "b": sp.Integer(0), "c": sp.Integer(0),
                 "d": tau, "e": sp.Integer(1), "k": sp.Integer(0)}
    elif family == "cym":
        lam = args.get("lam", args.get("lambda"))
        _expect(family, {("lam" if k == "lambda" else k): v for k, v in args.items()}, {"tau", "lam"})
        CYMInputs(alpha, args["tau"], lam)
        exact = _exact_cym(exact_number(alpha), exact_number(args["tau"]), exact_number(lam))
    else:
        _expect(family, args, {"r1", "r2"})
        r1, r2 = _as_int("r1", args["r1"]), _as_int("r2", args["r2"])
        if not r1 > r2 >= 2:
            raise ConfigurationError(f"vbma needs integers r1 > r2 >= 2, got r1={r1}, r2={r2}")
        exact = _exact_vbma(r1, r2)

    values = {name: float(sp.N(expr, 30)) for name, expr in exact.items()}
    p = VortexParams(**values, t=t, alpha=float(alpha), family=family, exact=exact)
    if bundle is not None and (family != "bradlow" or t < 1.0):
        p = replace(p, u=build_u(p, bundle, bundle.theta0))
    return p


def _expect(family, args, names):
    if set(args) != set(names):
        raise ConfigurationError(f"{family} family takes {sorted(names)}, got {sorted(args)}")


def vbma_u(r1: int, r2: int, s0: np.ndarray) -> np.ndarray:
    """The vbMA gauge field ``1 / (alpha_v (1 - s0))`` with ``alpha_v = mu / (2 r2 (2 + 2 r2))``."""
    mu = 2 * (2 * r1 * r2 + r1 + r2)
    alpha_v = mu / (2 * r2 * (2 + 2 * r2))
    return 1.0 / (alpha_v * (1.0 - s0))


def build_u(p: VortexParams, b: bd.LineBundleData, theta_init) -> np.ndarray:
    """``u = a theta_init / (e (d - s0))``: makes psi = 0 an exact t = 0 solution."""
    theta_init = geo.as_values(b.grid, theta_init)
    gap = p.d - b.s0
    if np.any(gap <= 0):
        raise AdmissibilityError(f"max s0 = {b.s0.max():.6g} must stay below d = {p.d}", flag="s0_below_d")
    if np.any(theta_init <= 0):
        raise AdmissibilityError("initial curvature density must be positive", flag="theta_init_positive")
    return p.a * theta_init / (p.e * gap)


def forcing(p: VortexParams, b: bd.LineBundleData) -> np.ndarray:
    """``e u^(1-t)`` (or the manufactured override)."""
    if p.forcing is not None:
        return geo.as_values(b.grid, p.forcing)
    if p.u is None or p.t == 1.0:
        return np.full(b.grid.shape, p.e)
    return p.e * np.exp((1.0 - p.t) * np.log(p.u))


def denominator(p: VortexParams, s) -> np.ndarray:
    """``a + b t s - c t^2 s^2``."""
    return p.a + p.b * p.t * s - p.c * p.t**2 * s**2


def cleared_denominator(p: VortexParams, s) -> np.ndarray:
    return denominator(p, s) - p.t * p.k * s * (p.d - s)


def residual(p: VortexParams, b: bd.LineBundleData, psi, check: bool = True) -> np.ndarray:
    psi = geo.as_values(b.grid, psi)
    s = bd.s_of_psi(b, psi)
    dt = cleared_denominator(p, s)
    if check and not np.all(dt > 0):
        raise DenominatorError(f"cleared denominator reaches {dt.min():.6g} <= 0")
    theta = bd.curvature_density(b, psi)
    tk = p.t * p.k
    source = forcing(p, b)
    if tk:
        source = source + tk * geo.ddbar_density(b.grid, s)
    return theta * dt - (p.d - s) * source


class Linearization:
    """Frozen coefficient fields of the Jacobian of :func:`residual` at ``psi``.

    ``J dpsi = Dc ddbar(dpsi) + m dpsi + t k (d - s) ddbar(s dpsi)`` where ``Dc``
    is the cleared denominator.
    """

    def __init__(self, p: VortexParams, b: bd.LineBundleData, psi):
        self.grid = b.grid
        psi = geo.as_values(b.grid, psi)
        s = bd.s_of_psi(b, psi)
        theta = bd.curvature_density(b, psi)
        tk = p.t * p.k
        dds = geo.ddbar_density(b.grid, s) if tk else 0.0
        self.s = s
        self.tk = tk
        self.lead = cleared_denominator(p, s)
        ddt_ds = p.b * p.t - 2.0 * p.c * p.t**2 * s - tk * (p.d - 2.0 * s)
        self.mass = -s * (theta * ddt_ds + forcing(p, b) + tk * dds)
        self.mixed = tk * (p.d - s)
        # Constant-coefficient surrogate for preconditioning.
        self.principal = float(np.mean(denominator(p, s)))
        zeroth = self.mass + self.mixed * dds
        self.shift = min(float(np.mean(zeroth)), -1e-3 * self.principal)

    def apply(self, dpsi) -> np.ndarray:
        g = self.grid
        dpsi = geo.as_values(g, dpsi)
        out = self.lead * geo.ddbar_density(g, dpsi) + self.mass * dpsi
        if self.tk:
            out = out + self.mixed * geo.ddbar_density(g, self.s * dpsi)
        return out

    def precondition(self, r) -> np.ndarray:
        g = self.grid
        sym = self.principal * g.symbol / (4.0 * np.pi) + self.shift
        return np.fft.ifft2(np.fft.fft2(geo.as_values(g, r)) / sym).real


def jacobian_apply(p: VortexParams, b: bd.LineBundleData, psi, dpsi) -> np.ndarray:
    """Directional derivative of :func:`residual` at ``psi`` along ``dpsi``."""
    s = bd.s_of_psi(b, geo.as_values(b.grid, psi))
    if not np.all(cleared_denominator(p, s) > 0):
        raise DenominatorError("cleared denominator is not positive at psi")
    return Linearization(p, b, psi).apply(dpsi)


def manufactured_forcing(p: VortexParams, b: bd.LineBundleData, psi_star) -> np.ndarray:
    """The source field ``e u^(1-t)`` that makes ``psi_star`` an exact grid solution."""
    psi_star = geo.as_values(b.grid, psi_star)
    s = bd.s_of_psi(b, psi_star)
    if np.any(s >= p.d):
        raise AdmissibilityError("manufactured psi puts |phi|^2 above d", flag="phi_bound")
    theta = bd.curvature_density(b, psi_star)
    out = theta * cleared_denominator(p, s) / (p.d - s)
    if p.t * p.k:
        out = out - p.t * p.k * geo.ddbar_density(b.grid, s)
    return out


def manufactured_params(p: VortexParams, b: bd.LineBundleData, psi_star) -> VortexParams:
    return replace(p, forcing=manufactured_forcing(p, b, psi_star))


@dataclass(frozen=True)
class Family:
    """A named parameter family with its fixed arguments; ``at`` picks a member."""

    tag: str
    args: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.tag not in FAMILIES:
            raise ConfigurationError(f"unknown family {self.tag!r}; expected one of {FAMILIES}")
        object.__setattr__(self, "args", dict(self.args))

    def at(self, b: bd.LineBundleData | None, alpha: float, t: float) -> VortexParams:
        return make_params(self.tag, alpha=alpha, t=t, bundle=b, **self.args)

    def default_cap(self) -> float:
        """Half of d: the background then starts strictly inside |phi|^2 <= d."""
        return 0.5 * self.at(None, 0.0, 1.0).d
