"""Exact Chern-character arithmetic for the split vortex bundle on Sigma x CP^1.

Cohomology is truncated to the basis ``1, w_S, w_F, w_S w_F`` (``w_S = omega_Sigma``,
``w_F = omega_FS``) with ``w_S^2 = w_F^2 = 0`` and ``int w_S w_F = 1``.  The bundle is
``E = S + Q`` with

    S = (r1 + 1) L (x) r2 O(2),    Q = r1 L (x) (r2 + 1) O(2),

polarised by ``omega = (tau/2) w_S + 2 w_F``.  Everything is a ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction

from .errors import ConfigurationError, ConsistencyError

ZERO = Fraction(0)


@dataclass(frozen=True)
class Cohomology:
    """``unit + sigma w_S + fs w_F + top w_S w_F``."""

    unit: Fraction = ZERO
    sigma: Fraction = ZERO
    fs: Fraction = ZERO
    top: Fraction = ZERO

    def __post_init__(self):
        for name in ("unit", "sigma", "fs", "top"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    def __add__(self, other):
        other = _lift(other)
        return Cohomology(self.unit + other.unit, self.sigma + other.sigma,
                          self.fs + other.fs, self.top + other.top)

    __radd__ = __add__

    def __neg__(self):
        return Cohomology(-self.unit, -self.sigma, -self.fs, -self.top)

    def __sub__(self, other):
        return self + (-_lift(other))

    def __mul__(self, other):
        other = _lift(other)
        return Cohomology(
            self.unit * other.unit,
            self.unit * other.sigma + self.sigma * other.unit,
            self.unit * other.fs + self.fs * other.unit,
            self.unit * other.top + self.top * other.unit
            + self.sigma * other.fs + self.fs * other.sigma,
        )

    __rmul__ = __mul__

    def exp(self) -> "Cohomology":
        if self.unit:
            raise ValueError("exp is only taken of classes without a degree-0 part")
        return 1 + self + self * self * Fraction(1, 2)

    def integral(self) -> Fraction:
        return self.top


def _lift(x) -> Cohomology:
    return x if isinstance(x, Cohomology) else Cohomology(unit=Fraction(x))


W_SIGMA = Cohomology(sigma=1)
W_FS = Cohomology(fs=1)


@dataclass(frozen=True)
class VortexBundleSpec:
    g: int
    tau: int
    power_k: int
    r1: int
    r2: int

    def __post_init__(self):
        for name in ("g", "tau", "power_k", "r1", "r2"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigurationError(f"{name} must be an integer, got {value!r}")
        if self.g < 0:
            raise ConfigurationError(f"genus must be >= 0, got {self.g}")
        if self.tau <= 0 or self.tau % 2:
            raise ConfigurationError(f"tau must be an even positive integer, got {self.tau}")
        if self.power_k < 1:
            raise ConfigurationError(f"power_k must be positive, got {self.power_k}")
        if self.r1 < 2 or self.r2 < 2:
            raise ConfigurationError(f"need r1, r2 >= 2, got r1={self.r1}, r2={self.r2}")

    @property
    def euler_alpha(self) -> int:
        return 2 - 2 * self.g


@dataclass(frozen=True)
class ChernData:
    c1_sigma: Cohomology
    c1_p1: Cohomology
    c1_S: Cohomology
    c1_Q: Cohomology
    c1_E: Cohomology
    ch2_E: Fraction
    ch2_S: Fraction
    omega: Cohomology
    todd: Cohomology

    def ch(self, which: str) -> Cohomology:
        if which == "E":
            return 2 + self.c1_E + self.ch2_E * W_SIGMA * W_FS
        if which == "S":
            return 1 + self.c1_S + self.ch2_S * W_SIGMA * W_FS
        raise ValueError(f"which must be 'E' or 'S', got {which!r}")


@lru_cache(maxsize=4096)
def chern_data(spec: VortexBundleSpec) -> ChernData:
    r1, r2 = spec.r1, spec.r2
    c1_sigma = spec.euler_alpha * W_SIGMA
    c1_p1 = 2 * W_FS
    c1_S = (r1 + 1) * W_SIGMA + 2 * r2 * W_FS
    c1_Q = r1 * W_SIGMA + 2 * (r2 + 1) * W_FS
    c1_E = (2 * r1 + 1) * W_SIGMA + (4 * r2 + 2) * W_FS
    ch2_E = Fraction(2 * ((r1 + 1) * r2 + r1 * (r2 + 1)))
    ch2_S = Fraction(2 * r2 * (r1 + 1))
    # The closed forms against the line-bundle splitting.
    if c1_S + c1_Q != c1_E:
        raise ConsistencyError("c1(E) != c1(S) + c1(Q)")
    if ((c1_S * c1_S + c1_Q * c1_Q) * Fraction(1, 2)).integral() != ch2_E:
        raise ConsistencyError("ch2(E) disagrees with the splitting")
    if (c1_S * c1_S * Fraction(1, 2)).integral() != ch2_S:
        raise ConsistencyError("ch2(S) disagrees with c1(S)^2 / 2")
    omega = Fraction(spec.tau, 2) * W_SIGMA + 2 * W_FS
    todd = 1 + c1_sigma * Fraction(1, 2) + c1_p1 * Fraction(1, 2) + c1_sigma * c1_p1 * Fraction(1, 4)
    return ChernData(c1_sigma, c1_p1, c1_S, c1_Q, c1_E, ch2_E, ch2_S, omega, todd)


def euler_characteristic(spec: VortexBundleSpec, which: str) -> Fraction:
    """chi(X, V (x) L'^k) = int ch(V) exp(k omega) Td_X for V = E or S."""
    data = chern_data(spec)
    integrand = data.ch(which) * (spec.power_k * data.omega).exp() * data.todd
    return integrand.integral()


def volume(spec: VortexBundleSpec) -> Fraction:
    omega = chern_data(spec).omega
    return (omega * omega * Fraction(1, 2)).integral()


def stability_margin(spec: VortexBundleSpec) -> Fraction:
    """k (tau - 2) + (alpha - 1) + 2 (r1 - r2)."""
    return Fraction(spec.power_k * (spec.tau - 2) + (spec.euler_alpha - 1) + 2 * (spec.r1 - spec.r2))


@dataclass(frozen=True)
class VortexReduction:
    R1: Fraction
    R2: Fraction
    mu: Fraction

    @property
    def half_integer_R2(self) -> bool:
        return self.R2.denominator != 1

    def equation_params(self) -> dict[str, Fraction]:
        """Coefficients of the reduced vortex equation for the solver."""
        return {"a": 2 * self.R2 * (2 + 2 * self.R2), "b": Fraction(2), "c": Fraction(1),
                "d": Fraction(1), "e": self.mu, "k": Fraction(1)}


def reduce_to_vortex(spec: VortexBundleSpec) -> VortexReduction:
    R1 = spec.r1 + Fraction(spec.power_k * spec.tau + spec.euler_alpha, 2)
    R2 = spec.r2 + spec.power_k + Fraction(1, 2)
    mu = 2 * (R2 * (R1 + 1) + R1 * (R2 + 1))
    return VortexReduction(R1, R2, mu)


def ahe_constant_bracket(spec: VortexBundleSpec) -> Fraction:
    """The closed-form right-hand constant of the reduced almost Hermitian Einstein equation."""
    a, k, tau, r1, r2 = spec.euler_alpha, spec.power_k, spec.tau, spec.r1, spec.r2
    first = a + 2 * a * k + k * tau + k * (tau * (2 * r2 + 1) + 2 * (2 * r1 + 1))
    second = a * (2 * r2 + 1) + 2 * r1 + 1 + 2 * k * k * tau + 2 * (r1 * (r2 + 1) + r2 * (r1 + 1))
    return Fraction(first + second)


def ahe_constant(spec: VortexBundleSpec) -> Fraction:
    bracket = ahe_constant_bracket(spec)
    via_chi = spec.tau * euler_characteristic(spec, "E") / volume(spec)
    if bracket != via_chi:
        raise ConsistencyError(f"AHE constant: closed form {bracket} != tau chi_E / Vol = {via_chi}")
    return bracket


@dataclass(frozen=True)
class StabilityReport:
    spec: VortexBundleSpec
    chi_E: Fraction
    chi_S: Fraction
    margin: Fraction
    verdict: bool
    R1: Fraction
    R2: Fraction
    mu: Fraction
    ahe_constant: Fraction
    half_integer_R2: bool
    k_tau_alpha_positive: bool

    def to_json(self) -> dict:
        def q(x: Fraction) -> str:
            return f"{x.numerator}/{x.denominator}"

        red = VortexReduction(self.R1, self.R2, self.mu)
        return {
            "spec": {"g": self.spec.g, "euler_alpha": self.spec.euler_alpha, "tau": self.spec.tau,
                     "power_k": self.spec.power_k, "r1": self.spec.r1, "r2": self.spec.r2},
            "chi_E": q(self.chi_E),
            "chi_S": q(self.chi_S),
            "margin": q(self.margin),
            "verdict": self.verdict,
            "R1": q(self.R1),
            "R2": q(self.R2),
            "mu": q(self.mu),
            "ahe_constant": q(self.ahe_constant),
            "half_integer_R2": self.half_integer_R2,
            "k_tau_alpha_positive": self.k_tau_alpha_positive,
            "equation_params": {name: q(v) for name, v in red.equation_params().items()},
        }


def gieseker_verdict(spec: VortexBundleSpec) -> StabilityReport:
    """Test Gieseker's inequality on the invariant subbundle S, three ways."""
    chi_E = euler_characteristic(spec, "E")
    chi_S = euler_characteristic(spec, "S")
    margin = stability_margin(spec)
    red = reduce_to_vortex(spec)
    if chi_E - 2 * chi_S != margin:
        raise ConsistencyError(f"chi_E - 2 chi_S = {chi_E - 2 * chi_S} but margin = {margin}")
    if red.R1 - red.R2 != margin / 2:
        raise ConsistencyError(f"R1 - R2 = {red.R1 - red.R2} but margin / 2 = {margin / 2}")
    const = ahe_constant(spec)
    return StabilityReport(
        spec=spec,
        chi_E=chi_E,
        chi_S=chi_S,
        margin=margin,
        verdict=margin > 0,
        R1=red.R1,
        R2=red.R2,
        mu=red.mu,
        ahe_constant=const,
        half_integer_R2=red.half_integer_R2,
        k_tau_alpha_positive=spec.power_k * spec.tau + spec.euler_alpha > 0,
    )
