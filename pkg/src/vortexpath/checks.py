"""Identity suites for the discrete geometry and the background bundle."""

from __future__ import annotations

import numpy as np

from . import bundle as bd
from . import geometry as geo


def random_bandlimited(g: geo.SurfaceGrid, rng: np.random.Generator, kmax: int = 4) -> np.ndarray:
    """Random real trigonometric polynomial with modes |kx|, |ky| <= kmax."""
    x, y = g.coords
    out = np.zeros(g.shape)
    for kx in range(-kmax, kmax + 1):
        for ky in range(0, kmax + 1):
            a, phase = rng.normal(), rng.uniform(0.0, 2.0 * np.pi)
            out += a * np.cos(2.0 * np.pi * (kx * x + ky * y) + phase)
    return out


def _item(name, value, limit, passed=None):
    value = float(value)
    return {"name": name, "value": value, "limit": limit,
            "passed": bool(value <= limit) if passed is None else bool(passed)}


def geometry_suite(g: geo.SurfaceGrid, samples: int = 10, seed: int = 0) -> list[dict]:
    rng = np.random.default_rng(seed)
    x, y = g.coords
    f = np.sin(2 * np.pi * x) * np.cos(4 * np.pi * y)
    items = [
        _item("area_is_2pi", abs(geo.integrate(g, 1.0) - 2 * np.pi), 1e-12),
        _item("laplacian_eigenfunction", np.max(np.abs(geo.laplacian(g, f) + 20 * np.pi**2 * f)), 1e-9),
        _item("green_sine", np.max(np.abs(geo.green_solve(g, np.sin(2 * np.pi * x)) + np.sin(2 * np.pi * x) / np.pi)), 1e-12),
    ]
    worst_green = worst_mean = 0.0
    for _ in range(samples):
        h = random_bandlimited(g, rng)
        worst_green = max(worst_green, geo.green_representation_check(g, h))
        worst_mean = max(worst_mean, abs(geo.integrate(g, geo.ddbar_density(g, h))))
    items.append(_item("green_representation", worst_green, 1e-10))
    items.append(_item("ddbar_integrates_to_zero", worst_mean, 1e-10))
    return items


def bundle_suite(b: bd.LineBundleData, seed: int = 0) -> list[dict]:
    g = b.grid
    x, y = g.coords
    zero = bd.locate_zero(b)
    offset = np.hypot(zero[0] - b.zero_location[0], zero[1] - b.zero_location[1])
    psi = 0.3 * np.sin(2 * np.pi * x) * np.cos(2 * np.pi * y) + 0.1 * np.cos(2 * np.pi * (x + y))
    s = bd.s_of_psi(b, psi)
    mask = s > 0.01 * s.max()
    eq4 = np.max(np.abs(bd.grad_pairing_density(b, psi) - bd.grad_quotient_density(b, psi))[mask])
    degree = abs(geo.integrate(g, bd.curvature_density(b, psi)) / (2 * np.pi) - b.degree)
    return [
        _item("theta_periodicity", bd.periodicity_residual(b), 1e-12),
        _item("zero_location", offset, g.spacing),
        _item("zero_value", b.s0.min() / b.s0.max(), 1e-8),
        _item("poincare_lelong", bd.poincare_lelong_residual(b), 1e-4),
        _item("gradient_pairing_identity", eq4, 1e-6),
        _item("gradient_pairing_nonnegative", -bd.grad_pairing_density(b, psi).min(), 1e-6),
        _item("background_degree", abs(geo.integrate(g, b.theta0) / (2 * np.pi) - b.degree), 1e-8),
        _item("degree_conservation", degree, 1e-8),
    ]


def run_checks(n: int = 128, cap: float = 0.5) -> dict:
    g = geo.make_grid(n)
    b = bd.make_background(g, cap)
    suites = {"geometry": geometry_suite(g), "bundle": bundle_suite(b)}
    return {
        "n": n,
        "suites": suites,
        "passed": all(item["passed"] for items in suites.values() for item in items),
    }
