"""Degree-one line bundle over the square torus with its theta-function section.

The section is realised through ``|phi|^2_{h0} = C exp(-2 pi y^2) |theta3(x+iy; i)|^2``,
which is doubly periodic, vanishes only at ``(1/2, 1/2)`` and has
``i Theta_0 = omega``.  Metrics are written ``h = h0 exp(-psi)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geometry as geo
from .errors import ConfigurationError

THETA_TAIL = 1e-15


def theta_terms(y_max: float, tail: float = THETA_TAIL) -> int:
    """Smallest M with sum_{|m|>M} exp(-pi m^2 + 2 pi |m| y_max) < tail."""
    y_max = abs(float(y_max))
    M = 1
    while True:
        m = np.arange(M + 1, M + 60)
        if 2.0 * np.sum(np.exp(-np.pi * m**2 + 2.0 * np.pi * m * y_max)) < tail:
            return M
        M += 1


def theta3(z, terms: int | None = None) -> np.ndarray:
    """Jacobi theta3(z; tau=i) = sum_m exp(-pi m^2) exp(2 pi i m z), truncated."""
    z = np.asarray(z, dtype=complex)
    if terms is None:
        terms = theta_terms(np.max(np.abs(z.imag), initial=0.0))
    out = np.zeros_like(z)
    # Sum smallest terms first.
    for m in sorted(range(-terms, terms + 1), key=abs, reverse=True):
        out += np.exp(-np.pi * m * m + 2j * np.pi * m * z)
    return out


def theta_density(x, y) -> np.ndarray:
    """Unnormalised ``exp(-2 pi y^2) |theta3(x + i y)|^2`` at arbitrary points."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    th = theta3(x + 1j * y)
    return np.exp(-2.0 * np.pi * y**2) * (th.real**2 + th.imag**2)


@dataclass(frozen=True)
class LineBundleData:
    grid: geo.SurfaceGrid
    s0: np.ndarray
    theta0: np.ndarray
    degree: int = 1
    zero_location: tuple[float, float] = (0.5, 0.5)
    scale: float = 1.0

    def s0_at(self, x, y) -> np.ndarray:
        """Background |phi|^2 at off-grid points, same normalisation as ``s0``."""
        return self.scale * theta_density(x, y)


def make_background(g: geo.SurfaceGrid, cap: float) -> LineBundleData:
    if not cap > 0:
        raise ConfigurationError(f"cap must be positive, got {cap}")
    x, y = g.coords
    raw = theta_density(x, y)
    scale = cap / raw.max()
    s0 = scale * raw
    # Pin the grid maximum to cap exactly.
    s0[np.unravel_index(np.argmax(raw), raw.shape)] = cap
    return LineBundleData(g, s0, np.ones(g.shape), 1, (0.5, 0.5), float(scale))


def s_of_psi(b: LineBundleData, psi) -> np.ndarray:
    return b.s0 * np.exp(-geo.as_values(b.grid, psi))


def curvature_density(b: LineBundleData, psi) -> np.ndarray:
    """Density of ``i Theta_h = i Theta_0 + i ddbar psi``."""
    return b.theta0 + geo.ddbar_density(b.grid, psi)


def grad_pairing_density(b: LineBundleData, psi) -> np.ndarray:
    """Density of ``i nabla^{1,0} phi ^ nabla^{0,1} phi*`` for ``h = h0 e^{-psi}``.

    Uses ``i ddbar s = -i Theta s + i nabla phi ^ nabla phi*`` solved for the
    gradient term, so nothing is divided by ``s``.
    """
    s = s_of_psi(b, psi)
    return geo.ddbar_density(b.grid, s) + curvature_density(b, psi) * s


def grad_quotient_density(b: LineBundleData, psi) -> np.ndarray:
    """``i ds ^ dbar s / s`` as a density: ``|grad s|^2 / (4 pi s)``.  Singular at the zero."""
    s = s_of_psi(b, psi)
    sx, sy = geo.gradient(b.grid, s)
    with np.errstate(divide="ignore", invalid="ignore"):
        return (sx**2 + sy**2) / (4.0 * np.pi * s)


def torus_distance(g: geo.SurfaceGrid, point: tuple[float, float]) -> np.ndarray:
    x, y = g.coords
    dx = np.abs(x - point[0])
    dy = np.abs(y - point[1])
    dx = np.minimum(dx, 1.0 - dx)
    dy = np.minimum(dy, 1.0 - dy)
    return np.hypot(dx, dy)


def poincare_lelong_residual(b: LineBundleData, exclude_cells: float = 3.0) -> float:
    """max |i ddbar log s0 + i Theta_0| over nodes farther than ``exclude_cells`` from the zero."""
    far = torus_distance(b.grid, b.zero_location) > exclude_cells * b.grid.spacing
    res = geo.log_ddbar_density(b.grid, b.s0) + b.theta0
    return float(np.max(np.abs(res[far])))


def locate_zero(b: LineBundleData) -> tuple[float, float]:
    x, y = b.grid.coords
    idx = np.unravel_index(np.argmin(b.s0), b.s0.shape)
    return float(x[idx]), float(y[idx])


def periodicity_residual(b: LineBundleData, samples: int = 33) -> float:
    """Largest |s0(p + e) - s0(p)| over the unit shifts (1, 0) and (0, 1)."""
    t = np.linspace(0.0, 1.0, samples, endpoint=False)
    x, y = np.meshgrid(t, t, indexing="ij")
    base = b.s0_at(x, y)
    shift_x = np.max(np.abs(b.s0_at(x + 1.0, y) - base))
    shift_y = np.max(np.abs(b.s0_at(x, y + 1.0) - base))
    return float(max(shift_x, shift_y))
