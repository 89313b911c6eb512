"""Periodic spectral calculus on the square flat torus R^2/Z^2.

The Kahler form is ``omega = 2*pi dx^dy`` so that the total area is 2*pi and a
line bundle with ``i Theta = omega`` has degree one.  Two-forms are stored as
densities relative to ``omega``; with ``i ddbar f = (1/2) lap(f) dx^dy`` the
density of ``i ddbar f`` is ``lap(f) / (4 pi)``.

Fields are plain ``(n, n)`` float arrays indexed ``[i, j] -> (x_i, y_j)``.
:class:`ScalarField` wraps an array with a kind tag where the distinction
matters (serialization, the Green solver).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.signal import resample

from .errors import ConfigurationError, GridMismatch

AREA_DENSITY = 2.0 * np.pi
FUNCTION = "function"
DENSITY = "two-form-density"


@dataclass(frozen=True)
class SurfaceGrid:
    n: int
    area_form_density: float = AREA_DENSITY

    @property
    def spacing(self) -> float:
        return 1.0 / self.n

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n, self.n)

    @property
    def size(self) -> int:
        return self.n * self.n

    @property
    def cell_area(self) -> float:
        """omega-area of one cell."""
        return self.area_form_density * self.spacing**2

    @cached_property
    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        x = np.arange(self.n) / self.n
        return np.meshgrid(x, x, indexing="ij")

    @cached_property
    def wavenumbers(self) -> tuple[np.ndarray, np.ndarray]:
        k = 2.0 * np.pi * np.fft.fftfreq(self.n, d=1.0 / self.n)
        return np.meshgrid(k, k, indexing="ij")

    @cached_property
    def symbol(self) -> np.ndarray:
        """Fourier symbol of the flat Laplacian, ``-(kx^2 + ky^2)``."""
        kx, ky = self.wavenumbers
        return -(kx**2 + ky**2)

    @cached_property
    def _derivative_symbols(self) -> tuple[np.ndarray, np.ndarray]:
        # The Nyquist mode has no real odd derivative; zero it.
        kx, ky = self.wavenumbers
        nyq = np.abs(np.fft.fftfreq(self.n, d=1.0 / self.n)) == self.n // 2
        ikx = 1j * np.where(nyq[:, None], 0.0, kx)
        iky = 1j * np.where(nyq[None, :], 0.0, ky)
        return ikx, iky


@dataclass(frozen=True)
class ScalarField:
    grid: SurfaceGrid
    values: np.ndarray
    kind: str = FUNCTION

    def __post_init__(self):
        if self.kind not in (FUNCTION, DENSITY):
            raise ConfigurationError(f"unknown field kind {self.kind!r}")
        vals = np.asarray(self.values, dtype=float)
        if vals.size != self.grid.size:
            raise GridMismatch(f"field of {vals.size} values on a grid of {self.grid.size} nodes")
        object.__setattr__(self, "values", vals.reshape(self.grid.shape))

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def combine(self, other: "ScalarField", op) -> "ScalarField":
        if other.grid != self.grid:
            raise GridMismatch("fields live on different grids")
        return ScalarField(self.grid, op(self.values, other.values), self.kind)


def make_grid(n: int) -> SurfaceGrid:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise ConfigurationError(f"grid size must be an integer, got {n!r}")
    if n < 8 or n % 2:
        raise ConfigurationError(f"grid size must be even and >= 8, got {n}")
    return SurfaceGrid(int(n))


def as_values(g: SurfaceGrid, f, kind: str | None = None) -> np.ndarray:
    """Return the raw ``(n, n)`` array of ``f`` after shape (and kind) checks."""
    if isinstance(f, ScalarField):
        if f.grid != g:
            raise GridMismatch("field belongs to a different grid")
        if kind is not None and f.kind != kind:
            raise TypeError(f"expected a {kind} field, got {f.kind}")
        return f.values
    arr = np.asarray(f, dtype=float)
    if arr.ndim == 0:
        return np.full(g.shape, float(arr))
    if arr.size != g.size:
        raise GridMismatch(f"field of {arr.size} values on a grid of {g.size} nodes")
    return arr.reshape(g.shape)


def integrate(g: SurfaceGrid, f) -> float:
    """``int f omega`` (for a density, the integral of the form ``f omega``)."""
    return float(np.sum(as_values(g, f)) * g.cell_area)


def mean(g: SurfaceGrid, f) -> float:
    return float(np.mean(as_values(g, f)))


def _apply_symbol(f: np.ndarray, symbol: np.ndarray) -> np.ndarray:
    return np.fft.ifft2(symbol * np.fft.fft2(f)).real


def laplacian(g: SurfaceGrid, f) -> np.ndarray:
    return _apply_symbol(as_values(g, f), g.symbol)


def gradient(g: SurfaceGrid, f) -> tuple[np.ndarray, np.ndarray]:
    ikx, iky = g._derivative_symbols
    fh = np.fft.fft2(as_values(g, f))
    return np.fft.ifft2(ikx * fh).real, np.fft.ifft2(iky * fh).real


def ddbar_density(g: SurfaceGrid, f) -> np.ndarray:
    """Density of ``i ddbar f`` relative to omega: ``lap(f) / (4 pi)``."""
    return laplacian(g, f) / (4.0 * np.pi)


def log_ddbar_density(g: SurfaceGrid, f) -> np.ndarray:
    """Density of ``i ddbar log f`` for a smooth positive-off-a-point ``f``.

    Evaluated by the quotient rule on spectral derivatives of ``f`` itself so a
    zero of ``f`` (where ``log f`` is not representable) only pollutes nearby
    nodes.  Nodes where ``f == 0`` come back as NaN.
    """
    vals = as_values(g, f)
    fx, fy = gradient(g, vals)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (laplacian(g, vals) / vals - (fx**2 + fy**2) / vals**2) / (4.0 * np.pi)
    return np.where(vals == 0.0, np.nan, out)


def green_solve(g: SurfaceGrid, f) -> np.ndarray:
    """Mean-zero ``u`` with ``i ddbar u = (f - mean f) omega``.

    ``f`` is a two-form density; equivalently ``lap(u) = 4 pi (f - mean f)``.
    """
    fh = np.fft.fft2(as_values(g, f, DENSITY))
    sym = g.symbol.copy()
    sym[0, 0] = 1.0
    uh = 4.0 * np.pi * fh / sym
    uh[0, 0] = 0.0
    return np.fft.ifft2(uh).real


def green_representation_check(g: SurfaceGrid, f) -> float:
    """Max-norm defect of ``f = mean(f) + G[i ddbar f]`` on the grid."""
    vals = as_values(g, f, FUNCTION)
    recon = mean(g, vals) + green_solve(g, ddbar_density(g, vals))
    return float(np.max(np.abs(vals - recon)))


def upsample(g: SurfaceGrid, f, factor: int) -> np.ndarray:
    """Trigonometric interpolation of ``f`` onto a grid ``factor`` times finer."""
    m = g.n * factor
    vals = resample(as_values(g, f), m, axis=0)
    return resample(vals, m, axis=1)


def save_field_csv(path, g: SurfaceGrid, f) -> None:
    """Write ``x,y,value`` rows in row-major order with 17 significant digits."""
    vals = as_values(g, f)
    x, y = g.coords
    table = np.column_stack([x.ravel(), y.ravel(), vals.ravel()])
    np.savetxt(path, table, delimiter=",", header="x,y,value", comments="", fmt="%.17g")


def load_field_csv(path, kind: str = FUNCTION) -> ScalarField:
    table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    n = int(round(np.sqrt(table.shape[0])))
    if n * n != table.shape[0]:
        raise GridMismatch(f"{table.shape[0]} rows is not a square grid")
    g = make_grid(n)
    x, y = g.coords
    if not (np.allclose(table[:, 0], x.ravel()) and np.allclose(table[:, 1], y.ravel())):
        raise GridMismatch("CSV coordinates are not in row-major grid order")
    return ScalarField(g, table[:, 2], kind)
