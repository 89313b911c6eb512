import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vortexpath import geometry as geo
from vortexpath.checks import random_bandlimited
from vortexpath.errors import ConfigurationError, GridMismatch

TWO_PI = 2 * np.pi


def test_grid_construction():
    g = geo.make_grid(64)
    assert g.size == 4096 and g.spacing == 1 / 64
    assert geo.make_grid(8).size == 64


@pytest.mark.parametrize("n", [7, 6, 9, 0, 65, 64.0])
def test_bad_grid_sizes(n):
    with pytest.raises(ConfigurationError):
        geo.make_grid(n)


def test_integrate(g64):
    x, _ = g64.coords
    assert geo.integrate(g64, 1.0) == pytest.approx(TWO_PI, abs=1e-14)
    assert abs(geo.integrate(g64, np.sin(2 * np.pi * x))) < 1e-14


def test_laplacian_eigenfunctions(g64):
    x, y = g64.coords
    f = np.sin(2 * np.pi * x)
    np.testing.assert_allclose(geo.laplacian(g64, f), -4 * np.pi**2 * f, atol=1e-10)
    h = f * np.cos(4 * np.pi * y)
    np.testing.assert_allclose(geo.laplacian(g64, h), -20 * np.pi**2 * h, atol=1e-9)
    assert np.max(np.abs(geo.laplacian(g64, np.full(g64.shape, 3.0)))) == 0


def test_gradient(g64):
    x, y = g64.coords
    fx, fy = geo.gradient(g64, np.sin(2 * np.pi * x) * np.cos(2 * np.pi * y))
    np.testing.assert_allclose(fx, 2 * np.pi * np.cos(2 * np.pi * x) * np.cos(2 * np.pi * y), atol=1e-11)
    np.testing.assert_allclose(fy, -2 * np.pi * np.sin(2 * np.pi * x) * np.sin(2 * np.pi * y), atol=1e-11)


def test_ddbar_convention(g64):
    x, _ = g64.coords
    f = np.sin(2 * np.pi * x)
    np.testing.assert_allclose(geo.ddbar_density(g64, f), -np.pi * f, atol=1e-12)
    assert np.max(np.abs(geo.ddbar_density(g64, np.ones(g64.shape)))) == 0


def test_green_solve(g64):
    x, y = g64.coords
    f = np.sin(2 * np.pi * x)
    np.testing.assert_allclose(geo.green_solve(g64, f), -f / np.pi, atol=1e-14)
    assert np.max(np.abs(geo.green_solve(g64, np.full(g64.shape, 2.0)))) == 0
    assert geo.green_representation_check(g64, np.sin(2 * np.pi * x) + np.cos(2 * np.pi * y)) <= 1e-10
    assert geo.green_representation_check(g64, np.full(g64.shape, 5.0)) == 0


def test_green_rejects_function_kind(g64):
    f = geo.ScalarField(g64, np.zeros(g64.shape), "function")
    with pytest.raises(TypeError):
        geo.green_solve(g64, f)


def test_grid_mismatch(g64):
    g32 = geo.make_grid(32)
    with pytest.raises(GridMismatch):
        geo.laplacian(g64, geo.ScalarField(g32, np.zeros(g32.shape)))
    with pytest.raises(GridMismatch):
        geo.laplacian(g64, np.zeros((32, 32)))


def test_green_round_trip_bandlimited(g64):
    rng = np.random.default_rng(7)
    for _ in range(10):
        f = random_bandlimited(g64, rng)
        u = geo.green_solve(g64, f)
        assert np.max(np.abs(geo.ddbar_density(g64, u) - (f - geo.mean(g64, f)))) <= 1e-10


def test_green_on_theta_density(g128, bg128):
    assert geo.green_representation_check(g128, bg128.s0) <= 1e-6


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), a=st.floats(-5, 5), b=st.floats(-5, 5))
def test_linearity_and_zero_integral(seed, a, b):
    g = geo.make_grid(16)
    rng = np.random.default_rng(seed)
    f, h = rng.normal(size=g.shape), rng.normal(size=g.shape)
    for op in (geo.laplacian, geo.ddbar_density):
        lhs = op(g, a * f + b * h)
        rhs = a * op(g, f) + b * op(g, h)
        scale = 1 + np.max(np.abs(op(g, f))) * (1 + abs(a) + abs(b))
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * scale
    assert abs(geo.integrate(g, geo.ddbar_density(g, f))) <= 1e-12 * (1 + np.max(np.abs(f)))


def test_csv_round_trip(tmp_path, g64):
    x, y = g64.coords
    f = np.exp(np.sin(2 * np.pi * x)) * np.cos(2 * np.pi * y) / 3
    path = tmp_path / "f.csv"
    geo.save_field_csv(path, g64, f)
    assert path.read_text().splitlines()[0] == "x,y,value"
    back = geo.load_field_csv(path)
    assert back.grid.n == 64
    assert np.array_equal(back.values, f)


def test_upsample_is_exact_for_bandlimited(g64):
    g128 = geo.make_grid(128)
    x, y = g64.coords
    X, Y = g128.coords
    f = np.sin(2 * np.pi * x) * np.cos(6 * np.pi * y)
    np.testing.assert_allclose(geo.upsample(g64, f, 2), np.sin(2 * np.pi * X) * np.cos(6 * np.pi * Y), atol=1e-13)
