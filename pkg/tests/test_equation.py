import numpy as np
import pytest
import sympy as sp

from vortexpath import bundle as bd
from vortexpath import geometry as geo
from vortexpath.equation import (
    CYMInputs,
    Family,
    VortexParams,
    cym_max_alpha,
    jacobian_apply,
    make_params,
    manufactured_params,
    residual,
)
from vortexpath.errors import AdmissibilityError, ConfigurationError, DenominatorError

from conftest import smooth_field

W = 1 / (2 * np.pi) ** 2


def test_vbma_coefficients():
    p = make_params("vbma", r1=3, r2=2)
    assert (p.a, p.b, p.c, p.d, p.e, p.k) == (24, 2, 1, 1, 34, 1)


def test_bradlow_coefficients(bg64):
    p = make_params("bradlow", tau=4, bundle=bg64)
    assert (p.a, p.b, p.c, p.d, p.e, p.k) == (2, 0, 0, 4, 1, 0)
    assert p.u is None


def test_cym_coefficients():
    alpha, tau, lam = 2.0, 4.0, -1.0
    p = make_params("cym", alpha=alpha, tau=tau, lam=lam)
    assert p.a == pytest.approx(8 + 2 * tau * alpha * (2 * lam - tau / 2) * W, rel=1e-15)
    assert p.b == pytest.approx(tau * alpha * W, rel=1e-15)
    assert p.c == p.k == pytest.approx(alpha * W / 2, rel=1e-15)
    assert (p.d, p.e) == (4, 4)
    ex = p.exact_coefficients()
    assert sp.simplify(ex["b"] - (ex["k"] + ex["c"]) * ex["d"]) == 0


def test_cym_at_zero_coupling_is_scaled_bradlow():
    cym = make_params("cym", alpha=0, tau=4, lam=-1)
    br = make_params("bradlow", tau=4)
    for name in "abcdek":
        assert getattr(cym, name) == pytest.approx(4 * getattr(br, name) if name in "ae" else getattr(br, name))


def test_cym_lambda_alias():
    assert make_params("cym", alpha=1, tau=4, **{"lambda": -1}).a == make_params("cym", alpha=1, tau=4, lam=-1).a


def test_cym_admissibility():
    amax = cym_max_alpha(4, -1)
    assert amax == pytest.approx(np.pi**2)
    CYMInputs(0.99 * amax, 4, -1)
    with pytest.raises(AdmissibilityError) as exc:
        CYMInputs(1.01 * amax, 4, -1)
    assert exc.value.flag == "cym_admissible"
    with pytest.raises(AdmissibilityError):
        CYMInputs(1.0, 4, 1.0)
    with pytest.raises(ConfigurationError):
        CYMInputs(1.0, 2, -1)


@pytest.mark.parametrize("family,args", [
    ("vbma", {"r1": 2, "r2": 2}),
    ("vbma", {"r1": 3, "r2": 1}),
    ("vbma", {"r1": 3.5, "r2": 2}),
    ("bradlow", {"tau": 2}),
    ("bradlow", {"tau": 4, "extra": 1}),
    ("general", {"a": 1, "b": 0, "c": 0, "d": 1}),
    ("general", {"a": -1, "b": 0, "c": 0, "d": 1, "e": 1, "k": 0}),
    ("nope", {}),
])
def test_bad_family_arguments(family, args):
    with pytest.raises(ConfigurationError):
        make_params(family, **args)


def test_bad_path_position():
    with pytest.raises(ConfigurationError):
        make_params("vbma", r1=3, r2=2, t=1.5)
    with pytest.raises(ConfigurationError):
        make_params("vbma", r1=3, r2=2, alpha=-1)


def test_u_requires_s0_below_d(g64):
    b = bd.make_background(g64, 1.0)
    with pytest.raises(AdmissibilityError) as exc:
        make_params("vbma", r1=3, r2=2, t=0, bundle=b)
    assert exc.value.flag == "s0_below_d"


@pytest.mark.parametrize("family", [Family("vbma", {"r1": 3, "r2": 2}),
                                    Family("cym", {"tau": 4, "lam": -1}),
                                    Family("bradlow", {"tau": 4}),
                                    Family("general", {"a": 3, "b": 1, "c": 0.5, "d": 1.5, "e": 5, "k": 0.2})])
def test_zero_residual_at_t0(g64, family):
    b = bd.make_background(g64, family.default_cap())
    p = family.at(b, 1.0 if family.tag == "cym" else 0.0, 0.0)
    assert np.max(np.abs(residual(p, b, np.zeros(g64.shape)))) <= 1e-12


def test_vbma_psi0_not_a_solution_at_t1(bg64):
    p = make_params("vbma", r1=3, r2=2, t=1.0, bundle=bg64)
    assert np.max(np.abs(residual(p, bg64, np.zeros(bg64.grid.shape)))) > 1e-2


def test_manufactured_residual_vanishes(bg64):
    x, y = bg64.grid.coords
    psi_star = 0.1 * np.sin(2 * np.pi * x) * np.cos(2 * np.pi * y)
    p = manufactured_params(make_params("vbma", r1=3, r2=2, t=1.0, bundle=bg64), bg64, psi_star)
    assert np.max(np.abs(residual(p, bg64, psi_star))) <= 1e-11


def test_denominator_error(bg64):
    # Very negative psi pushes s far past d where a - c s^2 turns negative.
    p = VortexParams(a=1.0, b=0.0, c=1.0, d=1.0, e=1.0, k=0.0, t=1.0)
    with pytest.raises(DenominatorError):
        residual(p, bg64, np.full(bg64.grid.shape, -5.0))


def _fd_check(p, b, psi, dpsi, eps=1e-6):
    fd = (residual(p, b, psi + eps * dpsi) - residual(p, b, psi - eps * dpsi)) / (2 * eps)
    jv = jacobian_apply(p, b, psi, dpsi)
    return np.max(np.abs(jv - fd)) / np.max(np.abs(fd))


@pytest.mark.parametrize("tag,args,alpha", [("vbma", {"r1": 3, "r2": 2}, 0.0),
                                            ("cym", {"tau": 4, "lam": -1}, 3.0),
                                            ("general", {"a": 3, "b": 1, "c": 0.5, "d": 1.5, "e": 5, "k": 0.2}, 0.0)])
@pytest.mark.parametrize("t", [0.0, 0.4, 1.0])
def test_jacobian_finite_differences(g64, tag, args, alpha, t):
    fam = Family(tag, args)
    b = bd.make_background(g64, fam.default_cap())
    p = fam.at(b, alpha, t)
    for seed in range(3):
        psi = smooth_field(g64, seed, 0.2)
        dpsi = smooth_field(g64, 100 + seed, 1.0)
        assert _fd_check(p, b, psi, dpsi) <= 1e-5


def test_jacobian_constant_coefficient_toy(bg64):
    # b = c = k = 0: R = a Theta - (d - s) F, so J dpsi = a ddbar(dpsi) - s F dpsi.
    p = VortexParams(a=3.0, b=0.0, c=0.0, d=2.0, e=5.0, k=0.0, t=1.0)
    psi = smooth_field(bg64.grid, 4, 0.3)
    dpsi = smooth_field(bg64.grid, 5, 1.0)
    s = bd.s_of_psi(bg64, psi)
    hand = 3.0 * geo.ddbar_density(bg64.grid, dpsi) - s * 5.0 * dpsi
    np.testing.assert_allclose(jacobian_apply(p, bg64, psi, dpsi), hand, atol=1e-12)
