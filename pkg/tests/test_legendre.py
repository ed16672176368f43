from fractions import Fraction

import pytest
import sympy

from homaloid.cayley_dickson import catalog_entry, herm3_norm
from homaloid.legendre import (
    PreconditionError,
    RationalFit,
    analyze,
    biduality_certificate,
    fit_polynomial_legendre,
    fit_rational_legendre,
    gradient_certificate,
    log_hessian_nondegenerate,
    polar_map,
    sample_off_hypersurface,
    value_certificate,
)
from homaloid.poly import CubicForm, Poly, parse_poly

from conftest import SEED


def C(text, n=None):
    return CubicForm(parse_poly(text, n))


TRIPLE = C("x0*x1*x2")
FERMAT = C("x0^3 + x1^3 + x2^3")
CONIC_TANGENT = C("x0^2*x2 - x0*x1^2")
PERAZZO = C("x0*x3^2 + x1*x3*x4 + x2*x4^2", 5)  # vanishing Hessian, not a cone


def test_polar_map_components():
    assert polar_map(TRIPLE).components == TRIPLE.gradient
    assert polar_map(TRIPLE)([2, 3, 5]) == [15, 10, 6]


def test_log_hessian():
    assert log_hessian_nondegenerate(TRIPLE)
    assert not log_hessian_nondegenerate(C("x0^3", 3))
    assert log_hessian_nondegenerate(herm3_norm(0).form)
    assert not log_hessian_nondegenerate(PERAZZO)


def test_sampling():
    pts = sample_off_hypersurface(TRIPLE, 30, 7)
    assert len(pts) == 30
    assert all(all(c != 0 for c in p) and all(-7 <= c <= 7 for c in p) for p in pts)
    assert sample_off_hypersurface(TRIPLE, 30, 7) == pts
    assert sample_off_hypersurface(TRIPLE, 0, 7) == []


def test_triple_product_transform():
    v = fit_polynomial_legendre(TRIPLE, SEED)
    assert v.is_ekp
    assert v.fstar.poly == parse_poly("x0*x1*x2")
    assert v.certificates.complete
    assert v.rank == v.unknowns == 10


def test_linear_times_quadric_transform(verdict):
    v = verdict("linear_times_quadric")
    assert v.is_ekp
    assert v.fstar.poly == parse_poly("1/4*x0*x1^2 + 1/4*x0*x2^2 + 1/4*x0*x3^2")


def test_herm3_r_transform_value_identity_independently(verdict):
    # re-check f*(f'(x)) = f(x)^2 with sympy, independently of Poly.substitute
    v = verdict("herm3_R")
    f = herm3_norm(0).form
    xs = sympy.symbols("x0:6")
    loc = {str(x): x for x in xs}
    fs = sympy.sympify(str(f.poly).replace("^", "**"), locals=loc)
    gs = sympy.sympify(str(v.fstar.poly).replace("^", "**"), locals=loc)
    grad = [sympy.diff(fs, x) for x in xs]
    assert sympy.expand(gs.subs(dict(zip(xs, grad)), simultaneous=True) - fs**2) == 0
    assert str(v.fstar.poly) == "x0*x1*x2 - 1/4*x0*x3^2 - 1/4*x1*x4^2 - 1/4*x2*x5^2 + 1/4*x3*x4*x5"


def test_fermat_not_ekp():
    v = analyze(FERMAT, SEED)
    assert v.status == "NotEKP"
    assert v.reason == "interpolation inconsistent"
    assert v.fstar is None


def test_cone_is_degenerate():
    v = analyze(C("x0^3", 3), SEED)
    assert v.status == "Degenerate" and v.reason == "cone"
    assert v.cone_direction[0] == 0 and any(v.cone_direction)


def test_vanishing_hessian_is_degenerate():
    v = analyze(PERAZZO, SEED)
    assert v.status == "Degenerate" and v.reason == "log-Hessian degenerate"


def test_non_cubic_input_is_degenerate():
    v = analyze(parse_poly("x0^2*x1 + x1", 2))
    assert v.status == "Degenerate" and "invalid input" in v.reason


def test_fit_preconditions():
    with pytest.raises(PreconditionError):
        fit_polynomial_legendre(PERAZZO)


def test_conic_tangent_not_ekp_but_rational():
    assert analyze(CONIC_TANGENT, SEED).status == "NotEKP"
    fit = fit_rational_legendre(CONIC_TANGENT, 6, SEED)
    assert isinstance(fit, RationalFit) and fit.q == 1
    # f* = (4 u0 u2 - u1^2)^2 / (64 u2), computed by hand and with sympy
    u = Poly.variables(3)
    lhs = fit.numerator * (u[2] * 64)
    rhs = fit.denominator * (u[0] * u[2] * 4 - u[1] * u[1]) ** 2
    assert lhs == rhs
    g = CONIC_TANGENT.gradient
    assert fit.denominator.substitute(g) * CONIC_TANGENT.poly ** 2 == fit.numerator.substitute(g)


def test_fermat_has_no_rational_transform_up_to_six():
    assert fit_rational_legendre(FERMAT, 6, SEED) is None


def test_rational_fit_of_ekp_is_polynomial_case():
    fit = fit_rational_legendre(TRIPLE, 6, SEED)
    assert fit.q == 0
    assert fit.numerator == parse_poly("x0*x1*x2") * fit.denominator.coefficient((0, 0, 0))


def test_rational_fit_validation():
    with pytest.raises(ValueError):
        RationalFit(parse_poly("x0^3", 2), Poly.zero(2), 0)
    with pytest.raises(ValueError):
        RationalFit(parse_poly("x0^3", 2), parse_poly("x0^2", 2), 2)


@pytest.mark.parametrize("lam", [2, -3])
@pytest.mark.parametrize("name", ["triple_product", "linear_times_quadric", "herm3_R"])
def test_scaling_covariance(name, lam, verdict):
    f = catalog_entry(name).form
    g = verdict(name).fstar
    v = analyze(f.scale(lam), SEED)
    assert v.is_ekp and v.certificates.complete
    assert value_certificate(f.scale(lam), v.fstar)
    # (lam f)* = f* / lam, since g is cubic and f'(x) scales by lam
    assert v.fstar.poly == g.poly * Fraction(1, lam)


def test_unimodular_equivariance():
    # f o T with T unimodular; then (f o T)*(u) = f*(T^{-T} u)
    T = [[1, 1, 0], [0, 1, 2], [0, 0, 1]]
    Tinv_T = [[1, 0, 0], [-1, 1, 0], [2, -2, 1]]  # (T^{-1})^T
    x = Poly.variables(3)
    images = [sum((x[j] * T[i][j] for j in range(3)), Poly.zero(3)) for i in range(3)]
    fT = CubicForm(TRIPLE.poly.substitute(images))
    v = analyze(fT, SEED)
    assert v.is_ekp and v.certificates.complete
    u_images = [sum((x[j] * Tinv_T[i][j] for j in range(3)), Poly.zero(3)) for i in range(3)]
    assert v.fstar.poly == parse_poly("x0*x1*x2").substitute(u_images)


def test_negative_unimodular_control():
    # the same change of coordinates applied to Fermat stays non-EKP
    x = Poly.variables(3)
    images = [x[0] + x[1], x[1], x[2] - x[0]]
    assert analyze(CubicForm(FERMAT.poly.substitute(images)), SEED).status == "NotEKP"


def test_determinism():
    a = analyze(herm3_norm(1).form, 5).to_dict()
    b = analyze(herm3_norm(1).form, 5).to_dict()
    assert a == b
    assert "timings" not in a


def test_certificates_reject_wrong_transform(verdict):
    f = herm3_norm(0).form
    g = verdict("herm3_R").fstar
    wrong = g.scale(2)
    assert not value_certificate(f, wrong)
    assert not gradient_certificate(f, wrong)
    assert not biduality_certificate(f, wrong, SEED)
    assert value_certificate(f, g) and gradient_certificate(f, g) and biduality_certificate(f, g, SEED)


@pytest.mark.parametrize("name", ["herm3_C", "herm3_H"])
def test_herm3_transforms_certified(name, verdict):
    v = verdict(name)
    assert v.is_ekp and v.certificates.complete
    assert v.fstar.poly.degree() == 3
    assert v.rank == v.unknowns


@pytest.mark.slow
def test_herm3_o_transform_certified(verdict):
    v = verdict("herm3_O")
    assert v.is_ekp and v.certificates.complete
    assert v.unknowns == 3654 and v.rank == v.unknowns
