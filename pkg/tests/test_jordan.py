import random
from fractions import Fraction

import pytest

from homaloid.cayley_dickson import HermMatrix, catalog_entry, herm3_norm, herm_jordan_product
from homaloid.jordan import (
    BasePointError,
    Dual,
    JordanStructure,
    NotSingularError,
    TangencyError,
    h_map,
    jordan_product,
    jordan_verify,
    phi_derivative_check,
    quadratic_rep,
    quadratic_rep_variants,
    secant_point,
    simplicity_probe,
    singular_orbit_map,
    tau,
    tau_geometric_check,
    tau_inverse_check,
)
from homaloid.linalg import det, is_identity, matmul, matvec
from homaloid.poly import CubicForm, parse_poly

from conftest import EKP_ENTRIES, F, HERM3

TRIPLE = CubicForm(parse_poly("x0*x1*x2"))
HR = herm3_norm(0)


def rand_vec(rng, n, box=5):
    return [Fraction(rng.randint(-box, box), rng.randint(1, 3)) for _ in range(n)]


def off_surface(f, rng, box=5):
    while True:
        A = rand_vec(rng, f.n, box)
        if f(A) != 0:
            return A


def test_dual_numbers():
    x = Dual(Fraction(2), Fraction(1))
    assert (x * x).b == 4
    assert (x ** 3).b == 12
    assert x.inv().b == Fraction(-1, 4)
    assert (1 - x).a == -1


# -- tau -------------------------------------------------------------------------

def test_tau_triple_product_at_ones():
    assert tau(TRIPLE, F(1, 1, 1)).as_lists() == [[-1, 0, 0], [0, -1, 0], [0, 0, -1]]


def test_tau_symmetric_and_homogeneous():
    rng = random.Random(0)
    f = HR.form
    for _ in range(10):
        A = off_surface(f, rng)
        T = tau(f, A).entries
        assert all(T[i][j] == T[j][i] for i in range(6) for j in range(6))
        T2 = tau(f, [2 * a for a in A]).entries
        assert all(T2[i][j] == T[i][j] / 4 for i in range(6) for j in range(6))


def test_tau_requires_off_surface():
    with pytest.raises(BasePointError):
        tau(TRIPLE, F(0, 1, 1))


def test_tau_inverse_triple_product():
    assert tau_inverse_check(TRIPLE, TRIPLE, F(1, 1, 1))


@pytest.mark.parametrize("name", ["triple_product", "linear_times_quadric", "herm3_R", "herm3_C", "herm3_H"])
def test_tau_inverse_random(name, verdict):
    f = catalog_entry(name).form
    fstar = verdict(name).fstar
    rng = random.Random(1)
    for _ in range(10):
        assert tau_inverse_check(f, fstar, off_surface(f, rng))


def test_tau_inverse_fails_for_wrong_transform(verdict):
    f = HR.form
    # tau only sees log f, so a rescaled transform would pass; f itself differs from f*
    assert tau_inverse_check(f, verdict("herm3_R").fstar.scale(3), F(1, 2, 3, 0, 1, 1))
    assert not tau_inverse_check(f, f, F(1, 2, 3, 0, 1, 1))


# -- geometric reading on the singular cone ---------------------------------------

def test_geometric_check_examples():
    assert tau_geometric_check(HR.form, HR.base_point, HR.singular_seed)
    assert tau_geometric_check(TRIPLE, F(1, 1, 1), F(1, 0, 0))




def test_geometric_check_guards():
    # beta*gamma = a^2 makes f'(A)(E11) = 0 while f(A) = -1
    A = F(1, 1, 1, 1, 1, 0)
    assert HR.form(A) == -1
    with pytest.raises(TangencyError):
        tau_geometric_check(HR.form, A, HR.singular_seed)
    with pytest.raises(NotSingularError):
        tau_geometric_check(TRIPLE, F(1, 1, 1), F(1, 1, 0))
    with pytest.raises(BasePointError):
        tau_geometric_check(TRIPLE, F(0, 1, 1), F(1, 0, 0))


@pytest.mark.parametrize("name", EKP_ENTRIES)
def test_geometric_check_on_orbit_pairs(name):
    entry = catalog_entry(name)
    f = entry.form
    rng = random.Random(2)
    checked = 0
    for _ in range(8):
        g = singular_orbit_map(f, off_surface(f, rng), off_surface(f, rng))
        z = matvec(g, entry.singular_seed)
        A = off_surface(f, rng)
        try:
            assert tau_geometric_check(f, A, z)
            checked += 1
        except TangencyError:
            pass
    assert checked >= 4


def test_secant_point_of_identity():
    # z' = A - z = diag(0, 1, 1) for the identity base point
    assert secant_point(HR.form, HR.base_point, HR.singular_seed) == F(0, 1, 1, 0, 0, 0)


# -- orbit maps and H maps ----------------------------------------------------------

def test_orbit_map_identities():
    rng = random.Random(3)
    f = HR.form
    A1, A2 = off_surface(f, rng), off_surface(f, rng)
    assert is_identity(singular_orbit_map(f, A1, A1))
    assert is_identity(matmul(singular_orbit_map(f, A1, A2), singular_orbit_map(f, A2, A1)))
    z = matvec(singular_orbit_map(f, A1, A2), HR.singular_seed)
    assert any(z) and not any(f.grad_at(z))


def test_h_map_properties():
    rng = random.Random(4)
    f = HR.form
    I = HR.base_point
    assert is_identity(h_map(f, I, I))
    for _ in range(3):
        A = off_surface(f, rng)
        H = h_map(f, I, A)
        tA, tI = tau(f, A), tau(f, I)
        ratios = set()
        for _ in range(5):
            B, Cv = rand_vec(rng, 6), rand_vec(rng, 6)
            assert tA.bilinear(B, Cv) == tI.bilinear(matvec(H, B), Cv)
            if f(B) != 0:
                ratios.add(f(matvec(H, B)) / f(B))
        assert len(ratios) == 1


# -- Jordan product -------------------------------------------------------------------

def test_triple_product_algebra_is_coordinatewise():
    J = jordan_product(TRIPLE, F(1, 1, 1))
    rng = random.Random(5)
    for _ in range(10):
        A, B = rand_vec(rng, 3), rand_vec(rng, 3)
        assert J.mul(A, B) == [a * b for a, b in zip(A, B)]


@pytest.mark.parametrize("level", range(4))
def test_herm3_product_is_symmetrized_matrix_product(level):
    entry = herm3_norm(level)
    J = jordan_product(entry.form, entry.base_point)
    n = entry.n
    basis = [[Fraction(int(i == k)) for k in range(n)] for i in range(n)]
    for i in range(n):
        Ei = HermMatrix.from_vector(level, basis[i])
        for j in range(i, n):
            expected = herm_jordan_product(Ei, HermMatrix.from_vector(level, basis[j])).to_vector()
            assert tuple(J.structure_constants[i][j]) == tuple(expected)


@pytest.mark.parametrize("level", range(4))
def test_two_derivative_routes_agree(level):
    entry = herm3_norm(level)
    a = jordan_product(entry.form, entry.base_point, "formal")
    b = jordan_product(entry.form, entry.base_point, "closed_form")
    assert a.structure_constants == b.structure_constants


def test_jordan_product_requires_base_point():
    with pytest.raises(BasePointError):
        jordan_product(TRIPLE, F(0, 1, 1))


def test_non_unit_base_point_still_gives_algebra():
    # f(I) = 8 here; the axioms hold with composition in c-scaled form
    J = jordan_product(TRIPLE, F(2, 2, 2))
    assert J.norm_scale == 8
    assert jordan_verify(J, 10, 0).passed


def _sym_matrix(x):
    al, be, ga, a, b, c = x
    return [[al, c, b], [c, be, a], [b, a, ga]]


def test_quadratic_rep_is_aba_on_symmetric_matrices():
    J = jordan_product(HR.form, HR.base_point)
    rng = random.Random(6)
    assert is_identity(quadratic_rep(J, HR.base_point))
    for _ in range(10):
        A, B = rand_vec(rng, 6), rand_vec(rng, 6)
        MA, MB = _sym_matrix(A), _sym_matrix(B)
        assert _sym_matrix(matvec(quadratic_rep(J, A), B)) == matmul(matmul(MA, MB), MA)


def test_minus_variant_fails_composition():
    J = jordan_product(HR.form, HR.base_point)
    rng = random.Random(7)
    f = HR.form
    bad = 0
    for _ in range(5):
        A, B = rand_vec(rng, 6), rand_vec(rng, 6)
        R = quadratic_rep_variants(J, A)["L2_minus_LA2"]
        if f(matvec(R, B)) != f(A) ** 2 * f(B):
            bad += 1
    assert bad > 0
    assert jordan_verify(J, 5, 0).minus_variant_composes is False


@pytest.mark.parametrize("name", EKP_ENTRIES)
def test_jordan_verify_catalog(name):
    entry = catalog_entry(name)
    J = jordan_product(entry.form, entry.base_point)
    rep = jordan_verify(J, 20, 0, [entry.singular_seed])
    assert rep.passed, rep.witnesses
    assert set(rep.checks) == {"commutative", "unit", "jordan_identity", "composition",
                               "invertibility", "inverse_law"}


def test_seed_has_singular_quadratic_rep():
    J = jordan_product(HR.form, HR.base_point)
    assert det(quadratic_rep(J, HR.singular_seed)) == 0


def test_jordan_verify_detects_broken_structure():
    J = jordan_product(HR.form, HR.base_point)
    C = [[list(row) for row in M] for M in J.structure_constants]
    C[3][3][0] += 1  # perturb e_a * e_a
    broken = JordanStructure(J.n, J.unit, tuple(tuple(tuple(r) for r in M) for M in C), J.norm, J.norm_scale)
    rep = jordan_verify(broken, 10, 0)
    assert not rep.passed
    assert rep.witnesses


def test_serialization_layout():
    J = jordan_product(TRIPLE, F(1, 1, 1))
    d = J.to_dict()
    assert d["dimension"] == 3 and d["unit"] == ["1", "1", "1"]
    flat = d["structure_constants"]
    assert len(flat) == 27
    # e_1 * e_1 = e_1 in the coordinatewise algebra
    assert flat[(1 * 3 + 1) * 3 + 1] == "1" and flat[(0 * 3 + 1) * 3 + 1] == "0"


@pytest.mark.parametrize("name", EKP_ENTRIES)
def test_phi_derivative(name):
    entry = catalog_entry(name)
    assert phi_derivative_check(entry.form, entry.base_point)


def test_phi_derivative_base_point_guard():
    with pytest.raises(BasePointError):
        phi_derivative_check(TRIPLE, F(1, 0, 1))


@pytest.mark.parametrize("name", HERM3)
def test_herm3_algebras_simple(name):
    entry = catalog_entry(name)
    J = jordan_product(entry.form, entry.base_point)
    assert simplicity_probe(J, 5, 0)


def test_direct_sum_not_simple():
    J = jordan_product(TRIPLE, F(1, 1, 1))
    assert not simplicity_probe(J, elements=[F(1, 0, 0)])
    assert not simplicity_probe(J, 5, 0)


def test_spin_factor_sum_not_simple():
    entry = catalog_entry("linear_times_quadric")
    J = jordan_product(entry.form, entry.base_point)
    assert not simplicity_probe(J, 5, 0)
