"""Second logarithmic differentials and the Jordan algebra of a cubic norm.

``tau(f, A)`` is the differential at ``A`` of ``f'/f``, a symmetric matrix
mapping vectors to covectors.  Fixing a base point ``I``, the maps
``H_A = tau_I^{-1} tau_A`` define a product

    A * B = -1/2 d/dt H_{I + tA}(B) |_{t=0}

which is computed exactly with dual numbers (first-order truncated
arithmetic in a formal parameter t).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .linalg import SingularMatrixError, inverse, matmul, matvec, proportional
from .poly import CubicForm, Vec, polar_covector


class PreconditionError(ValueError):
    pass


class BasePointError(PreconditionError):
    """The base point lies on the hypersurface f = 0."""


class NotSingularError(PreconditionError):
    """The point is not on the cone over the singular locus."""


class TangencyError(PreconditionError):
    """f'(A)(z) = 0: the line through A and z does not meet X in a simple point."""


class JordanConstructionError(ArithmeticError):
    pass


class Dual:
    """``a + b*t`` with ``t**2 = 0``."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        self.a = a
        self.b = b

    def __add__(self, o):
        if isinstance(o, Dual):
            return Dual(self.a + o.a, self.b + o.b)
        return Dual(self.a + o, self.b)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.a, -self.b)

    def __sub__(self, o):
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, Dual):
            return Dual(self.a * o.a, self.a * o.b + self.b * o.a)
        return Dual(self.a * o, self.b * o)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k == 0:
            return Dual(1, 0)
        ak1 = self.a ** (k - 1)
        return Dual(ak1 * self.a, k * ak1 * self.b)

    def inv(self) -> "Dual":
        ia = Fraction(1) / self.a
        return Dual(ia, -self.b * ia * ia)

    def __truediv__(self, o):
        if isinstance(o, Dual):
            return self * o.inv()
        return Dual(Fraction(self.a) / o, Fraction(self.b) / o)

    def __repr__(self):
        return f"Dual({self.a}, {self.b})"


def _dual(v) -> Dual:
    return v if isinstance(v, Dual) else Dual(Fraction(v), Fraction(0))


@dataclass(frozen=True)
class TauMatrix:
    entries: tuple[tuple[Fraction, ...], ...]
    base_point: Vec
    direction: str = "V->V*"

    def apply(self, x: Sequence) -> list[Fraction]:
        return matvec(self.entries, x)

    def bilinear(self, x: Sequence, y: Sequence) -> Fraction:
        return sum((a * b for a, b in zip(self.apply(x), y)), Fraction(0))

    def as_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]


def _tau_entries(fx, g, H):
    n = len(g)
    f2 = fx * fx
    return [[(fx * H[i][j] - g[i] * g[j]) / f2 for j in range(n)] for i in range(n)]


def tau(f: CubicForm, A: Sequence) -> TauMatrix:
    """``d_A(f'/f) = (f(A) Hess f(A) - f'(A) f'(A)^T) / f(A)^2``."""
    A = tuple(Fraction(a) for a in A)
    fA = f(A)
    if fA == 0:
        raise BasePointError("f(A) = 0")
    M = _tau_entries(fA, f.grad_at(A), f.hessian_at(A))
    return TauMatrix(tuple(tuple(r) for r in M), A)


def _tau_at_dual(f: CubicForm, M: Sequence[Dual]) -> list[list[Dual]]:
    fx = _dual(f(M))
    g = [_dual(v) for v in f.grad_at(M)]
    H = [[_dual(v) for v in row] for row in f.hessian_at(M)]
    return _tau_entries(fx, g, H)


def tau_inverse_check(f: CubicForm, fstar: CubicForm, A: Sequence) -> bool:
    """``tau_{f*, A*} tau_{f, A} = Id`` with ``A* = f'(A)/f(A)``."""
    t = tau(f, A)
    fA = f(t.base_point)
    A_star = [c / fA for c in f.grad_at(t.base_point)]
    t_star = tau(fstar, A_star)
    return linalg.is_identity(matmul(t_star.entries, t.entries))


def tau_geometric_check(f: CubicForm, A: Sequence, z: Sequence) -> bool:
    """The tangent-hyperplane reading of ``tau_{f,A}`` on the singular cone.

    For ``z`` with ``f'(z) = 0`` the line through ``A`` and ``z`` meets the
    hypersurface again at ``z' = A - f(A)/(f'(A) z) z``; ``tau_{f,A}(z)``
    must be a nonzero multiple of ``f'(z')``, and must agree with the
    polarization formula ``3 (2 f(A) Q(z,A,-) - (f'(A) z) Q(A,A,-)) / f(A)^2``.
    """
    A = [Fraction(a) for a in A]
    z = [Fraction(c) for c in z]
    fA = f(A)
    if fA == 0:
        raise BasePointError("f(A) = 0")
    if any(f.grad_at(z)):
        raise NotSingularError("f'(z) != 0")
    gA = f.grad_at(A)
    gAz = sum((a * b for a, b in zip(gA, z)), Fraction(0))
    if gAz == 0:
        raise TangencyError("f'(A)(z) = 0")

    lam = fA / gAz
    zp = [a - lam * c for a, c in zip(A, z)]
    grad_zp = f.grad_at(zp)
    tz = tau(f, A).apply(z)

    on_x = f(zp) == 0
    smooth = any(grad_zp)
    tangent = any(tz) and proportional(grad_zp, tz)
    QzA = polar_covector(f, z, A)
    QAA = polar_covector(f, A, A)
    formula = [3 * (2 * fA * qz - gAz * qa) / (fA * fA) for qz, qa in zip(QzA, QAA)]
    explicit = formula == tz
    return on_x and smooth and tangent and explicit


def secant_point(f: CubicForm, A: Sequence, z: Sequence) -> list[Fraction]:
    """The residual intersection ``z'`` of the line through A and a singular z."""
    A = [Fraction(a) for a in A]
    gAz = sum((a * Fraction(b) for a, b in zip(f.grad_at(A), z)), Fraction(0))
    if gAz == 0:
        raise TangencyError("f'(A)(z) = 0")
    lam = f(A) / gAz
    return [a - lam * Fraction(c) for a, c in zip(A, z)]


def singular_orbit_map(f: CubicForm, A1: Sequence, A2: Sequence) -> list[list[Fraction]]:
    """``tau_{f,A2}^{-1} tau_{f,A1}``; maps the singular cone into itself."""
    t1 = tau(f, A1)
    t2 = tau(f, A2)
    try:
        t2inv = inverse(t2.entries)
    except SingularMatrixError as exc:
        raise JordanConstructionError(f"tau_{{f,A2}} is singular at {t2.base_point}") from exc
    return matmul(t2inv, t1.entries)


def _tau_inverse(f: CubicForm, I: Sequence) -> list[list[Fraction]]:
    t = tau(f, I)
    try:
        return inverse(t.entries)
    except SingularMatrixError as exc:
        raise PreconditionError("tau_{f,I} is not invertible") from exc


def h_map(f: CubicForm, I: Sequence, A: Sequence) -> list[list[Fraction]]:
    """``H_A = tau_I^{-1} tau_A``, so that ``tau_A(B, C) = tau_I(H_A B, C)``."""
    return matmul(_tau_inverse(f, I), tau(f, A).entries)


# ---------------------------------------------------------------------------
# Jordan structure


@dataclass(frozen=True)
class JordanStructure:
    n: int
    unit: Vec
    structure_constants: tuple  # C[i][j][k] = k-th coordinate of e_i * e_j
    norm: CubicForm
    norm_scale: Fraction = Fraction(1)  # f(unit)

    def _left_blocks(self):
        # M_i[k][j] = C[i][j][k]
        cached = self.__dict__.get("_blocks")
        if cached is None:
            n = self.n
            C = self.structure_constants
            cached = [[[C[i][j][k] for j in range(n)] for k in range(n)] for i in range(n)]
            object.__setattr__(self, "_blocks", cached)
        return cached

    def left(self, A: Sequence) -> list[list[Fraction]]:
        n = self.n
        L = [[Fraction(0)] * n for _ in range(n)]
        for a, M in zip(A, self._left_blocks()):
            if not a:
                continue
            for k in range(n):
                row, Mk = L[k], M[k]
                for j in range(n):
                    if Mk[j]:
                        row[j] += a * Mk[j]
        return L

    def mul(self, A: Sequence, B: Sequence) -> list[Fraction]:
        return matvec(self.left(A), B)

    def square(self, A: Sequence) -> list[Fraction]:
        return self.mul(A, A)

    def to_dict(self) -> dict:
        n = self.n
        C = self.structure_constants
        return {
            "dimension": n,
            "unit": [str(c) for c in self.unit],
            "norm_at_unit": str(self.norm_scale),
            "structure_constants": [str(C[i][j][k]) for i in range(n) for j in range(n) for k in range(n)],
            "indexing": "flat[(i*n + j)*n + k] = k-th coordinate of e_i * e_j",
        }


def _derivative_formal(f: CubicForm, I: Sequence, i: int) -> list[list[Fraction]]:
    M = [Dual(Fraction(c), Fraction(int(k == i))) for k, c in enumerate(I)]
    return [[d.b for d in row] for row in _tau_at_dual(f, M)]


def _derivative_closed_form(f: CubicForm, I: Sequence, i: int) -> list[list[Fraction]]:
    # d/dt of H/f - g g^T / f^2 along e_i, written with the third-derivative tensor
    n = f.n
    fx = f(I)
    g = f.grad_at(I)
    H = f.hessian_at(I)
    T = f.third_derivatives[i]
    gi = g[i]
    h = [H[k][i] for k in range(n)]
    f2, f3 = fx * fx, fx * fx * fx
    return [
        [T[j][k] / fx - H[j][k] * gi / f2 - (h[j] * g[k] + g[j] * h[k]) / f2 + 2 * g[j] * g[k] * gi / f3
         for k in range(n)]
        for j in range(n)
    ]


def jordan_product(f: CubicForm, I: Sequence, method: str = "formal") -> JordanStructure:
    """Structure constants of ``A * B = -1/2 d_I(M -> H_M(B))(A)``.

    ``method="formal"`` differentiates with dual numbers; ``"closed_form"``
    uses the explicit derivative of ``Hess f / f - f' f'^T / f^2`` and serves
    as an independent cross-check.
    """
    I = tuple(Fraction(c) for c in I)
    fI = f(I)
    if fI == 0:
        raise BasePointError("f(I) = 0")
    Tinv = _tau_inverse(f, I)
    deriv = {"formal": _derivative_formal, "closed_form": _derivative_closed_form}[method]
    n = f.n
    C = []
    for i in range(n):
        X = matmul(Tinv, deriv(f, I, i))
        C.append(tuple(tuple(-X[k][j] / 2 for k in range(n)) for j in range(n)))
    C = tuple(C)
    for i in range(n):
        for j in range(i + 1, n):
            if C[i][j] != C[j][i]:
                raise JordanConstructionError(f"product not commutative on e_{i}, e_{j}")
    J = JordanStructure(n, I, C, f, fI)
    for i in range(n):
        e = [Fraction(int(k == i)) for k in range(n)]
        if J.mul(I, e) != e:
            raise JordanConstructionError(f"I is not a unit on e_{i}")
    return J


def quadratic_rep_variants(J: JordanStructure, A: Sequence) -> dict[str, list[list[Fraction]]]:
    """Both ``L_A^2 - L_{A^2}`` and ``2 L_A^2 - L_{A^2}``."""
    L = J.left(A)
    L2 = matmul(L, L)
    LA2 = J.left(J.square(A))
    n = J.n
    return {
        "L2_minus_LA2": [[L2[i][j] - LA2[i][j] for j in range(n)] for i in range(n)],
        "P": [[2 * L2[i][j] - LA2[i][j] for j in range(n)] for i in range(n)],
    }


def quadratic_rep(J: JordanStructure, A: Sequence) -> list[list[Fraction]]:
    """``P(A) = 2 L_A^2 - L_{A^2}``, the operator satisfying ``f(P(A) B) = f(A)^2 f(B)``."""
    return quadratic_rep_variants(J, A)["P"]


@dataclass
class JordanReport:
    trials: int
    checks: dict[str, bool] = field(default_factory=dict)
    witnesses: dict[str, dict] = field(default_factory=dict)
    minus_variant_composes: bool | None = None

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def fail(self, name: str, **witness):
        self.checks[name] = False
        self.witnesses.setdefault(name, {k: [str(c) for c in v] if isinstance(v, (list, tuple)) else str(v)
                                         for k, v in witness.items()})

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "passed": self.passed,
            "checks": dict(self.checks),
            "witnesses": self.witnesses,
            "quadratic_representation": "2*L_A^2 - L_{A^2}",
            "L_A^2 - L_{A^2} satisfies composition": self.minus_variant_composes,
        }


def random_element(rng: random.Random, n: int, box: int = 5) -> list[Fraction]:
    return [Fraction(rng.randint(-box, box), rng.randint(1, 3)) for _ in range(n)]


def jordan_verify(J: JordanStructure, trials: int = 20, seed: int = 0,
                  singular_points: Sequence[Sequence] = ()) -> JordanReport:
    """Check the Jordan-algebra axioms and the norm identities on random elements.

    ``singular_points`` are extra elements with ``f = 0`` at which ``P`` must
    be singular.
    """
    rng = random.Random(seed)
    f = J.norm
    c = J.norm_scale
    rep = JordanReport(trials)
    names = ("commutative", "unit", "jordan_identity", "composition", "invertibility", "inverse_law")
    for name in names:
        rep.checks[name] = True
    minus_ok = True
    for _ in range(trials):
        A = random_element(rng, J.n)
        B = random_element(rng, J.n)
        AB = J.mul(A, B)
        if AB != J.mul(B, A):
            rep.fail("commutative", A=A, B=B)
        if J.mul(J.unit, A) != A or J.mul(A, J.unit) != A:
            rep.fail("unit", A=A)
        A2 = J.square(A)
        if J.mul(A2, AB) != J.mul(A, J.mul(A2, B)):
            rep.fail("jordan_identity", A=A, B=B)
        variants = quadratic_rep_variants(J, A)
        P = variants["P"]
        fA, fB = f(A), f(B)
        if f(matvec(P, B)) * c * c != fA * fA * fB:
            rep.fail("composition", A=A, B=B)
        if f(matvec(variants["L2_minus_LA2"], B)) * c * c != fA * fA * fB:
            minus_ok = False
        invertible = linalg.det(P) != 0
        if invertible != (fA != 0):
            rep.fail("invertibility", A=A)
        if invertible:
            Ainv = linalg.solve_square(P, A)
            if matvec(P, Ainv) != A or J.mul(A, Ainv) != list(J.unit):
                rep.fail("inverse_law", A=A)
    for z in singular_points:
        z = [Fraction(v) for v in z]
        if (linalg.det(quadratic_rep(J, z)) != 0) != (f(z) != 0):
            rep.fail("invertibility", A=z)
    rep.minus_variant_composes = minus_ok
    return rep


def phi_derivative_check(f: CubicForm, I: Sequence) -> bool:
    """The map ``A -> tau_I^{-1}(tau_A(I))`` has derivative ``-2 Id`` at ``I``."""
    I = [Fraction(c) for c in I]
    Tinv = _tau_inverse(f, I)
    n = f.n
    for k in range(n):
        M = [Dual(c, Fraction(int(i == k))) for i, c in enumerate(I)]
        T = _tau_at_dual(f, M)
        d = [sum((row[j].b * I[j] for j in range(n)), Fraction(0)) for row in T]
        col = matvec(Tinv, d)
        if col != [Fraction(-2 if i == k else 0) for i in range(n)]:
            return False
    return True


def _ideal_dimension(J: JordanStructure, A: Sequence) -> int:
    """Dimension of the smallest subspace containing A and stable under every L_{e_i}."""
    n = J.n
    blocks = J._left_blocks()
    rows: dict[int, list[Fraction]] = {}

    def reduce(v):
        v = list(v)
        for p, r in rows.items():
            if v[p]:
                a = v[p]
                v = [x - a * y for x, y in zip(v, r)]
        return v

    def insert(v) -> bool:
        v = reduce(v)
        p = next((i for i, x in enumerate(v) if x), None)
        if p is None:
            return False
        inv = 1 / v[p]
        v = [x * inv for x in v]
        for q, r in rows.items():
            if r[p]:
                a = r[p]
                rows[q] = [x - a * y for x, y in zip(r, v)]
        rows[p] = v
        return True

    frontier = []
    if insert(A):
        frontier.append([Fraction(c) for c in A])
    while frontier and len(rows) < n:
        v = frontier.pop()
        for M in blocks:
            w = matvec(M, v)
            if insert(w):
                frontier.append(w)
                if len(rows) == n:
                    break
    return len(rows)


def simplicity_probe(J: JordanStructure, trials: int = 5, seed: int = 0,
                     elements: Sequence[Sequence] | None = None) -> bool:
    """Whether every probe element generates the whole algebra as an ideal.

    Probes are ``elements`` if given, otherwise ``trials`` random elements
    together with the basis vectors.  A False result exhibits a proper ideal.
    """
    if elements is None:
        rng = random.Random(seed)
        elements = [random_element(rng, J.n) for _ in range(trials)]
        elements += [[Fraction(int(i == k)) for i in range(J.n)] for k in range(J.n)]
    return all(_ideal_dimension(J, A) == J.n for A in elements if any(A))
