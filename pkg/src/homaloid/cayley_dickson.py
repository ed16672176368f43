"""Composition algebras R, C, H, O by Cayley-Dickson doubling, and the cubic
norms of 3x3 Hermitian matrices over them.

Coordinates may be any ring elements supporting ``+``, ``-`` and ``*``
(Fractions for numerical work, :class:`~homaloid.poly.Poly` for building the
norm forms symbolically).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .poly import CubicForm, Poly, Vec, parse_poly

LEVEL_NAMES = {0: "R", 1: "C", 2: "H", 3: "O"}


def _mul(x: Sequence, y: Sequence) -> list:
    if len(x) == 1:
        return [x[0] * y[0]]
    h = len(x) // 2
    p, q = x[:h], x[h:]
    r, s = y[:h], y[h:]
    # (p, q)(r, s) = (pr - conj(s) q, s p + q conj(r))
    left = [a - b for a, b in zip(_mul(p, r), _mul(_conj(s), q))]
    right = [a + b for a, b in zip(_mul(s, p), _mul(q, _conj(r)))]
    return left + right


def _conj(x: Sequence) -> list:
    return [x[0]] + [-c for c in x[1:]]


@dataclass(frozen=True)
class CDElem:
    level: int
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != 2**self.level:
            raise ValueError(f"level {self.level} needs {2**self.level} coordinates, got {len(self.coords)}")

    @classmethod
    def of(cls, values: Sequence) -> "CDElem":
        k = (len(values) - 1).bit_length()
        return cls(k, tuple(Fraction(v) if isinstance(v, (int, str)) else v for v in values))

    @classmethod
    def unit(cls, level: int, i: int = 0) -> "CDElem":
        c = [Fraction(0)] * 2**level
        c[i] = Fraction(1)
        return cls(level, tuple(c))

    @classmethod
    def zero(cls, level: int) -> "CDElem":
        return cls(level, (Fraction(0),) * 2**level)

    def _check(self, other: "CDElem"):
        if self.level != other.level:
            raise ValueError(f"level mismatch: {self.level} vs {other.level}")

    def __add__(self, other: "CDElem") -> "CDElem":
        self._check(other)
        return CDElem(self.level, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "CDElem") -> "CDElem":
        self._check(other)
        return CDElem(self.level, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "CDElem":
        return CDElem(self.level, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, CDElem):
            self._check(other)
            return CDElem(self.level, tuple(_mul(self.coords, other.coords)))
        return CDElem(self.level, tuple(a * other for a in self.coords))

    def __rmul__(self, other):
        return CDElem(self.level, tuple(other * a for a in self.coords))

    def conj(self) -> "CDElem":
        return CDElem(self.level, tuple(_conj(self.coords)))

    def norm(self):
        """``a * conj(a)``, i.e. the sum of squared coordinates."""
        total = self.coords[0] * self.coords[0]
        for c in self.coords[1:]:
            total = total + c * c
        return total

    def re(self):
        return self.coords[0]


def cd_mul(a: CDElem, b: CDElem) -> CDElem:
    return a * b


def cd_conj(a: CDElem) -> CDElem:
    return a.conj()


def cd_norm(a: CDElem):
    return a.norm()


def cd_re(a: CDElem):
    return a.re()


@dataclass(frozen=True)
class HermMatrix:
    """``[[alpha, c, conj(b)], [conj(c), beta, a], [b, conj(a), gamma]]``."""

    diag: tuple
    off: tuple[CDElem, CDElem, CDElem]

    def __post_init__(self):
        levels = {e.level for e in self.off}
        if len(levels) != 1:
            raise ValueError("off-diagonal entries must share one level")

    @property
    def level(self) -> int:
        return self.off[0].level

    @classmethod
    def from_vector(cls, level: int, x: Sequence) -> "HermMatrix":
        d = 2**level
        if len(x) != 3 + 3 * d:
            raise ValueError(f"expected {3 + 3 * d} coordinates, got {len(x)}")
        off = tuple(CDElem(level, tuple(x[3 + i * d: 3 + (i + 1) * d])) for i in range(3))
        return cls(tuple(x[:3]), off)

    def to_vector(self) -> tuple:
        out = list(self.diag)
        for e in self.off:
            out.extend(e.coords)
        return tuple(out)

    def entries(self) -> list[list[CDElem]]:
        k = self.level
        al, be, ga = (CDElem(k, (v,) + (0 * v,) * (2**k - 1)) for v in self.diag)
        a, b, c = self.off
        return [[al, c, b.conj()], [c.conj(), be, a], [b, a.conj(), ga]]

    def norm(self):
        """The cubic norm ``N(X)``; the determinant for level 0."""
        al, be, ga = self.diag
        a, b, c = self.off
        return al * be * ga - al * a.norm() - be * b.norm() - ga * c.norm() + 2 * ((a * b) * c).re()


def _matrix_product(X: list[list[CDElem]], Y: list[list[CDElem]]) -> list[list[CDElem]]:
    out = []
    for i in range(3):
        row = []
        for j in range(3):
            acc = X[i][0] * Y[0][j]
            for k in (1, 2):
                acc = acc + X[i][k] * Y[k][j]
            row.append(acc)
        out.append(row)
    return out


def _from_entries(E: list[list[CDElem]]) -> HermMatrix:
    return HermMatrix((E[0][0].re(), E[1][1].re(), E[2][2].re()), (E[1][2], E[2][0], E[0][1]))


def herm_jordan_product(X: HermMatrix, Y: HermMatrix) -> HermMatrix:
    """``(XY + YX) / 2`` computed with entrywise Cayley-Dickson arithmetic."""
    XY = _matrix_product(X.entries(), Y.entries())
    YX = _matrix_product(Y.entries(), X.entries())
    S = [[(XY[i][j] + YX[i][j]) * Fraction(1, 2) for j in range(3)] for i in range(3)]
    return _from_entries(S)


# ---------------------------------------------------------------------------
# catalog


@dataclass(frozen=True)
class Expected:
    is_ekp: bool | None  # None when unknown (user input)
    cone: bool = False
    singular_dim: int | None = None
    rational_transform: bool | None = None
    notes: str = ""


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    form: CubicForm
    expected: Expected
    base_point: Vec | None = None
    singular_seed: Vec | None = None
    level: int | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return self.form.n

    def text(self) -> str:
        return str(self.form.poly)


def herm3_norm(level: int) -> CatalogEntry:
    """Cubic norm on Herm_3 over the level-``level`` Cayley-Dickson algebra.

    Variables are ordered (alpha, beta, gamma, a, b, c) with each
    off-diagonal entry contributing its ``2**level`` coordinates.
    """
    if level not in LEVEL_NAMES:
        raise ValueError(f"level must be 0..3, got {level}")
    d = 2**level
    n = 3 + 3 * d
    X = HermMatrix.from_vector(level, Poly.variables(n))
    form = CubicForm(X.norm())
    unit = tuple(Fraction(int(i < 3)) for i in range(n))
    e11 = tuple(Fraction(int(i == 0)) for i in range(n))
    return CatalogEntry(
        name=f"herm3_{LEVEL_NAMES[level]}",
        form=form,
        expected=Expected(
            is_ekp=True,
            singular_dim=2 * d,
            rational_transform=True,
            notes=f"cubic norm of Herm_3({LEVEL_NAMES[level]}); singular locus expected of dimension {2 * d}",
        ),
        base_point=unit,
        singular_seed=e11,
        level=level,
    )


def _entry(name, text, n, expected, base, seed=None) -> CatalogEntry:
    return CatalogEntry(name, CubicForm(parse_poly(text, n)), expected, vec_or_none(base), vec_or_none(seed))


def vec_or_none(v):
    return None if v is None else tuple(Fraction(c) for c in v)


def builtin_catalog() -> list[CatalogEntry]:
    entries = [herm3_norm(k) for k in range(4)]
    entries += [
        _entry("triple_product", "x0*x1*x2", 3,
               Expected(True, rational_transform=True, notes="EKP, reducible (three lines)"),
               (1, 1, 1), (1, 0, 0)),
        _entry("linear_times_quadric", "x0*x1^2 + x0*x2^2 + x0*x3^2", 4,
               Expected(True, rational_transform=True,
                        notes="EKP, reducible over C (quadric splits over non-real points)"),
               (1, 1, 0, 0), (1, 0, 0, 0)),
        _entry("fermat", "x0^3 + x1^3 + x2^3", 3,
               Expected(False, rational_transform=False, notes="polar map (x0^2 : x1^2 : x2^2) has degree 4; not homaloidal"),
               (1, 0, 0)),
        _entry("cone", "x0^3", 3,
               Expected(False, cone=True, notes="cone; never homaloidal"),
               (1, 0, 0)),
        _entry("conic_tangent", "x0^2*x2 - x0*x1^2", 3,
               Expected(False, rational_transform=True,
                        notes="conic plus tangent line: homaloidal, transform rational but not polynomial"),
               (1, 0, 1)),
    ]
    return entries


def catalog_entry(name: str) -> CatalogEntry:
    for e in builtin_catalog():
        if e.name == name:
            return e
    raise KeyError(f"unknown catalog entry {name!r}")
