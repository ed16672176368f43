"""Exact sparse multivariate polynomials over the rationals.

A polynomial in ``n`` variables ``x0 .. x{n-1}`` is stored as a dictionary
mapping exponent tuples to nonzero :class:`fractions.Fraction` coefficients::

    3*x0^2*x1 - 1/2*x2^3   ->   {(2, 1, 0): Fraction(3), (0, 0, 3): Fraction(-1, 2)}

The zero polynomial has an empty term map.  Printing uses graded
lexicographic order (higher total degree first, then lexicographically
larger exponent vectors first), which is also the canonical column order
used by the interpolation code.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement
from operator import add
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]
Vec = tuple[Fraction, ...]


class DimensionError(ValueError):
    """Raised when a point or image list does not match the variable count."""


class PolyParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def vec(values: Iterable) -> Vec:
    return tuple(Fraction(v) for v in values)


def _coef_fast(c: Fraction):
    # ints multiply much faster than Fractions in the evaluation loops
    return c.numerator if c.denominator == 1 else c


class Poly:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("n", "terms", "_compiled", "_hash")

    def __init__(self, n: int, terms: Mapping[Sequence[int], object] | None = None):
        self.n = n
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                mono = tuple(mono)
                if len(mono) != n:
                    raise DimensionError(f"exponent {mono} has length {len(mono)}, expected {n}")
                if any(e < 0 for e in mono):
                    raise ValueError(f"negative exponent in {mono}")
                c = Fraction(c)
                if c:
                    clean[mono] = clean.get(mono, Fraction(0)) + c
            clean = {m: c for m, c in clean.items() if c}
        self.terms = clean
        self._compiled = None
        self._hash = None

    @classmethod
    def _raw(cls, n: int, terms: dict[Exponent, Fraction]) -> "Poly":
        # trusted constructor: terms already canonical
        p = cls.__new__(cls)
        p.n = n
        p.terms = terms
        p._compiled = None
        p._hash = None
        return p

    @classmethod
    def zero(cls, n: int) -> "Poly":
        return cls._raw(n, {})

    @classmethod
    def const(cls, n: int, c) -> "Poly":
        c = Fraction(c)
        return cls._raw(n, {(0,) * n: c} if c else {})

    @classmethod
    def var(cls, n: int, i: int) -> "Poly":
        if not 0 <= i < n:
            raise DimensionError(f"variable index {i} out of range for n={n}")
        e = [0] * n
        e[i] = 1
        return cls._raw(n, {tuple(e): Fraction(1)})

    @classmethod
    def variables(cls, n: int) -> tuple["Poly", ...]:
        return tuple(cls.var(n, i) for i in range(n))

    @classmethod
    def linear(cls, coeffs: Sequence) -> "Poly":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        return cls(n, terms)

    # -- basic queries -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(m) for m in self.terms}
        if not degs:
            return True
        if len(degs) > 1:
            return False
        return d is None or degs == {d}

    def coefficient(self, mono: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __len__(self) -> int:
        return len(self.terms)

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other) -> "Poly | None":
        if isinstance(other, Poly):
            if other.n != self.n:
                raise DimensionError(f"variable counts differ: {self.n} vs {other.n}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.n, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.terms:
            return self
        out = dict(self.terms)
        for m, c in o.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly.zero(self.n)
        return Poly._raw(self.n, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        if other.n != self.n:
            raise DimensionError(f"variable counts differ: {self.n} vs {other.n}")
        out: dict[Exponent, Fraction] = {}
        get = out.get
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = tuple(map(add, ma, mb))
                out[m] = get(m, 0) + ca * cb
        return Poly._raw(self.n, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Poly.const(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Poly.const(self.n, other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and evaluation -----------------------------------------

    def diff(self, i: int) -> "Poly":
        if not 0 <= i < self.n:
            raise DimensionError(f"variable index {i} out of range for n={self.n}")
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                mm = list(m)
                mm[i] = e - 1
                out[tuple(mm)] = c * e
        return Poly._raw(self.n, out)

    def _compile(self):
        if self._compiled is None:
            self._compiled = [
                (_coef_fast(c), tuple((i, e) for i, e in enumerate(m) if e))
                for m, c in self.terms.items()
            ]
        return self._compiled

    def eval(self, x: Sequence):
        """Evaluate at ``x``.

        Works for any coordinates supporting ``+``, ``*`` and integer powers
        (Fractions, ints, :class:`Poly`, dual numbers).  Numeric results are
        returned as :class:`Fraction`.
        """
        if len(x) != self.n:
            raise DimensionError(f"point has {len(x)} coordinates, expected {self.n}")
        total = 0
        for coef, factors in self._compile():
            t = coef
            for i, e in factors:
                xi = x[i]
                t = t * xi if e == 1 else t * xi**e
            total = total + t
        if isinstance(total, int):
            return Fraction(total)
        return total

    __call__ = eval

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Replace ``x_i`` by ``images[i]`` and expand."""
        if len(images) != self.n:
            raise DimensionError(f"{len(images)} images given for {self.n} variables")
        ms = {im.n for im in images}
        if len(ms) != 1:
            raise DimensionError("images must share one variable count")
        m_vars = ms.pop()
        powers: dict[tuple[int, int], Poly] = {}

        def power(i: int, e: int) -> Poly:
            key = (i, e)
            if key not in powers:
                powers[key] = images[i] if e == 1 else power(i, e - 1) * images[i]
            return powers[key]

        out: dict[Exponent, Fraction] = {}
        get = out.get
        for coef, factors in self._compile():
            prod = None
            for i, e in factors:
                pe = power(i, e)
                prod = pe if prod is None else prod * pe
            if prod is None:
                prod = Poly.const(m_vars, 1)
            for mono, c in prod.terms.items():
                out[mono] = get(mono, 0) + coef * c
        return Poly._raw(m_vars, {m: Fraction(c) for m, c in out.items() if c})

    # -- text format ---------------------------------------------------

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({self.n}, {format_poly(self)!r})"


def monomials(n: int, d: int) -> list[Exponent]:
    """All exponent vectors of total degree ``d`` in graded-lex (descending) order."""
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


# ---------------------------------------------------------------------------
# text format


def _format_coef(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    parts = []
    for i, (mono, c) in enumerate(p.sorted_terms()):
        neg = c < 0
        a = -c if neg else c
        factors = [f"x{j}" if e == 1 else f"x{j}^{e}" for j, e in enumerate(mono) if e]
        if a != 1 or not factors:
            factors.insert(0, _format_coef(a))
        body = "*".join(factors)
        if i == 0:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>\#[^\n]*)|(?P<num>\d+)|(?P<var>x\d+)"
    r"|(?P<pow>\*\*|\^)|(?P<op>[-+*/])"
)


def _tokenize(text: str):
    pos = 0
    line, line_start = 1, 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise PolyParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        val = m.group()
        if kind not in ("ws", "comment"):
            tokens.append((kind, val, line, col))
        for k, ch in enumerate(val):
            if ch == "\n":
                line += 1
                line_start = pos + k + 1
        pos = m.end()
    tokens.append(("end", "", line, pos - line_start + 1))
    return tokens


def parse_poly(text: str, n: int | None = None) -> Poly:
    """Parse the text polynomial format, e.g. ``3*x0^2*x1 - 1/2*x2^3``.

    ``n`` defaults to one more than the largest variable index that occurs.
    Errors carry the 1-based line and column of the offending token.
    """
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos]

    def take(kind=None, val=None):
        nonlocal pos
        tok = tokens[pos]
        if (kind and tok[0] != kind) or (val and tok[1] != val):
            what = tok[1] or "end of input"
            raise PolyParseError(f"expected {val or kind}, got {what!r}", tok[2], tok[3])
        pos += 1
        return tok

    raw_terms: list[tuple[Fraction, dict[int, int], tuple[int, int]]] = []

    def parse_number() -> Fraction:
        num = int(take("num")[1])
        if peek()[1] == "/":
            take("op", "/")
            den_tok = take("num")
            den = int(den_tok[1])
            if den == 0:
                raise PolyParseError("zero denominator", den_tok[2], den_tok[3])
            return Fraction(num, den)
        return Fraction(num)

    def parse_term(sign: int):
        coef = Fraction(sign)
        powers: dict[int, int] = {}
        where = (peek()[2], peek()[3])
        while True:
            tok = peek()
            if tok[0] == "num":
                coef *= parse_number()
            elif tok[0] == "var":
                take()
                idx = int(tok[1][1:])
                e = 1
                if peek()[0] == "pow":
                    take()
                    e = int(take("num")[1])
                powers[idx] = powers.get(idx, 0) + e
            else:
                what = tok[1] or "end of input"
                raise PolyParseError(f"expected a number or variable, got {what!r}", tok[2], tok[3])
            if peek()[1] == "*":
                take()
                continue
            break
        raw_terms.append((coef, powers, where))

    tok = peek()
    if tok[0] == "end":
        raise PolyParseError("empty polynomial", tok[2], tok[3])
    sign = 1
    if tok[1] in "+-" and tok[0] == "op":
        take()
        sign = -1 if tok[1] == "-" else 1
    parse_term(sign)
    while peek()[0] != "end":
        tok = peek()
        if tok[0] != "op" or tok[1] not in "+-":
            raise PolyParseError(f"expected '+' or '-', got {tok[1]!r}", tok[2], tok[3])
        take()
        parse_term(-1 if tok[1] == "-" else 1)

    max_idx = max((i for _, pw, _ in raw_terms for i in pw), default=-1)
    if n is None:
        n = max(max_idx + 1, 1)
    terms: dict[Exponent, Fraction] = {}
    for coef, powers, (line, col) in raw_terms:
        e = [0] * n
        for i, k in powers.items():
            if i >= n:
                raise PolyParseError(f"variable x{i} exceeds declared count {n}", line, col)
            e[i] = k
        key = tuple(e)
        terms[key] = terms.get(key, Fraction(0)) + coef
    return Poly(n, terms)


# ---------------------------------------------------------------------------
# cubic forms


class NotCubicError(ValueError):
    pass


@dataclass(frozen=True)
class CubicForm:
    """A homogeneous cubic in at least two variables, with cached derivatives."""

    poly: Poly

    def __post_init__(self):
        p = self.poly
        if p.n < 2:
            raise NotCubicError(f"need at least 2 variables, got {p.n}")
        if p.is_zero() or not p.is_homogeneous(3):
            raise NotCubicError(f"not a homogeneous cubic: {p}")

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "CubicForm":
        return cls(parse_poly(text, n))

    @property
    def n(self) -> int:
        return self.poly.n

    def __call__(self, x: Sequence):
        return self.poly.eval(x)

    def __str__(self) -> str:
        return str(self.poly)

    def scale(self, c) -> "CubicForm":
        return CubicForm(self.poly.scale(c))

    @cached_property
    def gradient(self) -> tuple[Poly, ...]:
        return tuple(self.poly.diff(i) for i in range(self.n))

    @cached_property
    def hessian(self) -> tuple[tuple[Poly, ...], ...]:
        g = self.gradient
        rows = []
        for i in range(self.n):
            rows.append(tuple(g[i].diff(j) if j >= i else None for j in range(self.n)))
        return tuple(
            tuple(rows[i][j] if j >= i else rows[j][i] for j in range(self.n)) for i in range(self.n)
        )

    @cached_property
    def third_derivatives(self) -> tuple[tuple[tuple[Fraction, ...], ...], ...]:
        """Constant tensor ``T[i][j][k] = d^3 f / dx_i dx_j dx_k`` (equals ``6 Q(e_i, e_j, e_k)``)."""
        n = self.n
        zero = (0,) * n
        H = self.hessian
        T = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for j in range(n):
            for k in range(n):
                for mono, c in H[j][k].terms.items():
                    if mono == zero:
                        continue
                    T[mono.index(1)][j][k] = c
        return tuple(tuple(tuple(r) for r in M) for M in T)

    def grad_at(self, x: Sequence) -> list:
        return [g.eval(x) for g in self.gradient]

    def hessian_at(self, x: Sequence) -> list[list]:
        H = self.hessian
        n = self.n
        out = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                out[i][j] = out[j][i] = H[i][j].eval(x)
        return out


def gradient(f: CubicForm) -> tuple[Poly, ...]:
    return f.gradient


def hessian(f: CubicForm) -> tuple[tuple[Poly, ...], ...]:
    return f.hessian


def polarize(f: CubicForm, A: Sequence, B: Sequence, C: Sequence):
    """The symmetric trilinear form ``Q_f`` with ``Q_f(x, x, x) = f(x)``.

    Computed by inclusion-exclusion from seven evaluations of ``f``; the
    arguments may hold Fractions or Polys.
    """
    n = f.n
    if not (len(A) == len(B) == len(C) == n):
        raise DimensionError("polarize arguments must all have length n")
    AB = [a + b for a, b in zip(A, B)]
    AC = [a + c for a, c in zip(A, C)]
    BC = [b + c for b, c in zip(B, C)]
    ABC = [ab + c for ab, c in zip(AB, C)]
    p = f.poly
    total = p.eval(ABC) - p.eval(AB) - p.eval(AC) - p.eval(BC) + p.eval(A) + p.eval(B) + p.eval(C)
    return total / 6 if isinstance(total, Poly) else Fraction(total) / 6


def polar_covector(f: CubicForm, A: Sequence, B: Sequence) -> list[Fraction]:
    """The covector ``Q_f(A, B, -)`` in dual-basis coordinates."""
    n = f.n
    out = []
    for k in range(n):
        e = [Fraction(0)] * n
        e[k] = Fraction(1)
        out.append(polarize(f, A, B, e))
    return out


def cone_direction(f: CubicForm) -> Vec | None:
    """A nonzero ``v`` with ``Q_f(v, -, -) = 0``, if one exists.

    Such a ``v`` is a vertex direction: ``f`` is then a cone over a
    hypersurface in fewer variables.
    """
    from .linalg import nullspace

    n = f.n
    T = f.third_derivatives
    rows = [[T[i][j][k] / 6 for i in range(n)] for j in range(n) for k in range(j, n)]
    basis = nullspace(rows, n)
    if not basis:
        return None
    v = basis[0]
    return tuple(Fraction(c) for c in v)
