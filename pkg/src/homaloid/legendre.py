"""Multiplicative Legendre transforms of cubic forms and EKP detection.

For a cubic ``f`` the transform ``f_*`` is pinned by the denominator-free
identity ``f_*(f'(x)) = f(x)^2``.  It is found by interpolation: sample
points ``x_j`` off the hypersurface, impose ``g(f'(x_j)) = f(x_j)^2`` on the
coefficients of an unknown cubic ``g``, and solve.

The sampled system is large (``C(n+2, 3)`` unknowns, 3654 for n = 27), so it
is first row reduced modulo word-sized primes.  Two facts make this exact:

* a full column rank modulo p implies full column rank over Q, so the
  solution, if any, is unique;
* a pivot in the right-hand-side column modulo p implies the rational system
  is inconsistent.

Candidate solutions are recovered by rational reconstruction and then
checked exactly against every sample.  No verdict is emitted before the
defining identities have been verified symbolically.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .linalg import PRIMES, crt, modular_rref, rational_reconstruct, residue
from .poly import CubicForm, Exponent, NotCubicError, Poly, Vec, cone_direction, format_poly, monomials

SAMPLE_BOX = 7
HOLDOUT = 25
OVERSAMPLE = 2
DEFAULT_DENOMINATOR_BOUND = 6


class PreconditionError(ValueError):
    pass


class SamplingError(RuntimeError):
    pass


@dataclass(frozen=True)
class PolarMap:
    components: tuple[Poly, ...]

    def __call__(self, x: Sequence) -> list[Fraction]:
        return [c.eval(x) for c in self.components]


def polar_map(f: CubicForm) -> PolarMap:
    return PolarMap(f.gradient)


@dataclass
class Certificates:
    value: bool | None = None
    gradient: bool | None = None
    biduality: bool | None = None
    method: str = "symbolic"

    @property
    def complete(self) -> bool:
        return bool(self.value and self.gradient and self.biduality) and self.method == "symbolic"

    def to_dict(self) -> dict:
        return {"value": self.value, "gradient": self.gradient, "biduality": self.biduality,
                "method": self.method}


@dataclass
class LegendreVerdict:
    status: str  # "EKP" | "NotEKP" | "Degenerate"
    reason: str = ""
    fstar: CubicForm | None = None
    certificates: Certificates = field(default_factory=Certificates)
    cone_direction: Vec | None = None
    unknowns: int | None = None
    samples: int | None = None
    rank: int | None = None
    seed: int | None = None
    timings: dict[str, float] = field(default_factory=dict)
    irreducibility: str = "not checked"

    @property
    def is_ekp(self) -> bool:
        return self.status == "EKP"

    def to_dict(self, include_timings: bool = False) -> dict:
        d = {
            "status": self.status,
            "reason": self.reason,
            "fstar": None if self.fstar is None else format_poly(self.fstar.poly),
            "certificates": self.certificates.to_dict(),
            "cone_direction": None if self.cone_direction is None else [str(c) for c in self.cone_direction],
            "unknowns": self.unknowns,
            "samples": self.samples,
            "rank": self.rank,
            "fstar_irreducible": self.irreducibility,
            "seed": self.seed,
        }
        if include_timings:
            d["timings"] = {k: round(v * 1000, 1) for k, v in self.timings.items()}  # milliseconds
        return d


@dataclass(frozen=True)
class RationalFit:
    """``f_* = numerator / denominator`` with ``deg numerator = q + 3``."""

    numerator: Poly
    denominator: Poly
    q: int

    def __post_init__(self):
        if self.denominator.is_zero():
            raise ValueError("denominator vanishes identically")
        if self.numerator.degree() != self.denominator.degree() + 3:
            raise ValueError("numerator degree must exceed denominator degree by 3")


# ---------------------------------------------------------------------------
# preliminary tests


def _log_hessian_matrix(f: CubicForm, x: Sequence) -> list[list[Fraction]]:
    fx = f(x)
    g = f.grad_at(x)
    H = f.hessian_at(x)
    n = f.n
    return [[fx * H[i][j] - g[i] * g[j] for j in range(n)] for i in range(n)]


def log_hessian_nondegenerate(f: CubicForm, seed: int = 0, trials: int = 4) -> bool:
    """Whether ``det(f Hess f - f' f'^T)`` (i.e. ``f^2 Hess ln f``) is a nonzero polynomial.

    A nonzero value at one point proves it.  A vanishing gradient component
    proves the opposite; otherwise the negative answer rests on the
    determinant vanishing at ``trials`` random points of a box of side 2*10^6.
    """
    if any(g.is_zero() for g in f.gradient):
        return False
    rng = random.Random(seed)
    for _ in range(trials):
        x = [rng.randint(-10**6, 10**6) for _ in range(f.n)]
        if linalg.det(_log_hessian_matrix(f, x)) != 0:
            return True
    return False


def _sample_ints(poly: Poly, count: int, seed: int, box: int = SAMPLE_BOX) -> list[tuple[int, ...]]:
    if count <= 0:
        return []
    rng = random.Random(seed)
    out = []
    rejections = 0
    limit = 1000 + 10 * count
    n = poly.n
    while len(out) < count:
        x = tuple(rng.randint(-box, box) for _ in range(n))
        if poly.eval(x) != 0:
            out.append(x)
        else:
            rejections += 1
            if rejections > limit:
                raise SamplingError(
                    f"{rejections} rejected samples in the box [-{box}, {box}]^{n}; enlarge the box"
                )
    return out


def sample_off_hypersurface(f: CubicForm, count: int, seed: int) -> list[Vec]:
    """Seeded integer points in ``[-7, 7]^n`` where ``f`` does not vanish."""
    if f.poly.is_zero():
        raise PreconditionError("f vanishes identically")
    return [tuple(Fraction(c) for c in x) for x in _sample_ints(f.poly, count, seed)]


# ---------------------------------------------------------------------------
# modular machinery


def _residue_matrix(points: list[list[Fraction]], p: int) -> np.ndarray:
    return np.array([[residue(c, p) for c in row] for row in points], dtype=np.int64)


def _monomial_columns(U: np.ndarray, monos: list[Exponent], p: int) -> np.ndarray:
    m, n = U.shape
    maxdeg = max((max(e) for e in monos), default=0)
    powers = [[np.ones(m, dtype=np.int64)] for _ in range(n)]
    for i in range(n):
        for _ in range(maxdeg):
            powers[i].append(powers[i][-1] * U[:, i] % p)
    out = np.empty((m, len(monos)), dtype=np.int64)
    for k, e in enumerate(monos):
        col = np.ones(m, dtype=np.int64)
        for i, ei in enumerate(e):
            if ei:
                col = col * powers[i][ei] % p
        out[:, k] = col
    return out


class _Reconstructor:
    """Accumulates residue vectors over several primes and lifts them to Q."""

    def __init__(self):
        self.modulus = 1
        self.values: list[int] | None = None

    def add(self, residues: list[int], p: int):
        if self.values is None:
            self.values, self.modulus = list(residues), p
            return
        new = []
        for r1, r2 in zip(self.values, residues):
            v, m = crt(r1, self.modulus, r2, p)
            new.append(v)
        self.values = new
        self.modulus *= p

    def lift(self) -> list[Fraction] | None:
        out = []
        for v in self.values:
            r = rational_reconstruct(v, self.modulus)
            if r is None:
                return None
            out.append(r)
        return out


@dataclass
class _Interpolation:
    status: str  # "unique" | "inconsistent" | "underdetermined"
    unknowns: int
    samples: int
    rank: int
    coeffs: dict[Exponent, Fraction] | None = None


def _transform_data(f: CubicForm, count: int, seed: int):
    pts = _sample_ints(f.poly, count, seed)
    grads = f.gradient
    U = [[g.eval(x) for g in grads] for x in pts]
    V = [f.poly.eval(x) ** 2 for x in pts]
    return pts, U, V


def _interpolate_transform(f: CubicForm, seed: int, max_primes: int = 6) -> _Interpolation:
    """Solve ``g(f'(x_j)) = f(x_j)^2`` for a cubic ``g``; see module docstring."""
    n = f.n
    monos = monomials(n, 3)
    K = len(monos)
    m = OVERSAMPLE * K
    _, U, V = _transform_data(f, m + HOLDOUT, seed)
    train_U, train_V = U[:m], V[:m]

    def verifies(coeffs: dict) -> bool:
        g = Poly(n, coeffs)
        return all(g.eval(u) == v for u, v in zip(U, V))

    rec = _Reconstructor()
    deficient = 0
    last_rank = 0
    for p in PRIMES[:max_primes]:
        try:
            Up = _residue_matrix(train_U, p)
            bp = np.array([residue(v, p) for v in train_V], dtype=np.int64)
        except ZeroDivisionError:
            continue
        A = np.hstack([_monomial_columns(Up, monos, p), bp[:, None]])
        ech = modular_rref(A, p)
        del A
        if K in ech.pivots:
            return _Interpolation("inconsistent", K, m, ech.rank - 1)
        last_rank = ech.rank
        if ech.rank < K:
            deficient += 1
            if deficient >= 2:
                break
            continue
        rec.add([ech.entry(i, K) for i in range(K)], p)
        sol = rec.lift()
        if sol is not None:
            coeffs = dict(zip(monos, sol))
            if verifies(coeffs):
                return _Interpolation("unique", K, m, K, coeffs)

    # exact fallback: only reached for rank-deficient systems or reconstruction failure
    rows = [[u_mono for u_mono in _monomial_values(u, monos)] for u in train_U]
    sol = linalg.solve_linear(rows, train_V)
    if sol.status == "inconsistent":
        return _Interpolation("inconsistent", K, m, sol.rank)
    if sol.status == "affine":
        return _Interpolation("underdetermined", K, m, sol.rank)
    coeffs = dict(zip(monos, sol.solution))
    if not verifies(coeffs):
        # holdout disagrees with a unique solution: no cubic fits all samples
        return _Interpolation("inconsistent", K, m, sol.rank)
    return _Interpolation("unique", K, m, sol.rank or last_rank, coeffs)


def _monomial_values(u: Sequence[Fraction], monos: list[Exponent]) -> list[Fraction]:
    out = []
    for e in monos:
        v = Fraction(1)
        for i, k in enumerate(e):
            if k:
                v *= u[i] ** k
        out.append(v)
    return out


# ---------------------------------------------------------------------------
# certificates


def value_certificate(f: CubicForm, g: CubicForm) -> bool:
    """``g(f'(x)) = f(x)^2`` as a polynomial identity."""
    return g.poly.substitute(f.gradient) == f.poly * f.poly


def gradient_certificate(f: CubicForm, g: CubicForm) -> bool:
    """``g'(f'(x)) = f(x) x`` coordinatewise, as polynomial identities."""
    xs = Poly.variables(f.n)
    return all(gi.substitute(f.gradient) == f.poly * xi for gi, xi in zip(g.gradient, xs))


def biduality_certificate(f: CubicForm, g: CubicForm, seed: int) -> bool:
    """Re-fitting on ``g`` must give back exactly ``f``, certified symbolically."""
    try:
        back = _interpolate_transform(g, seed)
    except SamplingError:
        return False
    if back.status != "unique":
        return False
    return Poly(g.n, back.coeffs) == f.poly and value_certificate(g, f)


def fit_polynomial_legendre(f: CubicForm, seed: int = 42, check_preconditions: bool = True) -> LegendreVerdict:
    """Find and certify a polynomial ``f_*`` with ``f_*(f'(x)) = f(x)^2``."""
    if check_preconditions:
        v = cone_direction(f)
        if v is not None:
            raise PreconditionError(f"f is a cone with vertex direction {v}")
        if not log_hessian_nondegenerate(f, seed):
            raise PreconditionError("Hess(ln f) is degenerate")
    timings = {}
    t0 = time.perf_counter()
    fit = _interpolate_transform(f, seed)
    timings["interpolate"] = time.perf_counter() - t0
    common = dict(unknowns=fit.unknowns, samples=fit.samples, rank=fit.rank, seed=seed, timings=timings)
    if fit.status == "inconsistent":
        return LegendreVerdict("NotEKP", "interpolation inconsistent", **common)
    if fit.status == "underdetermined":
        return LegendreVerdict("Degenerate", "interpolation solution not unique", **common)
    try:
        g = CubicForm(Poly(f.n, fit.coeffs))
    except NotCubicError:
        return LegendreVerdict("NotEKP", "interpolated transform is not a cubic form", **common)

    certs = Certificates()
    t0 = time.perf_counter()
    certs.value = value_certificate(f, g)
    timings["certify_value"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    certs.gradient = certs.value and gradient_certificate(f, g)
    timings["certify_gradient"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    certs.biduality = certs.gradient and biduality_certificate(f, g, seed)
    timings["certify_biduality"] = time.perf_counter() - t0
    if not certs.complete:
        failed = [k for k in ("value", "gradient", "biduality") if not getattr(certs, k)]
        return LegendreVerdict("NotEKP", f"certificate failed: {failed[0]}", certificates=certs, **common)
    return LegendreVerdict("EKP", "", fstar=g, certificates=certs, **common)


def fit_rational_legendre(
    f: CubicForm, max_denominator_degree: int = DEFAULT_DENOMINATOR_BOUND, seed: int = 42
) -> RationalFit | None:
    """Search for ``f_* = P/Q`` with ``deg Q = q <= max_denominator_degree``.

    For each q the homogeneous system ``P(f'(x_j)) = f(x_j)^2 Q(f'(x_j))`` is
    reduced modulo a prime; full column rank there rules q out rigorously.
    Otherwise a kernel vector is lifted to Q and certified by the polynomial
    identity ``Q(f'(x)) f(x)^2 = P(f'(x))``.  q = 0 is the polynomial case.
    """
    n = f.n
    f2 = f.poly * f.poly
    for q in range(max_denominator_degree + 1):
        monos_p = monomials(n, q + 3)
        monos_q = monomials(n, q)
        N = len(monos_p) + len(monos_q)
        m = OVERSAMPLE * N
        _, U, V = _transform_data(f, m + HOLDOUT, seed + q)
        cand = _rational_kernel_vector(U[:m], V[:m], monos_p, monos_q)
        if cand is None:
            continue
        P = Poly(n, dict(zip(monos_p, cand[: len(monos_p)])))
        Q = Poly(n, dict(zip(monos_q, cand[len(monos_p):])))
        if Q.is_zero() or any(P.eval(u) != v * Q.eval(u) for u, v in zip(U, V)):
            continue
        if not any(Q.eval(u) for u in U):
            continue
        if Q.substitute(f.gradient) * f2 == P.substitute(f.gradient):
            return RationalFit(P, Q, q)
    return None


def _rational_kernel_vector(U, V, monos_p, monos_q, max_primes: int = 6) -> list[Fraction] | None:
    n_p = len(monos_p)
    N = n_p + len(monos_q)
    rec = _Reconstructor()
    pivots_seen = None
    for p in PRIMES[:max_primes]:
        try:
            Up = _residue_matrix(U, p)
            vp = np.array([residue(v, p) for v in V], dtype=np.int64)
        except ZeroDivisionError:
            continue
        A = np.hstack([_monomial_columns(Up, monos_p, p), (-vp[:, None] * _monomial_columns(Up, monos_q, p)) % p])
        ech = modular_rref(A, p)
        if ech.rank == N:
            return None
        if pivots_seen is not None and ech.pivots != pivots_seen:
            # unlucky prime; keep the structure with the larger rank
            if ech.rank < len(pivots_seen):
                continue
            rec = _Reconstructor()
        pivots_seen = ech.pivots
        pset = set(ech.pivots)
        free = next(c for c in range(N) if c not in pset)
        # canonical kernel vector: first free variable 1, other free variables 0
        vecp = [0] * N
        vecp[free] = 1
        for i, pc in enumerate(ech.pivots):
            vecp[pc] = (-ech.entry(i, free)) % p
        rec.add(vecp, p)
        lifted = rec.lift()
        if lifted is not None and all(
            sum((c * mv for c, mv in zip(lifted[:n_p], _monomial_values(u, monos_p))), Fraction(0))
            == v * sum((c * mv for c, mv in zip(lifted[n_p:], _monomial_values(u, monos_q))), Fraction(0))
            for u, v in zip(U, V)
        ):
            return lifted
    return None


# ---------------------------------------------------------------------------
# pipeline


def analyze(f: CubicForm | Poly, seed: int = 42) -> LegendreVerdict:
    """Validation, cone test, log-Hessian test, then the certified polynomial fit."""
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    if isinstance(f, Poly):
        try:
            f = CubicForm(f)
        except NotCubicError as exc:
            return LegendreVerdict("Degenerate", f"invalid input: {exc}", seed=seed)
    timings["validate"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    v = cone_direction(f)
    timings["cone"] = time.perf_counter() - t0
    if v is not None:
        return LegendreVerdict("Degenerate", "cone", cone_direction=v, seed=seed, timings=timings)

    t0 = time.perf_counter()
    ok = log_hessian_nondegenerate(f, seed)
    timings["log_hessian"] = time.perf_counter() - t0
    if not ok:
        return LegendreVerdict("Degenerate", "log-Hessian degenerate", seed=seed, timings=timings)

    try:
        verdict = fit_polynomial_legendre(f, seed, check_preconditions=False)
    except SamplingError as exc:
        return LegendreVerdict("Degenerate", f"sampling failed: {exc}", seed=seed, timings=timings)
    verdict.timings = {**timings, **verdict.timings}
    return verdict
