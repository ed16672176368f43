"""Exact checks on the singular locus Z of a cubic hypersurface X = V(f).

Points of (the affine cone over) Z are produced from a seed by the orbit maps
``tau_{f,A2}^{-1} tau_{f,A1}``; smooth points of X come from the residual
intersection ``z'`` of a line through a singular point.  Dimensions are
kernel ranks of Hessians at those points.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .cayley_dickson import CatalogEntry
from .jordan import PreconditionError, TangencyError, secant_point, singular_orbit_map
from .linalg import matvec, nullspace, proportional, span_rank
from .poly import CubicForm, Vec, polarize


class OrbitFinding(AssertionError):
    """An orbit-map image failed to be singular."""

    def __init__(self, message: str, witness):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class SingularSample:
    point: Vec
    tangent: tuple[Vec, ...]  # basis of ker Hess f(point)


def _vec(x) -> Vec:
    return tuple(Fraction(c) for c in x)


def _nonzero(z):
    if not any(z):
        raise PreconditionError("zero vector")


def is_singular(f: CubicForm, z: Sequence) -> bool:
    """``f'(z) = 0``, cross-checked against ``Q_f(e_i, z, z) = 0`` for all i."""
    z = _vec(z)
    _nonzero(z)
    by_gradient = not any(f.grad_at(z))
    n = f.n
    by_polar = all(
        polarize(f, [Fraction(int(k == i)) for k in range(n)], z, z) == 0 for i in range(n)
    )
    if by_gradient != by_polar:
        raise AssertionError("gradient and polarization disagree on singularity")
    return by_gradient


def hessian_kernel(f: CubicForm, z: Sequence) -> list[Vec]:
    return [tuple(v) for v in nullspace(f.hessian_at(_vec(z)), f.n)]


def tangent_dimension(f: CubicForm, z: Sequence) -> int:
    """``dim ker Hess f(z)`` at a singular point (affine tangent dimension of Z)."""
    if not is_singular(f, z):
        raise PreconditionError("point is not singular")
    return len(hessian_kernel(f, z))


def _random_off(f: CubicForm, rng: random.Random, box: int = 5) -> list[Fraction]:
    while True:
        A = [Fraction(rng.randint(-box, box)) for _ in range(f.n)]
        if f(A) != 0:
            return A


def singular_samples(f: CubicForm, seed_z: Sequence, count: int, seed: int = 0) -> list[SingularSample]:
    """Images of ``seed_z`` under random orbit maps, randomly rescaled.

    Outputs are kept pairwise independent while the orbit supplies new
    projective points.  When ``3 * count`` consecutive images are all
    proportional to earlier ones (a projectively finite orbit, as for the
    coordinate points of ``x0*x1*x2``) the remaining outputs are rescaled
    images.
    """
    seed_z = _vec(seed_z)
    if not is_singular(f, seed_z):
        raise PreconditionError("seed is not singular")
    rng = random.Random(seed)
    out: list[SingularSample] = []
    misses = 0
    while len(out) < count:
        g = singular_orbit_map(f, _random_off(f, rng), _random_off(f, rng))
        z = matvec(g, seed_z)
        scale = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 4))
        z = tuple(scale * c for c in z)
        if not is_singular(f, z):
            raise OrbitFinding("orbit map image is not singular", {"g": g, "z": z})
        if misses < 3 * count and any(proportional(s.point, z) for s in out):
            misses += 1
            continue
        if misses < 3 * count:
            misses = 0
        out.append(SingularSample(z, tuple(hessian_kernel(f, z))))
    return out


def terracini_rank(f: CubicForm, z1: Sequence, z2: Sequence) -> int:
    """Dimension of ``T_{z1} + T_{z2}`` (sum of Hessian kernels)."""
    z1, z2 = _vec(z1), _vec(z2)
    if not (is_singular(f, z1) and is_singular(f, z2)):
        raise PreconditionError("both points must be singular")
    if proportional(z1, z2):
        raise PreconditionError("points must be linearly independent")
    return span_rank(hessian_kernel(f, z1) + hessian_kernel(f, z2))


def secant_membership(f: CubicForm, z1: Sequence, z2: Sequence) -> bool:
    """``f(z1 + z2) = 0``; also asserts ``f(z1+z2) = f'(z1) z2 + f'(z2) z1``."""
    z1, z2 = _vec(z1), _vec(z2)
    if not (is_singular(f, z1) and is_singular(f, z2)):
        raise PreconditionError("both points must be singular")
    s = [a + b for a, b in zip(z1, z2)]
    val = f(s)
    cross = sum((a * b for a, b in zip(f.grad_at(z1), z2)), Fraction(0)) + sum(
        (a * b for a, b in zip(f.grad_at(z2), z1)), Fraction(0)
    )
    if val != cross:
        raise AssertionError("polarization expansion of f(z1 + z2) failed")
    return val == 0


def _require_smooth_on_x(f: CubicForm, x: Vec):
    if f(x) != 0:
        raise PreconditionError("f(x) != 0")
    if not any(f.grad_at(x)):
        raise PreconditionError("f'(x) = 0: x is singular")


def dual_inclusion_check(f: CubicForm, fstar: CubicForm, x: Sequence) -> bool:
    """The Gauss image ``f'(x)`` of a smooth point of X is singular on ``X_*``."""
    x = _vec(x)
    _require_smooth_on_x(f, x)
    return not any(fstar.grad_at(f.grad_at(x)))


T_VALUES = (Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2))


def gauss_fiber_check(f: CubicForm, x: Sequence, trials: int = 2, seed: int = 0) -> bool:
    """The contact locus through ``x`` is linear and the Gauss map is constant on it.

    Along each kernel direction ``v`` of ``Hess f(x)`` (and ``trials`` random
    kernel combinations), ``f(x + t v)`` is a cubic in t and the 2x2 minors of
    ``[f'(x), f'(x + t v)]`` are quadrics in t, so vanishing at the four
    nonzero values in ``T_VALUES`` (plus t = 0) certifies them identically.
    """
    x = _vec(x)
    _require_smooth_on_x(f, x)
    K = hessian_kernel(f, x)
    gx = f.grad_at(x)
    rng = random.Random(seed)
    directions = list(K)
    if K:
        for _ in range(trials):
            coeffs = [Fraction(rng.randint(-3, 3)) for _ in K]
            directions.append(tuple(sum((c * v[i] for c, v in zip(coeffs, K)), Fraction(0)) for i in range(f.n)))
    for v in directions:
        for t in T_VALUES:
            y = [a + t * b for a, b in zip(x, v)]
            if f(y) != 0 or not proportional(gx, f.grad_at(y)):
                return False
    return True


def gauss_fiber_dimension(f: CubicForm, x: Sequence) -> int:
    """Affine dimension of ``span(x) + ker Hess f(x)``."""
    x = _vec(x)
    return span_rank([x] + hessian_kernel(f, x))


@dataclass
class SeveriReport:
    singular_dim: int | None
    ambient_dim: int
    terracini_rank: int | None
    expected_singular_dim: int | None = None
    tangent_dims: list[int] = field(default_factory=list)
    checks: dict[str, bool] = field(default_factory=dict)
    labels: dict[str, str] = field(default_factory=dict)
    witnesses: dict[str, object] = field(default_factory=dict)
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "singular_dim": self.singular_dim,
            "expected_singular_dim": self.expected_singular_dim,
            "ambient_dim": self.ambient_dim,
            "terracini_rank": self.terracini_rank,
            "tangent_dims": self.tangent_dims,
            "checks": dict(self.checks),
            "labels": dict(self.labels),
            "counts": dict(self.counts),
            "witnesses": _jsonable(self.witnesses),
            "passed": self.passed,
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


def smooth_points(f: CubicForm, zs: Sequence[Sequence], count: int, seed: int = 0) -> list[Vec]:
    """Smooth rational points of X built as ``z' = A - f(A)/(f'(A) z) z``."""
    rng = random.Random(seed)
    out: list[Vec] = []
    tries = 0
    while len(out) < count and tries < 50 * count:
        tries += 1
        z = zs[tries % len(zs)]
        A = _random_off(f, rng)
        try:
            x = _vec(secant_point(f, A, z))
        except TangencyError:
            continue
        if f(x) == 0 and any(f.grad_at(x)):
            out.append(x)
    return out


def severi_report(entry: CatalogEntry, fstar: CubicForm, seed: int = 0, samples: int = 10,
                  fiber_points: int = 3, seed_point: Sequence | None = None) -> SeveriReport:
    """Run the full battery of singular-locus checks for a certified EKP form."""
    f = entry.form
    n = f.n
    seed_z = seed_point if seed_point is not None else entry.singular_seed
    expected = entry.expected.singular_dim
    rep = SeveriReport(None, n - 1, None, expected_singular_dim=expected)
    if seed_z is None:
        rep.labels["status"] = "no singular seed"
        return rep

    try:
        pts = singular_samples(f, seed_z, samples, seed)
    except OrbitFinding as exc:
        rep.checks["orbit_closure"] = False
        rep.witnesses["orbit_closure"] = exc.witness
        return rep
    rep.counts["singular_samples"] = len(pts)
    rep.tangent_dims = [len(s.tangent) for s in pts]
    constant = len(set(rep.tangent_dims)) == 1
    rep.checks["orbit_closure"] = constant
    if not constant:
        rep.witnesses["orbit_closure"] = {"tangent_dims": rep.tangent_dims}
    rep.singular_dim = rep.tangent_dims[0] - 1
    if expected is not None:
        rep.checks["singular_dim"] = rep.singular_dim == expected

    ranks = [
        span_rank(list(a.tangent) + list(b.tangent))
        for a, b in combinations(pts, 2)
        if not proportional(a.point, b.point)
    ][: max(len(pts) - 1, 1)]
    rep.terracini_rank = max(ranks) if ranks else None
    if expected is not None:
        rep.checks["terracini"] = bool(ranks) and all(r == n - 1 for r in ranks)
        if not rep.checks["terracini"]:
            rep.witnesses["terracini"] = {"ranks": ranks}

    secant_ok = True
    for a, b in combinations(pts, 2):
        if not secant_membership(f, a.point, b.point):
            secant_ok = False
            rep.witnesses["secant_in_X"] = {"z1": a.point, "z2": b.point}
            break
    rep.checks["secant_in_X"] = secant_ok
    rep.counts["secant_pairs"] = len(pts) * (len(pts) - 1) // 2

    xs = smooth_points(f, [s.point for s in pts], fiber_points, seed)
    rep.counts["smooth_points"] = len(xs)
    rep.checks["dual_inclusion"] = len(xs) == fiber_points and all(dual_inclusion_check(f, fstar, x) for x in xs)
    rep.checks["gauss_linear"] = len(xs) == fiber_points and all(gauss_fiber_check(f, x, seed=seed) for x in xs)
    rep.labels["gauss_linear"] = "sampled"

    # fiber dimension = dim X - dim Z_* (+1 on the affine cone), with Z_* measured on f_*
    dims_ok = True
    for x in xs:
        dim_zstar = tangent_dimension(fstar, f.grad_at(x)) - 1
        if gauss_fiber_dimension(f, x) != (n - 2) - dim_zstar + 1:
            dims_ok = False
            rep.witnesses["gauss_fiber_dim"] = {"x": x, "dim_Z_star": dim_zstar,
                                                "fiber": gauss_fiber_dimension(f, x)}
    rep.checks["gauss_fiber_dim"] = dims_ok and bool(xs)
    return rep
