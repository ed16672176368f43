"""Command-line interface: ``homaloid analyze | catalog | verify``.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import functools
import json
import random
import re
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import jordan, legendre, severi
from .cayley_dickson import CatalogEntry, Expected, builtin_catalog
from .legendre import LegendreVerdict
from .poly import CubicForm, NotCubicError, Poly, PolyParseError, parse_poly, polarize

DEFAULT_SEED = 42
NVARS_DIRECTIVE = re.compile(r"^\s*#\s*nvars\s*:\s*(\d+)", re.MULTILINE)
SUITES = ("poly", "legendre", "jordan", "severi", "all")


class UsageError(Exception):
    pass


@dataclass
class AnalysisReport:
    input: str
    verdict: LegendreVerdict
    name: str | None = None
    jordan: dict | None = None
    severi: dict | None = None
    notices: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    seed: int = DEFAULT_SEED

    def to_dict(self, include_timings: bool = False) -> dict:
        d = {
            "input": self.input,
            "name": self.name,
            "verdict": self.verdict.to_dict(include_timings),
            "jordan": self.jordan,
            "severi": self.severi,
            "notices": self.notices,
            "seed": self.seed,
        }
        if include_timings:
            d["timings"] = {k: round(v * 1000, 1) for k, v in self.timings.items()}
        return d


# ---------------------------------------------------------------------------
# input handling


def load_input(source: str | None, catalog_name: str | None, nvars: int | None) -> CatalogEntry:
    """A catalog entry by name, or an ad hoc entry parsed from a file."""
    entries = {e.name: e for e in builtin_catalog()}
    if catalog_name is not None:
        if catalog_name not in entries:
            raise UsageError(f"unknown catalog entry {catalog_name!r}; see 'homaloid catalog'")
        return entries[catalog_name]
    if source is None:
        raise UsageError("an input file or --catalog NAME is required")
    path = Path(source)
    if not path.exists():
        if source in entries:
            return entries[source]
        raise UsageError(f"no such file or catalog entry: {source}")
    text = path.read_text(encoding="utf-8")
    if nvars is None:
        m = NVARS_DIRECTIVE.search(text)
        nvars = int(m.group(1)) if m else None
    poly = parse_poly(text, nvars)
    try:
        form = CubicForm(poly)
    except NotCubicError as exc:
        hint = "" if nvars else " (set the ambient dimension with --nvars or a '# nvars: N' line)"
        raise UsageError(f"{path}: {exc}{hint}") from exc
    return CatalogEntry(path.stem, form, Expected(is_ekp=None))


def _cube_root(q: Fraction) -> Fraction | None:
    def iroot(a: int) -> int | None:
        r = round(a ** (1 / 3)) if a < 2**1000 else 1 << (a.bit_length() // 3)
        # Newton polish for large values
        for _ in range(200):
            if r**3 == a:
                return r
            nxt = (2 * r + a // (r * r)) // 3 if r else 1
            if nxt == r:
                break
            r = nxt
        for c in (r - 1, r, r + 1):
            if c >= 0 and c**3 == a:
                return c
        return None

    sign = -1 if q < 0 else 1
    num, den = iroot(abs(q.numerator)), iroot(q.denominator)
    if num is None or den is None:
        return None
    return Fraction(sign * num, den)


def choose_base_point(entry: CatalogEntry, seed: int) -> tuple[Fraction, ...]:
    """The entry's base point, or a sampled point rescaled to f = 1 when possible."""
    if entry.base_point is not None:
        return entry.base_point
    x = legendre.sample_off_hypersurface(entry.form, 1, seed)[0]
    r = _cube_root(entry.form(x))
    return tuple(c / r for c in x) if r else x


def find_singular_seed(entry: CatalogEntry) -> tuple[Fraction, ...] | None:
    if entry.singular_seed is not None:
        return entry.singular_seed
    f = entry.form
    for i in range(f.n):
        e = tuple(Fraction(int(k == i)) for k in range(f.n))
        if not any(f.grad_at(e)):
            return e
    return None


# ---------------------------------------------------------------------------
# stages


@functools.lru_cache(maxsize=16)
def cached_analyze(form: CubicForm, seed: int) -> LegendreVerdict:
    """``legendre.analyze`` memoized per process (verdicts are deterministic per seed)."""
    return legendre.analyze(form, seed)


def jordan_summary(entry: CatalogEntry, trials: int, seed: int) -> dict:
    f = entry.form
    I = choose_base_point(entry, seed)
    J = jordan.jordan_product(f, I)
    sing = find_singular_seed(entry)
    rep = jordan.jordan_verify(J, trials, seed, [sing] if sing else ())
    out = J.to_dict()
    out["verification"] = rep.to_dict()
    out["phi_derivative_is_minus_2_id"] = jordan.phi_derivative_check(f, I)
    out["simplicity_probe"] = jordan.simplicity_probe(J, 3, seed)
    return out


def analyze_entry(entry: CatalogEntry, seed: int = DEFAULT_SEED, trials: int = 20,
                  samples: int = 10) -> AnalysisReport:
    timings = {}
    t0 = time.perf_counter()
    verdict = cached_analyze(entry.form, seed)
    timings["legendre"] = time.perf_counter() - t0
    rep = AnalysisReport(str(entry.form.poly), verdict, name=entry.name, seed=seed, timings=timings)
    if not verdict.is_ekp:
        return rep
    t0 = time.perf_counter()
    rep.jordan = jordan_summary(entry, trials, seed)
    timings["jordan"] = time.perf_counter() - t0
    sing = find_singular_seed(entry)
    if sing is None:
        rep.notices.append("severi stage skipped: no singular seed")
    else:
        t0 = time.perf_counter()
        rep.severi = severi.severi_report(entry, verdict.fstar, seed, samples, seed_point=sing).to_dict()
        timings["severi"] = time.perf_counter() - t0
    return rep


def _print_report(rep: AnalysisReport, out) -> None:
    v = rep.verdict
    print(f"input: {rep.input}", file=out)
    line = f"status: {v.status}"
    if v.reason:
        line += f" ({v.reason})"
    print(line, file=out)
    if v.cone_direction is not None:
        print("cone direction: (" + ", ".join(str(c) for c in v.cone_direction) + ")", file=out)
    if v.fstar is not None:
        print(f"f*: {v.fstar}", file=out)
        c = v.certificates
        print(f"certificates: value={c.value} gradient={c.gradient} biduality={c.biduality} ({c.method})",
              file=out)
        print(f"f* irreducible: {v.irreducibility}", file=out)
    if rep.jordan:
        ver = rep.jordan["verification"]
        print(f"jordan: {'all checks pass' if ver['passed'] else 'FAILED'}"
              f" ({ver['trials']} trials); phi'(I) = -2 Id: {rep.jordan['phi_derivative_is_minus_2_id']};"
              f" simple: {rep.jordan['simplicity_probe']}", file=out)
    if rep.severi:
        s = rep.severi
        print(f"severi: singular dim {s['singular_dim']} in P^{s['ambient_dim']}, terracini rank"
              f" {s['terracini_rank']}, checks {'pass' if s['passed'] else 'FAIL'}", file=out)
    for note in rep.notices:
        print(f"note: {note}", file=out)


# ---------------------------------------------------------------------------
# verify suites


@dataclass
class SuiteResult:
    name: str
    checks: dict[str, bool] = field(default_factory=dict)
    witness: dict | None = None
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def check(self, key: str, ok: bool, **witness) -> None:
        self.checks[key] = bool(ok)
        if not ok and self.witness is None:
            self.witness = {"check": key, **{k: _str(v) for k, v in witness.items()}}


def _str(v):
    if isinstance(v, (list, tuple)):
        return [_str(x) for x in v]
    return str(v)


def suite_poly(entry: CatalogEntry, seed: int, trials: int) -> SuiteResult:
    f = entry.form
    n = f.n
    res = SuiteResult("poly")
    res.check("round_trip", parse_poly(str(f.poly), n) == f.poly, text=str(f.poly))
    xs = Poly.variables(n)
    euler = sum((x * g for x, g in zip(xs, f.gradient)), Poly.zero(n))
    res.check("euler", euler == f.poly * 3)
    rng = random.Random(seed)
    for _ in range(trials):
        A = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n)]
        B = [Fraction(rng.randint(-5, 5)) for _ in range(n)]
        C = [Fraction(rng.randint(-5, 5)) for _ in range(n)]
        q = polarize(f, A, B, C)
        sym = all(polarize(f, *p) == q for p in ((B, A, C), (C, B, A), (A, C, B), (B, C, A), (C, A, B)))
        res.check("polarization_symmetric", sym, A=A, B=B, C=C)
        cov = [3 * polarize(f, A, A, [Fraction(int(k == i)) for k in range(n)]) for i in range(n)]
        res.check("polarization_gradient", cov == f.grad_at(A), A=A)
    # Hessian entries as polynomial identities: Hess_ij(x) = 6 Q(e_i, e_j, x)
    ok = True
    for i in range(n):
        ei = [Fraction(int(k == i)) for k in range(n)]
        for j in range(i, n):
            ej = [Fraction(int(k == j)) for k in range(n)]
            if f.hessian[i][j] != polarize(f, ei, ej, list(xs)) * 6:
                ok = False
    res.check("polarization_hessian", ok)
    return res


def suite_legendre(entry: CatalogEntry, verdict: LegendreVerdict, seed: int, bound: int) -> SuiteResult:
    res = SuiteResult("legendre")
    exp = entry.expected
    if verdict.is_ekp:
        res.check("certificates", verdict.certificates.complete)
        res.check("degree", verdict.fstar.poly.degree() == 3)
    if exp.cone:
        res.check("cone", verdict.status == "Degenerate" and verdict.reason == "cone", status=verdict.status)
    if exp.is_ekp is not None:
        res.check("ekp_expectation", verdict.is_ekp == exp.is_ekp, status=verdict.status)
    if not verdict.is_ekp and verdict.status == "NotEKP" and exp.rational_transform is not None:
        fit = legendre.fit_rational_legendre(entry.form, bound, seed)
        res.info["rational_fit"] = None if fit is None else {
            "numerator": str(fit.numerator), "denominator": str(fit.denominator), "q": fit.q}
        res.check("rational_fit_expectation", (fit is not None) == exp.rational_transform,
                  found=fit is not None)
    return res


def _not_applicable(res: SuiteResult, entry: CatalogEntry, verdict: LegendreVerdict) -> None:
    # expected non-EKP entries skip the suite; anything else is a failure
    if entry.expected.is_ekp is False:
        res.checks["skipped_not_ekp"] = True
    else:
        res.check("requires_ekp", False, status=verdict.status)


def suite_jordan(entry: CatalogEntry, verdict: LegendreVerdict, seed: int, trials: int) -> SuiteResult:
    res = SuiteResult("jordan")
    if not verdict.is_ekp:
        _not_applicable(res, entry, verdict)
        return res
    f, fstar = entry.form, verdict.fstar
    I = choose_base_point(entry, seed)
    J = jordan.jordan_product(f, I)
    sing = find_singular_seed(entry)
    rep = jordan.jordan_verify(J, trials, seed, [sing] if sing else ())
    for k, ok in rep.checks.items():
        res.check(k, ok, **rep.witnesses.get(k, {}))
    res.check("phi_derivative", jordan.phi_derivative_check(f, I))
    rng = random.Random(seed)
    for _ in range(trials):
        A = [Fraction(rng.randint(-5, 5)) for _ in range(f.n)]
        if f(A) != 0:
            res.check("tau_inverse", jordan.tau_inverse_check(f, fstar, A), A=A)
    if entry.expected.is_ekp:
        # irreducible catalog cubics give simple algebras
        expected_simple = entry.expected.singular_dim is not None
        res.check("simplicity", jordan.simplicity_probe(J, 3, seed) == expected_simple)
    return res


def suite_severi(entry: CatalogEntry, verdict: LegendreVerdict, seed: int, samples: int) -> SuiteResult:
    res = SuiteResult("severi")
    if not verdict.is_ekp:
        _not_applicable(res, entry, verdict)
        return res
    sing = find_singular_seed(entry)
    if sing is None:
        res.checks["skipped_no_singular_seed"] = True
        return res
    rep = severi.severi_report(entry, verdict.fstar, seed, samples, seed_point=sing)
    for k, ok in rep.checks.items():
        w = rep.witnesses.get(k)
        res.check(k, ok, **(w if isinstance(w, dict) else {}))
    return res


# ---------------------------------------------------------------------------
# commands


def cmd_catalog(args, out) -> int:
    entries = builtin_catalog()
    if args.export:
        match = [e for e in entries if e.name == args.export]
        if not match:
            raise UsageError(f"unknown catalog entry {args.export!r}")
        print(match[0].text(), file=out)
        return 0
    rows = [
        {
            "name": e.name,
            "n": e.n,
            "terms": len(e.form.poly),
            "expected": {
                "is_ekp": e.expected.is_ekp,
                "cone": e.expected.cone,
                "singular_dim": e.expected.singular_dim,
                "rational_transform": e.expected.rational_transform,
                "notes": e.expected.notes,
            },
        }
        for e in entries
    ]
    if args.json:
        print(json.dumps(rows, indent=2), file=out)
    else:
        print(f"{'name':<22}{'n':>4}  {'EKP':<6}{'cone':<6}{'sing. dim':<10}notes", file=out)
        for r in rows:
            x = r["expected"]
            sd = "-" if x["singular_dim"] is None else str(x["singular_dim"])
            print(f"{r['name']:<22}{r['n']:>4}  {str(x['is_ekp']):<6}{str(x['cone']):<6}{sd:<10}{x['notes']}",
                  file=out)
    return 0


def cmd_analyze(args, out) -> int:
    entry = load_input(args.input, args.catalog, args.nvars)
    rep = analyze_entry(entry, args.seed, args.trials, args.samples)
    if args.json:
        print(json.dumps(rep.to_dict(args.timings), indent=2), file=out)
    else:
        _print_report(rep, out)
    failed = (rep.jordan and not rep.jordan["verification"]["passed"]) or (rep.severi and not rep.severi["passed"])
    return 1 if failed else 0


def cmd_verify(args, out) -> int:
    entry = load_input(args.input, args.catalog, args.nvars)
    suites = ("poly", "legendre", "jordan", "severi") if args.suite == "all" else (args.suite,)
    results = []
    verdict = None
    if any(s != "poly" for s in suites):
        verdict = cached_analyze(entry.form, args.seed)
    for s in suites:
        if s == "poly":
            results.append(suite_poly(entry, args.seed, args.trials))
        elif s == "legendre":
            results.append(suite_legendre(entry, verdict, args.seed, args.denominator_bound))
        elif s == "jordan":
            results.append(suite_jordan(entry, verdict, args.seed, args.trials))
        elif s == "severi":
            results.append(suite_severi(entry, verdict, args.seed, args.samples))
    ok = all(r.passed for r in results)
    if args.json:
        payload = {
            "input": entry.name,
            "status": verdict.status if verdict else None,
            "suites": {r.name: {"passed": r.passed, "checks": r.checks, "witness": r.witness,
                                **({"info": r.info} if r.info else {})} for r in results},
            "passed": ok,
            "seed": args.seed,
        }
        print(json.dumps(payload, indent=2), file=out)
    else:
        if verdict is not None:
            print(f"{entry.name}: {verdict.status}" + (f" ({verdict.reason})" if verdict.reason else ""), file=out)
        for r in results:
            for k, v in r.checks.items():
                print(f"{r.name}.{k}: {'PASS' if v else 'FAIL'}", file=out)
            fit = r.info.get("rational_fit", False)
            if fit:
                print(f"rational transform found (denominator degree {fit['q']}):"
                      f" ({fit['numerator']}) / ({fit['denominator']})", file=out)
            elif fit is None:
                print(f"no rational transform with denominator degree <= {args.denominator_bound}", file=out)
        first = next((r for r in results if not r.passed), None)
        if first is not None:
            print(f"counterexample: {json.dumps(first.witness)}", file=out)
        print("OK" if ok else "FAILED", file=out)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="homaloid", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_input=True):
        if with_input:
            p.add_argument("input", nargs="?", help="polynomial file or catalog entry name")
            p.add_argument("--catalog", metavar="NAME", help="use a built-in catalog entry")
            p.add_argument("--nvars", type=int, help="number of variables for a polynomial file")
        p.add_argument("--json", action="store_true", help="emit JSON")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--trials", type=int, default=20)
        p.add_argument("--samples", type=int, default=10, help="orbit samples on the singular locus")
        p.add_argument("--denominator-bound", type=int, default=legendre.DEFAULT_DENOMINATOR_BOUND)

    p = sub.add_parser("analyze", help="decide EKP-homaloidality and build the Jordan/Severi reports")
    common(p)
    p.add_argument("--timings", action="store_true", help="include per-stage timings in JSON output")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("catalog", help="list the built-in cubic forms")
    p.add_argument("--json", action="store_true")
    p.add_argument("--export", metavar="NAME", help="print one entry in the text polynomial format")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("verify", help="run invariant suites; exit status 0 iff all pass")
    common(p)
    p.add_argument("--suite", choices=SUITES, default="all")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except PolyParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
