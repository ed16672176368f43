"""Singular loci of the four Hermitian norms: dimensions 2, 4, 8, 16.

Points on the singular locus are produced from E11 by the maps
tau_{A2}^{-1} tau_{A1}; the dimension is the Hessian kernel rank minus one.
The octonionic case needs a couple of minutes for the transform.
"""

import sys

from homaloid import analyze, herm3_norm
from homaloid.severi import severi_report

levels = range(4) if "--all" in sys.argv else range(3)
for k in levels:
    entry = herm3_norm(k)
    fstar = analyze(entry.form).fstar
    rep = severi_report(entry, fstar, seed=0, samples=10)
    print(f"{entry.name}: singular locus of dim {rep.singular_dim} in P^{rep.ambient_dim}, "
          f"Terracini rank {rep.terracini_rank}, all checks {'pass' if rep.passed else 'FAIL'}")
if "--all" not in sys.argv:
    print("(pass --all to include Herm3(O))")
