"""Legendre transforms of a few cubics, with their certificates.

Run:  python demos/legendre_transforms.py
"""

from homaloid import analyze, catalog_entry, parse_poly
from homaloid.poly import CubicForm

for name in ("triple_product", "linear_times_quadric", "herm3_R", "fermat", "cone"):
    f = catalog_entry(name).form
    v = analyze(f, seed=42)
    print(f"{name:22} {v.status:10} {v.reason}")
    if v.is_ekp:
        print(f"    f  = {f.poly}")
        print(f"    f* = {v.fstar.poly}")
        c = v.certificates
        print(f"    value={c.value} gradient={c.gradient} biduality={c.biduality}")

# The transform follows a linear change of coordinates: x0 (x0 + x1)(x0 + x2)
# is the triple product in disguise, so its transform is again a product of
# three linear forms in the dual variables.
g = CubicForm(parse_poly("x0^3 + x0^2*x1 + x0^2*x2 + x0*x1*x2"))
print()
print("disguised triple product:", g.poly)
print("transform:              ", analyze(g).fstar.poly)
