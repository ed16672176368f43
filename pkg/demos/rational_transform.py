"""A homaloidal cubic whose transform is rational but not polynomial.

The union of a conic and a tangent line, x0 (x0 x2 - x1^2), has a
birational polar map, yet f* has a denominator.
"""

from homaloid import analyze, catalog_entry, fit_rational_legendre

f = catalog_entry("conic_tangent").form
print("f =", f.poly)
print("polynomial fit:", analyze(f).status)

fit = fit_rational_legendre(f, max_denominator_degree=6)
print(f"rational fit at denominator degree {fit.q}:")
print("    numerator  :", fit.numerator)
print("    denominator:", fit.denominator)

# Same search on the Fermat cubic comes up empty: its polar map has degree 4.
print("fermat:", fit_rational_legendre(catalog_entry("fermat").form, 6))
