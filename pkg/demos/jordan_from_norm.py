"""Recover the Jordan algebra of symmetric 3x3 matrices from det alone.

The product is computed from the cubic norm by differentiating
tau_I^{-1} tau_M at M = I, and compared with (XY + YX)/2.
"""

from fractions import Fraction

from homaloid.cayley_dickson import HermMatrix, herm3_norm, herm_jordan_product
from homaloid.jordan import jordan_product, jordan_verify, quadratic_rep
from homaloid.linalg import matvec

entry = herm3_norm(0)
J = jordan_product(entry.form, entry.base_point)

X = [Fraction(v) for v in (1, 2, -1, 3, 0, 1)]
Y = [Fraction(v) for v in (0, 1, 1, -2, 1, 4)]
print("X o Y from the norm  :", [str(c) for c in J.mul(X, Y)])
sym = herm_jordan_product(HermMatrix.from_vector(0, X), HermMatrix.from_vector(0, Y))
print("(XY + YX)/2 directly :", [str(c) for c in sym.to_vector()])

# P(X) = 2 L_X^2 - L_{X^2} is the map Y -> XYX, and f(P(X) Y) = f(X)^2 f(Y)
f = entry.form
PY = matvec(quadratic_rep(J, X), Y)
print("f(P(X)Y) =", f(PY), "  f(X)^2 f(Y) =", f(X) ** 2 * f(Y))

rep = jordan_verify(J, trials=20, seed=1)
print("axioms:", rep.checks)
print("L_X^2 - L_{X^2} satisfies composition:", rep.minus_variant_composes)

# Octonions work the same way, 27 dimensions
O = herm3_norm(3)
JO = jordan_product(O.form, O.base_point)
print("Herm3(O):", jordan_verify(JO, trials=5, seed=1).passed)
