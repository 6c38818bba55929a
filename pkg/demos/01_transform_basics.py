"""Transforming local monodromy data: a rank-2 to rank-3 walk-through.

A rank-2 system on the 3-punctured line with eigenvalues
(a', b'), (u', v'), (g', h') is convolved against the rank-one twist
with horizontal residues (x, y, z) where z = h'^{-1}.  Aiming one twist
component at an existing eigenvalue makes the defect 1, so the rank
grows to 3, and the new eigenvalues come out as explicit monomials in
the old symbols.
"""

from midconv import Convoluter, EigDivisor, GroupElement, GroupMode, \
    MonodromyVector, check_involution, defect, kappa

gen = lambda s: GroupElement.generator(s, GroupMode.MULTIPLICATIVE)

ap, bp, up, vp, gp, hp = (gen(s) for s in ["a'", "b'", "u'", "v'", "g'", "h'"])
vector = MonodromyVector([
    EigDivisor.of(ap, bp),
    EigDivisor.of(up, vp),
    EigDivisor.of(gp, hp),
])
print("input vector (rank %d):" % vector.rank)
for i, g in enumerate(vector):
    print(f"  point {i}: {g}")

# z := h'^{-1} ties the third twist component to an input eigenvalue
beta = Convoluter([gen("x"), gen("y"), hp.invert()])
print("\ntwist h-components:", list(beta.h))
print("derived diagonal component t:", beta.t)
print("defect:", defect(vector, beta))

out = kappa(beta, vector)
print("\ntransformed vector (rank %d):" % out.rank)
for i, g in enumerate(out):
    print(f"  point {i}: {g}")

# the transformation inverts exactly: flipping and dualizing the twist
# recovers the input, coefficient by coefficient
print("\nround trip equals the input:", check_involution(beta, vector))

# determinants are conserved on the nose
print("Det in  =", vector.total_determinant())
print("Det out =", out.total_determinant())
