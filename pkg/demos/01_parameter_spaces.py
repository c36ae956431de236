"""Walkthrough: building and validating parameter data (V, pi, omega).

The defining constraint is the block condition: a nonzero scalar c with
conj(Omega_{a,d-a}) @ Omega_{d-a,a} = c * zeta^(d*a) * I for every
occupied degree a.  Everything here is exact over a cyclotomic field.
"""

import random

from braidfoq import (Field, GradedSpace, Matrix, OmegaData, irreducibility_test,
                      solve_omega, triviality_lhs, triviality_scan, validate)
from braidfoq.sampling import random_valid_instance

field = Field.cyclotomic(8)
z = field.root(1)
zero, one = field.zero(), field.one()

# The braided SU_q(2)-type instance: degrees (0, 1), homogeneity degree 1.
space = GradedSpace(n=2, degrees=(0, 1), zeta=z ** 6, field=field)
e1 = OmegaData(space=space, omega=Matrix(field, [[zero, z ** 7], [one, zero]]), d=1)

report = validate(e1)
print("holds:", report.holds)
print("c =", report.c, "  (zeta_8)")
print("phase consistency conj(c)/c = zeta^(d^2):", report.phase_consistency)

# Constructing instances instead of guessing them: supply one free block
# per low degree; the mirrored blocks are forced.
built = solve_omega(space, 1, {0: Matrix(field, [[z ** 7]])}, c=z)
print("\nsolve_omega reproduces the instance:", built.omega == e1.omega)

# A middle block appears for even d; negative demands need even dimension.
flat = GradedSpace(n=2, degrees=(0, 0), zeta=one, field=field)
negative = solve_omega(flat, 0, {}, c=-one)
print("negative middle-block demand solved with the antisymmetric block:")
print(negative.omega)

# The linear-independence identity: for valid data the quartic sums are
# exactly delta_{j,l} delta_{i,k}; breaking one entry breaks some tuple.
print("\ntriviality sum at (0,0,0,0):", triviality_lhs(e1, 0, 0, 0, 0))
print("triviality sum at (0,0,1,0):", triviality_lhs(e1, 0, 0, 1, 0))
print("violations on the valid instance:", len(triviality_scan(e1)))

broken = OmegaData(space=space, omega=Matrix(field, [[zero, z ** 7 * z], [one, zero]]), d=1)
print("violations after scaling one entry by zeta:", len(triviality_scan(broken)))

# The same condition is an irreducibility criterion for invertible omega.
irreducible, c = irreducibility_test(space, e1.omega, 1)
print("\nfundamental representation irreducible:", irreducible, " c =", c)

# Random instances come from the solver, so they always validate.
rng = random.Random(2024)
sample = random_valid_instance(rng, n=4, order=12)
print("\nrandom instance: n =", sample.space.n, " degrees =", sample.space.degrees,
      " d =", sample.d, " valid =", validate(sample).holds)
