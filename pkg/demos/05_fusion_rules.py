"""Walkthrough: the fusion ring.

Irreducibles are labelled (k, l): an SU(2)-type ladder index and a
circle winding.  Tensor products follow the Clebsch-Gordan ladder with
the windings adding; odd homogeneity degree keeps only k - l even.
"""

from braidfoq import FusionContext, IrrepLabel, conj_label, dim, fuse, ring_checks

even = FusionContext(n=2, parity="even_d")
odd = FusionContext(n=2, parity="odd_d")

a, b = IrrepLabel(2, 3), IrrepLabel(1, -1)
print(f"r(2,3) (x) r(1,-1) =", [(r.k, r.l) for r in fuse(a, b, even)])
print("fundamental squared:", [(r.k, r.l) for r in fuse(IrrepLabel(1, 0), IrrepLabel(1, 0), even)])
print("tensoring with a character shifts the winding:",
      [(r.k, r.l) for r in fuse(IrrepLabel(0, 5), IrrepLabel(3, 0), even)])

print("\nconjugation flips the winding: conj r(3,2) =",
      (conj_label(IrrepLabel(3, 2)).k, conj_label(IrrepLabel(3, 2)).l))

print("\ndimension ladder (n = 3):",
      [dim(IrrepLabel(k, 0), FusionContext(n=3, parity='even_d')) for k in range(6)])

# In odd parity only k - l even labels exist, and fusion stays inside.
pair = fuse(IrrepLabel(2, 4), IrrepLabel(3, 1), odd)
print("\nodd-parity fusion:", [(r.k, r.l) for r in pair],
      " all valid:", all(r.valid_in(odd) for r in pair))

# Exhaustive desk-scale verification of the ring axioms.
for parity in ("even_d", "odd_d"):
    report = ring_checks(FusionContext(n=2, parity=parity), 5)
    print(f"\nring checks ({parity}, bound 5): passed={report['passed']},"
          f" labels={report['label_count']}")
