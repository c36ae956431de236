"""Walkthrough: the four universal presentations and the projection maps.

Every presentation is finite data: generators with grading, relations
stored as algebra elements equal to zero, and the comultiplication on
generators.  Serialization is canonical, so equal presentations produce
identical bytes.
"""

from braidfoq import (aof_presentation, bosonisation_presentation,
                      braided_presentation, deserialize_presentation, f_matrix,
                      projection_morphisms, reduce_to_degree_zero,
                      serialize_presentation, t_form_presentation)
from braidfoq.presentation import apply_morphism, check_morphism, circle_presentation
from braidfoq.suite import fixture_e1, fixture_e2

e1 = fixture_e1()

braided = braided_presentation(e1)
print("braided generators:", len(braided.generators), " relations:", len(braided.relations))
print("an invariance relation:")
print(" ", braided.relation("invariance(0,0)"))

boson = bosonisation_presentation(e1)
print("\nbosonisation adds z; commutation relations are absorbed by the")
print("z-normal form, so they store as zero elements:",
      boson.relation("commutation(0,1)").is_zero())
print("Delta(u[0,1]) =", boson.comult[boson.context.u(0, 1)])

tform = t_form_presentation(e1)
print("\nt-form invariance(0,0) carries the z^d factor:")
print(" ", tform.relation("invariance(0,0)"))

# At degree zero the t-form relations are exactly the one-matrix relations.
reduced = reduce_to_degree_zero(fixture_e2()).final
aof = aof_presentation(f_matrix(reduced), zeta=reduced.space.zeta)
print("\naof relation count at d = 0:", len(aof.relations))

iota, pi = projection_morphisms(e1)
circle = circle_presentation(e1.space.field, e1.space.zeta)
print("\nprojection sends u[i,j] to delta_ij; all relations collapse:",
      check_morphism(pi, boson, circle))
image = apply_morphism(pi, boson.relation("invariance(0,1)"), circle.context)
print("pi(invariance relation) normalizes to:", image)

text = serialize_presentation(boson)
again = serialize_presentation(deserialize_presentation(text))
print("\nserialization round-trips byte-identically:", text == again)
print("serialized size:", len(text), "bytes")
