"""Acceptance battery: one test per criterion, each printing a pass line.

Run with `pytest -v tests/test_acceptance.py` (or `-s` to see the lines).
"""

import json
import random
import time

from braidfoq import (FusionContext, IrrepLabel, Matrix, apply_comult,
                      bosonisation_presentation, braided_presentation,
                      coassociativity_check, degree_shift, double_cover,
                      expand_three_legs, f_matrix, fuse, intertwiner_check,
                      irreducibility_test, q_parameter, reduce_to_degree_zero,
                      ring_checks, su_q2_reference_instance, triviality_scan,
                      validate, well_definedness_check)
from braidfoq.freealg import AlgebraElement, TensorElement, Word
from braidfoq.sampling import (mutate_one_entry, random_homogeneous_invertible,
                               random_valid_instance)
from braidfoq.suite import RunConfig, fixture_e0, fixture_e1, fixture_e2, \
    report_to_text, run_suite


def _report(number: int, summary: str, elapsed: float, budget: float | None):
    line = f"PASS criterion {number}: {summary} ({elapsed:.2f}s"
    line += f", budget {budget:.0f}s)" if budget else ")"
    print(line)


def test_criterion_1_triviality_iff_validity():
    start = time.perf_counter()
    rng = random.Random("acceptance:1")
    plan = [(n, order) for n in (2, 3, 4, 6) for order in (8, 12, 24)]
    instances = 0
    mutants = 0
    while instances < 50:
        n, order = plan[instances % len(plan)]
        inst = random_valid_instance(rng, n=n, order=order)
        instances += 1
        assert not triviality_scan(inst), "valid instance violates the identity"
        mutant = mutate_one_entry(rng, inst)
        if (mutant is not None and not validate(mutant).holds
                and mutant.omega.rank() == mutant.space.n):
            # the identity presumes invertible omega-tilde
            mutants += 1
            assert triviality_scan(mutant), "broken instance shows no violation"
    elapsed = time.perf_counter() - start
    assert mutants > 0
    assert elapsed < 30.0
    _report(1, f"triviality identity on {instances} instances, "
               f"{mutants} broken mutants detected", elapsed, 30)


def test_criterion_2_irreducibility_agreement():
    start = time.perf_counter()
    rng = random.Random("acceptance:2")
    valid = 0
    for _ in range(100):
        inst = random_homogeneous_invertible(rng)
        irreducible, _ = irreducibility_test(inst.space, inst.omega, inst.d)
        holds = validate(inst).holds
        valid += holds
        assert irreducible == holds
    elapsed = time.perf_counter() - start
    assert 0 < valid < 100, "sample should mix valid and invalid instances"
    assert elapsed < 5.0
    _report(2, f"irreducibility agrees with validity on 100 samples ({valid} valid)",
            elapsed, 5)


def test_criterion_3_transform_coherence():
    start = time.perf_counter()
    rng = random.Random("acceptance:3")
    for i in range(50):
        inst = random_valid_instance(rng)
        s = rng.randrange(-3, 4)
        back = degree_shift(degree_shift(inst, s), -s)
        assert back.omega == inst.omega and back.space.degrees == inst.space.degrees
        # c' = zeta^(s*d)*c at the canonical midpoint shift
        even = inst if inst.d % 2 == 0 else double_cover(inst)
        mid = even.d // 2
        if mid != 0:
            c_before = validate(even).c
            c_after = validate(degree_shift(even, mid)).c
            assert c_after == even.space.zeta_pow(mid * even.d) * c_before
        trace = reduce_to_degree_zero(inst)
        report = validate(trace.final)
        assert trace.final.d == 0 and report.holds and report.c.is_real()
    e1 = fixture_e1()
    trace = reduce_to_degree_zero(e1)
    assert trace.steps == (("cover",), ("shift", 1))
    assert trace.parity_constraint == "k_minus_l_even"
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    _report(3, "shift inverses, midpoint c-law, degree-zero reductions, E1 route",
            elapsed, 5)


def test_criterion_4_coassociativity():
    start = time.perf_counter()
    rng = random.Random("acceptance:4")
    for inst in (fixture_e0(), fixture_e1(), fixture_e2()):
        assert coassociativity_check(braided_presentation(inst))
        assert coassociativity_check(bosonisation_presentation(inst))
    for _ in range(10):
        inst = random_valid_instance(rng, n=rng.choice([2, 3, 4]), order=rng.choice([8, 12]))
        assert coassociativity_check(bosonisation_presentation(inst))
    boson = bosonisation_presentation(fixture_e1())
    ctx = boson.context
    z_elem = AlgebraElement.monomial(ctx, Word(1, ()))
    zw = Word(1, ())
    assert (expand_three_legs(apply_comult(z_elem, boson), boson, 0)
            == TensorElement(ctx, 3, {(zw, zw, zw): ctx.field.one()}))
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    _report(4, "coassociativity for E0/E1/E2 and 10 random instances; z cube",
            elapsed, 10)


def test_criterion_5_well_definedness():
    start = time.perf_counter()
    boson = bosonisation_presentation(fixture_e1())
    report = well_definedness_check(boson, 3)
    relations = list(boson.relations)
    for record in report["relations"]:
        assert record["verdict"] == "in_ideal", (
            f"{record['relation']} is {record['verdict']}")
        rel = boson.relation(record["relation"])
        if rel.is_zero():
            continue
        target = apply_comult(rel, boson)
        assert record["certificate"].replay(relations, boson.context, legs=2) == target
    elapsed = time.perf_counter() - start
    assert elapsed < 300.0
    _report(5, f"all {len(relations)} relation images certified in_ideal at bound 3, "
               "certificates replay exactly", elapsed, 300)


def test_criterion_6_intertwiner_identity():
    start = time.perf_counter()
    rng = random.Random("acceptance:6")
    for inst in (fixture_e0(), fixture_e1(), fixture_e2()):
        assert intertwiner_check(inst)
        F = f_matrix(inst)
        nonzero = [(i, j) for i in range(F.rows) for j in range(F.cols)
                   if not F[i, j].is_zero()]
        i0, j0 = nonzero[rng.randrange(len(nonzero))]
        scale = inst.space.field.from_int(2)
        mutated = Matrix(F.field, [[F[i, j] if (i, j) != (i0, j0) else F[i, j] * scale
                                    for j in range(F.cols)] for i in range(F.rows)])
        assert not intertwiner_check(inst, f_override=mutated)
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    _report(6, "t*F = z^d*F*conj(t) for E0/E1/E2; mutations rejected", elapsed, 5)


def test_criterion_7_fusion_ring():
    start = time.perf_counter()
    even = FusionContext(n=2, parity="even_d")
    assert [(r.k, r.l) for r in fuse(IrrepLabel(1, 0), IrrepLabel(1, 0), even)] \
        == [(2, 0), (0, 0)]
    assert [(r.k, r.l) for r in fuse(IrrepLabel(2, 3), IrrepLabel(1, -1), even)] \
        == [(3, 2), (1, 2)]
    assert [(r.k, r.l) for r in fuse(IrrepLabel(0, 5), IrrepLabel(4, 1), even)] \
        == [(4, 6)]
    for n in (2, 3):
        for parity in ("even_d", "odd_d"):
            report = ring_checks(FusionContext(n=n, parity=parity), 5)
            assert report["passed"], report["failures"][:3]
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    _report(7, "paper fusion examples and exhaustive ring checks (n=2,3, bound 5)",
            elapsed, 30)


def test_criterion_8_q_parameter():
    start = time.perf_counter()
    for q in (-1.0, -0.5, 0.3, 1.0):
        got = q_parameter(su_q2_reference_instance(q))["q"]
        assert abs(got - q) < 1e-12
    assert q_parameter(fixture_e0())["q"] == -1.0
    assert q_parameter(fixture_e2())["q"] == 1.0
    for inst in (fixture_e1(), fixture_e2()):
        assert q_parameter(inst)["q"] == q_parameter(double_cover(inst))["q"]
    elapsed = time.perf_counter() - start
    _report(8, "oracle family recovered below 1e-12; E0 -> -1, E2 -> +1; "
               "route-independent", elapsed, None)


def test_criterion_9_suite_determinism():
    start = time.perf_counter()
    first = report_to_text(run_suite(RunConfig(seed=42, workers=1)))
    second = report_to_text(run_suite(RunConfig(seed=42, workers=1)))
    four = report_to_text(run_suite(RunConfig(seed=42, workers=4)))
    assert first == second == four
    assert json.loads(first)["passed"] is True
    elapsed = time.perf_counter() - start
    _report(9, "suite reports byte-identical across runs and worker counts 1/4",
            elapsed, None)
