"""The reproducible property battery behind the `suite` command.

Every check is deterministic given the seed; reports never depend on the
worker count, wall-clock time, or platform, so identical inputs yield
byte-identical reports.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .freealg import AlgebraElement, TensorElement, Word, apply_comult, \
    coassociativity_check, expand_three_legs, intertwiner_check, \
    well_definedness_check
from .fusion import FusionContext, IrrepLabel, fuse, q_parameter, ring_checks, \
    su_q2_reference_instance
from .graded import GradedSpace, OmegaData, f_matrix, irreducibility_test, \
    triviality_scan, validate
from .presentation import bosonisation_presentation, braided_presentation
from .sampling import mutate_one_entry, random_homogeneous_invertible, \
    random_valid_instance
from .scalar import Field, Matrix
from .transform import degree_shift, double_cover, reduce_to_degree_zero

__all__ = ["RunConfig", "fixture_e0", "fixture_e1", "fixture_e2", "run_suite"]


@dataclass(frozen=True)
class RunConfig:
    """Knobs for the battery; the seed is recorded in every report.

    ``field`` optionally pins the cyclotomic order of every randomized
    instance; the default mixes orders 8, 12 and 24.
    """

    seed: int = 42
    degree_bound: int = 3
    row_cap: int = 2_000_000
    workers: int = 1
    field: Field | None = None
    output: str | None = None

    def __post_init__(self):
        if self.degree_bound < 2:
            raise ValueError("degree_bound must be at least 2")
        if self.field is not None and not self.field.exact:
            raise ValueError("the battery asserts exact identities; use an exact field")

    def orders(self, default: tuple[int, ...]) -> tuple[int, ...]:
        if self.field is None:
            return default
        return (self.field.order,)


def fixture_e0() -> OmegaData:
    """Trivially graded 2x2 identity instance (c = 1)."""
    field = Field.cyclotomic(8)
    space = GradedSpace(n=2, degrees=(0, 0), zeta=field.root(1), field=field)
    return OmegaData(space=space, omega=Matrix.identity(field, 2), d=0)


def fixture_e1() -> OmegaData:
    """Degrees (0,1), d = 1, zeta = zeta_8^6; the braided SU_q(2)-type case."""
    field = Field.cyclotomic(8)
    z = field.root(1)
    zero, one = field.zero(), field.one()
    space = GradedSpace(n=2, degrees=(0, 1), zeta=z ** 6, field=field)
    return OmegaData(space=space,
                     omega=Matrix(field, [[zero, z ** 7], [one, zero]]), d=1)


def fixture_e2() -> OmegaData:
    """Degrees (0,2), d = 2, zeta = zeta_8 (c = zeta_8^2)."""
    field = Field.cyclotomic(8)
    z = field.root(1)
    zero, one = field.zero(), field.one()
    space = GradedSpace(n=2, degrees=(0, 2), zeta=z, field=field)
    return OmegaData(space=space,
                     omega=Matrix(field, [[zero, z ** 6], [one, zero]]), d=2)


def _rng(config: RunConfig, name: str) -> random.Random:
    return random.Random(f"{config.seed}:{name}")


def _check_triviality(config: RunConfig) -> dict:
    rng = _rng(config, "triviality")
    instances = 0
    mutants_checked = 0
    failures: list[str] = []
    plan = [(n, order) for n in (2, 3, 4, 6) for order in config.orders((8, 12, 24))]
    while instances < 50:
        n, order = plan[instances % len(plan)]
        inst = random_valid_instance(rng, n=n, order=order)
        instances += 1
        if triviality_scan(inst):
            failures.append(f"valid instance {instances} violates the identity")
            continue
        mutant = mutate_one_entry(rng, inst)
        if (mutant is not None and not validate(mutant).holds
                and mutant.omega.rank() == mutant.space.n):
            # the identity presumes invertible omega-tilde, so singular
            # mutants are outside its scope
            mutants_checked += 1
            if not triviality_scan(mutant):
                failures.append(f"mutant of instance {instances} shows no violation")
    return {"name": "triviality_equivalence", "passed": not failures,
            "instances": instances, "broken_mutants_detected": mutants_checked,
            "failures": failures}


def _check_irreducibility(config: RunConfig) -> dict:
    rng = _rng(config, "irreducibility")
    disagreements = []
    valid_count = 0
    orders = config.orders((4, 8, 12, 24))
    for i in range(100):
        inst = random_homogeneous_invertible(rng, order=orders[i % len(orders)])
        irreducible, _ = irreducibility_test(inst.space, inst.omega, inst.d)
        holds = validate(inst).holds
        valid_count += holds
        if irreducible != holds:
            disagreements.append(i)
    return {"name": "irreducibility_agreement", "passed": not disagreements,
            "samples": 100, "valid_among_samples": valid_count,
            "disagreements": disagreements}


def _check_transforms(config: RunConfig) -> dict:
    rng = _rng(config, "transforms")
    failures: list[str] = []
    orders = config.orders((4, 8, 12, 24))
    for i in range(50):
        inst = random_valid_instance(rng, order=orders[i % len(orders)])
        s = rng.randrange(-3, 4)
        back = degree_shift(degree_shift(inst, s), -s)
        if back.omega != inst.omega or back.space.degrees != inst.space.degrees:
            failures.append(f"round trip failed at instance {i} (s={s})")
        t = rng.randrange(-2, 3)
        composed = degree_shift(degree_shift(inst, t), s)
        direct = degree_shift(inst, s + t)
        if composed.omega != direct.omega:
            failures.append(f"composition failed at instance {i} (s={s}, t={t})")
        # c' = zeta^(s*d) * c at the canonical midpoint shift
        even = inst if inst.d % 2 == 0 else double_cover(inst)
        c_before = validate(even).c
        mid = even.d // 2
        if mid != 0:
            shifted = degree_shift(even, mid)
            c_after = validate(shifted).c
            if c_after != even.space.zeta_pow(mid * even.d) * c_before:
                failures.append(f"midpoint c-law failed at instance {i}")
        trace = reduce_to_degree_zero(inst)
        final_report = validate(trace.final)
        if trace.final.d != 0 or not final_report.holds or not final_report.c.is_real():
            failures.append(f"reduction failed at instance {i}")
    e1 = fixture_e1()
    trace = reduce_to_degree_zero(e1)
    if [step[0] for step in trace.steps] != ["cover", "shift"] or trace.steps[1][1] != 1:
        failures.append("E1 route is not [cover, shift(1)]")
    if trace.parity_constraint != "k_minus_l_even":
        failures.append("E1 parity flag missing")
    return {"name": "transform_coherence", "passed": not failures,
            "instances": 50, "failures": failures}


def _check_coassociativity(config: RunConfig) -> dict:
    rng = _rng(config, "coassociativity")
    failures: list[str] = []
    fixtures = [("E0", fixture_e0()), ("E1", fixture_e1()), ("E2", fixture_e2())]
    for label, inst in fixtures:
        if not coassociativity_check(braided_presentation(inst)):
            failures.append(f"{label} braided")
        if not coassociativity_check(bosonisation_presentation(inst)):
            failures.append(f"{label} bosonisation")
    orders = config.orders((8, 12))
    for i in range(10):
        inst = random_valid_instance(rng, n=rng.choice([2, 3, 4]), order=rng.choice(orders))
        if not coassociativity_check(bosonisation_presentation(inst)):
            failures.append(f"random instance {i}")
    boson = bosonisation_presentation(fixture_e1())
    ctx = boson.context
    z_elem = AlgebraElement.monomial(ctx, Word(1, ()))
    cube = expand_three_legs(apply_comult(z_elem, boson), boson, 0)
    zw = Word(1, ())
    if cube != TensorElement(ctx, 3, {(zw, zw, zw): ctx.field.one()}):
        failures.append("triple expansion of z is not z x z x z")
    return {"name": "coassociativity", "passed": not failures, "failures": failures}


def _check_well_definedness(config: RunConfig) -> dict:
    boson = bosonisation_presentation(fixture_e1())
    report = well_definedness_check(boson, config.degree_bound,
                                    row_cap=config.row_cap, workers=config.workers)
    failures: list[str] = []
    relations = list(boson.relations)
    for record in report["relations"]:
        if record["verdict"] != "in_ideal":
            failures.append(f"{record['relation']}: {record['verdict']}")
            continue
        rel = boson.relation(record["relation"])
        if rel.is_zero():
            continue
        target = apply_comult(rel, boson)
        replayed = record["certificate"].replay(relations, boson.context, legs=2)
        if replayed != target:
            failures.append(f"{record['relation']}: certificate does not replay")
    return {"name": "well_definedness", "passed": not failures,
            "degree_bound": config.degree_bound,
            "verdicts": {r["relation"]: r["verdict"] for r in report["relations"]},
            "failures": failures}


def _check_intertwiner(config: RunConfig) -> dict:
    rng = _rng(config, "intertwiner")
    failures: list[str] = []
    for label, inst in (("E0", fixture_e0()), ("E1", fixture_e1()), ("E2", fixture_e2())):
        if not intertwiner_check(inst):
            failures.append(label)
        F = f_matrix(inst)
        nonzero = [(i, j) for i in range(F.rows) for j in range(F.cols)
                   if not F[i, j].is_zero()]
        i0, j0 = nonzero[rng.randrange(len(nonzero))]
        scale = inst.space.field.from_int(2)
        mutated = Matrix(F.field, [[F[i, j] if (i, j) != (i0, j0) else F[i, j] * scale
                                    for j in range(F.cols)] for i in range(F.rows)])
        if intertwiner_check(inst, f_override=mutated):
            failures.append(f"{label} mutation accepted")
    return {"name": "intertwiner_identity", "passed": not failures, "failures": failures}


def _check_fusion_ring(config: RunConfig) -> dict:
    failures: list[str] = []
    even = FusionContext(n=2, parity="even_d")
    examples = [
        ((1, 0), (1, 0), [(2, 0), (0, 0)]),
        ((2, 3), (1, -1), [(3, 2), (1, 2)]),
        ((0, 5), (4, 1), [(4, 6)]),
    ]
    for a, b, expected in examples:
        got = [(r.k, r.l) for r in fuse(IrrepLabel(*a), IrrepLabel(*b), even)]
        if got != expected:
            failures.append(f"fusion example {a} x {b} gave {got}")
    reports = {}
    for n in (2, 3):
        for parity in ("even_d", "odd_d"):
            rep = ring_checks(FusionContext(n=n, parity=parity), 5)
            reports[f"n{n}_{parity}"] = rep["passed"]
            if not rep["passed"]:
                failures.append(f"ring checks failed for n={n} {parity}: {rep['failures'][:3]}")
    return {"name": "fusion_ring", "passed": not failures,
            "ring_checks": reports, "failures": failures}


def _check_q_parameter(config: RunConfig) -> dict:
    failures: list[str] = []
    recovered = {}
    for q in (-1.0, -0.5, 0.3, 1.0):
        got = q_parameter(su_q2_reference_instance(q))["q"]
        recovered[str(q)] = got
        if abs(got - q) >= 1e-12:
            failures.append(f"oracle q={q} recovered as {got}")
    if q_parameter(fixture_e0())["q"] != -1.0:
        failures.append("E0 did not give q = -1")
    if q_parameter(fixture_e2())["q"] != 1.0:
        failures.append("E2 did not give q = +1")
    for label, inst in (("E1", fixture_e1()), ("E2", fixture_e2())):
        direct = q_parameter(inst)["q"]
        detour = q_parameter(double_cover(inst))["q"]
        if direct != detour:
            failures.append(f"{label} q disagrees across reduction routes")
    return {"name": "q_parameter", "passed": not failures,
            "oracle_recovered": recovered, "failures": failures}


_CHECKS = [
    _check_triviality,
    _check_irreducibility,
    _check_transforms,
    _check_coassociativity,
    _check_well_definedness,
    _check_intertwiner,
    _check_fusion_ring,
    _check_q_parameter,
]


def run_suite(config: RunConfig) -> dict:
    """Run the battery and return a JSON-safe, byte-stable report."""
    checks = [check(config) for check in _CHECKS]
    report = {
        "suite": "braidfoq",
        "seed": config.seed,
        "degree_bound": config.degree_bound,
        "row_cap": config.row_cap,
        "field": None if config.field is None else config.field.to_json(),
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }
    return report


def report_to_text(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)
