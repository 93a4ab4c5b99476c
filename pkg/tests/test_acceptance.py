"""Acceptance gate: one test per shipped criterion, each printing a
single PASS/FAIL line (run with -s to see them).  Budgets are wall-clock
seconds measured inside the test; slow lattice sweeps carry the `slow`
marker and a larger budget.
"""

import itertools
import random
import time

import pytest

import oracles
from congrel.algebra import FiniteAlgebra
from congrel.corpus import builtin
from congrel.relations import (
    BinRel,
    Partition,
    cg,
    classify,
    compatible_closure,
    enumerate_congruences,
    enumerate_tolerances,
    random_reflexive,
    rel_plus,
)
from congrel import dsl
from congrel import theorems as T

SIZE_LE_4 = ["trivial", "pureset2", "pureset3", "pureset4",
             "z2", "z4", "z2xz2", "bool2", "bool4"]
POSITIVE_FAST = ["z2", "z4", "z2xz2", "bool2", "bool4"]
POSITIVE_SLOW = ["n5", "m3"]
HYPOTHESIS_PASSING = ["trivial"] + POSITIVE_FAST + POSITIVE_SLOW
SIZE_LE_3 = ["trivial", "pureset2", "pureset3", "z2", "bool2"]


def _verdict(num, desc, ok, elapsed, budget):
    line = (f"ACCEPTANCE criterion {num} ({desc}): "
            f"{'PASS' if ok else 'FAIL'} [{elapsed:.1f}s / budget {budget:.0f}s]")
    print(line)
    assert ok, line
    assert elapsed < budget, f"criterion {num} overran: {elapsed:.1f}s >= {budget}s"


def test_criterion_1_cg_route_equivalence():
    t0 = time.monotonic()
    mismatches = 0
    for name in SIZE_LE_4:
        a = builtin(name)
        n = a.size
        rng = random.Random(f"c1:{name}")
        for i in range(500):
            r = random_reflexive(n, rng.random(), rng.randint(0, 10 ** 9))
            if cg(r, a, strategy="formula") != cg(r, a, strategy="unionfind"):
                mismatches += 1
    _verdict(1, "cg formula == cg unionfind, 500 draws x 9 algebras",
             mismatches == 0, time.monotonic() - t0, 30)


def test_criterion_2_hypothesis_positive_controls_fast():
    worst = 0.0
    ok = True
    for name in POSITIVE_FAST:
        t0 = time.monotonic()
        ok = ok and T.check_hypothesis(builtin(name)).holds
        worst = max(worst, time.monotonic() - t0)
    _verdict(2, "hypothesis holds on z2/z4/z2xz2/bool2/bool4", ok, worst, 60)


@pytest.mark.slow
def test_criterion_2_hypothesis_positive_controls_slow():
    worst = 0.0
    ok = True
    for name in POSITIVE_SLOW:
        t0 = time.monotonic()
        ok = ok and T.check_hypothesis(builtin(name)).holds
        worst = max(worst, time.monotonic() - t0)
    _verdict(2, "hypothesis holds on n5/m3 (slow)", ok, worst, 600)


def _bruteforce_confirms(algebra, violation):
    sub = T.subsquare(algebra, violation.binding["generators"])
    if len(sub) > 16:
        return False
    parts = [labels for labels in oracles.all_partitions(len(sub))
             if oracles.is_compatible(oracles.partition_pairs(labels), sub.induced)]
    for lb, lg, ld in itertools.product(parts, repeat=3):
        beta = oracles.partition_pairs(lb)
        gamma = oracles.partition_pairs(lg)
        delta = oracles.partition_pairs(ld)
        if not delta <= beta:
            continue
        lhs = beta & oracles.compose(oracles.compose(gamma, delta), gamma)
        rhs = oracles.transitive_closure((beta & gamma) | delta)
        if not lhs <= rhs:
            return True
    return False


def test_criterion_3_negative_controls_with_independent_bruteforce():
    t0 = time.monotonic()
    pure5 = FiniteAlgebra(name="pureset5", size=5, operations=())
    ok = True
    for a in (builtin("pureset4"), pure5):
        hyp = T.check_hypothesis(a)
        mod = T.check_modularity_subsquares(a)
        ok = ok and not hyp.holds and not mod.holds
        v = hyp.violations[0]
        ok = ok and T.replay(a, "hypothesis", v)
        ok = ok and T.replay(a, "modularity", mod.violations[0])
        ok = ok and _bruteforce_confirms(a, v)
    _verdict(3, "hypothesis+modularity fail on pure 4/5-sets, brute-force confirmed",
             ok, time.monotonic() - t0, 120)


def _no_violations(algebra):
    if algebra.size <= 3:
        reports = T.sweep(algebra, strategy="exhaust")
    else:
        # the sample grid contains the whole principal grid plus 1000 draws
        reports = T.sweep(algebra, strategy="sample", seed=7, samples=1000)
    return all(r.holds for r in reports.values())


def test_criterion_4_soundness_sweep_fast():
    t0 = time.monotonic()
    ok = all(_no_violations(builtin(name)) for name in POSITIVE_FAST)
    _verdict(4, "four laws: exhaust at size<=3, principal+sample(1000, seed 7) at 4",
             ok, time.monotonic() - t0, 300)


@pytest.mark.slow
def test_criterion_4_soundness_sweep_slow():
    t0 = time.monotonic()
    ok = all(_no_violations(builtin(name)) for name in POSITIVE_SLOW)
    _verdict(4, "four laws on n5/m3: principal+sample(1000, seed 7) (slow)",
             ok, time.monotonic() - t0, 600)


def test_criterion_5_witness_chains_revalidate():
    t0 = time.monotonic()
    bad = 0
    for name in HYPOTHESIS_PASSING:
        a = builtin(name)
        n = a.size
        rng = random.Random(f"witness:{name}")
        congs = enumerate_congruences(a)
        for _ in range(200):
            alpha = rng.choice(congs)
            x = rng.randrange(n)
            c = rng.choice([y for y in range(n) if alpha.same(x, y)])
            b = rng.randrange(n)
            r = random_reflexive(n, rng.random(), rng.randint(0, 10 ** 9)) \
                | BinRel.from_pairs(n, [(x, b)])
            s = random_reflexive(n, rng.random(), rng.randint(0, 10 ** 9)) \
                | BinRel.from_pairs(n, [(b, c)])
            w = T.witness_chain(a, alpha, x, b, c, r, s)
            if not isinstance(w, T.WitnessChain) or w.revalidate():
                bad += 1
    _verdict(5, "200 seeded witness chains per algebra all revalidate",
             bad == 0, time.monotonic() - t0, 300)


def _operator_laws_hold(a, rng):
    n = a.size
    r = random_reflexive(n, rng.random(), rng.randint(0, 10 ** 9))
    s = random_reflexive(n, rng.random(), rng.randint(0, 10 ** 9))
    extra = BinRel(n, rng.getrandbits(n * n))
    bigger = r | extra
    checks = []
    for close in (lambda x: x.transitive_closure(),
                  lambda x: x.reflexive_closure(),
                  lambda x: compatible_closure(x, a)):
        c = close(r)
        checks.append(r <= c)
        checks.append(close(c) == c)
        checks.append(c <= close(bigger))
    checks.append(r.compose(s).converse() == s.converse().compose(r.converse()))
    checks.append(compatible_closure(r, a).converse()
                  == compatible_closure(r.converse(), a))
    cr, cs = compatible_closure(r, a), compatible_closure(s, a)
    checks.append(compatible_closure(cr | cs, a) == compatible_closure(r | s, a))
    checks.append(classify(cr.compose(cs), a).compatible)
    checks.append(classify(rel_plus(cr, cs), a).compatible)
    checks.append(cg(r, a, strategy="formula") == cg(r, a, strategy="unionfind"))
    checks.append(compatible_closure(r | s.converse(), a) <= cr.compose(cs.converse()))
    checks.append(compatible_closure(r | s.converse(), a).converse()
                  == compatible_closure(r.converse() | s, a))
    checks.append(classify(cr.compose(cr.converse()), a).is_tolerance)
    return all(checks)


def test_criterion_6_operator_law_suite():
    t0 = time.monotonic()
    corpus = [builtin(n) for n in
              SIZE_LE_4 + POSITIVE_SLOW]
    rng = random.Random("c6")
    failures = sum(
        0 if _operator_laws_hold(corpus[i % len(corpus)], rng) else 1
        for i in range(1000))
    _verdict(6, "eight operator laws on 1000 seeded instances",
             failures == 0, time.monotonic() - t0, 60)


# which dedicated claims correspond to each shipped statement, in order
_STATEMENT_CLAIMS = {
    "subrel": [("inclusion",)],
    "subrelpiu": [("inclusion",), ("eq1_forward", "eq1_backward"),
                  ("eq2_forward", "eq2_backward")],
    "wtip": [("forward", "backward")],
    "rr": [("inclusion",), ("eq1_forward", "eq1_backward"),
           ("eq2_forward", "eq2_backward")],
}


def _dsl_agrees_everywhere(algebra):
    congs = enumerate_congruences(algebra)
    for theorem in T.THEOREM_NAMES:
        bindings = T._theorem_bindings(algebra, theorem, "exhaust", 0, 0, congs)
        statements = [dsl.parse(text) for text in dsl.THEOREM_STATEMENTS[theorem]]
        grids = [list(dsl._assignments(algebra, st, "exhaust", 0, 0))
                 for st in statements]
        if any(len(g) != len(bindings) for g in grids):
            return False
        for i, binding in enumerate(bindings):
            failed = {v.failed_claim for v in T._eval_binding(algebra, theorem, binding)}
            for st, grid, claims in zip(statements, grids, _STATEMENT_CLAIMS[theorem]):
                env = grid[i]
                lhs = dsl.evaluate(algebra, env, st.left)
                rhs = dsl.evaluate(algebra, env, st.right)
                if st.relation == "<=":
                    dsl_failed = {claims[0]} if not lhs <= rhs else set()
                else:
                    dsl_failed = set()
                    if not lhs <= rhs:
                        dsl_failed.add(claims[0])
                    if not rhs <= lhs:
                        dsl_failed.add(claims[1])
                if dsl_failed != (failed & set(claims)):
                    return False
    return True


def test_criterion_7_dsl_agreement_and_round_trip():
    t0 = time.monotonic()
    ok = all(_dsl_agrees_everywhere(builtin(name)) for name in SIZE_LE_3)
    rng = random.Random("c7")

    def random_expr(depth):
        if depth == 0 or rng.random() < 0.3:
            if rng.random() < 0.2:
                return dsl.Expr("const", text=rng.choice("01"))
            return dsl.Expr("var", text=rng.choice(["a", "R", "S"]))
        kind = rng.choice(["meet", "compose", "join", "union",
                           "converse", "star", "cl", "cg"])
        arity = 1 if kind in ("converse", "star", "cl", "cg") else 2
        return dsl.Expr(kind, tuple(random_expr(depth - 1) for _ in range(arity)))

    quants = (("a", "Cong"), ("R", "Refl"), ("S", "Refl"))
    for _ in range(100):
        st = dsl.Statement(quants, rng.choice(["<=", "="]),
                           random_expr(4), random_expr(4))
        text = dsl.print_statement(st)
        ok = ok and dsl.parse(text) == st and dsl.print_statement(dsl.parse(text)) == text
    _verdict(7, "DSL texts agree with verifiers instance-by-instance; 100 round-trips",
             ok, time.monotonic() - t0, 300)


def test_criterion_8_congruence_counts():
    t0 = time.monotonic()
    z4 = builtin("z4")
    p3 = builtin("pureset3")
    got_z4 = {p.labels for p in enumerate_congruences(z4)}
    got_p3 = {p.labels for p in enumerate_congruences(p3)}
    want_z4 = set(oracles.congruence_labelings(z4))
    want_p3 = set(oracles.congruence_labelings(p3))
    ok = (len(got_z4) == 3 and len(got_p3) == 5
          and got_z4 == want_z4 and got_p3 == want_p3)
    _verdict(8, "Con(z4) == 3 and Con(pure 3-set) == 5, filter cross-check",
             ok, time.monotonic() - t0, 30)
