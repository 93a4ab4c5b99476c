"""Verifiers for inclusion/equality laws tying congruence meets to relation
composition, alternating joins, and congruence generation.

Four parameterized laws are checked (named subrel, subrelpiu, wtip, rr on
the CLI), plus a 4-generated-subalgebra hypothesis and its lattice
modularity variant.  Everything returns CheckReport values; nothing here
mutates its inputs, so quantifier grids can be chunked across processes.
"""

from __future__ import annotations

import itertools
import os
import random
import time
from collections import deque
from dataclasses import dataclass
from multiprocessing import get_context
from typing import Iterable, Iterator, Optional, Union

from .algebra import (
    FiniteAlgebra,
    SubSquare,
    generate_subuniverse,
    product_relation,
    square,
    subsquare,
)
from .relations import (
    BinRel,
    Partition,
    _compose_bits,
    _iter_bits,
    cg,
    classify,
    compatible_closure,
    enumerate_congruences,
    enumerate_tolerances,
    is_congruence,
    _random_reflexive_bits,
    rel_plus,
)

__all__ = [
    "Violation",
    "CheckReport",
    "WitnessChain",
    "ChainFailure",
    "THEOREM_NAMES",
    "check_hypothesis",
    "check_modularity_subsquares",
    "verify_subrel",
    "verify_subrelpiu",
    "verify_wtip",
    "verify_rr",
    "witness_chain",
    "search_counterexample",
    "sweep",
    "sweep_iter",
    "replay",
    "reflexive_domain",
]

THEOREM_NAMES = ("subrel", "subrelpiu", "wtip", "rr")

EXHAUST_REFLEXIVE_LIMIT = 3


def exhaustive_size_limit() -> int:
    """Universe bound for the subsquare drivers; CONGREL_MAX_SIZE overrides."""
    return int(os.environ.get("CONGREL_MAX_SIZE", "6"))


@dataclass
class Violation:
    """One concrete refutation: the quantifier binding, the pair present on
    the left side but missing from the right, and which inclusion broke."""

    binding: dict
    missing_pair: tuple[int, int]
    failed_claim: str

    def to_json_dict(self) -> dict:
        return {
            "binding": {k: _json_value(v) for k, v in self.binding.items()},
            "missing_pair": list(self.missing_pair),
            "failed_claim": self.failed_claim,
        }


@dataclass
class CheckReport:
    algebra: str
    theorem: str
    result: str  # "holds" or "fails"
    instances_checked: int
    violations: list[Violation]
    elapsed: float

    @property
    def holds(self) -> bool:
        return self.result == "holds"

    def to_json_dict(self, include_elapsed: bool = True) -> dict:
        return {
            "algebra": self.algebra,
            "theorem": self.theorem,
            "result": self.result,
            "instances_checked": self.instances_checked,
            "violations": [v.to_json_dict() for v in self.violations],
            "elapsed_ms": int(self.elapsed * 1000) if include_elapsed else 0,
        }


def _json_value(v):
    if isinstance(v, Partition):
        return {"partition": v.blocks()}
    if isinstance(v, BinRel):
        return {"size": v.n, "pairs": [list(p) for p in sorted(v.pairs())]}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


def _report(algebra: FiniteAlgebra, theorem: str, instances: int,
            violations: list[Violation], t0: float) -> CheckReport:
    return CheckReport(
        algebra=algebra.name,
        theorem=theorem,
        result="holds" if not violations else "fails",
        instances_checked=instances,
        violations=violations,
        elapsed=time.monotonic() - t0,
    )


# ---------------------------------------------------------------------------
# Single-instance claim evaluation


def _subrel_claims(algebra, alpha, R, S):
    arel = alpha.to_binrel()
    lhs = arel & R.compose(S)
    left = arel & compatible_closure(R | S.converse(), algebra)
    right = arel & compatible_closure(R.converse() | S, algebra)
    return [("inclusion", lhs, rel_plus(left, right))]


def _subrelpiu_claims(algebra, alpha, R, S):
    arel = alpha.to_binrel()
    rc, sc = R.converse(), S.converse()
    e0 = arel & rel_plus(R, S)
    e1 = rel_plus(arel & compatible_closure(R | sc, algebra),
                  arel & compatible_closure(rc | S, algebra))
    e2 = rel_plus(arel & compatible_closure(R | S, algebra),
                  arel & compatible_closure(rc | sc, algebra))
    e3 = arel & rel_plus(cg(R, algebra).to_binrel(), cg(S, algebra).to_binrel())
    return [
        ("inclusion", e0, e1),
        ("eq1_forward", e1, e2),
        ("eq1_backward", e2, e1),
        ("eq2_forward", e2, e3),
        ("eq2_backward", e3, e2),
    ]


def _wtip_claims(algebra, alpha, theta):
    arel = alpha.to_binrel()
    lhs = arel & theta.transitive_closure()
    rhs = (arel & theta).transitive_closure()
    return [("forward", lhs, rhs), ("backward", rhs, lhs)]


def _rr_claims(algebra, alpha, R):
    arel = alpha.to_binrel()
    ov = compatible_closure(R, algebra)
    ovc = ov.converse()
    e0 = arel & rel_plus(R, R.converse())
    e1 = arel & rel_plus(ov, ovc)
    e2 = rel_plus(arel & ov, arel & ovc)
    e3 = arel & cg(R, algebra).to_binrel()
    return [
        ("inclusion", e0, e1),
        ("eq1_forward", e1, e2),
        ("eq1_backward", e2, e1),
        ("eq2_forward", e2, e3),
        ("eq2_backward", e3, e2),
    ]


_CLAIM_BUILDERS = {
    "subrel": _subrel_claims,
    "subrelpiu": _subrelpiu_claims,
    "wtip": _wtip_claims,
    "rr": _rr_claims,
}


def _first_missing(lhs: BinRel, rhs: BinRel) -> Optional[tuple[int, int]]:
    extra = lhs.bits & ~rhs.bits
    if not extra:
        return None
    low = extra & -extra
    return divmod(low.bit_length() - 1, lhs.n)


def _eval_binding(algebra, theorem, binding) -> list[Violation]:
    claims = _CLAIM_BUILDERS[theorem](algebra, **binding)
    out = []
    for name, lhs, rhs in claims:
        pair = _first_missing(lhs, rhs)
        if pair is not None:
            out.append(Violation(binding=dict(binding), missing_pair=pair,
                                 failed_claim=name))
    return out


def _require_congruence(algebra, alpha) -> None:
    if not isinstance(alpha, Partition):
        raise TypeError(f"alpha must be a Partition, got {type(alpha).__name__}")
    if alpha.n != algebra.size:
        raise ValueError(f"size mismatch: alpha on {alpha.n}, algebra on {algebra.size}")
    if not is_congruence(alpha, algebra):
        raise ValueError("alpha is not a congruence of the algebra")


def _require_reflexive(name, rel, size) -> None:
    if not isinstance(rel, BinRel):
        raise TypeError(f"{name} must be a BinRel, got {type(rel).__name__}")
    if rel.n != size:
        raise ValueError(f"size mismatch: {name} on {rel.n}, algebra on {size}")
    if not rel.is_reflexive():
        raise ValueError(f"{name} must be reflexive")


def verify_subrel(algebra, alpha, R, S) -> CheckReport:
    """alpha meet (R;S) is contained in the alternating join of the two
    mixed-converse closures, for reflexive R, S and a congruence alpha."""
    t0 = time.monotonic()
    _require_congruence(algebra, alpha)
    _require_reflexive("R", R, algebra.size)
    _require_reflexive("S", S, algebra.size)
    vs = _eval_binding(algebra, "subrel", {"alpha": alpha, "R": R, "S": S})
    return _report(algebra, "subrel", 1, vs, t0)


def verify_subrelpiu(algebra, alpha, R, S) -> CheckReport:
    """The chain: alpha meet (R+S) sits inside the mixed-closure join, which
    equals the plain-closure join, which equals alpha meet (Cg R + Cg S)."""
    t0 = time.monotonic()
    _require_congruence(algebra, alpha)
    _require_reflexive("R", R, algebra.size)
    _require_reflexive("S", S, algebra.size)
    vs = _eval_binding(algebra, "subrelpiu", {"alpha": alpha, "R": R, "S": S})
    return _report(algebra, "subrelpiu", 1, vs, t0)


def verify_wtip(algebra, alpha, theta) -> CheckReport:
    """alpha meet theta* equals (alpha meet theta)* for a tolerance theta."""
    t0 = time.monotonic()
    _require_congruence(algebra, alpha)
    if not isinstance(theta, BinRel):
        raise TypeError(f"theta must be a BinRel, got {type(theta).__name__}")
    if theta.n != algebra.size:
        raise ValueError(f"size mismatch: theta on {theta.n}, algebra on {algebra.size}")
    if not classify(theta, algebra).is_tolerance:
        raise ValueError("theta is not a tolerance (reflexive, symmetric, compatible)")
    vs = _eval_binding(algebra, "wtip", {"alpha": alpha, "theta": theta})
    return _report(algebra, "wtip", 1, vs, t0)


def verify_rr(algebra, alpha, R) -> CheckReport:
    """alpha meet (R+R converse) sits inside alpha meet the closure join,
    which splits as a join of meets, which is alpha meet Cg(R)."""
    t0 = time.monotonic()
    _require_congruence(algebra, alpha)
    _require_reflexive("R", R, algebra.size)
    vs = _eval_binding(algebra, "rr", {"alpha": alpha, "R": R})
    return _report(algebra, "rr", 1, vs, t0)


# ---------------------------------------------------------------------------
# Quantifier domains and sweeps


def reflexive_domain(n: int, strategy: str, rng: Optional[random.Random] = None,
                     samples: int = 0) -> list[BinRel]:
    """Domain for one reflexive-relation quantifier.

    exhaust: all 2^(n*n-n) reflexive relations (guarded, sizes over 3 blow up);
    principal: the diagonal plus every one-extra-pair relation;
    sample: the principal domain plus seeded random draws.
    """
    if strategy == "exhaust":
        if n > EXHAUST_REFLEXIVE_LIMIT:
            raise ValueError(
                f"exhaust would enumerate 2^{n * n - n} reflexive relations on "
                f"size {n}; only sizes <= {EXHAUST_REFLEXIVE_LIMIT} are supported")
        offdiag = [(a, b) for a in range(n) for b in range(n) if a != b]
        diag = BinRel.diagonal(n).bits
        out = []
        for mask in range(1 << len(offdiag)):
            bits = diag
            for i in _iter_bits(mask):
                a, b = offdiag[i]
                bits |= 1 << (a * n + b)
            out.append(BinRel(n, bits))
        return out
    if strategy == "principal":
        out = [BinRel.diagonal(n)]
        for a in range(n):
            for b in range(n):
                if a != b:
                    out.append(BinRel.from_pairs(n, [(a, b)], reflexive_close=True))
        return out
    if strategy == "sample":
        out = reflexive_domain(n, "principal")
        if rng is None:
            raise ValueError("sample strategy needs a seeded generator")
        for _ in range(samples):
            out.append(BinRel(n, _random_reflexive_bits(n, rng.random(), rng)))
        return out
    raise ValueError(f"unknown strategy {strategy!r}")


def _rs_pairs(n: int, strategy: str, rng: random.Random,
              samples: int) -> list[tuple[BinRel, BinRel]]:
    # Joint (R, S) grid: full cross product for exhaust/principal, and the
    # principal cross plus seeded joint draws for sample.
    if strategy in ("exhaust", "principal"):
        dom = reflexive_domain(n, strategy)
        return [(r, s) for r in dom for s in dom]
    if strategy == "sample":
        dom = reflexive_domain(n, "principal")
        out = [(r, s) for r in dom for s in dom]
        for _ in range(samples):
            r = BinRel(n, _random_reflexive_bits(n, rng.random(), rng))
            s = BinRel(n, _random_reflexive_bits(n, rng.random(), rng))
            out.append((r, s))
        return out
    raise ValueError(f"unknown strategy {strategy!r}")


def _theorem_bindings(algebra, theorem, strategy, seed, samples,
                      congs) -> list[dict]:
    n = algebra.size
    rng = random.Random(f"{seed}:{theorem}")
    if theorem in ("subrel", "subrelpiu"):
        pairs = _rs_pairs(n, strategy, rng, samples)
        return [{"alpha": a, "R": r, "S": s} for a in congs for (r, s) in pairs]
    if theorem == "rr":
        dom = reflexive_domain(n, strategy, rng, samples)
        return [{"alpha": a, "R": r} for a in congs for r in dom]
    if theorem == "wtip":
        # Tolerances are always swept exhaustively; there is no useful
        # principal analogue and the enumerator already bounds the size.
        tols = enumerate_tolerances(algebra)
        return [{"alpha": a, "theta": t} for a in congs for t in tols]
    raise ValueError(f"unknown theorem {theorem!r}")


_POOL_STATE: dict = {}


def _pool_init(algebra, theorem):
    _POOL_STATE["algebra"] = algebra
    _POOL_STATE["theorem"] = theorem


def _pool_eval(binding):
    return _eval_binding(_POOL_STATE["algebra"], _POOL_STATE["theorem"], binding)


def _sweep_theorem(algebra, theorem, strategy, seed, samples, congs,
                   jobs, max_violations) -> CheckReport:
    t0 = time.monotonic()
    bindings = _theorem_bindings(algebra, theorem, strategy, seed, samples, congs)
    violations: list[Violation] = []
    checked = 0
    if jobs <= 1 or len(bindings) < 64:
        for b in bindings:
            checked += 1
            vs = _eval_binding(algebra, theorem, b)
            if vs:
                violations.extend(vs)
                if len(violations) >= max_violations:
                    break
    else:
        ctx = get_context("fork")
        chunk = max(16, len(bindings) // (jobs * 8))
        with ctx.Pool(jobs, initializer=_pool_init,
                      initargs=(algebra, theorem)) as pool:
            for vs in pool.imap(_pool_eval, bindings, chunksize=chunk):
                checked += 1
                if vs:
                    violations.extend(vs)
                    if len(violations) >= max_violations:
                        pool.terminate()
                        break
    return _report(algebra, theorem, checked, violations[:max_violations], t0)


def sweep_iter(algebra, strategy: str = "exhaust", seed: int = 0,
               samples: int = 1000, theorems: Optional[Iterable[str]] = None,
               jobs: int = 1, max_violations: int = 1,
               ) -> Iterator[tuple[str, CheckReport]]:
    """Run the quantifier grid for each requested law, yielding reports as
    they complete.  Deterministic for fixed (strategy, seed, samples)."""
    names = tuple(theorems) if theorems is not None else THEOREM_NAMES
    for t in names:
        if t not in THEOREM_NAMES:
            raise ValueError(f"unknown theorem {t!r}; expected one of {THEOREM_NAMES}")
    congs = enumerate_congruences(algebra)
    for t in names:
        yield t, _sweep_theorem(algebra, t, strategy, seed, samples, congs,
                                jobs, max_violations)


def sweep(algebra, strategy: str = "exhaust", seed: int = 0,
          samples: int = 1000, theorems: Optional[Iterable[str]] = None,
          jobs: int = 1, max_violations: int = 1) -> dict[str, CheckReport]:
    return dict(sweep_iter(algebra, strategy, seed, samples, theorems,
                           jobs, max_violations))


# ---------------------------------------------------------------------------
# Subsquare drivers: the 4-generated hypothesis and lattice modularity


class _ConLattice:
    """Congruence lattice of one induced algebra with meet/join tables."""

    def __init__(self, algebra: FiniteAlgebra):
        self.cons = enumerate_congruences(algebra)
        self.n = algebra.size
        L = len(self.cons)
        self.bits = [p.to_binrel().bits for p in self.cons]
        index = {p: i for i, p in enumerate(self.cons)}
        self.meet = [[0] * L for _ in range(L)]
        self.join = [[0] * L for _ in range(L)]
        for i in range(L):
            self.meet[i][i] = self.join[i][i] = i
            pi = self.cons[i]
            for j in range(i + 1, L):
                m = index[pi.meet(self.cons[j])]
                self.meet[i][j] = self.meet[j][i] = m
                jn = index[pi.join(self.cons[j])]
                self.join[i][j] = self.join[j][i] = jn
        # delta <= beta iff their meet is delta
        self.above = [
            [b for b in range(L) if self.meet[d][b] == d] for d in range(L)
        ]
        self.zero = index[Partition.identity(self.n)]
        self.one = index[Partition.full(self.n)]


def _hypothesis_verdict(induced: FiniteAlgebra):
    """Test beta meet (gamma;delta;gamma) <= (beta meet gamma) + delta over
    all congruence triples with delta below beta.  Returns the number of
    triples covered and either None or (beta, gamma, delta, pair, claim)."""
    lat = _ConLattice(induced)
    n = lat.n
    L = len(lat.cons)
    bits, meet, join, above = lat.bits, lat.meet, lat.join, lat.above
    checked = 0
    for gi in range(L):
        trivial_g = gi == lat.zero or gi == lat.one
        gbits = bits[gi]
        for di in range(L):
            cands = above[di]
            if trivial_g or di == lat.zero:
                # gamma trivial or delta = 0: the inclusion is immediate
                checked += len(cands)
                continue
            mid = _compose_bits(_compose_bits(gbits, bits[di], n), gbits, n)
            meet_row = meet[gi]
            for bi in cands:
                checked += 1
                if bi == lat.one or bi == di:
                    continue
                extra = bits[bi] & mid & ~bits[join[meet_row[bi]][di]]
                if extra:
                    pair = divmod((extra & -extra).bit_length() - 1, n)
                    return checked, (lat.cons[bi], lat.cons[gi], lat.cons[di],
                                     pair, "hypothesis_inclusion")
    return checked, None


def _modularity_verdict(induced: FiniteAlgebra):
    """Test the modular law beta meet (gamma + delta) = (beta meet gamma) + delta
    for delta below beta; reports whichever direction breaks."""
    lat = _ConLattice(induced)
    n = lat.n
    L = len(lat.cons)
    bits, meet, join, above = lat.bits, lat.meet, lat.join, lat.above
    checked = 0
    for gi in range(L):
        trivial_g = gi == lat.zero or gi == lat.one
        for di in range(L):
            cands = above[di]
            if trivial_g or di == lat.zero:
                checked += len(cands)
                continue
            jrow = join[gi][di]
            meet_row = meet[gi]
            for bi in cands:
                checked += 1
                if bi == lat.one or bi == di:
                    continue
                lhs = bits[bi] & bits[jrow]
                rhs = bits[join[meet_row[bi]][di]]
                extra = lhs & ~rhs
                claim = "modular_law_forward"
                if not extra:
                    extra = rhs & ~lhs
                    claim = "modular_law_backward"
                if extra:
                    pair = divmod((extra & -extra).bit_length() - 1, n)
                    return checked, (lat.cons[bi], lat.cons[gi], lat.cons[di],
                                     pair, claim)
    return checked, None


def _check_subsquares(algebra, verdict_fn, theorem, seed_limit, max_size,
                      max_violations) -> CheckReport:
    t0 = time.monotonic()
    limit = exhaustive_size_limit() if max_size is None else max_size
    if algebra.size > limit:
        raise ValueError(
            f"size {algebra.size} exceeds the exhaustive driver bound {limit} "
            "(set CONGREL_MAX_SIZE or max_size to override)")
    sq = square(algebra)
    n = algebra.size
    seen_seed_sets: set = set()
    seen_elements: set = set()
    verdict_cache: dict[FiniteAlgebra, tuple[int, object]] = {}
    violations: list[Violation] = []
    checked = 0
    processed = 0
    for seeds in itertools.combinations_with_replacement(range(sq.size), 4):
        if seed_limit is not None and processed >= seed_limit:
            break
        processed += 1
        key = tuple(sorted(set(seeds)))
        if key in seen_seed_sets:
            continue
        seen_seed_sets.add(key)
        sub = SubSquare(algebra, generate_subuniverse(sq, key))
        elem_key = tuple(sorted(sub.codes))
        if elem_key in seen_elements:
            continue
        seen_elements.add(elem_key)
        cached = verdict_cache.get(sub.induced)
        if cached is None:
            cached = verdict_fn(sub.induced)
            verdict_cache[sub.induced] = cached
        count, verdict = cached
        checked += count
        if verdict is not None:
            beta, gamma, delta, pair, claim = verdict
            violations.append(Violation(
                binding={
                    "generators": tuple(divmod(s, n) for s in seeds),
                    "subsquare": sub.elements,
                    "beta": beta,
                    "gamma": gamma,
                    "delta": delta,
                },
                missing_pair=pair,
                failed_claim=claim,
            ))
            if len(violations) >= max_violations:
                break
    return _report(algebra, theorem, checked, violations, t0)


def check_hypothesis(algebra, seed_limit: Optional[int] = None,
                     max_size: Optional[int] = None,
                     max_violations: int = 1) -> CheckReport:
    """Sweep every subalgebra of A x A generated by four pairs and test the
    congruence inclusion beta meet (gamma;delta;gamma) <= (beta meet gamma)
    + delta whenever delta is below beta."""
    return _check_subsquares(algebra, _hypothesis_verdict, "hypothesis",
                             seed_limit, max_size, max_violations)


def check_modularity_subsquares(algebra, seed_limit: Optional[int] = None,
                                max_size: Optional[int] = None,
                                max_violations: int = 1) -> CheckReport:
    """Same sweep, testing the lattice modular law on each congruence lattice."""
    return _check_subsquares(algebra, _modularity_verdict, "modularity",
                             seed_limit, max_size, max_violations)


# ---------------------------------------------------------------------------
# Witness chains


@dataclass
class WitnessChain:
    """An alternating chain certifying one left-side pair of the composition
    law.  Even links keep the first coordinate fixed and move the second
    inside alpha; odd links do the opposite."""

    algebra: FiniteAlgebra
    alpha: Partition
    r: BinRel
    s: BinRel
    generators: tuple[tuple[int, int], ...]
    subsquare: SubSquare
    pairs: tuple[tuple[int, int], ...]
    tags: tuple[str, ...]

    def revalidate(self) -> list[str]:
        """Re-check every guarantee from scratch; empty list means valid."""
        problems = []
        a_pair, c_pair = self.generators[0], self.generators[3]
        if self.pairs[0] != a_pair:
            problems.append(f"chain starts at {self.pairs[0]}, expected {a_pair}")
        if self.pairs[-1] != c_pair:
            problems.append(f"chain ends at {self.pairs[-1]}, expected {c_pair}")
        if len(self.tags) != len(self.pairs) - 1:
            problems.append("tag count does not match link count")
        closure = compatible_closure(self.r | self.s.converse(), self.algebra)
        for i, (x, y) in enumerate(self.pairs):
            if (x, y) not in self.subsquare.index:
                problems.append(f"pair {i} = ({x},{y}) is outside the subsquare")
            if not closure.has(x, y):
                problems.append(
                    f"pair {i} = ({x},{y}) is outside the mixed-converse closure")
        for i, tag in enumerate(self.tags):
            x1, y1 = self.pairs[i]
            x2, y2 = self.pairs[i + 1]
            want = "y" if i % 2 == 0 else "x"
            if tag != want:
                problems.append(f"link {i} tagged {tag!r}, expected {want!r}")
            if tag == "y":
                if x1 != x2 or not self.alpha.same(y1, y2):
                    problems.append(f"link {i} is not a y-step inside alpha")
            else:
                if y1 != y2 or not self.alpha.same(x1, x2):
                    problems.append(f"link {i} is not an x-step inside alpha")
        for i, (x, _) in enumerate(self.pairs):
            for j, (_, y) in enumerate(self.pairs):
                if not self.alpha.same(x, y):
                    problems.append(
                        f"first coordinate {i} and second coordinate {j} "
                        "are not alpha-related")
        return problems

    def to_json_dict(self) -> dict:
        return {
            "result": "chain",
            "generators": [list(g) for g in self.generators],
            "subsquare": [list(p) for p in self.subsquare.elements],
            "chain": [list(p) for p in self.pairs],
            "tags": list(self.tags),
            "alpha": {"partition": self.alpha.blocks()},
            "R": {"size": self.r.n, "pairs": [list(p) for p in sorted(self.r.pairs())]},
            "S": {"size": self.s.n, "pairs": [list(p) for p in sorted(self.s.pairs())]},
        }


@dataclass
class ChainFailure:
    """No alternating path exists: evidence the 4-generated hypothesis fails
    on this subsquare, reported as data rather than raised."""

    generators: tuple[tuple[int, int], ...]
    subsquare: SubSquare
    reason: str

    def to_json_dict(self) -> dict:
        return {
            "result": "no_chain",
            "generators": [list(g) for g in self.generators],
            "subsquare": [list(p) for p in self.subsquare.elements],
            "reason": self.reason,
        }


def witness_chain(algebra, alpha, a: int, b: int, c: int, R, S
                  ) -> Union[WitnessChain, ChainFailure]:
    """Extract the alternating chain from (a,a) to (c,c) inside the
    subalgebra generated by (a,a),(a,b),(c,b),(c,c).

    Requires a alpha c, (a,b) in R, (b,c) in S.  When no chain exists the
    failure is returned as a value: it certifies that the 4-generated
    hypothesis does not hold for this algebra.
    """
    _require_congruence(algebra, alpha)
    _require_reflexive("R", R, algebra.size)
    _require_reflexive("S", S, algebra.size)
    n = algebra.size
    for name, v in (("a", a), ("b", b), ("c", c)):
        if not 0 <= v < n:
            raise ValueError(f"{name} = {v} out of range for size {n}")
    if not alpha.same(a, c):
        raise ValueError(f"a={a} and c={c} are not alpha-related")
    if not R.has(a, b):
        raise ValueError(f"({a},{b}) is not in R")
    if not S.has(b, c):
        raise ValueError(f"({b},{c}) is not in S")
    gens = ((a, a), (a, b), (c, b), (c, c))
    sub = subsquare(algebra, gens)
    ident = Partition.identity(n)
    y_rel = product_relation(ident, alpha, sub)
    x_rel = product_relation(alpha, ident, sub)
    m = len(sub)
    mask = (1 << m) - 1
    y_rows = [(y_rel.bits >> (i * m)) & mask for i in range(m)]
    x_rows = [(x_rel.bits >> (i * m)) & mask for i in range(m)]
    start, goal = sub.index[(a, a)], sub.index[(c, c)]
    prev: dict[tuple[int, int], Optional[tuple[int, int]]] = {(start, 0): None}
    queue = deque([(start, 0)])
    found = None
    while queue:
        state = queue.popleft()
        node, par = state
        if node == goal:
            found = state
            break
        rows = y_rows if par == 0 else x_rows
        for nxt in _iter_bits(rows[node]):
            nstate = (nxt, 1 - par)
            if nstate not in prev:
                prev[nstate] = state
                queue.append(nstate)
    if found is None:
        return ChainFailure(
            generators=gens,
            subsquare=sub,
            reason=(f"({a},{a}) and ({c},{c}) are not connected by alternating "
                    "steps inside the generated subalgebra; the 4-generated "
                    "inclusion hypothesis fails on it"),
        )
    path = []
    cursor: Optional[tuple[int, int]] = found
    while cursor is not None:
        path.append(cursor[0])
        cursor = prev[cursor]
    path.reverse()
    pairs = tuple(sub.elements[i] for i in path)
    tags = tuple("y" if i % 2 == 0 else "x" for i in range(len(pairs) - 1))
    return WitnessChain(algebra=algebra, alpha=alpha, r=R, s=S, generators=gens,
                        subsquare=sub, pairs=pairs, tags=tags)


# ---------------------------------------------------------------------------
# Counterexample search and replay


def search_counterexample(algebra, budget: int = 1000,
                          seed: int = 0) -> Optional[Violation]:
    """Seeded random probing of all four laws; returns the first violation
    found within budget instances, with the law name inside the binding."""
    rng = random.Random(f"{seed}:search")
    n = algebra.size
    congs = enumerate_congruences(algebra)
    offdiag = [(x, y) for x in range(n) for y in range(n) if x != y]
    for _ in range(budget):
        alpha = rng.choice(congs)
        R = BinRel(n, _random_reflexive_bits(n, rng.random(), rng))
        S = BinRel(n, _random_reflexive_bits(n, rng.random(), rng))
        gen = [p for p in offdiag if rng.random() < 0.3]
        theta = compatible_closure(
            BinRel.from_pairs(n, gen + [(y, x) for x, y in gen],
                              reflexive_close=True), algebra)
        for theorem in THEOREM_NAMES:
            binding = {"alpha": alpha, "R": R, "S": S}
            if theorem == "wtip":
                binding = {"alpha": alpha, "theta": theta}
            elif theorem == "rr":
                binding = {"alpha": alpha, "R": R}
            vs = _eval_binding(algebra, theorem, binding)
            if vs:
                v = vs[0]
                v.binding = {"theorem": theorem, **v.binding}
                return v
    return None


def replay(algebra, theorem: str, violation: Violation) -> bool:
    """Re-evaluate one recorded violation from its binding alone.

    True means the violation reproduces: the recorded pair is still on the
    left side of the recorded claim and still missing from the right.
    """
    b = violation.binding
    pair = tuple(violation.missing_pair)
    if theorem in ("hypothesis", "modularity"):
        sub = subsquare(algebra, b["generators"])
        beta, gamma, delta = b["beta"], b["gamma"], b["delta"]
        brel, grel, drel = (p.to_binrel() for p in (beta, gamma, delta))
        if not delta.refines(beta):
            return False
        if theorem == "hypothesis":
            lhs = brel & grel.compose(drel).compose(grel)
            rhs = beta.meet(gamma).join(delta).to_binrel()
        else:
            lhs = brel & gamma.join(delta).to_binrel()
            rhs = beta.meet(gamma).join(delta).to_binrel()
            if violation.failed_claim == "modular_law_backward":
                lhs, rhs = rhs, lhs
        return lhs.has(*pair) and not rhs.has(*pair)
    keys = {"wtip": ("alpha", "theta"), "rr": ("alpha", "R")}.get(
        theorem, ("alpha", "R", "S"))
    claims = _CLAIM_BUILDERS[theorem](algebra, **{k: b[k] for k in keys})
    for name, lhs, rhs in claims:
        if name == violation.failed_claim:
            return lhs.has(*pair) and not rhs.has(*pair)
    return False
