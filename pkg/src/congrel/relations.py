"""Binary relations on {0..n-1} as packed bit matrices, plus partitions.

A relation is stored as a single Python integer: bit ``r*n + c`` set means
(r, c) is in the relation.  Whole-relation boolean algebra (union, meet,
containment) is then one int operation, which is what keeps the exhaustive
sweeps cheap; only composition and transposition touch individual rows.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Iterable, Iterator

if TYPE_CHECKING:
    from .algebra import FiniteAlgebra

__all__ = [
    "BinRel",
    "Partition",
    "RelationFlags",
    "rel_plus",
    "compatible_closure",
    "cg",
    "classify",
    "is_congruence",
    "enumerate_congruences",
    "enumerate_tolerances",
    "random_reflexive",
    "relation_from_json",
    "relation_to_json",
]

TOLERANCE_EXHAUST_LIMIT = 5
CONGRUENCE_SIZE_LIMIT = 40


@lru_cache(maxsize=None)
def _diag_bits(n: int) -> int:
    bits = 0
    for i in range(n):
        bits |= 1 << (i * n + i)
    return bits


def _iter_bits(m: int) -> Iterator[int]:
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def _compose_bits(b1: int, b2: int, n: int) -> int:
    """(a,c) iff some b has (a,b) in the first and (b,c) in the second."""
    mask = (1 << n) - 1
    rows2 = [(b2 >> (i * n)) & mask for i in range(n)]
    out = 0
    for r in range(n):
        m = (b1 >> (r * n)) & mask
        if not m:
            continue
        acc = 0
        while m:
            low = m & -m
            acc |= rows2[low.bit_length() - 1]
            m ^= low
        out |= acc << (r * n)
    return out


def _transitive_closure_bits(bits: int, n: int) -> int:
    # Warshall, one bit-parallel row update per (k, i).
    mask = (1 << n) - 1
    rows = [(bits >> (i * n)) & mask for i in range(n)]
    for k in range(n):
        kbit = 1 << k
        rowk = rows[k]
        for i in range(n):
            if rows[i] & kbit:
                rows[i] |= rowk
    out = 0
    for i in range(n):
        out |= rows[i] << (i * n)
    return out


def _converse_bits(bits: int, n: int) -> int:
    out = 0
    for b in _iter_bits(bits):
        r, c = divmod(b, n)
        out |= 1 << (c * n + r)
    return out


@dataclass(frozen=True)
class BinRel:
    """Immutable binary relation on {0..n-1}, one int of n*n bits."""

    n: int
    bits: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"relation size must be positive, got {self.n}")
        if not 0 <= self.bits < 1 << (self.n * self.n):
            raise ValueError("relation bits out of range for its size")

    @staticmethod
    def empty(n: int) -> "BinRel":
        return BinRel(n, 0)

    @staticmethod
    def diagonal(n: int) -> "BinRel":
        return BinRel(n, _diag_bits(n))

    @staticmethod
    def full(n: int) -> "BinRel":
        return BinRel(n, (1 << (n * n)) - 1)

    @staticmethod
    def from_pairs(n: int, pairs: Iterable[tuple[int, int]],
                   reflexive_close: bool = False) -> "BinRel":
        bits = _diag_bits(n) if reflexive_close else 0
        for a, b in pairs:
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"pair ({a},{b}) out of range for size {n}")
            bits |= 1 << (a * n + b)
        return BinRel(n, bits)

    def _check_size(self, other: "BinRel") -> None:
        if self.n != other.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")

    def has(self, a: int, b: int) -> bool:
        return self.bits >> (a * self.n + b) & 1 == 1

    def pairs(self) -> list[tuple[int, int]]:
        n = self.n
        return [divmod(b, n) for b in _iter_bits(self.bits)]

    def count(self) -> int:
        return bin(self.bits).count("1")

    def rows(self) -> list[int]:
        n = self.n
        mask = (1 << n) - 1
        return [(self.bits >> (i * n)) & mask for i in range(n)]

    def __or__(self, other: "BinRel") -> "BinRel":
        self._check_size(other)
        return BinRel(self.n, self.bits | other.bits)

    def __and__(self, other: "BinRel") -> "BinRel":
        self._check_size(other)
        return BinRel(self.n, self.bits & other.bits)

    def __le__(self, other: "BinRel") -> bool:
        self._check_size(other)
        return self.bits & ~other.bits == 0

    def issubset(self, other: "BinRel") -> bool:
        return self <= other

    def converse(self) -> "BinRel":
        return BinRel(self.n, _converse_bits(self.bits, self.n))

    def compose(self, other: "BinRel") -> "BinRel":
        self._check_size(other)
        return BinRel(self.n, _compose_bits(self.bits, other.bits, self.n))

    def reflexive_closure(self) -> "BinRel":
        return BinRel(self.n, self.bits | _diag_bits(self.n))

    def transitive_closure(self) -> "BinRel":
        return BinRel(self.n, _transitive_closure_bits(self.bits, self.n))

    def is_reflexive(self) -> bool:
        d = _diag_bits(self.n)
        return self.bits & d == d

    def is_symmetric(self) -> bool:
        return self.bits == _converse_bits(self.bits, self.n)

    def is_transitive(self) -> bool:
        return _compose_bits(self.bits, self.bits, self.n) & ~self.bits == 0

    def to_text(self) -> str:
        """Canonical dump: one row of 0/1 characters per line."""
        n = self.n
        return "\n".join(
            "".join("1" if self.has(r, c) else "0" for c in range(n))
            for r in range(n)
        )

    @staticmethod
    def from_text(text: str) -> "BinRel":
        lines = [ln.strip() for ln in text.strip().splitlines()]
        n = len(lines)
        bits = 0
        for r, ln in enumerate(lines):
            if len(ln) != n or set(ln) - {"0", "1"}:
                raise ValueError(f"bad relation row {r}: {ln!r}")
            for c, ch in enumerate(ln):
                if ch == "1":
                    bits |= 1 << (r * n + c)
        return BinRel(n, bits)

    def __repr__(self) -> str:
        return f"BinRel({self.n}, pairs={sorted(self.pairs())})"


def relation_from_json(obj) -> BinRel:
    """Build a relation from the JSON literal {"size", "pairs", "reflexive_close"?}."""
    if not isinstance(obj, dict):
        raise ValueError("relation literal must be a JSON object")
    try:
        n = obj["size"]
        raw = obj["pairs"]
    except KeyError as exc:
        raise ValueError(f"relation literal missing key {exc}") from None
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"relation size must be a positive integer, got {n!r}")
    if not isinstance(raw, list):
        raise ValueError("relation pairs must be a list of [a, b] pairs")
    pairs = []
    for entry in raw:
        if (not isinstance(entry, (list, tuple)) or len(entry) != 2
                or not all(isinstance(v, int) for v in entry)):
            raise ValueError(f"bad relation pair {entry!r}")
        pairs.append((entry[0], entry[1]))
    return BinRel.from_pairs(n, pairs, bool(obj.get("reflexive_close", False)))


def relation_to_json(rel: BinRel) -> dict:
    return {"size": rel.n, "pairs": [list(p) for p in sorted(rel.pairs())]}


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def _canonical_labels(raw: Iterable[int]) -> tuple[int, ...]:
    # Renumber block ids in order of first appearance; since elements are
    # scanned ascending this keys every block by its least element.
    relabel: dict[int, int] = {}
    out = []
    for r in raw:
        if r not in relabel:
            relabel[r] = len(relabel)
        out.append(relabel[r])
    return tuple(out)


@dataclass(frozen=True)
class Partition:
    """Partition of {0..n-1} in canonical form.

    labels[i] is the block id of element i; ids are assigned in order of
    each block's least element, so equal partitions compare equal.
    """

    n: int
    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.labels) != self.n:
            raise ValueError("label vector length differs from size")
        if self.labels != _canonical_labels(self.labels):
            raise ValueError("labels are not in canonical form")

    @staticmethod
    def identity(n: int) -> "Partition":
        return Partition(n, tuple(range(n)))

    @staticmethod
    def full(n: int) -> "Partition":
        return Partition(n, (0,) * n)

    @staticmethod
    def from_labels(n: int, raw: Iterable[int]) -> "Partition":
        return Partition(n, _canonical_labels(raw))

    @staticmethod
    def from_blocks(n: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        raw = [-1] * n
        for b, block in enumerate(blocks):
            for x in block:
                if not 0 <= x < n:
                    raise ValueError(f"element {x} out of range for size {n}")
                if raw[x] != -1:
                    raise ValueError(f"element {x} appears in two blocks")
                raw[x] = b
        if -1 in raw:
            raise ValueError(f"element {raw.index(-1)} missing from blocks")
        return Partition.from_labels(n, raw)

    @staticmethod
    def from_pairs(n: int, pairs: Iterable[tuple[int, int]]) -> "Partition":
        uf = _UnionFind(n)
        for a, b in pairs:
            uf.union(a, b)
        return Partition.from_labels(n, [uf.find(i) for i in range(n)])

    @staticmethod
    def from_binrel(rel: BinRel) -> "Partition":
        if not (rel.is_reflexive() and rel.is_symmetric() and rel.is_transitive()):
            raise ValueError("relation is not an equivalence")
        n = rel.n
        mask = (1 << n) - 1
        return Partition.from_labels(n, [(rel.bits >> (i * n)) & mask for i in range(n)])

    def num_blocks(self) -> int:
        return max(self.labels) + 1

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_blocks())]
        for i, b in enumerate(self.labels):
            out[b].append(i)
        return out

    def same(self, a: int, b: int) -> bool:
        return self.labels[a] == self.labels[b]

    def meet(self, other: "Partition") -> "Partition":
        if self.n != other.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")
        la, lb = self.labels, other.labels
        k = other.num_blocks()
        return Partition.from_labels(self.n, [la[i] * k + lb[i] for i in range(self.n)])

    def join(self, other: "Partition") -> "Partition":
        if self.n != other.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")
        uf = _UnionFind(self.n)
        first_a: dict[int, int] = {}
        first_b: dict[int, int] = {}
        for i in range(self.n):
            a, b = self.labels[i], other.labels[i]
            if a in first_a:
                uf.union(first_a[a], i)
            else:
                first_a[a] = i
            if b in first_b:
                uf.union(first_b[b], i)
            else:
                first_b[b] = i
        return Partition.from_labels(self.n, [uf.find(i) for i in range(self.n)])

    def refines(self, other: "Partition") -> bool:
        """True when every block of self sits inside a block of other."""
        if self.n != other.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")
        image: dict[int, int] = {}
        for i in range(self.n):
            b = self.labels[i]
            if b in image:
                if image[b] != other.labels[i]:
                    return False
            else:
                image[b] = other.labels[i]
        return True

    def to_binrel(self) -> BinRel:
        return BinRel(self.n, _partition_bits(self))

    def __repr__(self) -> str:
        return f"Partition({self.blocks()})"


@lru_cache(maxsize=None)
def _block_row_bits(key: tuple[int, ...]) -> tuple[int, ...]:
    # For each element, the bitmask of its block.
    n = len(key)
    block_masks: dict[int, int] = {}
    for i, b in enumerate(key):
        block_masks[b] = block_masks.get(b, 0) | (1 << i)
    return tuple(block_masks[b] for b in key)


def _partition_bits(p: Partition) -> int:
    rows = _block_row_bits(p.labels)
    n = p.n
    bits = 0
    for i in range(n):
        bits |= rows[i] << (i * n)
    return bits


def rel_plus(r: BinRel, s: BinRel) -> BinRel:
    """Alternating join of reflexive relations: transitive closure of r | s.

    Under reflexivity this equals the transitive closure of r;s as well,
    which is asserted in debug runs.  Non-reflexive operands are rejected
    because the equality (and the intended meaning) breaks without them.
    """
    r._check_size(s)
    if not r.is_reflexive():
        raise ValueError("rel_plus requires reflexive operands (left is not)")
    if not s.is_reflexive():
        raise ValueError("rel_plus requires reflexive operands (right is not)")
    out = (r | s).transitive_closure()
    assert out == r.compose(s).transitive_closure()
    return out


def _constant_pairs(algebra: "FiniteAlgebra") -> list[tuple[int, int]]:
    return [(op.table[0], op.table[0]) for op in algebra.operations if op.arity == 0]


def compatible_closure(rel: BinRel, algebra: "FiniteAlgebra") -> BinRel:
    """Least superset of rel closed under every operation applied coordinatewise."""
    n = algebra.size
    if rel.n != n:
        raise ValueError(f"size mismatch: relation on {rel.n}, algebra on {n}")
    pairs: list[tuple[int, int]] = rel.pairs()
    seen = set(pairs)
    for p in _constant_pairs(algebra):
        if p not in seen:
            seen.add(p)
            pairs.append(p)
    unary = [op.table for op in algebra.operations if op.arity == 1]
    binary = [op.table for op in algebra.operations if op.arity == 2]
    other = [op for op in algebra.operations if op.arity > 2]
    i = 0
    while i < len(pairs):
        a, b = pairs[i]
        i += 1
        for t in unary:
            q = (t[a], t[b])
            if q not in seen:
                seen.add(q)
                pairs.append(q)
        snapshot = pairs[: len(pairs)]
        for t in binary:
            an = a * n
            bn = b * n
            for c, d in snapshot:
                for q in ((t[an + c], t[bn + d]), (t[c * n + a], t[d * n + b])):
                    if q not in seen:
                        seen.add(q)
                        pairs.append(q)
        for op in other:
            k = op.arity
            for pos in range(k):
                for rest in itertools.product(snapshot, repeat=k - 1):
                    args = rest[:pos] + ((a, b),) + rest[pos:]
                    q = (op.apply(*(x for x, _ in args)), op.apply(*(y for _, y in args)))
                    if q not in seen:
                        seen.add(q)
                        pairs.append(q)
    return BinRel.from_pairs(n, pairs)


def _cg_unionfind(rel: BinRel, algebra: "FiniteAlgebra") -> Partition:
    # Merge the generating pairs, then propagate single-coordinate
    # replacements until stable; transitivity comes from the union-find.
    n = algebra.size
    uf = _UnionFind(n)
    queue: list[tuple[int, int]] = []

    def union(a: int, b: int) -> None:
        if uf.union(a, b):
            queue.append((a, b))

    for a, b in rel.pairs():
        union(a, b)
    unary = [op.table for op in algebra.operations if op.arity == 1]
    binary = [op.table for op in algebra.operations if op.arity == 2]
    other = [op for op in algebra.operations if op.arity > 2]
    qi = 0
    while qi < len(queue):
        a, b = queue[qi]
        qi += 1
        for t in unary:
            union(t[a], t[b])
        for t in binary:
            an = a * n
            bn = b * n
            for c in range(n):
                union(t[an + c], t[bn + c])
                union(t[c * n + a], t[c * n + b])
        for op in other:
            k = op.arity
            for pos in range(k):
                for rest in itertools.product(range(n), repeat=k - 1):
                    left = rest[:pos] + (a,) + rest[pos:]
                    right = rest[:pos] + (b,) + rest[pos:]
                    union(op.apply(*left), op.apply(*right))
    return Partition.from_labels(n, [uf.find(i) for i in range(n)])


def cg(rel: BinRel, algebra: "FiniteAlgebra", strategy: str = "unionfind") -> Partition:
    """Least congruence of the algebra containing rel.

    strategy "formula" closes rel compatibly and joins it with its converse;
    strategy "unionfind" propagates merges through the operation tables.
    Both must agree; tests cross-check them.
    """
    if rel.n != algebra.size:
        raise ValueError(f"size mismatch: relation on {rel.n}, algebra on {algebra.size}")
    if strategy == "formula":
        ov = compatible_closure(rel.reflexive_closure(), algebra)
        return Partition.from_binrel(rel_plus(ov, ov.converse()))
    if strategy == "unionfind":
        return _cg_unionfind(rel, algebra)
    raise ValueError(f"unknown cg strategy {strategy!r}")


@dataclass(frozen=True)
class RelationFlags:
    reflexive: bool
    symmetric: bool
    transitive: bool
    compatible: bool
    is_tolerance: bool
    is_congruence: bool


def _is_compatible(rel: BinRel, algebra: "FiniteAlgebra") -> bool:
    n = algebra.size
    pairs = rel.pairs()
    bits = rel.bits
    for op in algebra.operations:
        if op.arity == 0:
            c = op.table[0]
            if not bits >> (c * n + c) & 1:
                return False
        elif op.arity == 1:
            t = op.table
            for a, b in pairs:
                if not bits >> (t[a] * n + t[b]) & 1:
                    return False
        elif op.arity == 2:
            t = op.table
            for a, b in pairs:
                an = a * n
                bn = b * n
                for c, d in pairs:
                    if not bits >> (t[an + c] * n + t[bn + d]) & 1:
                        return False
        else:
            for combo in itertools.product(pairs, repeat=op.arity):
                lhs = op.apply(*(x for x, _ in combo))
                rhs = op.apply(*(y for _, y in combo))
                if not bits >> (lhs * n + rhs) & 1:
                    return False
    return True


def classify(rel: BinRel, algebra: "FiniteAlgebra") -> RelationFlags:
    """Flags for one relation: order properties plus compatibility."""
    if rel.n != algebra.size:
        raise ValueError(f"size mismatch: relation on {rel.n}, algebra on {algebra.size}")
    refl = rel.is_reflexive()
    symm = rel.is_symmetric()
    trans = rel.is_transitive()
    comp = _is_compatible(rel, algebra)
    return RelationFlags(
        reflexive=refl,
        symmetric=symm,
        transitive=trans,
        compatible=comp,
        is_tolerance=refl and symm and comp,
        is_congruence=refl and symm and trans and comp,
    )


@lru_cache(maxsize=None)
def is_congruence(p: Partition, algebra: "FiniteAlgebra") -> bool:
    """Partition compatibility via single-coordinate replacement.

    For equivalences this is equivalent to full coordinatewise
    compatibility (chain the replacements and use transitivity).
    """
    if p.n != algebra.size:
        raise ValueError(f"size mismatch: partition on {p.n}, algebra on {algebra.size}")
    n = algebra.size
    labels = p.labels
    blocks = p.blocks()
    for op in algebra.operations:
        if op.arity == 0:
            continue
        if op.arity == 1:
            t = op.table
            for block in blocks:
                first = t[block[0]]
                if any(labels[t[x]] != labels[first] for x in block[1:]):
                    return False
        elif op.arity == 2:
            t = op.table
            for block in blocks:
                rep = block[0]
                for x in block[1:]:
                    xn = x * n
                    rn = rep * n
                    for c in range(n):
                        if labels[t[xn + c]] != labels[t[rn + c]]:
                            return False
                        if labels[t[c * n + x]] != labels[t[c * n + rep]]:
                            return False
        else:
            k = op.arity
            for block in blocks:
                rep = block[0]
                for x in block[1:]:
                    for pos in range(k):
                        for rest in itertools.product(range(n), repeat=k - 1):
                            u = rest[:pos] + (x,) + rest[pos:]
                            v = rest[:pos] + (rep,) + rest[pos:]
                            if labels[op.apply(*u)] != labels[op.apply(*v)]:
                                return False
    return True


def enumerate_congruences(algebra: "FiniteAlgebra",
                          max_size: int = CONGRUENCE_SIZE_LIMIT) -> tuple[Partition, ...]:
    """All congruences: principal ones closed under pairwise join, plus 0.

    Every congruence is the join of the principal congruences of its pairs,
    so the closure is complete.  Result is deterministic: coarsest last.
    """
    n = algebra.size
    if n > max_size:
        raise ValueError(f"size {n} exceeds congruence enumeration bound {max_size}")
    zero = Partition.identity(n)
    found = {zero}
    frontier: list[Partition] = []
    for a in range(n):
        for b in range(a + 1, n):
            p = _cg_unionfind(BinRel.from_pairs(n, [(a, b)]), algebra)
            if p not in found:
                found.add(p)
                frontier.append(p)
    while frontier:
        p = frontier.pop()
        for q in list(found):
            j = p.join(q)
            if j not in found:
                found.add(j)
                frontier.append(j)
    return tuple(sorted(found, key=lambda p: (-p.num_blocks(), p.labels)))


@lru_cache(maxsize=64)
def enumerate_tolerances(algebra: "FiniteAlgebra",
                         allow_large: bool = False) -> tuple[BinRel, ...]:
    """All tolerances: compatible closures of the symmetric reflexive generators.

    Every tolerance is the compatible closure of itself, so sweeping all
    2^(n(n-1)/2) generator subsets (up to symmetry) and deduplicating is
    exhaustive.  Sizes above 5 need allow_large=True.
    """
    n = algebra.size
    if n > TOLERANCE_EXHAUST_LIMIT and not allow_large:
        raise ValueError(
            f"tolerance enumeration on size {n} sweeps 2^{n * (n - 1) // 2} "
            "generator sets; pass allow_large=True to force it")
    offdiag = [(a, b) for a in range(n) for b in range(a + 1, n)]
    diag = BinRel.diagonal(n)
    seen: set[int] = set()
    out: list[BinRel] = []
    for mask in range(1 << len(offdiag)):
        gen = diag.bits
        for i in _iter_bits(mask):
            a, b = offdiag[i]
            gen |= 1 << (a * n + b)
            gen |= 1 << (b * n + a)
        t = compatible_closure(BinRel(n, gen), algebra)
        if t.bits not in seen:
            seen.add(t.bits)
            out.append(t)
    return tuple(out)


def _random_reflexive_bits(n: int, density: float, rng: random.Random) -> int:
    bits = _diag_bits(n)
    for r in range(n):
        for c in range(n):
            if r != c and rng.random() < density:
                bits |= 1 << (r * n + c)
    return bits


def random_reflexive(n: int, density: float, seed: int) -> BinRel:
    """Seeded random reflexive relation; same arguments give the same bits."""
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density must lie in [0, 1], got {density}")
    return BinRel(n, _random_reflexive_bits(n, density, random.Random(seed)))
