"""Finite algebras as operation tables, squares, and generated subuniverses.

An algebra is a carrier {0..n-1} plus finitary operations given as flat
row-major tables: for a binary operation, f(a, b) = table[a*n + b].  The
same encoding names the elements of the square A x A, where the element
(x, y) is the integer x*n + y.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .relations import BinRel, Partition

__all__ = [
    "Operation",
    "FiniteAlgebra",
    "Subuniverse",
    "SubSquare",
    "load_algebra",
    "algebra_to_json",
    "square",
    "pair_code",
    "pair_decode",
    "generate_subuniverse",
    "subsquare",
    "product_relation",
]


@dataclass(frozen=True)
class Operation:
    name: str
    arity: int
    table: tuple[int, ...]

    def apply(self, *args: int) -> int:
        if len(args) != self.arity:
            raise ValueError(f"operation {self.name!r} expects {self.arity} arguments")
        idx = 0
        n = self._size
        for a in args:
            idx = idx * n + a
        return self.table[idx]

    @property
    def _size(self) -> int:
        # arity 0 tables hold exactly one entry, so any positive base works
        if self.arity == 0:
            return 1
        return round(len(self.table) ** (1.0 / self.arity))


@dataclass(frozen=True)
class FiniteAlgebra:
    """Immutable finite algebra; every table is validated on construction."""

    name: str
    size: int
    operations: tuple[Operation, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.size, int) or self.size < 1:
            raise ValueError(f"algebra size must be a positive integer, got {self.size!r}")
        for op in self.operations:
            if op.arity < 0:
                raise ValueError(f"operation {op.name!r}: negative arity {op.arity}")
            want = self.size ** op.arity
            if len(op.table) != want:
                raise ValueError(
                    f"operation {op.name!r}: table length {len(op.table)} != {want}")
            for i, v in enumerate(op.table):
                if not isinstance(v, int) or not 0 <= v < self.size:
                    raise ValueError(
                        f"operation {op.name!r}: entry {v!r} out of range at index {i}")

    def operation(self, name: str) -> Operation:
        for op in self.operations:
            if op.name == name:
                return op
        raise KeyError(f"no operation named {name!r}")


def load_algebra(source) -> FiniteAlgebra:
    """Parse an algebra from JSON text or an already-decoded document.

    Expected shape: {"name"?, "size", "operations": [{"name"?, "arity",
    "table"}, ...]}.  Errors identify the offending operation and entry.
    """
    if isinstance(source, (str, bytes)):
        try:
            doc = json.loads(source)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed algebra document: {exc}") from None
    else:
        doc = source
    if not isinstance(doc, dict):
        raise ValueError("algebra document must be a JSON object")
    if "size" not in doc:
        raise ValueError("algebra document missing \"size\"")
    size = doc["size"]
    raw_ops = doc.get("operations", [])
    if not isinstance(raw_ops, list):
        raise ValueError("\"operations\" must be a list")
    ops = []
    for i, raw in enumerate(raw_ops):
        if not isinstance(raw, dict):
            raise ValueError(f"operation {i}: not an object")
        name = raw.get("name", f"op{i}")
        if "arity" not in raw or "table" not in raw:
            raise ValueError(f"operation {name!r}: missing \"arity\" or \"table\"")
        arity = raw["arity"]
        table = raw["table"]
        if not isinstance(arity, int):
            raise ValueError(f"operation {name!r}: arity must be an integer")
        if not isinstance(table, list):
            raise ValueError(f"operation {name!r}: table must be a list")
        ops.append(Operation(name, arity, tuple(table)))
    return FiniteAlgebra(doc.get("name", "unnamed"), size, tuple(ops))


def algebra_to_json(algebra: FiniteAlgebra) -> dict:
    return {
        "name": algebra.name,
        "size": algebra.size,
        "operations": [
            {"name": op.name, "arity": op.arity, "table": list(op.table)}
            for op in algebra.operations
        ],
    }


def pair_code(x: int, y: int, n: int) -> int:
    return x * n + y


def pair_decode(code: int, n: int) -> tuple[int, int]:
    return divmod(code, n)


@lru_cache(maxsize=None)
def square(algebra: FiniteAlgebra) -> FiniteAlgebra:
    """The product algebra A x A on pair codes, operations coordinatewise."""
    n = algebra.size
    nn = n * n
    ops = []
    for op in algebra.operations:
        k = op.arity
        t = op.table
        if k == 0:
            table = (pair_code(t[0], t[0], n),)
        elif k == 1:
            table = tuple(
                pair_code(t[x], t[y], n)
                for x, y in (divmod(c, n) for c in range(nn))
            )
        elif k == 2:
            table = []
            for a in range(nn):
                x1, y1 = divmod(a, n)
                for b in range(nn):
                    x2, y2 = divmod(b, n)
                    table.append(pair_code(t[x1 * n + x2], t[y1 * n + y2], n))
            table = tuple(table)
        else:
            table = []
            for args in itertools.product(range(nn), repeat=k):
                decoded = [divmod(a, n) for a in args]
                left = op.apply(*(x for x, _ in decoded))
                right = op.apply(*(y for _, y in decoded))
                table.append(pair_code(left, right, n))
            table = tuple(table)
        ops.append(Operation(op.name, k, table))
    return FiniteAlgebra(f"{algebra.name}^2", nn, tuple(ops))


class Subuniverse:
    """Closure of a seed set under all operations, with the induced algebra.

    elements lists the closure in BFS discovery order starting from the
    sorted seeds; index inverts it.  Immutable after construction.
    """

    def __init__(self, parent: FiniteAlgebra, elements: tuple[int, ...],
                 induced: FiniteAlgebra):
        self.parent = parent
        self.elements = elements
        self.index = {x: i for i, x in enumerate(elements)}
        self.induced = induced

    def __len__(self) -> int:
        return len(self.elements)


def generate_subuniverse(algebra: FiniteAlgebra, seeds: Iterable[int]) -> Subuniverse:
    """Generate the least subuniverse containing the seeds (and all constants)."""
    n = algebra.size
    elems: list[int] = []
    pos: dict[int, int] = {}

    def add(x: int) -> None:
        if x not in pos:
            pos[x] = len(elems)
            elems.append(x)

    seed_list = sorted(set(seeds))
    for s in seed_list:
        if not 0 <= s < n:
            raise ValueError(f"seed {s} out of range for size {n}")
        add(s)
    if not seed_list:
        raise ValueError("subuniverse generation needs at least one seed")
    for op in algebra.operations:
        if op.arity == 0:
            add(op.table[0])
    unary = [op.table for op in algebra.operations if op.arity == 1]
    binary = [op.table for op in algebra.operations if op.arity == 2]
    other = [op for op in algebra.operations if op.arity > 2]
    i = 0
    while i < len(elems):
        x = elems[i]
        i += 1
        for t in unary:
            add(t[x])
        if binary:
            prefix = elems[:i]
            for t in binary:
                xn = x * n
                for y in prefix:
                    add(t[xn + y])
                    add(t[y * n + x])
        for op in other:
            k = op.arity
            prefix = elems[:i]
            for poss in range(k):
                for rest in itertools.product(prefix, repeat=k - 1):
                    add(op.apply(*(rest[:poss] + (x,) + rest[poss:])))
    elements = tuple(elems)
    m = len(elements)
    induced_ops = []
    for op in algebra.operations:
        k = op.arity
        if k == 0:
            table = (pos[op.table[0]],)
        elif k == 1:
            table = tuple(pos[op.table[x]] for x in elements)
        elif k == 2:
            t = op.table
            table = tuple(pos[t[x * n + y]] for x in elements for y in elements)
        else:
            table = tuple(
                pos[op.apply(*args)]
                for args in itertools.product(elements, repeat=k)
            )
        induced_ops.append(Operation(op.name, k, table))
    induced = FiniteAlgebra(f"{algebra.name}|{m}", m, tuple(induced_ops))
    return Subuniverse(algebra, elements, induced)


class SubSquare:
    """Subalgebra of A x A generated by a set of pairs.

    elements holds the pairs in generation order; index maps a pair to its
    position, which is the element name inside the induced algebra.
    """

    def __init__(self, parent: FiniteAlgebra, sub: Subuniverse):
        n = parent.size
        self.parent = parent
        self.codes = sub.elements
        self.elements = tuple(pair_decode(c, n) for c in sub.elements)
        self.index = {p: i for i, p in enumerate(self.elements)}
        self.induced = sub.induced

    def __len__(self) -> int:
        return len(self.elements)


def subsquare(algebra: FiniteAlgebra, pairs: Iterable[tuple[int, int]]) -> SubSquare:
    n = algebra.size
    codes = [pair_code(x, y, n) for x, y in pairs]
    return SubSquare(algebra, generate_subuniverse(square(algebra), codes))


def product_relation(alpha, beta, sub: SubSquare) -> BinRel:
    """Restrict alpha x beta to a subsquare: pairs p, q are related when
    their first coordinates are alpha-related and their second
    coordinates are beta-related.  alpha and beta may be partitions or
    relations on the parent carrier.
    """
    n = sub.parent.size

    def pred(rel):
        if isinstance(rel, Partition):
            if rel.n != n:
                raise ValueError(f"size mismatch: partition on {rel.n}, parent on {n}")
            return rel.same
        if isinstance(rel, BinRel):
            if rel.n != n:
                raise ValueError(f"size mismatch: relation on {rel.n}, parent on {n}")
            return rel.has
        raise TypeError(f"expected Partition or BinRel, got {type(rel).__name__}")

    first = pred(alpha)
    second = pred(beta)
    m = len(sub.elements)
    bits = 0
    for i, (x1, y1) in enumerate(sub.elements):
        row = 0
        for j, (x2, y2) in enumerate(sub.elements):
            if first(x1, x2) and second(y1, y2):
                row |= 1 << j
        bits |= row << (i * m)
    return BinRel(m, bits)
