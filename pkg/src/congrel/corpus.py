"""Built-in test algebras: pure sets, small abelian groups, small lattices.

Group and lattice axioms are spot-checked while the tables are built, so a
typo in a table blows up at import rather than in a sweep.
"""

from __future__ import annotations

import itertools

from .algebra import FiniteAlgebra, Operation

__all__ = ["builtin", "builtin_names", "BUILTINS"]


def _pure_set(name: str, n: int) -> FiniteAlgebra:
    return FiniteAlgebra(name, n, ())


def _group(name: str, n: int, table: list[int]) -> FiniteAlgebra:
    for a, b, c in itertools.product(range(n), repeat=3):
        if table[table[a * n + b] * n + c] != table[a * n + table[b * n + c]]:
            raise ValueError(f"{name}: operation is not associative at ({a},{b},{c})")
    identity = next(
        (e for e in range(n)
         if all(table[e * n + x] == x and table[x * n + e] == x for x in range(n))),
        None,
    )
    if identity is None:
        raise ValueError(f"{name}: no identity element")
    for a in range(n):
        if all(table[a * n + b] != identity for b in range(n)):
            raise ValueError(f"{name}: element {a} has no inverse")
    return FiniteAlgebra(name, n, (Operation("mul", 2, tuple(table)),))


def _lattice(name: str, n: int, leq: list[list[bool]]) -> FiniteAlgebra:
    def bound(a: int, b: int, below: bool) -> int:
        if below:
            cands = [x for x in range(n) if leq[x][a] and leq[x][b]]
            best = [x for x in cands if all(leq[y][x] for y in cands)]
        else:
            cands = [x for x in range(n) if leq[a][x] and leq[b][x]]
            best = [x for x in cands if all(leq[x][y] for y in cands)]
        if len(best) != 1:
            raise ValueError(f"{name}: no unique bound for ({a},{b})")
        return best[0]

    meet = [bound(a, b, True) for a in range(n) for b in range(n)]
    join = [bound(a, b, False) for a in range(n) for b in range(n)]
    for a, b in itertools.product(range(n), repeat=2):
        if meet[a * n + join[a * n + b]] != a or join[a * n + meet[a * n + b]] != a:
            raise ValueError(f"{name}: absorption fails at ({a},{b})")
    return FiniteAlgebra(
        name, n,
        (Operation("meet", 2, tuple(meet)), Operation("join", 2, tuple(join))),
    )


def _leq_from_covers(n: int, covers: list[tuple[int, int]]) -> list[list[bool]]:
    leq = [[i == j for j in range(n)] for i in range(n)]
    for a, b in covers:
        leq[a][b] = True
    for k in range(n):  # transitive closure of the cover relation
        for i in range(n):
            if leq[i][k]:
                for j in range(n):
                    if leq[k][j]:
                        leq[i][j] = True
    return leq


def _build() -> dict[str, FiniteAlgebra]:
    out: dict[str, FiniteAlgebra] = {}
    out["trivial"] = _pure_set("trivial", 1)
    for n in (2, 3, 4):
        out[f"pureset{n}"] = _pure_set(f"pureset{n}", n)
    out["z2"] = _group("z2", 2, [0, 1, 1, 0])
    out["z4"] = _group("z4", 4, [(a + b) % 4 for a in range(4) for b in range(4)])
    # Klein group on bit pairs: the operation is bitwise xor.
    out["z2xz2"] = _group("z2xz2", 4, [a ^ b for a in range(4) for b in range(4)])
    out["bool2"] = _lattice("bool2", 2, _leq_from_covers(2, [(0, 1)]))
    # Boolean lattice on subsets of a 2-set, encoded as bit masks 0..3.
    out["bool4"] = _lattice(
        "bool4", 4,
        [[a & b == a for b in range(4)] for a in range(4)],
    )
    # Pentagon: bottom 0, chain 1 < 2, side 3, top 4.
    out["n5"] = _lattice(
        "n5", 5, _leq_from_covers(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]))
    # Diamond: bottom 0, atoms 1, 2, 3, top 4.
    out["m3"] = _lattice(
        "m3", 5, _leq_from_covers(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]))
    return out


BUILTINS = _build()


def builtin(name: str) -> FiniteAlgebra:
    try:
        return BUILTINS[name]
    except KeyError:
        raise ValueError(
            f"unknown builtin algebra {name!r}; available: {', '.join(BUILTINS)}"
        ) from None


def builtin_names() -> list[str]:
    return list(BUILTINS)
