"""Quantified relational-identity statements: parse, print, evaluate, check.

The statement language covers the operators the verifiers use internally
(meet, compose, alternating join, union, converse, transitive closure,
compatible closure, generated congruence) so arbitrary identities can be
checked against a finite algebra, not just the four shipped laws.

Grammar, lowest precedence first:

    statement := ["forall" decl ("," decl)* "."] expr ("<=" | "=") expr
    decl      := NAME ":" ("Cong" | "Tol" | "Refl")
    expr      := chain of "+" / "|" over terms        (left associative)
    term      := chain of ";" over factors
    factor    := chain of "&" over postfixed atoms
    postfix   := atom followed by any run of "*" / "^-"
    atom      := NAME | "0" | "1" | "cl(" expr ")" | "cg(" expr ")" | "(" expr ")"
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Optional

from .relations import (
    BinRel,
    cg,
    compatible_closure,
    enumerate_congruences,
    enumerate_tolerances,
    rel_plus,
    _random_reflexive_bits,
)
from .theorems import CheckReport, Violation, reflexive_domain

__all__ = [
    "Expr",
    "Statement",
    "ParseError",
    "parse",
    "print_expr",
    "print_statement",
    "evaluate",
    "check_statement",
    "THEOREM_STATEMENTS",
]

SORTS = ("Cong", "Tol", "Refl")
RESERVED = {"forall", "Cong", "Tol", "Refl", "cl", "cg"}


@dataclass(frozen=True)
class Expr:
    """AST node. kind is one of var, const, meet, compose, join, union,
    converse, star, cl, cg; children holds subtrees, text the name/digit."""

    kind: str
    children: tuple["Expr", ...] = ()
    text: str = ""


@dataclass(frozen=True)
class Statement:
    quantifiers: tuple[tuple[str, str], ...]  # (name, sort)
    relation: str  # "<=" or "="
    left: Expr
    right: Expr


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class _Token:
    kind: str  # "name", "num", "op", "end"
    value: str
    line: int
    col: int


_TWO_CHAR = ("<=", "^-")
_ONE_CHAR = "&;+|*()=.,:"


def _tokenize(text: str) -> list[_Token]:
    toks = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        two = text[i:i + 2]
        if two in _TWO_CHAR:
            toks.append(_Token("op", two, line, col))
            i += 2
            col += 2
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Token("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Token("num", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in _ONE_CHAR:
            toks.append(_Token("op", ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(_Token("end", "", line, col))
    return toks


class _Parser:
    def __init__(self, tokens: list[_Token], declared: set[str]):
        self.tokens = tokens
        self.pos = 0
        self.declared = declared

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, value: str) -> _Token:
        t = self.peek()
        if t.kind == "op" and t.value == value:
            return self.advance()
        shown = t.value if t.kind != "end" else "end of input"
        raise ParseError(f"expected {value!r}, found {shown!r}", t.line, t.col)

    def expr(self) -> Expr:
        node = self.term()
        while True:
            t = self.peek()
            if t.kind == "op" and t.value in ("+", "|"):
                self.advance()
                kind = "join" if t.value == "+" else "union"
                node = Expr(kind, (node, self.term()))
            else:
                return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek().kind == "op" and self.peek().value == ";":
            self.advance()
            node = Expr("compose", (node, self.factor()))
        return node

    def factor(self) -> Expr:
        node = self.postfixed()
        while self.peek().kind == "op" and self.peek().value == "&":
            self.advance()
            node = Expr("meet", (node, self.postfixed()))
        return node

    def postfixed(self) -> Expr:
        node = self.atom()
        while True:
            t = self.peek()
            if t.kind == "op" and t.value == "*":
                self.advance()
                node = Expr("star", (node,))
            elif t.kind == "op" and t.value == "^-":
                self.advance()
                node = Expr("converse", (node,))
            else:
                return node

    def atom(self) -> Expr:
        t = self.advance()
        if t.kind == "num":
            if t.value not in ("0", "1"):
                raise ParseError(
                    f"only the constants 0 and 1 exist, found {t.value!r}",
                    t.line, t.col)
            return Expr("const", text=t.value)
        if t.kind == "name":
            if t.value in ("cl", "cg"):
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return Expr(t.value, (inner,))
            if t.value in RESERVED:
                raise ParseError(f"{t.value!r} is a reserved word", t.line, t.col)
            if t.value not in self.declared:
                raise ParseError(f"undeclared variable {t.value!r}", t.line, t.col)
            return Expr("var", text=t.value)
        if t.kind == "op" and t.value == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        shown = t.value if t.kind != "end" else "end of input"
        raise ParseError(f"expected an expression, found {shown!r}", t.line, t.col)


def parse(text: str) -> Statement:
    """Parse one quantified statement; errors carry line and column."""
    tokens = _tokenize(text)
    quantifiers: list[tuple[str, str]] = []
    declared: set[str] = set()
    pos = 0
    if tokens[0].kind == "name" and tokens[0].value == "forall":
        pos = 1
        while True:
            t = tokens[pos]
            if t.kind != "name" or t.value in RESERVED:
                raise ParseError("expected a variable name", t.line, t.col)
            if t.value in declared:
                raise ParseError(f"duplicate declaration of {t.value!r}",
                                 t.line, t.col)
            name = t.value
            pos += 1
            t = tokens[pos]
            if not (t.kind == "op" and t.value == ":"):
                raise ParseError("expected ':' after the variable name",
                                 t.line, t.col)
            pos += 1
            t = tokens[pos]
            if t.kind != "name" or t.value not in SORTS:
                shown = t.value if t.kind != "end" else "end of input"
                raise ParseError(
                    f"expected a sort (Cong, Tol, Refl), found {shown!r}",
                    t.line, t.col)
            quantifiers.append((name, t.value))
            declared.add(name)
            pos += 1
            t = tokens[pos]
            if t.kind == "op" and t.value == ",":
                pos += 1
                continue
            if t.kind == "op" and t.value == ".":
                pos += 1
                break
            shown = t.value if t.kind != "end" else "end of input"
            raise ParseError(f"expected ',' or '.', found {shown!r}",
                             t.line, t.col)
    parser = _Parser(tokens, declared)
    parser.pos = pos
    left = parser.expr()
    t = parser.peek()
    if not (t.kind == "op" and t.value in ("<=", "=")):
        shown = t.value if t.kind != "end" else "end of input"
        raise ParseError(f"expected '<=' or '=', found {shown!r}", t.line, t.col)
    relation = parser.advance().value
    right = parser.expr()
    t = parser.peek()
    if t.kind != "end":
        raise ParseError(f"unexpected trailing {t.value!r}", t.line, t.col)
    return Statement(tuple(quantifiers), relation, left, right)


# precedence tiers for the printer; higher binds tighter
_TIER = {
    "join": 1, "union": 1,
    "compose": 2,
    "meet": 3,
    "star": 4, "converse": 4,
    "var": 5, "const": 5, "cl": 5, "cg": 5,
}

_INFIX = {"join": "+", "union": "|", "compose": ";", "meet": "&"}
_POSTFIX = {"star": "*", "converse": "^-"}


def print_expr(e: Expr) -> str:
    """Canonical text with minimal parentheses; parse(print_expr(e)) == e."""
    tier = _TIER[e.kind]
    if e.kind == "var" or e.kind == "const":
        return e.text
    if e.kind in ("cl", "cg"):
        return f"{e.kind}({print_expr(e.children[0])})"
    if e.kind in _POSTFIX:
        inner = print_expr(e.children[0])
        if _TIER[e.children[0].kind] < tier:
            inner = f"({inner})"
        return inner + _POSTFIX[e.kind]
    left, right = e.children
    lt = print_expr(left)
    if _TIER[left.kind] < tier:
        lt = f"({lt})"
    rt = print_expr(right)
    # equal-tier right child needs parens: the grammar is left associative
    if _TIER[right.kind] <= tier:
        rt = f"({rt})"
    return f"{lt} {_INFIX[e.kind]} {rt}"


def print_statement(s: Statement) -> str:
    body = f"{print_expr(s.left)} {s.relation} {print_expr(s.right)}"
    if not s.quantifiers:
        return body
    decls = ", ".join(f"{n}:{sort}" for n, sort in s.quantifiers)
    return f"forall {decls} . {body}"


def evaluate(algebra, env: dict[str, BinRel], e: Expr) -> BinRel:
    """Evaluate an expression under a variable binding.

    Sort errors surface at evaluation time: the alternating join refuses
    non-reflexive operands, everything else is total.
    """
    if e.kind == "var":
        try:
            return env[e.text]
        except KeyError:
            raise ValueError(f"unbound variable {e.text!r}") from None
    if e.kind == "const":
        return BinRel.diagonal(algebra.size) if e.text == "0" else BinRel.full(algebra.size)
    if e.kind == "meet":
        return evaluate(algebra, env, e.children[0]) & evaluate(algebra, env, e.children[1])
    if e.kind == "union":
        return evaluate(algebra, env, e.children[0]) | evaluate(algebra, env, e.children[1])
    if e.kind == "compose":
        return evaluate(algebra, env, e.children[0]).compose(evaluate(algebra, env, e.children[1]))
    if e.kind == "join":
        return rel_plus(evaluate(algebra, env, e.children[0]),
                        evaluate(algebra, env, e.children[1]))
    if e.kind == "converse":
        return evaluate(algebra, env, e.children[0]).converse()
    if e.kind == "star":
        return evaluate(algebra, env, e.children[0]).transitive_closure()
    if e.kind == "cl":
        return compatible_closure(evaluate(algebra, env, e.children[0]), algebra)
    if e.kind == "cg":
        return cg(evaluate(algebra, env, e.children[0]), algebra).to_binrel()
    raise ValueError(f"unknown node kind {e.kind!r}")


def _assignments(algebra, stmt: Statement, strategy: str, seed: int,
                 samples: int):
    """Quantifier grid in declaration order.  Cong and Tol are always
    exhaustive; Refl follows the strategy.  Under sample, the Refl
    variables are drawn jointly so the grid stays linear in samples."""
    names = [n for n, _ in stmt.quantifiers]
    sorts = [s for _, s in stmt.quantifiers]
    n = algebra.size
    rng = random.Random(f"{seed}:statement")
    fixed_domains: list[Optional[list[BinRel]]] = []
    refl_positions = [i for i, s in enumerate(sorts) if s == "Refl"]
    for s in sorts:
        if s == "Cong":
            fixed_domains.append([p.to_binrel() for p in enumerate_congruences(algebra)])
        elif s == "Tol":
            fixed_domains.append(list(enumerate_tolerances(algebra)))
        else:
            fixed_domains.append(None)
    if strategy in ("exhaust", "principal"):
        refl_dom = reflexive_domain(n, strategy) if refl_positions else []
        refl_tuples = list(itertools.product(*([refl_dom] * len(refl_positions))))
    elif strategy == "sample":
        principal = reflexive_domain(n, "principal")
        refl_tuples = list(itertools.product(*([principal] * len(refl_positions))))
        for _ in range(samples):
            refl_tuples.append(tuple(
                BinRel(n, _random_reflexive_bits(n, rng.random(), rng))
                for _ in refl_positions))
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    non_refl = [d for d in fixed_domains if d is not None]
    for fixed in itertools.product(*non_refl):
        fixed_iter = iter(fixed)
        base = [None if d is None else next(fixed_iter) for d in fixed_domains]
        if not refl_positions:
            yield dict(zip(names, base))
            continue
        for tup in refl_tuples:
            values = list(base)
            for pos, rel in zip(refl_positions, tup):
                values[pos] = rel
            yield dict(zip(names, values))


def check_statement(algebra, stmt: Statement, strategy: str = "exhaust",
                    seed: int = 0, samples: int = 1000,
                    max_violations: int = 1) -> CheckReport:
    """Sweep the statement's quantifier grid and test the stated relation.

    The report's theorem field carries the canonical statement text; for
    an equality, claims are reported as forward and backward inclusions.
    """
    t0 = time.monotonic()
    text = print_statement(stmt)
    violations: list[Violation] = []
    checked = 0
    for env in _assignments(algebra, stmt, strategy, seed, samples):
        checked += 1
        lhs = evaluate(algebra, env, stmt.left)
        rhs = evaluate(algebra, env, stmt.right)
        if stmt.relation == "<=":
            directions = [("inclusion", lhs, rhs)]
        else:
            directions = [("forward", lhs, rhs), ("backward", rhs, lhs)]
        for claim, a, b in directions:
            extra = a.bits & ~b.bits
            if extra:
                pair = divmod((extra & -extra).bit_length() - 1, a.n)
                violations.append(Violation(binding=dict(env),
                                            missing_pair=pair,
                                            failed_claim=claim))
        if len(violations) >= max_violations:
            break
    return CheckReport(
        algebra=algebra.name,
        theorem=text,
        result="holds" if not violations else "fails",
        instances_checked=checked,
        violations=violations[:max_violations],
        elapsed=time.monotonic() - t0,
    )


# The four shipped laws as statements; each text is a printer fixpoint and
# check_statement over these must agree with the dedicated verifiers.
THEOREM_STATEMENTS: dict[str, tuple[str, ...]] = {
    "subrel": (
        "forall a:Cong, R:Refl, S:Refl . "
        "a & (R ; S) <= a & cl(R | S^-) + a & cl(R^- | S)",
    ),
    "subrelpiu": (
        "forall a:Cong, R:Refl, S:Refl . "
        "a & (R + S) <= a & cl(R | S^-) + a & cl(R^- | S)",
        "forall a:Cong, R:Refl, S:Refl . "
        "a & cl(R | S^-) + a & cl(R^- | S) = a & cl(R | S) + a & cl(R^- | S^-)",
        "forall a:Cong, R:Refl, S:Refl . "
        "a & cl(R | S) + a & cl(R^- | S^-) = a & (cg(R) + cg(S))",
    ),
    "wtip": (
        "forall a:Cong, T:Tol . a & T* = (a & T)*",
    ),
    "rr": (
        "forall a:Cong, R:Refl . a & (R + R^-) <= a & (cl(R) + cl(R)^-)",
        "forall a:Cong, R:Refl . a & (cl(R) + cl(R)^-) = a & cl(R) + a & cl(R)^-",
        "forall a:Cong, R:Refl . a & cl(R) + a & cl(R)^- = a & cg(R)",
    ),
}
