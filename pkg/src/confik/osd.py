"""Finite-domain configuration under a preference partial order.

A problem is a set of named variables with finite domains, a constraint over
value tuples, and a preference relation between tuples.  Everything here is
explicit enumeration: solutions are filtered from the Cartesian product, the
optimal ones are the preference-minimal elements, and per-value status falls
out by scanning the optimal set.  That keeps the module an executable
semantics rather than a solver.

Problem text format::

    var x in {0, 1}
    var y in {0, 1}
    var z in {0, 1}
    constraint x + y + z > 0
    prefer pareto(10*x + 5*y + 20*z, 1*x + 2*y + 3*z)

``prefer subset`` is the componentwise <= order for 0/1 domains.  Multiple
constraint lines are conjoined.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Optional, Sequence

from .errors import (
    ModelSemanticError,
    ModelSyntaxError,
    NoSolutions,
    PreferenceError,
    TooLarge,
)
from .logic import ClauseSet, solve_raw

__all__ = [
    "OsdProblem",
    "ValueClassification",
    "solutions",
    "optimal_solutions",
    "classify_values",
    "settled_refinements",
    "as_boolean_osd",
    "pareto_preference",
    "subset_preference",
    "parse_osd",
]

_ENUM_GUARD = 10**6
_BOOL_EMBED_GUARD = 20
_TRANSITIVITY_GUARD = 64


@dataclass(frozen=True)
class OsdProblem:
    """Finite domains, a tuple constraint, and a preference between tuples.

    ``preference(a, b)`` reads "a is at least as preferred as b"; it may or
    may not be reflexive, since optimality only ever asks about distinct
    tuples.
    """

    names: tuple[str, ...]
    domains: tuple[tuple[Any, ...], ...]
    constraint: Callable[[tuple], bool]
    preference: Callable[[tuple, tuple], bool]

    def index_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None


@dataclass(frozen=True)
class ValueClassification:
    """Per (variable, value) status: ``settled``, ``non_optimal``, or ``open``."""

    status: Mapping[tuple[int, Any], str]
    names: tuple[str, ...]
    domains: tuple[tuple[Any, ...], ...]

    def of(self, name: str, value: Any) -> str:
        idx = self.names.index(name)
        return self.status[(idx, value)]

    def settled_value(self, name: str) -> Optional[Any]:
        idx = self.names.index(name)
        for value in self.domains[idx]:
            if self.status[(idx, value)] == "settled":
                return value
        return None


def _product_size(p: OsdProblem) -> int:
    size = 1
    for domain in p.domains:
        size *= len(domain)
    return size


def solutions(p: OsdProblem, refinements: Sequence[tuple[str, Any]] = ()) -> list[tuple]:
    """All tuples satisfying the constraint and every ``var = const`` refinement,
    in lexicographic domain-index order."""
    if _product_size(p) > _ENUM_GUARD:
        raise TooLarge(f"domain product exceeds the {_ENUM_GUARD} enumeration guard")
    pins: dict[int, Any] = {}
    for name, value in refinements:
        idx = p.index_of(name)
        if value not in p.domains[idx]:
            raise ValueError(f"{value!r} is not in the domain of {name!r}")
        pins[idx] = value
    out = []
    n = len(p.names)
    tup = [None] * n

    def walk(i: int) -> None:
        if i == n:
            frozen = tuple(tup)
            if p.constraint(frozen):
                out.append(frozen)
            return
        if i in pins:
            tup[i] = pins[i]
            walk(i + 1)
            return
        for value in p.domains[i]:
            tup[i] = value
            walk(i + 1)

    walk(0)
    return out


def _check_preference(sols: list[tuple], pref: Callable[[tuple, tuple], bool]) -> None:
    """Antisymmetry on all solution pairs; transitivity when the set is small."""
    n = len(sols)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = sols[i], sols[j]
            if pref(a, b) and pref(b, a):
                raise PreferenceError(
                    f"preference is not antisymmetric: {a} and {b} prefer each other"
                )
    if n <= _TRANSITIVITY_GUARD:
        for a in sols:
            for b in sols:
                if a is b or not pref(a, b):
                    continue
                for c in sols:
                    if c is b or c is a:
                        continue
                    if pref(b, c) and not pref(a, c):
                        raise PreferenceError(
                            f"preference is not transitive on {a}, {b}, {c}"
                        )


def optimal_solutions(p: OsdProblem, refinements: Sequence[tuple[str, Any]] = ()) -> list[tuple]:
    """Solutions no distinct solution is preferred to."""
    sols = solutions(p, refinements)
    _check_preference(sols, p.preference)
    return [
        a
        for a in sols
        if not any(b != a and p.preference(b, a) for b in sols)
    ]


def classify_values(
    p: OsdProblem, refinements: Sequence[tuple[str, Any]] = ()
) -> ValueClassification:
    """Classify every value of every variable against the optimal solutions.

    A value no optimal solution assigns is non-optimal; a value all of them
    assign is settled; anything else stays open.  The classification is
    cross-checked against the equivalence "settled iff all sibling values are
    non-optimal" before returning.
    """
    sols = solutions(p, refinements)
    if not sols:
        raise NoSolutions("the constraint (plus refinements) has no solutions")
    _check_preference(sols, p.preference)
    optimal = [
        a
        for a in sols
        if not any(b != a and p.preference(b, a) for b in sols)
    ]
    status: dict[tuple[int, Any], str] = {}
    for i, domain in enumerate(p.domains):
        for value in domain:
            holders = [a for a in optimal if a[i] == value]
            if not holders:
                status[(i, value)] = "non_optimal"
            elif len(holders) == len(optimal):
                status[(i, value)] = "settled"
            else:
                status[(i, value)] = "open"
    for i, domain in enumerate(p.domains):
        for value in domain:
            others_all_out = all(
                status[(i, other)] == "non_optimal" for other in domain if other != value
            )
            assert (status[(i, value)] == "settled") == others_all_out, (
                "settled/non-optimal classification is internally inconsistent"
            )
    return ValueClassification(status=status, names=p.names, domains=p.domains)


def settled_refinements(
    p: OsdProblem, refinements: Sequence[tuple[str, Any]] = ()
) -> list[tuple[str, Any]]:
    """Convenience: the (name, value) pins a settled-value auto-assignment
    would apply.  Classification is the contract; this helper just mirrors the
    Boolean completion function for callers that want it."""
    classification = classify_values(p, refinements)
    pinned = {name for name, _ in refinements}
    out = []
    for i, name in enumerate(p.names):
        if name in pinned:
            continue
        for value in p.domains[i]:
            if classification.status[(i, value)] == "settled":
                out.append((name, value))
                break
    return out


# ---------------------------------------------------------------------------
# Preference constructors


def pareto_preference(aggregates: Sequence[Callable[[tuple], Any]]) -> Callable[[tuple, tuple], bool]:
    """Componentwise <= on the aggregate scores, restricted to distinct tuples.

    Distinct tuples with identical scores make this relation fail the
    antisymmetry check, which is surfaced as a diagnostic rather than silently
    producing an ill-founded order.
    """

    def pref(a: tuple, b: tuple) -> bool:
        return a != b and all(f(a) <= f(b) for f in aggregates)

    return pref


def subset_preference() -> Callable[[tuple, tuple], bool]:
    """Componentwise <= for 0/1 (or boolean) tuples: the true-set subset order."""

    def pref(a: tuple, b: tuple) -> bool:
        return all(av <= bv for av, bv in zip(a, b))

    return pref


def as_boolean_osd(cs: ClauseSet) -> OsdProblem:
    """Embed a clause set as a problem with {false, true} domains and the
    subset preference; its optimal solutions are exactly the minimal models."""
    table = cs.var_table
    user_n = table.user_count
    if user_n > _BOOL_EMBED_GUARD:
        raise TooLarge(f"boolean embedding limited to {_BOOL_EMBED_GUARD} variables")
    names = tuple(table.name_of(v) for v in table.user_ids())
    if user_n == len(table):
        int_clauses = cs.int_clauses()

        def constraint(tup: tuple) -> bool:
            for clause in int_clauses:
                if not any(tup[el >> 1] != (el & 1) for el in clause):
                    return False
            return True

    else:
        # auxiliary encoding vars present: ask the solver whether the user
        # assignment extends to a full model
        def constraint(tup: tuple) -> bool:
            assumptions = [
                (v << 1) | (0 if tup[v] else 1) for v in range(user_n)
            ]
            return solve_raw(cs, assumptions) is not None

    return OsdProblem(
        names=names,
        domains=tuple((False, True) for _ in range(user_n)),
        constraint=constraint,
        preference=subset_preference(),
    )


# ---------------------------------------------------------------------------
# Problem text format

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_OSD_TOKEN_RE = re.compile(
    r"\s*(<->|->|<=|>=|==|!=|<|>|[()!&|+\-*,]|\d+|[A-Za-z_][A-Za-z0-9_]*)"
)


def _tokenize(text: str, lineno: int) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _OSD_TOKEN_RE.match(text, pos)
        if not m:
            raise ModelSyntaxError(f"unexpected character {text[pos]!r}", lineno, pos + 1)
        tokens.append((m.group(1), m.start(1) + 1))
        pos = m.end()
    return tokens


class _ExprParser:
    """Recursive-descent parser for arithmetic comparisons under boolean
    connectives; compiles to a Python source fragment over the tuple ``t``."""

    def __init__(self, tokens: list[tuple[str, int]], names: Sequence[str], lineno: int):
        self.tokens = tokens
        self.names = list(names)
        self.lineno = lineno
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.tokens[self.pos][0]
        self.pos += 1
        return tok

    def fail(self, message: str):
        col = self.tokens[self.pos][1] if self.pos < len(self.tokens) else None
        raise ModelSyntaxError(message, self.lineno, col)

    # boolean layer

    def parse_bool(self) -> str:
        left = self.parse_imp()
        if self.peek() == "<->":
            self.take()
            right = self.parse_bool()
            return f"(({left}) == ({right}))"
        return left

    def parse_imp(self) -> str:
        left = self.parse_or()
        if self.peek() == "->":
            self.take()
            right = self.parse_imp()
            return f"((not ({left})) or ({right}))"
        return left

    def parse_or(self) -> str:
        parts = [self.parse_and()]
        while self.peek() == "|":
            self.take()
            parts.append(self.parse_and())
        return "(" + " or ".join(parts) + ")" if len(parts) > 1 else parts[0]

    def parse_and(self) -> str:
        parts = [self.parse_not()]
        while self.peek() == "&":
            self.take()
            parts.append(self.parse_not())
        return "(" + " and ".join(parts) + ")" if len(parts) > 1 else parts[0]

    def parse_not(self) -> str:
        if self.peek() == "!":
            self.take()
            return f"(not {self.parse_not()})"
        return self.parse_cmp()

    def parse_cmp(self) -> str:
        # try "sum cmp sum"; fall back to a parenthesized boolean expression
        save = self.pos
        try:
            left = self.parse_sum()
            op = self.peek()
            if op in ("<", "<=", ">", ">=", "==", "!="):
                self.take()
                right = self.parse_sum()
                return f"(({left}) {op} ({right}))"
            raise ModelSyntaxError("expected comparison", self.lineno)
        except ModelSemanticError:
            raise
        except ModelSyntaxError:
            self.pos = save
        if self.peek() == "(":
            self.take()
            inner = self.parse_bool()
            if self.peek() != ")":
                self.fail("missing closing parenthesis")
            self.take()
            return f"({inner})"
        self.fail(f"expected a comparison, got {self.peek()!r}")

    # arithmetic layer

    def parse_sum(self) -> str:
        parts = [self.parse_term()]
        while self.peek() in ("+", "-"):
            parts.append(self.take())
            parts.append(self.parse_term())
        return " ".join(parts)

    def parse_term(self) -> str:
        parts = [self.parse_factor()]
        while self.peek() == "*":
            self.take()
            parts.append(self.parse_factor())
        return " * ".join(parts)

    def parse_factor(self) -> str:
        tok = self.peek()
        if tok is None:
            self.fail("unexpected end of expression")
        if tok == "-":
            self.take()
            return f"(-{self.parse_factor()})"
        if tok == "(":
            self.take()
            inner = self.parse_sum()
            if self.peek() != ")":
                raise ModelSyntaxError("missing closing parenthesis", self.lineno)
            self.take()
            return f"({inner})"
        if tok.isdigit():
            return self.take()
        if _NAME_RE.match(tok):
            name = self.take()
            if name not in self.names:
                raise ModelSemanticError(
                    f"expression references unknown variable {name!r}", self.lineno
                )
            return f"t[{self.names.index(name)}]"
        raise ModelSyntaxError(f"unexpected token {tok!r}", self.lineno)


def _compile_fragment(fragment: str) -> Callable[[tuple], Any]:
    return eval(f"lambda t: {fragment}", {"__builtins__": {}})  # noqa: S307 - generated from our own AST


def parse_osd(text: str) -> OsdProblem:
    """Parse the problem text format into an executable problem."""
    names: list[str] = []
    domains: list[tuple[int, ...]] = []
    constraint_fragments: list[str] = []
    preference: Optional[Callable[[tuple, tuple], bool]] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("var "):
            m = re.match(r"^var\s+(\S+)\s+in\s*\{([^}]*)\}\s*$", line)
            if not m:
                raise ModelSyntaxError(f"malformed var line {line!r}", lineno)
            name = m.group(1)
            if not _NAME_RE.match(name):
                raise ModelSyntaxError(f"invalid variable name {name!r}", lineno)
            if name in names:
                raise ModelSemanticError(f"duplicate variable {name!r}", lineno)
            values = []
            for piece in m.group(2).split(","):
                piece = piece.strip()
                if not re.match(r"^-?\d+$", piece):
                    raise ModelSyntaxError(f"domain values must be integers, got {piece!r}", lineno)
                values.append(int(piece))
            if not values:
                raise ModelSemanticError(f"empty domain for {name!r}", lineno)
            if len(set(values)) != len(values):
                raise ModelSemanticError(f"duplicate domain value for {name!r}", lineno)
            names.append(name)
            domains.append(tuple(values))
        elif line.startswith("constraint"):
            body = line[len("constraint"):].strip()
            parser = _ExprParser(_tokenize(body, lineno), names, lineno)
            fragment = parser.parse_bool()
            if parser.pos != len(parser.tokens):
                parser.fail(f"trailing input {parser.peek()!r}")
            constraint_fragments.append(fragment)
        elif line.startswith("prefer"):
            if preference is not None:
                raise ModelSemanticError("multiple prefer lines", lineno)
            body = line[len("prefer"):].strip()
            if body == "subset":
                for name, domain in zip(names, domains):
                    if not set(domain) <= {0, 1}:
                        raise ModelSemanticError(
                            f"subset preference needs 0/1 domains, {name!r} has {domain}", lineno
                        )
                preference = subset_preference()
            elif body.startswith("pareto(") and body.endswith(")"):
                inner = body[len("pareto("):-1]
                fragments = []
                for piece in _split_args(inner, lineno):
                    parser = _ExprParser(_tokenize(piece, lineno), names, lineno)
                    fragments.append(parser.parse_sum())
                    if parser.pos != len(parser.tokens):
                        parser.fail(f"trailing input {parser.peek()!r}")
                if len(fragments) < 2:
                    raise ModelSemanticError("pareto needs at least two aggregates", lineno)
                preference = pareto_preference([_compile_fragment(f) for f in fragments])
            else:
                raise ModelSyntaxError(f"malformed prefer line {line!r}", lineno)
        else:
            raise ModelSyntaxError(f"unknown keyword in {line!r}", lineno)
    if not names:
        raise ModelSemanticError("problem declares no variables", 1)
    if preference is None:
        raise ModelSemanticError("problem declares no preference", 1)
    if constraint_fragments:
        combined = " and ".join(f"({f})" for f in constraint_fragments)
        constraint = _compile_fragment(combined)
    else:
        constraint = lambda t: True  # noqa: E731
    return OsdProblem(
        names=tuple(names),
        domains=tuple(domains),
        constraint=constraint,
        preference=preference,
    )


def _split_args(inner: str, lineno: int) -> list[str]:
    parts = []
    depth = 0
    current = []
    for ch in inner:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ModelSyntaxError("unbalanced parentheses in prefer line", lineno)
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return [p.strip() for p in parts if p.strip()]
