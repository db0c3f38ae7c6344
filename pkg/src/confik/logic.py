"""Propositional foundation: variables, expressions, CNF, and a DPLL solver.

Variables are interned in a :class:`VarTable` and referred to by dense integer
ids everywhere else.  Auxiliary variables introduced by the CNF encoding are
flagged in the table and always allocated after the user-visible variables, so
user variables occupy ids ``0 .. user_count-1``.

The solver is a deliberately small two-watched-literal DPLL with unit
propagation and chronological backtracking.  Its decision heuristic is fixed:
branch on the lowest unbound variable id and try ``false`` first, which biases
found models toward small true-sets.  Identical input always yields the
identical model.
"""

from __future__ import annotations

import hashlib
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional, Sequence

from .errors import DimacsError, TooLarge, UnsatContext

__all__ = [
    "VarTable",
    "Lit",
    "Expr",
    "Var",
    "Not",
    "And",
    "Or",
    "Implies",
    "Iff",
    "TRUE",
    "FALSE",
    "Assignment",
    "ClauseSet",
    "to_cnf",
    "solve",
    "entails",
    "all_models",
    "all_model_masks",
    "count_models",
    "to_dimacs",
    "from_dimacs",
]


class VarTable:
    """Bijection between variable names and dense integer ids.

    User variables must all be registered before the first auxiliary
    variable; this keeps user ids contiguous from zero, which the reasoning
    layer relies on when projecting models.
    """

    __slots__ = ("_names", "_index", "_user_count")

    def __init__(self) -> None:
        self._names: list[str] = []
        self._index: dict[str, int] = {}
        self._user_count = 0

    def add(self, name: str, aux: bool = False) -> int:
        if name in self._index:
            raise ValueError(f"duplicate variable {name!r}")
        if not aux and self._user_count != len(self._names):
            raise ValueError("user variables must be registered before auxiliaries")
        vid = len(self._names)
        self._names.append(name)
        self._index[name] = vid
        if not aux:
            self._user_count += 1
        return vid

    def id_of(self, name: str) -> int:
        return self._index[name]

    def name_of(self, vid: int) -> str:
        return self._names[vid]

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self._names)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._names)

    @property
    def user_count(self) -> int:
        return self._user_count

    def is_aux(self, vid: int) -> bool:
        return vid >= self._user_count

    def user_ids(self) -> range:
        return range(self._user_count)

    def copy(self) -> "VarTable":
        dup = VarTable.__new__(VarTable)
        dup._names = list(self._names)
        dup._index = dict(self._index)
        dup._user_count = self._user_count
        return dup


class Lit(NamedTuple):
    """A variable id with a sign."""

    var: int
    positive: bool

    def negate(self) -> "Lit":
        return Lit(self.var, not self.positive)

    def encode(self) -> int:
        # internal solver encoding: 2*var for positive, 2*var+1 for negative
        return (self.var << 1) | (0 if self.positive else 1)


def pos(var: int) -> Lit:
    return Lit(var, True)


def neg(var: int) -> Lit:
    return Lit(var, False)


# ---------------------------------------------------------------------------
# Expressions


class Expr:
    """Base class of the propositional expression tree."""

    __slots__ = ()

    def evaluate(self, values: Mapping[int, bool]) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class Var(Expr):
    vid: int

    def evaluate(self, values):
        return bool(values[self.vid])


@dataclass(frozen=True)
class Not(Expr):
    operand: Expr

    def evaluate(self, values):
        return not self.operand.evaluate(values)


@dataclass(frozen=True)
class And(Expr):
    items: tuple[Expr, ...]

    def evaluate(self, values):
        return all(item.evaluate(values) for item in self.items)


@dataclass(frozen=True)
class Or(Expr):
    items: tuple[Expr, ...]

    def evaluate(self, values):
        return any(item.evaluate(values) for item in self.items)


@dataclass(frozen=True)
class Implies(Expr):
    lhs: Expr
    rhs: Expr

    def evaluate(self, values):
        return (not self.lhs.evaluate(values)) or self.rhs.evaluate(values)


@dataclass(frozen=True)
class Iff(Expr):
    lhs: Expr
    rhs: Expr

    def evaluate(self, values):
        return self.lhs.evaluate(values) == self.rhs.evaluate(values)


@dataclass(frozen=True)
class Const(Expr):
    value: bool

    def evaluate(self, values):
        return self.value


TRUE = Const(True)
FALSE = Const(False)


def conjoin(items: Sequence[Expr]) -> Expr:
    if not items:
        return TRUE
    if len(items) == 1:
        return items[0]
    return And(tuple(items))


def disjoin(items: Sequence[Expr]) -> Expr:
    if not items:
        return FALSE
    if len(items) == 1:
        return items[0]
    return Or(tuple(items))


def expr_vars(e: Expr) -> set[int]:
    out: set[int] = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            out.add(node.vid)
        elif isinstance(node, Not):
            stack.append(node.operand)
        elif isinstance(node, (And, Or)):
            stack.extend(node.items)
        elif isinstance(node, (Implies, Iff)):
            stack.append(node.lhs)
            stack.append(node.rhs)
    return out


# ---------------------------------------------------------------------------
# Assignments


class Assignment:
    """Partial or total mapping of variable ids to booleans.

    The set-based view (`true_set`) mirrors the usual identification of a
    total assignment with its set of true variables; equality and hashing are
    defined over the bound values.
    """

    __slots__ = ("_values",)

    def __init__(self, values: Mapping[int, bool]):
        self._values = {v: bool(b) for v, b in values.items()}

    def __getitem__(self, vid: int) -> bool:
        return self._values[vid]

    def get(self, vid: int, default=None):
        return self._values.get(vid, default)

    def __contains__(self, vid: int) -> bool:
        return vid in self._values

    def __len__(self) -> int:
        return len(self._values)

    def items(self):
        return self._values.items()

    def is_total(self, n_vars: int) -> bool:
        return len(self._values) == n_vars

    def true_set(self) -> frozenset[int]:
        return frozenset(v for v, b in self._values.items() if b)

    def true_names(self, table: VarTable) -> frozenset[str]:
        return frozenset(table.name_of(v) for v, b in self._values.items() if b)

    def restrict(self, vids: Iterable[int]) -> "Assignment":
        keep = set(vids)
        return Assignment({v: b for v, b in self._values.items() if v in keep})

    def satisfies(self, lit: Lit) -> bool:
        val = self._values.get(lit.var)
        return val is not None and val == lit.positive

    def __eq__(self, other):
        if not isinstance(other, Assignment):
            return NotImplemented
        return self._values == other._values

    def __hash__(self):
        return hash(frozenset(self._values.items()))

    def __repr__(self):
        inner = ", ".join(f"{v}={'T' if b else 'F'}" for v, b in sorted(self._values.items()))
        return f"Assignment({inner})"


# ---------------------------------------------------------------------------
# Clause sets


class ClauseSet:
    """A CNF formula over a :class:`VarTable`, canonicalized on construction.

    Canonical form: duplicate literals within a clause are merged, tautological
    clauses (containing ``v`` and ``!v``) are dropped, duplicate clauses are
    removed, and a formula containing an empty clause collapses to the single
    canonical contradiction ``(())``.
    """

    __slots__ = ("var_table", "clauses", "_ints", "_scratch", "_lock", "_sat")

    def __init__(self, var_table: VarTable, clauses: Iterable[Iterable[Lit]]):
        canon: list[tuple[Lit, ...]] = []
        seen: set[frozenset[int]] = set()
        contradiction = False
        for clause in clauses:
            lits: list[Lit] = []
            by_var: dict[int, bool] = {}
            tautology = False
            for lit in clause:
                if not isinstance(lit, Lit):
                    lit = Lit(lit[0], lit[1])
                if lit.var < 0 or lit.var >= len(var_table):
                    raise ValueError(f"literal references unknown variable id {lit.var}")
                prev = by_var.get(lit.var)
                if prev is None:
                    by_var[lit.var] = lit.positive
                    lits.append(lit)
                elif prev != lit.positive:
                    tautology = True
                    break
            if tautology:
                continue
            if not lits:
                contradiction = True
                break
            key = frozenset(l.encode() for l in lits)
            if key in seen:
                continue
            seen.add(key)
            canon.append(tuple(lits))
        self.var_table = var_table
        self.clauses: tuple[tuple[Lit, ...], ...] = ((),) if contradiction else tuple(canon)
        self._ints: Optional[list[list[int]]] = None
        self._scratch: Optional[_Scratch] = None
        self._lock = threading.Lock()
        self._sat: Optional[bool] = None

    @property
    def n_vars(self) -> int:
        return len(self.var_table)

    def is_contradiction(self) -> bool:
        return self.clauses == ((),)

    def int_clauses(self) -> list[list[int]]:
        if self._ints is None:
            self._ints = [[lit.encode() for lit in clause] for clause in self.clauses]
        return self._ints

    def with_clauses(self, extra: Iterable[Iterable[Lit]]) -> "ClauseSet":
        return ClauseSet(self.var_table, list(self.clauses) + [tuple(c) for c in extra])

    def with_units(self, lits: Iterable[Lit]) -> "ClauseSet":
        return self.with_clauses([(lit,) for lit in lits])

    def fingerprint(self) -> str:
        blob = ";".join(
            ",".join(str(lit.encode()) for lit in clause) for clause in self.clauses
        )
        head = f"{len(self.var_table)}|{self.var_table.user_count}|"
        return hashlib.sha1((head + blob).encode()).hexdigest()[:16]

    @contextmanager
    def exclusive_scratch(self) -> Iterator["_Scratch"]:
        """Yield the shared solver scratch under this clause set's lock.

        The scratch may be extended with overlay clauses; callers must
        truncate back to their mark before releasing.
        """
        with self._lock:
            if self._scratch is None:
                self._scratch = _Scratch(len(self.var_table), self.int_clauses())
            yield self._scratch

    def __repr__(self):
        return f"ClauseSet({len(self.clauses)} clauses, {len(self.var_table)} vars)"


# ---------------------------------------------------------------------------
# The DPLL engine


class _Scratch:
    """Mutable solving state for one clause database (not thread-safe).

    Clauses are lists of encoded literals (2v / 2v+1).  Propagation runs over
    occurrence lists with per-clause non-false counters; search is
    conflict-driven with first-UIP learning and non-chronological backjumping.

    The state is layered.  The root layer is the propagation closure of the
    unit clauses, rebuilt lazily whenever the clause database changes.  A
    *context* (:meth:`push` / :meth:`pop`) layers assumption literals on top
    and is the unit of clause learning: learned clauses and clauses added via
    :meth:`add_here` survive across :meth:`solve_here` calls inside one
    context and are discarded at :meth:`pop`.  Within a solve, the per-call
    assumptions occupy decision levels of their own, so learned clauses never
    depend on them.  A popped outermost context keeps its propagation trail
    cached; an immediately following push with the same literals reuses it.
    Because occurrence lists are append-only and every call restores counters
    exactly, identical call sequences produce identical results.

    The decision rule is fixed: lowest unbound variable id first, trying
    ``false`` first (``phase_true`` flips the tried phase).
    """

    __slots__ = ("n", "clauses", "occ", "nonfalse", "units", "has_empty",
                 "assign", "level", "reason", "seen", "trail", "qhead",
                 "root_ready", "root_conflict", "ctx", "lazy")

    def __init__(self, n_vars: int, clauses: Iterable[Sequence[int]]):
        self.n = n_vars
        self.clauses: list[list[int]] = []
        self.occ: list[list[int]] = [[] for _ in range(2 * n_vars)]
        self.nonfalse: list[int] = []
        self.units: list[int] = []
        self.has_empty = False
        self.assign = [-1] * n_vars
        self.level = [0] * n_vars
        self.reason = [-1] * n_vars
        self.seen = bytearray(n_vars)
        self.trail: list[int] = []
        self.qhead = 0
        self.root_ready = False
        self.root_conflict = False
        # context entries: [trail_len, clause_len, dead, extended, key]
        self.ctx: list[list] = []
        self.lazy: Optional[tuple[int, ...]] = None  # armed reusable context key
        for c in clauses:
            self.add_clause(c)

    # -- database maintenance (no active context) ---------------------------

    def _flush_lazy(self) -> None:
        if self.lazy is not None:
            self.lazy = None
            entry = self.ctx.pop()
            self._undo_to(entry[0])
            self._drop_clauses(entry[1])

    def _drop_clauses(self, keep: int) -> None:
        clauses = self.clauses
        occ = self.occ
        nonfalse = self.nonfalse
        while len(clauses) > keep:
            clause = clauses.pop()
            nonfalse.pop()
            for el in clause:
                occ[el].pop()

    def add_clause(self, elits: Sequence[int]) -> None:
        self._flush_lazy()
        assert not self.ctx, "add_clause needs an inactive context; use add_here"
        if self.root_ready:
            self._undo_to(0)
            self.root_ready = False
        clause = list(elits)
        idx = len(self.clauses)
        self.clauses.append(clause)
        self.nonfalse.append(len(clause))
        if not clause:
            self.has_empty = True
        elif len(clause) == 1:
            self.units.append(clause[0])
        else:
            for el in clause:
                self.occ[el].append(idx)

    def mark(self) -> tuple[int, int, bool]:
        self._flush_lazy()
        return (len(self.clauses), len(self.units), self.has_empty)

    def truncate(self, mark: tuple[int, int, bool]) -> None:
        self._flush_lazy()
        assert not self.ctx, "truncate needs an inactive context"
        n_clauses, n_units, had_empty = mark
        if len(self.clauses) == n_clauses:
            return
        if self.root_ready:
            self._undo_to(0)
            self.root_ready = False
        self._drop_clauses(n_clauses)
        del self.units[n_units:]
        self.has_empty = had_empty

    # -- assignment layers ---------------------------------------------------

    def _undo_to(self, tlen: int) -> None:
        trail = self.trail
        assign = self.assign
        occ = self.occ
        nonfalse = self.nonfalse
        qhead = self.qhead
        for i in range(len(trail) - 1, tlen - 1, -1):
            el = trail[i]
            assign[el >> 1] = -1
            if i < qhead:
                for ci in occ[el ^ 1]:
                    nonfalse[ci] += 1
        del trail[tlen:]
        # never move the head forward: literals kept on the trail beyond it
        # still await propagation
        self.qhead = qhead if qhead < tlen else tlen

    def _enqueue(self, el: int, lvl: int, rsn: int) -> bool:
        v = el >> 1
        val = (el & 1) ^ 1
        cur = self.assign[v]
        if cur == -1:
            self.assign[v] = val
            self.level[v] = lvl
            self.reason[v] = rsn
            self.trail.append(el)
            return True
        return cur == val

    def _propagate(self, lvl: int) -> int:
        """Propagate from the queue head; returns a conflict clause index or -1."""
        trail = self.trail
        assign = self.assign
        occ = self.occ
        nonfalse = self.nonfalse
        clauses = self.clauses
        level = self.level
        reason = self.reason
        conflict = -1
        qhead = self.qhead
        while qhead < len(trail):
            fl = trail[qhead] ^ 1
            qhead += 1
            for ci in occ[fl]:
                nf = nonfalse[ci] - 1
                nonfalse[ci] = nf
                if conflict >= 0:
                    continue
                if nf == 1:
                    unit = -1
                    for l2 in clauses[ci]:
                        a = assign[l2 >> 1]
                        if a == -1:
                            unit = l2
                            break
                        if a == (l2 & 1) ^ 1:
                            unit = -2
                            break
                    if unit >= 0:
                        v2 = unit >> 1
                        assign[v2] = (unit & 1) ^ 1
                        level[v2] = lvl
                        reason[v2] = ci
                        trail.append(unit)
                elif nf == 0:
                    conflict = ci
            if conflict >= 0:
                break
        self.qhead = qhead
        return conflict

    def _ensure_root(self) -> bool:
        """Propagate the unit closure once per database epoch."""
        if self.root_ready:
            return not self.root_conflict
        self._undo_to(0)
        self.root_conflict = self.has_empty
        if not self.root_conflict:
            for el in self.units:
                if not self._enqueue(el, 0, -1):
                    self.root_conflict = True
                    break
            if not self.root_conflict and self._propagate(0) >= 0:
                self.root_conflict = True
        self.root_ready = True
        return not self.root_conflict

    def push(self, assumptions: Sequence[int] = ()) -> None:
        """Open a context with the given literals pinned at the root level."""
        key = tuple(assumptions)
        if self.lazy is not None:
            if not self.ctx[1:] and self.lazy == key:
                self.lazy = None
                return
            self._flush_lazy()
        if self.ctx:
            alive = not self.ctx[-1][2]
        else:
            alive = self._ensure_root()
        base = len(self.trail)
        cbase = len(self.clauses)
        dead = not alive
        if not dead:
            for el in assumptions:
                if not self._enqueue(el, 0, -1):
                    dead = True
                    break
            if not dead and self._propagate(0) >= 0:
                dead = True
        self.ctx.append([base, cbase, dead, False, key])

    def pop(self) -> None:
        entry = self.ctx[-1]
        if len(self.ctx) == 1 and not entry[3]:
            # keep the propagated trail cached; a matching push reuses it
            self._drop_clauses(entry[1])
            self.lazy = entry[4]
            return
        self.ctx.pop()
        self._undo_to(entry[0])
        self._drop_clauses(entry[1])

    def add_here(self, elits: Sequence[int]) -> None:
        """Add a clause inside the current context (discarded by :meth:`pop`)."""
        entry = self.ctx[-1]
        entry[3] = True  # trail may grow at context level; not reusable
        clause = list(elits)
        idx = len(self.clauses)
        nf = 0
        pending = -1
        for el in clause:
            a = self.assign[el >> 1]
            if a != (el & 1):
                nf += 1
                if a == -1:
                    pending = el
                else:
                    pending = -2  # already satisfied
        self.clauses.append(clause)
        self.nonfalse.append(nf)
        for el in clause:
            self.occ[el].append(idx)
        if entry[2]:
            return
        if nf == 0:
            entry[2] = True
        elif nf == 1 and pending >= 0:
            if not self._enqueue(pending, 0, idx):
                entry[2] = True
            elif self._propagate(0) >= 0:
                entry[2] = True

    # -- search ---------------------------------------------------------------

    def solve_here(
        self, extras: Sequence[int] = (), phase_true: bool = False
    ) -> Optional[list[int]]:
        """CDCL search inside the current context.

        ``extras`` are per-call assumptions.  Each occupies a decision level
        of its own (so clauses learned here stay valid for the whole
        context); they are assigned in one batch and propagated together,
        which coarsens level bookkeeping but never past the batch.  Returns a
        total 0/1 assignment list, or None.
        """
        entry = self.ctx[-1]
        if entry[2]:
            return None
        n = self.n
        assign = self.assign
        level = self.level
        reason = self.reason
        occ = self.occ
        nonfalse = self.nonfalse
        clauses = self.clauses
        seen = self.seen
        trail = self.trail
        base = len(trail)
        trail_lim: list[int] = []
        phase = 1 if phase_true else 0
        dec_bit = 0 if phase_true else 1
        n_extras = len(extras)
        low = 0
        qhead = self.qhead

        def bail() -> None:
            self.qhead = qhead
            self._undo_to(base)

        # batch-assign the per-call assumptions, one level each
        for el in extras:
            a = assign[el >> 1]
            if a == (el & 1):
                bail()
                return None
            trail_lim.append(len(trail))
            if a == -1:
                assign[el >> 1] = (el & 1) ^ 1
                level[el >> 1] = len(trail_lim)
                reason[el >> 1] = -1
                trail.append(el)

        while True:
            # inline unit propagation from the queue head
            conflict = -1
            lvl = len(trail_lim)
            while qhead < len(trail):
                fl = trail[qhead] ^ 1
                qhead += 1
                for ci in occ[fl]:
                    nf = nonfalse[ci] - 1
                    nonfalse[ci] = nf
                    if conflict >= 0:
                        continue
                    if nf == 1:
                        unit = -1
                        for l2 in clauses[ci]:
                            a = assign[l2 >> 1]
                            if a == -1:
                                unit = l2
                                break
                            if a == (l2 & 1) ^ 1:
                                unit = -2
                                break
                        if unit >= 0:
                            v2 = unit >> 1
                            assign[v2] = (unit & 1) ^ 1
                            level[v2] = lvl
                            reason[v2] = ci
                            trail.append(unit)
                    elif nf == 0:
                        conflict = ci
                if conflict >= 0:
                    break
            if conflict >= 0:
                # batch assumption assignment can surface a conflict living
                # entirely below the newest level; drop to its real level
                # first so the single-reasonless-literal invariant holds
                cur_level = 0
                for q in clauses[conflict]:
                    lq = level[q >> 1]
                    if lq > cur_level:
                        cur_level = lq
                if cur_level == 0:
                    bail()
                    return None
                if cur_level < len(trail_lim):
                    self.qhead = qhead
                    self._undo_to(trail_lim[cur_level])
                    qhead = self.qhead
                    del trail_lim[cur_level:]
                    low = 0
                # first-UIP analysis; level-0 literals (root + context) drop out
                learned: list[int] = []
                touched: list[int] = []
                counter = 0
                p = -1
                idx = len(trail) - 1
                creason = clauses[conflict]
                while True:
                    for q in creason:
                        if q == p:
                            continue
                        v = q >> 1
                        if seen[v] or level[v] == 0:
                            continue
                        seen[v] = 1
                        touched.append(v)
                        if level[v] == cur_level:
                            counter += 1
                        else:
                            learned.append(q)
                    while not seen[trail[idx] >> 1]:
                        idx -= 1
                    p = trail[idx]
                    idx -= 1
                    counter -= 1
                    if counter == 0:
                        break
                    creason = clauses[reason[p >> 1]]
                asserting = p ^ 1
                for v in touched:
                    seen[v] = 0
                bj = 0
                for q in learned:
                    lq = level[q >> 1]
                    if lq > bj:
                        bj = lq
                self.qhead = qhead
                self._undo_to(trail_lim[bj])
                qhead = self.qhead
                del trail_lim[bj:]
                low = 0
                av = asserting >> 1
                if learned:
                    ci = len(clauses)
                    clauses.append([asserting] + learned)
                    # every non-asserting literal is false at this point
                    nonfalse.append(1)
                    occ[asserting].append(ci)
                    for el in learned:
                        occ[el].append(ci)
                    reason[av] = ci
                else:
                    reason[av] = -1
                assign[av] = (asserting & 1) ^ 1
                level[av] = bj
                trail.append(asserting)
                continue
            # decide: pending per-call assumptions first, then lowest unbound
            lvl = len(trail_lim)
            if lvl < n_extras:
                el = extras[lvl]
                a = assign[el >> 1]
                if a == (el & 1):
                    bail()
                    return None
                trail_lim.append(len(trail))
                if a == -1:
                    assign[el >> 1] = (el & 1) ^ 1
                    level[el >> 1] = lvl + 1
                    reason[el >> 1] = -1
                    trail.append(el)
                continue
            var = -1
            for v in range(low, n):
                if assign[v] == -1:
                    var = v
                    break
            if var == -1:
                model = assign.copy()
                bail()
                return model
            low = var + 1
            trail_lim.append(len(trail))
            assign[var] = phase
            level[var] = len(trail_lim)
            reason[var] = -1
            trail.append((var << 1) | dec_bit)

    def solve(
        self, assumptions: Sequence[int] = (), phase_true: bool = False
    ) -> Optional[list[int]]:
        """One-shot satisfiability; clause learning is local to the call."""
        self.push(assumptions)
        try:
            return self.solve_here((), phase_true)
        finally:
            self.pop()


# ---------------------------------------------------------------------------
# Public solver entry points


def solve(cs: ClauseSet, assumptions: Sequence[Lit] = ()) -> Optional[Assignment]:
    """Satisfiability under assumptions; returns a total model or None.

    Deterministic: equal input yields the identical model.
    """
    raw = solve_raw(cs, [lit.encode() for lit in assumptions])
    if raw is None:
        return None
    return Assignment({v: bool(raw[v]) for v in range(len(raw))})


def solve_raw(
    cs: ClauseSet, eassumptions: Sequence[int] = (), phase_true: bool = False
) -> Optional[list[int]]:
    """Like :func:`solve` but takes and returns the raw int encoding."""
    with cs.exclusive_scratch() as scratch:
        result = scratch.solve(eassumptions, phase_true)
    if not eassumptions and cs._sat is None:
        cs._sat = result is not None
    return result


def is_satisfiable(cs: ClauseSet) -> bool:
    if cs._sat is None:
        cs._sat = solve_raw(cs) is not None
    return cs._sat


def entails(cs: ClauseSet, lit: Lit) -> bool:
    """Whether every model of ``cs`` satisfies ``lit``.

    Raises UnsatContext when ``cs`` itself is unsatisfiable, which signals a
    broken invariant in the calling session.
    """
    if not is_satisfiable(cs):
        raise UnsatContext("entailment queried on an unsatisfiable clause set")
    return solve_raw(cs, [lit.negate().encode()]) is None


_ALL_MODELS_GUARD = 24


def all_model_masks(cs: ClauseSet) -> list[int]:
    """Brute-force truth-table enumeration, as true-set bitmasks in ascending order.

    This is the oracle the property suites lean on; it never consults the
    DPLL machinery.
    """
    n = len(cs.var_table)
    if n > _ALL_MODELS_GUARD:
        raise TooLarge(f"all_models limited to {_ALL_MODELS_GUARD} variables, got {n}")
    if cs.is_contradiction():
        return []
    pairs = []
    for clause in cs.clauses:
        pmask = 0
        nmask = 0
        for lit in clause:
            if lit.positive:
                pmask |= 1 << lit.var
            else:
                nmask |= 1 << lit.var
        pairs.append((pmask, nmask))
    out = []
    full = (1 << n) - 1
    for mask in range(1 << n):
        inv = full & ~mask
        ok = True
        for pmask, nmask in pairs:
            if not (mask & pmask or inv & nmask):
                ok = False
                break
        if ok:
            out.append(mask)
    return out


def all_models(cs: ClauseSet) -> list[Assignment]:
    """All satisfying total assignments, ordered by true-set bit pattern."""
    n = len(cs.var_table)
    return [
        Assignment({v: bool(mask >> v & 1) for v in range(n)})
        for mask in all_model_masks(cs)
    ]


def count_models(cs: ClauseSet, cap: Optional[int] = None) -> int:
    """Exact model count via DPLL with free-variable factoring.

    When ``cap`` is given the count saturates at ``cap + 1`` and the search
    stops early.  With the structural CNF encoding used by :func:`to_cnf`,
    auxiliary variables are functionally determined, so the count equals the
    count over the original variables.
    """
    if cs.is_contradiction():
        return 0
    n = len(cs.var_table)
    limit = None if cap is None else cap + 1

    def recurse(clauses: list[list[int]], n_assigned: int) -> int:
        # unit propagation
        fixed: dict[int, int] = {}
        while True:
            unit = None
            for c in clauses:
                if len(c) == 1:
                    unit = c[0]
                    break
            if unit is None:
                break
            want = (unit & 1) ^ 1
            seen = fixed.get(unit >> 1)
            if seen is not None and seen != want:
                return 0
            if seen is None:
                fixed[unit >> 1] = want
                n_assigned += 1
            nxt = []
            for c in clauses:
                if unit in c:
                    continue
                if unit ^ 1 in c:
                    c = [l for l in c if l != unit ^ 1]
                    if not c:
                        return 0
                nxt.append(c)
            clauses = nxt
        if not clauses:
            return 1 << (n - n_assigned)
        branch = clauses[0][0] >> 1
        total = 0
        for el in ((branch << 1) | 1, branch << 1):  # false first
            sub = recurse(clauses + [[el]], n_assigned)
            total += sub
            if limit is not None and total >= limit:
                return limit
        return total

    ints = [list(c) for c in cs.int_clauses()]
    result = recurse(ints, 0)
    return result


# ---------------------------------------------------------------------------
# CNF construction

_DISTRIBUTE_LIMIT = 64


def to_cnf(expr: Expr, table: VarTable) -> ClauseSet:
    """Translate an expression to CNF, equisatisfiable and model-equivalent
    on the original variables.

    Near-clausal conjuncts (the feature-model templates in particular) are
    distributed directly.  A conjunct whose distributed form would exceed a
    small clause budget gets a structural encoding instead: every gate
    introduces an auxiliary variable defined by a biconditional, so models of
    the result project one-to-one onto models of ``expr``.
    """
    conjuncts = _flatten_and(expr)
    out: list[list[Lit]] = []
    work_table = table
    for conj in conjuncts:
        nnf = _nnf(conj, False)
        if nnf is TRUE:
            continue
        if nnf is FALSE:
            return ClauseSet(table, [()])
        if _estimate(nnf) <= _DISTRIBUTE_LIMIT:
            out.extend(_distribute(nnf))
        else:
            if work_table is table:
                work_table = table.copy()
            root = _structural(nnf, work_table, out)
            out.append([root])
    return ClauseSet(work_table, out)


def _flatten_and(expr: Expr) -> list[Expr]:
    items: list[Expr] = []
    stack = [expr]
    while stack:
        node = stack.pop(0)
        if isinstance(node, And):
            stack = list(node.items) + stack
        else:
            items.append(node)
    return items


def _nnf(e: Expr, negated: bool) -> Expr:
    """Negation normal form with constant folding."""
    if isinstance(e, Const):
        return FALSE if (e.value == negated) else TRUE
    if isinstance(e, Var):
        return Not(e) if negated else e
    if isinstance(e, Not):
        return _nnf(e.operand, not negated)
    if isinstance(e, Implies):
        return _nnf(Or((Not(e.lhs), e.rhs)), negated)
    if isinstance(e, Iff):
        if negated:
            return _nnf(And((Or((e.lhs, e.rhs)), Or((Not(e.lhs), Not(e.rhs))))), False)
        return _nnf(And((Or((Not(e.lhs), e.rhs)), Or((Not(e.rhs), e.lhs)))), False)
    if isinstance(e, (And, Or)):
        flipped = Or if (isinstance(e, And) == negated) else And
        parts = []
        for item in e.items:
            part = _nnf(item, negated)
            if part is TRUE:
                if flipped is Or:
                    return TRUE
                continue
            if part is FALSE:
                if flipped is And:
                    return FALSE
                continue
            parts.append(part)
        if not parts:
            return TRUE if flipped is And else FALSE
        if len(parts) == 1:
            return parts[0]
        return flipped(tuple(parts))
    raise TypeError(f"unsupported expression node {e!r}")


def _estimate(nnf: Expr) -> int:
    if isinstance(nnf, (Var, Not)):
        return 1
    if isinstance(nnf, And):
        return sum(_estimate(item) for item in nnf.items)
    if isinstance(nnf, Or):
        product = 1
        for item in nnf.items:
            product *= _estimate(item)
            if product > 4 * _DISTRIBUTE_LIMIT:
                return product
        return product
    return 1


def _as_lit(nnf: Expr) -> Optional[Lit]:
    if isinstance(nnf, Var):
        return pos(nnf.vid)
    if isinstance(nnf, Not) and isinstance(nnf.operand, Var):
        return neg(nnf.operand.vid)
    return None


def _distribute(nnf: Expr) -> list[list[Lit]]:
    lit = _as_lit(nnf)
    if lit is not None:
        return [[lit]]
    if isinstance(nnf, And):
        out = []
        for item in nnf.items:
            out.extend(_distribute(item))
        return out
    if isinstance(nnf, Or):
        acc: list[list[Lit]] = [[]]
        for item in nnf.items:
            part = _distribute(item)
            acc = [a + b for a in acc for b in part]
        return acc
    raise TypeError(f"distribution expects NNF, got {nnf!r}")


def _structural(nnf: Expr, table: VarTable, out: list[list[Lit]]) -> Lit:
    lit = _as_lit(nnf)
    if lit is not None:
        return lit
    child_lits = [_structural(item, table, out) for item in nnf.items]
    gate = pos(table.add(f"@aux{len(table)}", aux=True))
    if isinstance(nnf, And):
        for cl in child_lits:
            out.append([gate.negate(), cl])
        out.append([gate] + [cl.negate() for cl in child_lits])
    else:
        for cl in child_lits:
            out.append([gate, cl.negate()])
        out.append([gate.negate()] + list(child_lits))
    return gate


# ---------------------------------------------------------------------------
# DIMACS interchange


def to_dimacs(cs: ClauseSet) -> str:
    """Standard DIMACS CNF with a comment block mapping ids to names."""
    table = cs.var_table
    lines = []
    for vid in range(len(table)):
        lines.append(f"c var {vid + 1} {table.name_of(vid)}")
        if table.is_aux(vid):
            lines.append(f"c aux {vid + 1}")
    lines.append(f"p cnf {len(table)} {len(cs.clauses)}")
    for clause in cs.clauses:
        parts = [str(lit.var + 1 if lit.positive else -(lit.var + 1)) for lit in clause]
        lines.append(" ".join(parts + ["0"]))
    return "\n".join(lines) + "\n"


def from_dimacs(text: str) -> ClauseSet:
    """Parse plain DIMACS CNF; honors the name/aux comment block if present."""
    names: dict[int, str] = {}
    aux_ids: set[int] = set()
    n_vars = None
    tokens: list[int] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("c"):
            parts = stripped.split()
            if len(parts) >= 4 and parts[1] == "var":
                try:
                    names[int(parts[2])] = parts[3]
                except ValueError:
                    pass
            elif len(parts) >= 3 and parts[1] == "aux":
                try:
                    aux_ids.add(int(parts[2]))
                except ValueError:
                    pass
            continue
        if stripped.startswith("p"):
            parts = stripped.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed problem line {stripped!r}")
            try:
                n_vars = int(parts[2])
                int(parts[3])
            except ValueError as exc:
                raise DimacsError(f"line {lineno}: malformed problem line {stripped!r}") from exc
            continue
        if stripped.startswith("%"):
            break
        for tok in stripped.split():
            try:
                tokens.append(int(tok))
            except ValueError as exc:
                raise DimacsError(f"line {lineno}: unexpected token {tok!r}") from exc
    if n_vars is None:
        raise DimacsError("missing 'p cnf' problem line")
    table = VarTable()
    for vid in range(1, n_vars + 1):
        if vid in aux_ids:
            continue
        table.add(names.get(vid, f"v{vid}"))
    for vid in sorted(aux_ids):
        if vid > n_vars:
            raise DimacsError(f"aux comment references unknown variable {vid}")
        table.add(names.get(vid, f"v{vid}"), aux=True)
    if aux_ids:
        # ids must stay dense and user-first; remap original order
        order = [vid for vid in range(1, n_vars + 1) if vid not in aux_ids] + sorted(aux_ids)
        remap = {orig: new for new, orig in enumerate(order)}
    else:
        remap = {vid: vid - 1 for vid in range(1, n_vars + 1)}
    clauses: list[list[Lit]] = []
    current: list[Lit] = []
    for tok in tokens:
        if tok == 0:
            clauses.append(current)
            current = []
            continue
        var = abs(tok)
        if var > n_vars:
            raise DimacsError(f"literal {tok} exceeds declared variable count {n_vars}")
        current.append(Lit(remap[var], tok > 0))
    if current:
        clauses.append(current)
    return ClauseSet(table, clauses)
