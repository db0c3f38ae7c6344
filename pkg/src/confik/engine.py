"""The interactive configuration process: decisions, inference, completion.

A :class:`Session` is a value; every operation returns a new session.  The
session constraint is the base clause set conjoined with all live decision
literals, and it is satisfiable at every step by construction: decisions that
would break satisfiability are rejected, never applied.

After every mutation an inference pass runs to fixpoint, so unassigned
variables always admit both values.  Inference is computed as the backbone of
the current constraint using model intersection: any model witnesses that the
variables it splits on are not forced, so only candidates constant across all
seen models need an actual solver refutation.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

from .errors import (
    AlreadyAssigned,
    InconsistentDecision,
    NotAUserDecision,
    UnsatModel,
)
from .logic import ClauseSet, solve_raw
from .reasoning import _minimal_core

__all__ = [
    "Decision",
    "Session",
    "new_session",
    "apply_decision",
    "retract",
    "shopping_principle",
    "complete_blind",
    "is_complete",
    "export_script",
    "replay_script",
]

_POOL_LIMIT = 8


@dataclass(frozen=True)
class Decision:
    var: int
    value: bool
    origin: str  # "user" | "inferred" | "auto"
    step: int


@dataclass(frozen=True)
class Session:
    """One configuration process over a fixed base clause set.

    ``decisions`` is the ordered log; step indices increase by one per entry,
    mirroring the one-literal-per-step view of the process.  ``highlight``
    holds the needs-attention set computed by the most recent safe-completion
    call, filtered down to still-unassigned variables.  ``dropped`` reports
    user decisions discarded by the last retraction replay.  ``witnesses`` is
    a solver-model cache that only affects how much work inference does,
    never its outcome.
    """

    base: ClauseSet
    decisions: tuple[Decision, ...] = ()
    highlight: frozenset[int] = frozenset()
    dropped: tuple[tuple[int, bool], ...] = ()
    witnesses: tuple[tuple[int, ...], ...] = field(default=(), compare=False, repr=False)

    def assignment(self) -> dict[int, bool]:
        return {d.var: d.value for d in self.decisions}

    def status_of(self, var: int) -> str:
        for d in self.decisions:
            if d.var == var:
                if d.origin == "auto":
                    return "auto_false"
                return f"{d.origin}_{'true' if d.value else 'false'}"
        return "unassigned"

    def var_status(self) -> dict[int, str]:
        status = {v: "unassigned" for v in self.base.var_table.user_ids()}
        for d in self.decisions:
            if d.origin == "auto":
                status[d.var] = "auto_false"
            else:
                status[d.var] = f"{d.origin}_{'true' if d.value else 'false'}"
        return status

    def unassigned(self) -> list[int]:
        bound = {d.var for d in self.decisions}
        return [v for v in self.base.var_table.user_ids() if v not in bound]

    def user_decisions(self) -> list[Decision]:
        return [d for d in self.decisions if d.origin == "user"]

    def decision_elits(self) -> list[int]:
        return [(d.var << 1) | (0 if d.value else 1) for d in self.decisions]

    def selected_names(self) -> list[str]:
        table = self.base.var_table
        return [table.name_of(d.var) for d in sorted(self.decisions, key=lambda d: d.var) if d.value]


def _next_step(decisions: Sequence[Decision]) -> int:
    return decisions[-1].step + 1 if decisions else 0


def _infer(
    cs: ClauseSet,
    fixed: list[int],
    candidates_from: Iterable[int],
    pool: list[tuple[int, ...]],
) -> Optional[list[tuple[int, bool]]]:
    """Backbone of ``cs`` conjoined with the ``fixed`` literals.

    Returns forced (var, value) pairs in ascending var order, or None when the
    constraint is unsatisfiable.  ``pool`` is a list of known models of the
    constraint; it is extended in place with refutation models found here.
    Every model in the pool witnesses that the variables it splits on are not
    forced, so only pool-constant variables need a solver refutation.
    """
    with cs.exclusive_scratch() as scratch:
        scratch.push(fixed)
        try:
            if not pool:
                first = scratch.solve_here()
                if first is None:
                    return None
                pool.append(tuple(first))
            # a true-leaning model splits nearly every unforced variable
            # against the false-leaning witnesses, collapsing the candidates
            opposite = scratch.solve_here(phase_true=True)
            if opposite is not None:
                pool.append(tuple(opposite))
            candidate: dict[int, int] = {}
            for v in candidates_from:
                vals = {m[v] for m in pool}
                if len(vals) == 1:
                    candidate[v] = vals.pop()
            forced: list[tuple[int, bool]] = []
            pinned: list[int] = []
            for v in sorted(candidate):
                want = candidate.get(v)
                if want is None:
                    continue
                refutation = scratch.solve_here(pinned + [(v << 1) | want])
                if refutation is None:
                    forced.append((v, bool(want)))
                    pinned.append((v << 1) | (want ^ 1))
                else:
                    pool.append(tuple(refutation))
                    for w in list(candidate):
                        if refutation[w] != candidate[w]:
                            del candidate[w]
            return forced
        finally:
            scratch.pop()


def _run_inference(
    session: Session, fixed: list[int]
) -> tuple[Optional[list[tuple[int, bool]]], list[tuple[int, ...]]]:
    bound = {d.var for d in session.decisions}
    unassigned = [v for v in session.base.var_table.user_ids() if v not in bound]
    pool = [m for m in session.witnesses if all(m[el >> 1] == (el & 1) ^ 1 for el in fixed)]
    forced = _infer(session.base, fixed, unassigned, pool)
    if forced is None:
        return None, pool
    return forced, pool[-_POOL_LIMIT:]


def new_session(cs: ClauseSet) -> Session:
    """Fresh session; literals forced by the base constraint become step-0
    inferred decisions."""
    blank = Session(base=cs)
    forced, pool = _run_inference(blank, [])
    if forced is None:
        raise UnsatModel("the model admits no products")
    decisions = tuple(
        Decision(v, val, "inferred", i) for i, (v, val) in enumerate(forced)
    )
    return Session(base=cs, decisions=decisions, witnesses=tuple(pool))


def apply_decision(session: Session, var: int, value: bool) -> Session:
    """Apply a user decision, then infer every newly forced literal.

    Rejects decisions on assigned variables and decisions that would make the
    constraint unsatisfiable (the session is returned unchanged in spirit:
    the exception carries the reason and nothing is mutated).
    """
    table = session.base.var_table
    if var < 0 or var >= table.user_count:
        raise ValueError(f"unknown variable id {var}")
    if any(d.var == var for d in session.decisions):
        raise AlreadyAssigned(f"variable {table.name_of(var)!r} already has a value")
    fixed = session.decision_elits() + [(var << 1) | (0 if value else 1)]
    probe = replace(session, decisions=session.decisions + (Decision(var, value, "user", 0),))
    forced, pool = _run_inference(probe, fixed)
    if forced is None:
        raise InconsistentDecision(
            f"setting {table.name_of(var)!r} to {str(value).lower()} contradicts the constraints"
        )
    step = _next_step(session.decisions)
    entries = [Decision(var, value, "user", step)]
    for offset, (v, val) in enumerate(forced, start=1):
        entries.append(Decision(v, val, "inferred", step + offset))
    assigned_now = {e.var for e in entries}
    return Session(
        base=session.base,
        decisions=session.decisions + tuple(entries),
        highlight=session.highlight - assigned_now,
        witnesses=tuple(pool),
    )


def retract(session: Session, var: int) -> Session:
    """Remove a user decision and replay the remaining user decisions in order.

    Inferred and auto decisions are recomputed from scratch.  A surviving user
    decision whose value inference now implies is absorbed silently; one that
    has become contradictory is dropped and reported via ``Session.dropped``.
    """
    table = session.base.var_table
    live = next((d for d in session.decisions if d.var == var), None)
    if live is None or live.origin != "user":
        raise NotAUserDecision(
            f"variable {table.name_of(var)!r} carries no retractable user decision"
        )
    survivors = [d for d in session.user_decisions() if d.var != var]
    rebuilt = new_session(session.base)
    dropped: list[tuple[int, bool]] = []
    for d in survivors:
        current = rebuilt.assignment()
        if d.var in current:
            if current[d.var] != d.value:
                dropped.append((d.var, d.value))
            continue
        try:
            rebuilt = apply_decision(rebuilt, d.var, d.value)
        except InconsistentDecision:
            dropped.append((d.var, d.value))
    return replace(rebuilt, dropped=tuple(dropped), highlight=frozenset())


def shopping_principle(session: Session) -> Session:
    """Safe completion: deselect every currently dispensable unassigned
    variable in one batch, then highlight whatever is still open.

    Never sets a variable to true and never decides between open
    alternatives; an immediate second call is a no-op.
    """
    base = session.base
    fixed = session.decision_elits()
    _, true_sets, _ = _minimal_core(base, fixed, collect=True)
    seen_true = set().union(*true_sets) if true_sets else set()
    assigned = {d.var for d in session.decisions}
    batch = [
        v
        for v in base.var_table.user_ids()
        if v not in assigned and v not in seen_true
    ]
    step = _next_step(session.decisions)
    entries = [Decision(v, False, "auto", step + i) for i, v in enumerate(batch)]
    interim = Session(
        base=base,
        decisions=session.decisions + tuple(entries),
        witnesses=session.witnesses,
    )
    fixed_after = interim.decision_elits()
    forced, pool = _run_inference(interim, fixed_after)
    assert forced is not None, "constraint became unsatisfiable after deselecting dispensable vars"
    step = _next_step(interim.decisions)
    inferred = tuple(
        Decision(v, val, "inferred", step + i) for i, (v, val) in enumerate(forced)
    )
    final = Session(
        base=base,
        decisions=interim.decisions + inferred,
        witnesses=tuple(pool),
    )
    return replace(final, highlight=frozenset(final.unassigned()))


def complete_blind(session: Session) -> Session:
    """Scenario-A completion: bind every unassigned variable to the solver
    model's value, acting on the user's behalf."""
    model = solve_raw(session.base, session.decision_elits())
    assert model is not None, "session invariant: the current constraint is satisfiable"
    current = session
    for v in session.base.var_table.user_ids():
        if any(d.var == v for d in current.decisions):
            continue
        current = apply_decision(current, v, bool(model[v]))
    return current


def is_complete(session: Session) -> bool:
    return not session.unassigned()


def export_script(session: Session) -> str:
    """User decisions as a replayable script, one ``decide <var> <bool>`` per line."""
    table = session.base.var_table
    lines = [
        f"decide {table.name_of(d.var)} {'true' if d.value else 'false'}"
        for d in session.user_decisions()
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def replay_script(cs: ClauseSet, text: str) -> Session:
    """Rebuild a session by replaying an exported decision script."""
    session = new_session(cs)
    table = cs.var_table
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] != "decide" or parts[2] not in ("true", "false"):
            raise ValueError(f"line {lineno}: expected 'decide <var> <true|false>', got {raw!r}")
        if parts[1] not in table:
            raise ValueError(f"line {lineno}: unknown variable {parts[1]!r}")
        session = apply_decision(session, table.id_of(parts[1]), parts[2] == "true")
    return session
