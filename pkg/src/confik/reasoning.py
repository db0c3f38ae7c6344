"""Deselectable sets, dispensable variables, minimal models, and their oracles.

The fast path computes dispensable variables from minimal-model enumeration
(a variable is dispensable exactly when it is false in every minimal model).
The module also ships three slow, exhaustive oracles used by the property
suites: the subset-quantifier definition of dispensability, the
free-of-negation characterization, and the intersection of maximal
deselectable sets.  All three work off the brute-force truth table, never the
DPLL path they are checking.

Minimality is always judged over the user variables; auxiliary CNF variables
are projected away.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import TooLarge, UnsatInput
from .logic import (
    Assignment,
    ClauseSet,
    Lit,
    all_model_masks,
    entails,
    neg,
    pos,
    solve_raw,
)

__all__ = [
    "MinimalModelSet",
    "DispensabilityReport",
    "SettledReport",
    "is_deselectable",
    "enumerate_minimal_models",
    "count_minimal_models",
    "dispensable_vars",
    "dispensable_brute",
    "free_of_negation",
    "maximal_deselectable_sets",
    "settled_status",
]

_BRUTE_GUARD = 16


@dataclass(frozen=True)
class MinimalModelSet:
    """The subset-minimal models of a clause set, as true-sets over user vars."""

    models: tuple[Assignment, ...]
    source: str

    def true_sets(self) -> list[frozenset[int]]:
        return [m.true_set() for m in self.models]


@dataclass(frozen=True)
class DispensabilityReport:
    """Partition of the variables by what the completion function may do.

    ``dispensable`` vars are false in all minimal models and can be deselected
    in one batch; ``forced_true`` / ``forced_false`` are entailed either way;
    ``needs_attention`` vars are neither forced nor dispensable, so the user
    must decide them.
    """

    dispensable: frozenset[int]
    forced_true: frozenset[int]
    forced_false: frozenset[int]
    needs_attention: frozenset[int]


@dataclass(frozen=True)
class SettledReport:
    settled_true: frozenset[int]
    settled_false: frozenset[int]
    unsettled: frozenset[int]


def is_deselectable(cs: ClauseSet, var_ids: Iterable[int]) -> bool:
    """Whether every variable in the set can be set to false at once."""
    assumptions = [(v << 1) | 1 for v in var_ids]
    return solve_raw(cs, assumptions) is not None


def _minimal_core(
    cs: ClauseSet,
    assumptions: Sequence[int] = (),
    cap: Optional[int] = None,
    collect: bool = True,
    sample_limit: int = 4,
) -> tuple[int, list[frozenset[int]], list[tuple[int, ...]]]:
    """Shared enumeration loop.

    Finds one model, shrinks it to a minimal one by repeatedly demanding a
    strictly smaller true-set (variables outside the candidate are pinned
    false, and a clause requires dropping at least one current true), then
    blocks the cone above it and repeats.  The shrinking clauses double as
    blocking clauses: they only ever exclude non-minimal models.

    Returns (count, true_sets, sample_raw_models); when ``cap`` is given the
    count saturates at ``cap + 1``.  Raises UnsatInput when the clause set
    plus assumptions has no model at all.
    """
    user_n = cs.var_table.user_count
    user_range = range(user_n)
    found: list[frozenset[int]] = []
    samples: list[tuple[int, ...]] = []
    count = 0
    with cs.exclusive_scratch() as scratch:
        scratch.push(list(assumptions))
        try:
            while True:
                raw = scratch.solve_here()
                if raw is None:
                    break
                true_vars = {v for v in user_range if raw[v]}
                while True:
                    scratch.add_here([(v << 1) | 1 for v in sorted(true_vars)])
                    pins = [(v << 1) | 1 for v in user_range if v not in true_vars]
                    smaller = scratch.solve_here(pins)
                    if smaller is None:
                        break
                    raw = smaller
                    true_vars = {v for v in user_range if raw[v]}
                count += 1
                if collect:
                    found.append(frozenset(true_vars))
                if len(samples) < sample_limit:
                    samples.append(tuple(raw))
                if cap is not None and count > cap:
                    break
        finally:
            scratch.pop()
    if count == 0:
        raise UnsatInput("no models: minimal-model enumeration needs a satisfiable input")
    return count, found, samples


def _mask(true_set: frozenset[int]) -> int:
    m = 0
    for v in true_set:
        m |= 1 << v
    return m


def enumerate_minimal_models(cs: ClauseSet, assumptions: Sequence[Lit] = ()) -> MinimalModelSet:
    """All subset-minimal models over the user variables.

    Output is sorted by the true-set bit pattern, so runs are reproducible.
    """
    easm = [lit.encode() for lit in assumptions]
    _, found, _ = _minimal_core(cs, easm, collect=True)
    user_n = cs.var_table.user_count
    found.sort(key=_mask)
    models = tuple(
        Assignment({v: (v in ts) for v in range(user_n)}) for ts in found
    )
    return MinimalModelSet(models=models, source=cs.fingerprint())


def count_minimal_models(
    cs: ClauseSet, assumptions: Sequence[int] = (), cap: Optional[int] = None
) -> tuple[int, list[tuple[int, ...]]]:
    """Minimal-model count (saturating at cap+1) plus a few witness models.

    Takes raw encoded assumptions; this is the hot path of the simulation
    harness.
    """
    count, _, samples = _minimal_core(cs, assumptions, cap=cap, collect=False)
    return count, samples


def dispensable_vars(cs: ClauseSet, assumptions: Sequence[Lit] = ()) -> DispensabilityReport:
    """Classify user variables via minimal models and entailment checks."""
    mm = enumerate_minimal_models(cs, assumptions)
    user = frozenset(cs.var_table.user_ids())
    true_sets = mm.true_sets()
    seen_true = frozenset().union(*true_sets) if true_sets else frozenset()
    always_true = frozenset.intersection(*true_sets) if true_sets else frozenset()
    dispensable = user - seen_true
    ctx = cs.with_units(assumptions) if assumptions else cs
    # a variable true in some minimal model but absent from another is free;
    # only the two pruned candidate pools can be entailed at all
    forced_true = frozenset(v for v in always_true if entails(ctx, pos(v)))
    forced_false = frozenset(v for v in dispensable if entails(ctx, neg(v)))
    needs_attention = user - dispensable - forced_true
    return DispensabilityReport(
        dispensable=dispensable,
        forced_true=forced_true,
        forced_false=forced_false,
        needs_attention=needs_attention,
    )


def settled_status(cs: ClauseSet, assumptions: Sequence[Lit] = ()) -> SettledReport:
    """Settled-at-false = dispensable; settled-at-true = forced; rest unsettled."""
    report = dispensable_vars(cs, assumptions)
    user = frozenset(cs.var_table.user_ids())
    return SettledReport(
        settled_true=report.forced_true,
        settled_false=report.dispensable,
        unsettled=user - report.forced_true - report.dispensable,
    )


# ---------------------------------------------------------------------------
# Exhaustive oracles (truth-table based)


def _user_model_masks(cs: ClauseSet) -> list[int]:
    """Distinct models projected to user variables, as bitmasks."""
    user_n = cs.var_table.user_count
    if user_n > _BRUTE_GUARD:
        raise TooLarge(f"brute-force oracle limited to {_BRUTE_GUARD} user variables")
    keep = (1 << user_n) - 1
    return sorted({m & keep for m in all_model_masks(cs)})


def dispensable_brute(cs: ClauseSet, var: int) -> bool:
    """Literal evaluation of the subset-quantifier definition of dispensability.

    For every X over the user variables: if X is deselectable, X must remain
    deselectable once ``var`` is pinned false.
    """
    models = _user_model_masks(cs)
    user_n = cs.var_table.user_count
    vbit = 1 << var
    for x in range(1 << user_n):
        with_v = x | vbit
        if any(m & x == 0 for m in models) and not any(m & with_v == 0 for m in models):
            return False
    return True


def free_of_negation(cs: ClauseSet, var: int) -> bool:
    """GCWA check: for every positive clause B not entailed, v|B is not entailed either.

    B ranges over all disjunctions of user variables, including the empty
    disjunction (constant false), which covers the bare "v itself must not be
    entailed" case.
    """
    models = _user_model_masks(cs)
    user_n = cs.var_table.user_count
    vbit = 1 << var

    def entailed(clause_mask: int) -> bool:
        return all(m & clause_mask for m in models)

    for b in range(1 << user_n):
        if not entailed(b) and entailed(b | vbit):
            return False
    return True


def maximal_deselectable_sets(cs: ClauseSet) -> list[frozenset[int]]:
    """All subset-maximal deselectable sets, by brute force over all subsets."""
    models = _user_model_masks(cs)
    user_n = cs.var_table.user_count
    if not models:
        raise UnsatInput("no models: deselectable sets are undefined")

    def deselectable(x: int) -> bool:
        return any(m & x == 0 for m in models)

    out = []
    for x in range(1 << user_n):
        if not deselectable(x):
            continue
        if any(deselectable(x | (1 << w)) for w in range(user_n) if not x >> w & 1):
            continue
        out.append(frozenset(v for v in range(user_n) if x >> v & 1))
    return out
