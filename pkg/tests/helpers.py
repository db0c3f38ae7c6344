"""Shared generators and independent oracles for the property suites.

The oracles here deliberately avoid the solver: expressions are evaluated by
direct recursion over all assignments, and model sets come from
``all_model_masks`` (a truth-table scan).  Anything the fast paths compute is
checked against these.
"""

from __future__ import annotations

import random

from confik.logic import (
    And,
    ClauseSet,
    Const,
    Iff,
    Implies,
    Lit,
    Not,
    Or,
    Var,
    VarTable,
    all_model_masks,
)

FIG1B = """\
feature x
  feature y mandatory
    xor
      feature a
      feature b
  feature c optional
  feature d optional
"""

FIG1D_COMBINATIONS = [
    {"x", "y", "b"},
    {"x", "y", "b", "d"},
    {"x", "y", "b", "c", "d"},
    {"x", "y", "b", "c"},
    {"x", "y", "a"},
    {"x", "y", "a", "d"},
    {"x", "y", "a", "c", "d"},
    {"x", "y", "a", "c"},
]


def fresh_table(n: int) -> VarTable:
    table = VarTable()
    for i in range(n):
        table.add(f"v{i}")
    return table


def uv_xy() -> tuple[VarTable, ClauseSet]:
    """(u | v) & (x -> y) over u,v,x,y."""
    t = VarTable()
    u, v, x, y = (t.add(n) for n in ("u", "v", "x", "y"))
    return t, ClauseSet(t, [[Lit(u, True), Lit(v, True)], [Lit(x, False), Lit(y, True)]])


def example1() -> tuple[VarTable, ClauseSet]:
    """(!u | !v) & (x -> y) over u,v,x,y."""
    t = VarTable()
    u, v, x, y = (t.add(n) for n in ("u", "v", "x", "y"))
    return t, ClauseSet(t, [[Lit(u, False), Lit(v, False)], [Lit(x, False), Lit(y, True)]])


def random_clause_set(rng: random.Random, n_vars: int, satisfiable: bool = True) -> ClauseSet:
    """Random small CNF; when ``satisfiable`` the draw repeats until it is."""
    while True:
        table = fresh_table(n_vars)
        clauses = []
        for _ in range(rng.randint(1, 2 * n_vars + 1)):
            width = rng.randint(1, min(3, n_vars))
            vs = rng.sample(range(n_vars), width)
            clauses.append([Lit(v, rng.random() < 0.5) for v in vs])
        cs = ClauseSet(table, clauses)
        if not satisfiable or all_model_masks(cs):
            return cs


def random_expr(rng: random.Random, n_vars: int, depth: int):
    roll = rng.random()
    if depth <= 0 or roll < 0.3:
        if roll < 0.02:
            return Const(rng.random() < 0.5)
        return Var(rng.randrange(n_vars))
    kind = rng.randrange(5)
    if kind == 0:
        return Not(random_expr(rng, n_vars, depth - 1))
    if kind == 1:
        return Implies(random_expr(rng, n_vars, depth - 1), random_expr(rng, n_vars, depth - 1))
    if kind == 2:
        return Iff(random_expr(rng, n_vars, depth - 1), random_expr(rng, n_vars, depth - 1))
    items = tuple(random_expr(rng, n_vars, depth - 1) for _ in range(rng.randint(2, 3)))
    return And(items) if kind == 3 else Or(items)


def eval_expr_mask(expr, mask: int) -> bool:
    """Independent expression evaluator over a true-set bitmask."""
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Var):
        return bool(mask >> expr.vid & 1)
    if isinstance(expr, Not):
        return not eval_expr_mask(expr.operand, mask)
    if isinstance(expr, And):
        return all(eval_expr_mask(e, mask) for e in expr.items)
    if isinstance(expr, Or):
        return any(eval_expr_mask(e, mask) for e in expr.items)
    if isinstance(expr, Implies):
        return (not eval_expr_mask(expr.lhs, mask)) or eval_expr_mask(expr.rhs, mask)
    if isinstance(expr, Iff):
        return eval_expr_mask(expr.lhs, mask) == eval_expr_mask(expr.rhs, mask)
    raise TypeError(expr)


def truth_table_masks(expr, n_vars: int) -> list[int]:
    return [m for m in range(1 << n_vars) if eval_expr_mask(expr, m)]


def brute_minimal_masks(masks: list[int]) -> list[int]:
    """Subset-minimality filter over true-set bitmasks."""
    return sorted(
        m for m in masks if not any(o != m and o & m == o for o in masks)
    )


def user_masks(cs: ClauseSet) -> list[int]:
    """Distinct models projected to the user variables."""
    keep = (1 << cs.var_table.user_count) - 1
    return sorted({m & keep for m in all_model_masks(cs)})


def mask_of(names, table) -> int:
    return sum(1 << table.id_of(n) for n in names)


def names_of(mask: int, table) -> set[str]:
    return {table.name_of(v) for v in range(len(table)) if mask >> v & 1}
