"""Feature-model text format: parsing, validation, translation, printing.

The text format uses two-space indentation per depth level::

    feature x
      feature y mandatory
        xor
          feature a
          feature b
      feature c optional
      feature d optional
    constraint a -> !d

The first ``feature`` line is the root.  ``xor`` / ``or`` lines open a group
whose members are the next-deeper ``feature`` lines; members carry no
mandatory/optional suffix.  Cross-tree constraints are full propositional
expressions over feature names with precedence (low to high)
``<->``, ``->`` (right-associative), ``|``, ``&``, ``!``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Optional

from .errors import ModelSemanticError, ModelSyntaxError
from .logic import (
    And,
    Expr,
    Iff,
    Implies,
    Not,
    Or,
    Var,
    VarTable,
    conjoin,
    disjoin,
    solve,
    to_cnf,
)

__all__ = [
    "Feature",
    "Group",
    "FeatureModel",
    "parse_model",
    "translate",
    "print_model",
    "format_constraint",
    "synthesize_model",
]


@dataclass(frozen=True)
class Feature:
    name: str
    parent: Optional[int]  # feature id, None for the root
    kind: str              # "root" | "mandatory" | "optional" | "member"
    group: Optional[int]   # group index for members


@dataclass(frozen=True)
class Group:
    parent: int
    kind: str              # "xor" | "or"
    members: tuple[int, ...]


@dataclass(frozen=True)
class FeatureModel:
    """A parsed feature tree; feature ids coincide with variable ids."""

    features: tuple[Feature, ...]
    groups: tuple[Group, ...]
    constraints: tuple[Expr, ...]
    var_table: VarTable
    root: int = 0

    def id_of(self, name: str) -> int:
        return self.var_table.id_of(name)

    def name_of(self, fid: int) -> str:
        return self.features[fid].name

    def children_of(self, fid: int) -> list[int]:
        return [i for i, f in enumerate(self.features) if f.parent == fid]


# ---------------------------------------------------------------------------
# Parsing

_FEATURE_RE = re.compile(r"^feature\s+(\S+)(?:\s+(\S+))?\s*$")
_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def parse_model(text: str) -> FeatureModel:
    """Parse the model text format; diagnostics carry line numbers."""
    features: list[dict] = []
    groups: list[dict] = []
    constraints_raw: list[tuple[int, str]] = []
    table = VarTable()
    # stack entries: (level, "feature"|"group", index)
    stack: list[tuple[int, str, int]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if "\t" in line[: len(line) - len(line.lstrip())]:
            raise ModelSyntaxError("tabs are not allowed in indentation", lineno, 1)
        indent = len(line) - len(line.lstrip(" "))
        if indent % 2 != 0:
            raise ModelSyntaxError(
                f"indentation must be a multiple of 2 spaces, got {indent}", lineno, indent + 1
            )
        level = indent // 2
        body = line.strip()

        if body.startswith("constraint"):
            if level != 0:
                raise ModelSyntaxError("constraint lines must not be indented", lineno, indent + 1)
            expr_text = body[len("constraint"):].strip()
            if not expr_text:
                raise ModelSyntaxError("empty constraint", lineno, indent + 1)
            constraints_raw.append((lineno, expr_text))
            continue

        while stack and stack[-1][0] >= level:
            stack.pop()

        head = body.split()[0]
        if head == "feature":
            m = _FEATURE_RE.match(body)
            if not m:
                raise ModelSyntaxError(f"malformed feature line {body!r}", lineno, indent + 1)
            name, suffix = m.group(1), m.group(2)
            if not _NAME_RE.match(name):
                raise ModelSyntaxError(f"invalid feature name {name!r}", lineno, indent + 1)
            if name in table:
                raise ModelSemanticError(f"duplicate feature name {name!r}", lineno, indent + 1)
            if not stack:
                if level != 0:
                    raise ModelSyntaxError(
                        f"indentation jumps to level {level} with no parent", lineno, indent + 1
                    )
                if features:
                    raise ModelSemanticError(
                        f"second root feature {name!r}; the model must be a single tree",
                        lineno,
                        indent + 1,
                    )
                if suffix is not None:
                    raise ModelSemanticError("the root feature takes no edge kind", lineno, indent + 1)
                fid = table.add(name)
                features.append({"name": name, "parent": None, "kind": "root", "group": None})
                stack.append((level, "feature", fid))
                continue
            top_level, top_kind, top_idx = stack[-1]
            if top_level != level - 1:
                raise ModelSyntaxError(
                    f"indentation jumps from level {top_level} to {level}", lineno, indent + 1
                )
            if top_kind == "group":
                if suffix is not None:
                    raise ModelSemanticError(
                        "group members carry no mandatory/optional suffix", lineno, indent + 1
                    )
                fid = table.add(name)
                gid = top_idx
                features.append(
                    {"name": name, "parent": groups[gid]["parent"], "kind": "member", "group": gid}
                )
                groups[gid]["members"].append(fid)
            else:
                if suffix is None:
                    kind = "optional"
                elif suffix in ("mandatory", "optional"):
                    kind = suffix
                else:
                    raise ModelSyntaxError(
                        f"unknown edge kind {suffix!r} (expected mandatory or optional)",
                        lineno,
                        indent + 1,
                    )
                fid = table.add(name)
                features.append({"name": name, "parent": top_idx, "kind": kind, "group": None})
            stack.append((level, "feature", fid))
        elif head in ("xor", "or"):
            if body != head:
                raise ModelSyntaxError(f"malformed group line {body!r}", lineno, indent + 1)
            if not stack or stack[-1][1] != "feature":
                raise ModelSyntaxError("group line without a parent feature", lineno, indent + 1)
            top_level, _, parent_fid = stack[-1]
            if top_level != level - 1:
                raise ModelSyntaxError(
                    f"indentation jumps from level {top_level} to {level}", lineno, indent + 1
                )
            gid = len(groups)
            groups.append({"parent": parent_fid, "kind": head, "members": [], "line": lineno})
            stack.append((level, "group", gid))
        else:
            raise ModelSyntaxError(f"unknown keyword {head!r}", lineno, indent + 1)

    if not features:
        raise ModelSyntaxError("model has no features", 1, 1)
    for g in groups:
        if len(g["members"]) < 2:
            raise ModelSemanticError(
                f"{g['kind']}-group under {features[g['parent']]['name']!r} needs at least 2 members",
                g["line"],
            )

    constraints = tuple(
        _parse_constraint(expr_text, table, lineno) for lineno, expr_text in constraints_raw
    )
    return FeatureModel(
        features=tuple(
            Feature(f["name"], f["parent"], f["kind"], f["group"]) for f in features
        ),
        groups=tuple(Group(g["parent"], g["kind"], tuple(g["members"])) for g in groups),
        constraints=constraints,
        var_table=table,
    )


# constraint expression parser (recursive descent)

_TOKEN_RE = re.compile(r"\s*(<->|->|[()!&|]|[A-Za-z_][A-Za-z0-9_]*)")


def _tokenize_constraint(text: str, lineno: int) -> list[tuple[str, int]]:
    tokens = []
    pos_ = 0
    while pos_ < len(text):
        m = _TOKEN_RE.match(text, pos_)
        if not m:
            raise ModelSyntaxError(f"unexpected character {text[pos_]!r}", lineno, pos_ + 1)
        tokens.append((m.group(1), m.start(1) + 1))
        pos_ = m.end()
    return tokens


def _parse_constraint(text: str, table: VarTable, lineno: int) -> Expr:
    tokens = _tokenize_constraint(text, lineno)
    pos_ = 0

    def peek():
        return tokens[pos_][0] if pos_ < len(tokens) else None

    def take():
        nonlocal pos_
        tok = tokens[pos_]
        pos_ += 1
        return tok

    def fail(message, col=None):
        if col is None:
            col = tokens[pos_][1] if pos_ < len(tokens) else len(text) + 1
        raise ModelSyntaxError(message, lineno, col)

    def parse_iff():
        left = parse_imp()
        if peek() == "<->":
            take()
            return Iff(left, parse_iff())
        return left

    def parse_imp():
        left = parse_or()
        if peek() == "->":
            take()
            return Implies(left, parse_imp())
        return left

    def parse_or():
        items = [parse_and()]
        while peek() == "|":
            take()
            items.append(parse_and())
        return disjoin(items) if len(items) > 1 else items[0]

    def parse_and():
        items = [parse_unary()]
        while peek() == "&":
            take()
            items.append(parse_unary())
        return conjoin(items) if len(items) > 1 else items[0]

    def parse_unary():
        if peek() == "!":
            take()
            return Not(parse_unary())
        return parse_atom()

    def parse_atom():
        tok = peek()
        if tok is None:
            fail("unexpected end of constraint")
        if tok == "(":
            take()
            inner = parse_iff()
            if peek() != ")":
                fail("missing closing parenthesis")
            take()
            return inner
        if _NAME_RE.match(tok):
            name, col = take()
            if name not in table:
                raise ModelSemanticError(f"constraint references unknown feature {name!r}", lineno, col)
            return Var(table.id_of(name))
        fail(f"unexpected token {tok!r}")

    expr = parse_iff()
    if pos_ != len(tokens):
        fail(f"trailing input {tokens[pos_][0]!r}")
    return expr


# ---------------------------------------------------------------------------
# Translation to propositional semantics


def translate(fm: FeatureModel) -> Expr:
    """Conjunction of the per-primitive formulas plus the cross constraints.

    root r: v_r; mandatory child c of p: v_c <-> v_p; optional child: v_c -> v_p;
    group g1..gn under p: each v_gi -> v_p, v_p -> (v_g1 | ... | v_gn), and for
    xor additionally v_p -> !(v_gi & v_gj) for every i < j.
    """
    conjuncts: list[Expr] = [Var(fm.root)]
    groups_by_parent: dict[int, list[int]] = {}
    for gi, g in enumerate(fm.groups):
        groups_by_parent.setdefault(g.parent, []).append(gi)
    for fid, feature in enumerate(fm.features):
        for cid in fm.children_of(fid):
            child = fm.features[cid]
            if child.kind == "mandatory":
                conjuncts.append(Iff(Var(cid), Var(fid)))
            elif child.kind == "optional":
                conjuncts.append(Implies(Var(cid), Var(fid)))
        for gi in groups_by_parent.get(fid, []):
            g = fm.groups[gi]
            parent = Var(fid)
            for mid in g.members:
                conjuncts.append(Implies(Var(mid), parent))
            conjuncts.append(Implies(parent, disjoin([Var(mid) for mid in g.members])))
            if g.kind == "xor":
                members = g.members
                for i in range(len(members)):
                    for j in range(i + 1, len(members)):
                        conjuncts.append(
                            Implies(parent, Not(And((Var(members[i]), Var(members[j])))))
                        )
    conjuncts.extend(fm.constraints)
    return conjoin(conjuncts)


# ---------------------------------------------------------------------------
# Printing (round-trip support)


def format_constraint(e: Expr, table: VarTable) -> str:
    """Render an expression in the constraint grammar, minimally parenthesized."""

    def level(node: Expr) -> int:
        if isinstance(node, Iff):
            return 0
        if isinstance(node, Implies):
            return 1
        if isinstance(node, Or):
            return 2
        if isinstance(node, And):
            return 3
        return 4

    def render(node: Expr, parent_level: int) -> str:
        if isinstance(node, Var):
            return table.name_of(node.vid)
        if isinstance(node, Not):
            return "!" + render(node.operand, 4)
        if isinstance(node, Iff):
            body = f"{render(node.lhs, 1)} <-> {render(node.rhs, 0)}"
        elif isinstance(node, Implies):
            body = f"{render(node.lhs, 2)} -> {render(node.rhs, 1)}"
        elif isinstance(node, Or):
            body = " | ".join(render(item, 3) for item in node.items)
        elif isinstance(node, And):
            body = " & ".join(render(item, 4) for item in node.items)
        else:
            raise TypeError(f"cannot format {node!r}")
        if level(node) < parent_level:
            return f"({body})"
        return body

    return render(e, 0)


def print_model(fm: FeatureModel) -> str:
    """Canonical text for a model; parse(print_model(fm)) equals fm structurally."""
    lines: list[str] = []

    def emit(fid: int, level: int) -> None:
        feature = fm.features[fid]
        suffix = ""
        if feature.kind in ("mandatory", "optional"):
            suffix = f" {feature.kind}"
        lines.append("  " * level + f"feature {feature.name}{suffix}")
        child_level = level + 1
        open_group: Optional[int] = None
        for cid in fm.children_of(fid):
            child = fm.features[cid]
            if child.group is not None:
                if child.group != open_group:
                    open_group = child.group
                    lines.append("  " * child_level + fm.groups[child.group].kind)
                emit(cid, child_level + 1)
            else:
                open_group = None
                emit(cid, child_level)

    emit(fm.root, 0)
    for constraint in fm.constraints:
        lines.append(f"constraint {format_constraint(constraint, fm.var_table)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Synthetic models for experiments


def synthesize_model(seed: int, n_features: int, group_product_cap: int = 256) -> str:
    """Deterministic random feature model text with ``n_features`` features.

    Trees mix mandatory/optional children with a few xor-groups; the product
    of xor-group sizes is capped so minimal-model counts stay enumerable at
    every configuration step.  A couple of requires/excludes constraints are
    added when they keep the model satisfiable.
    """
    if n_features < 1:
        raise ValueError("need at least one feature")
    rng = random.Random(seed)
    names = ["root"] + [f"f{i}" for i in range(1, n_features)]
    children: dict[int, list[tuple[str, object]]] = {0: []}
    next_id = 1
    nodes = [0]
    group_product = 1
    while next_id < n_features:
        parent = nodes[rng.randrange(len(nodes))]
        remaining = n_features - next_id
        roll = rng.random()
        if roll < 0.2 and remaining >= 2:
            size = min(remaining, 2 + (rng.random() < 0.35))
            if group_product * size <= group_product_cap:
                member_ids = list(range(next_id, next_id + size))
                next_id += size
                group_product *= size
                children.setdefault(parent, []).append(("xor", member_ids))
                for mid in member_ids:
                    children.setdefault(mid, [])
                    nodes.append(mid)
                continue
        kind = "mandatory" if rng.random() < 0.3 else "optional"
        fid = next_id
        next_id += 1
        children.setdefault(parent, []).append((kind, fid))
        children.setdefault(fid, [])
        nodes.append(fid)

    lines: list[str] = []

    def emit(fid: int, level: int) -> None:
        for kind, payload in children.get(fid, []):
            if kind == "xor":
                lines.append("  " * (level + 1) + "xor")
                for mid in payload:
                    lines.append("  " * (level + 2) + f"feature {names[mid]}")
                    emit(mid, level + 2)
            else:
                lines.append("  " * (level + 1) + f"feature {names[payload]} {kind}")
                emit(payload, level + 1)

    lines.append(f"feature {names[0]}")
    emit(0, 0)

    n_constraints = rng.randint(0, max(0, n_features // 30))
    constraint_lines: list[str] = []
    for _ in range(n_constraints):
        u, w = rng.sample(range(1, n_features), 2)
        op = "!" if rng.random() < 0.5 else ""
        constraint_lines.append(f"constraint {names[u]} -> {op}{names[w]}")

    # keep only constraint prefixes that leave the model satisfiable
    kept: list[str] = []
    for cline in constraint_lines:
        candidate = "\n".join(lines + kept + [cline]) + "\n"
        fm = parse_model(candidate)
        if solve(to_cnf(translate(fm), fm.var_table)) is not None:
            kept.append(cline)
    return "\n".join(lines + kept) + "\n"
