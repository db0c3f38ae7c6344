"""Random manual-configuration experiments with minimal-model telemetry.

Each run plays scenario M: pick a uniformly random unassigned variable, give
it a uniformly random value (unassigned variables always admit both values
once inference has run), and repeat until the session is complete.  After the
initial inference pass and after every user decision the number of minimal
models of the current constraint is recorded.

The RNG is ``random.Random`` (Mersenne Twister, MT19937) seeded explicitly,
so a (model, runs, seed) triple reproduces byte-identical statistics on any
platform.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace

from .engine import Session, apply_decision, is_complete, new_session
from .errors import UnsatInput, UnsatModel
from .logic import ClauseSet
from .reasoning import count_minimal_models

__all__ = ["SimulationStats", "simulate_manual", "MINMODEL_GUARD"]

MINMODEL_GUARD = 100_000


@dataclass(frozen=True)
class SimulationStats:
    """Aggregates over the completed runs.

    ``length_mean`` is the mean number of user decisions per run;
    ``done_count_mean`` the mean number of recorded states (the initial state
    included) with exactly one minimal model, i.e. states where invoking the
    safe completion function would have finished the process.  The minimal
    model statistics pool every recorded state of every completed run;
    ``minmodels_sd`` is the population standard deviation.  Runs in which a
    single state exceeded the minimal-model guard are aborted and only
    counted in ``aborted_runs``.
    """

    runs: int
    seed: int
    length_mean: float
    done_count_mean: float
    minmodels_mean: float
    minmodels_sd: float
    minmodels_max: int
    aborted_runs: int = 0


def simulate_manual(
    cs: ClauseSet, runs: int, seed: int, guard: int = MINMODEL_GUARD
) -> SimulationStats:
    """Simulate ``runs`` random manual configuration processes."""
    if runs < 1:
        raise ValueError("need at least one run")
    rng = random.Random(seed)
    try:
        start = new_session(cs)
    except UnsatModel as exc:
        raise UnsatInput(str(exc)) from exc

    step0_count, step0_models = count_minimal_models(cs, start.decision_elits(), cap=guard)
    if step0_count > guard:
        raise UnsatInput(
            f"initial state already exceeds the {guard} minimal-model guard"
        )
    start = _with_witnesses(start, step0_models)

    lengths: list[int] = []
    done_counts: list[int] = []
    completed = 0
    aborted = 0
    mm_n = 0
    mm_mean = 0.0
    mm_m2 = 0.0
    mm_max = 0

    for _ in range(runs):
        session = start
        counts = [step0_count]
        length = 0
        blown = False
        while not is_complete(session):
            open_vars = session.unassigned()
            var = open_vars[rng.randrange(len(open_vars))]
            value = bool(rng.getrandbits(1))
            # after inference to fixpoint every open variable admits both
            # values, so the drawn value is always consistent
            session = apply_decision(session, var, value)
            length += 1
            count, models = count_minimal_models(
                cs, session.decision_elits(), cap=guard
            )
            if count > guard:
                blown = True
                break
            session = _with_witnesses(session, models)
            counts.append(count)
        if blown:
            aborted += 1
            continue
        completed += 1
        lengths.append(length)
        done_counts.append(sum(1 for c in counts if c == 1))
        for c in counts:
            mm_n += 1
            delta = c - mm_mean
            mm_mean += delta / mm_n
            mm_m2 += delta * (c - mm_mean)
            if c > mm_max:
                mm_max = c

    if completed == 0:
        raise UnsatInput("every run exceeded the minimal-model guard")
    return SimulationStats(
        runs=completed,
        seed=seed,
        length_mean=sum(lengths) / completed,
        done_count_mean=sum(done_counts) / completed,
        minmodels_mean=mm_mean,
        minmodels_sd=math.sqrt(mm_m2 / mm_n) if mm_n else 0.0,
        minmodels_max=mm_max,
        aborted_runs=aborted,
    )


def _with_witnesses(session: Session, models: list[tuple[int, ...]]) -> Session:
    pool = (session.witnesses + tuple(models))[-8:]
    return replace(session, witnesses=pool)


CSV_HEADER = "name,features,clauses,length,done,minmodels_mean,minmodels_sd"


def csv_row(name: str, features: int, clauses: int, stats: SimulationStats) -> str:
    return (
        f"{name},{features},{clauses},"
        f"{stats.length_mean:.4f},{stats.done_count_mean:.4f},"
        f"{stats.minmodels_mean:.4f},{stats.minmodels_sd:.4f}"
    )


def table_lines(name: str, features: int, clauses: int, stats: SimulationStats) -> list[str]:
    """A small fixed-width table shaped like the published experiment summary."""
    header = f"{'name':<16} {'features':>8} {'clauses':>8} {'length':>8} {'done':>8} {'minmodels':>14}"
    mm = f"{stats.minmodels_mean:.2f}±{stats.minmodels_sd:.2f}"
    row = (
        f"{name:<16} {features:>8} {clauses:>8} "
        f"{stats.length_mean:>8.2f} {stats.done_count_mean:>8.2f} {mm:>14}"
    )
    lines = [header, row]
    if stats.aborted_runs:
        lines.append(f"warning: {stats.aborted_runs} run(s) aborted by the minimal-model guard")
    return lines
