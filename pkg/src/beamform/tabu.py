"""Per-side tabu search over one codebook with the opposite side held fixed.

The search walks the +/-1 column-index neighborhood, keeps a tabu bit per
flat solution index (not per move, so a forbidden point stays forbidden no
matter which move would reach it), admits tabu candidates that beat the
incumbent (aspiration), clears the neighborhood's bits when everything is
blocked, and stops after max_len consecutive non-improving steps or max_iter
steps, whichever comes first. Restarts are stratified across the flat index
space so they cover it evenly without randomness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .codebook import (
    CodebookSpec,
    has_distinct_columns,
    index_to_columns,
    invalid_solution_indices,
    neighbors,
    solution_index,
)
from .exceptions import DegenerateNeighborhoodError, InfeasibleCodebookError

__all__ = [
    "TsParams",
    "TsResult",
    "MultistartResult",
    "TabuState",
    "TsStepTrace",
    "initial_solutions",
    "ts_step",
    "ts_search",
    "ts_multistart",
]


@dataclass(frozen=True)
class TsParams:
    """Stopping and restart controls for one side's search."""

    max_iter: int
    max_len: int
    m_restarts: int = 1

    def __post_init__(self) -> None:
        if not (isinstance(self.max_iter, int) and self.max_iter >= 1):
            raise ValueError(f"max_iter must be a positive integer, got {self.max_iter!r}")
        if not (isinstance(self.max_len, int) and 1 <= self.max_len <= self.max_iter):
            raise ValueError(
                f"max_len must satisfy 1 <= max_len <= max_iter, got "
                f"max_len={self.max_len!r}, max_iter={self.max_iter!r}"
            )
        if not (isinstance(self.m_restarts, int) and self.m_restarts >= 1):
            raise ValueError(f"m_restarts must be a positive integer, got {self.m_restarts!r}")


class TsStepTrace(NamedTuple):
    """Per-step record for debugging and invariant checks."""

    selected_p: int
    selected_cost: float
    tabu_bit_before: int
    admitted_by: str
    after_reset: bool
    improving: bool
    flag_after: int
    n_evals: int


@dataclass(frozen=True)
class TsResult:
    """Outcome of a single-start run."""

    indices: tuple[int, ...]
    cost: float
    iterations: int
    search_evals: int
    init_evals: int
    stop_reason: str


@dataclass(frozen=True)
class MultistartResult:
    """Best-of-restarts outcome; per-restart results kept for inspection."""

    indices: tuple[int, ...]
    cost: float
    search_evals: int
    init_evals: int
    restarts: tuple[TsResult, ...]


class TabuState:
    """Mutable working state of one run.

    The tabu list is a byte per flat solution index; entries for tuples with
    repeated columns are set once at construction and never cleared, so the
    walk can never step onto them.
    """

    __slots__ = ("spec", "tabu", "current", "best_indices", "best_cost", "flag", "search_evals")

    def __init__(self, spec: CodebookSpec, start: tuple[int, ...], start_cost: float) -> None:
        self.spec = spec
        self.tabu = bytearray(spec.n_solutions)
        for p in invalid_solution_indices(spec):
            self.tabu[p - 1] = 1
        self.current = start
        self.best_indices = start
        self.best_cost = start_cost
        self.flag = 0
        self.search_evals = 0


def initial_solutions(spec: CodebookSpec, m: int) -> list[tuple[int, ...]]:
    """m stratified starting tuples, deterministic and valid.

    Start i sits at round((i - 1/2) * n_solutions / m) in the flat index
    space (round half up, as in Matlab), advanced to the next distinct-column
    tuple with wraparound when it lands on a repeated-column index.
    """
    if not (isinstance(m, int) and m >= 1):
        raise ValueError(f"m must be a positive integer, got {m!r}")
    invalid = invalid_solution_indices(spec)
    n_sol = spec.n_solutions
    out = []
    for i in range(1, m + 1):
        p = int(math.floor((i - 0.5) * n_sol / m + 0.5))
        p = min(max(p, 1), n_sol)
        for _ in range(n_sol):
            if p not in invalid:
                break
            p = p % n_sol + 1
        else:
            raise InfeasibleCodebookError(
                f"no distinct-column tuple exists in a size-{n_sol} space"
            )
        out.append(index_to_columns(p, spec))
    return out


def ts_step(state: TabuState, probe, trace: list | None = None) -> None:
    """Advance the walk by one step.

    Evaluates the whole neighborhood, ranks by objective (ties toward the
    smaller solution index), admits the first candidate that either beats the
    incumbent or is not tabu; if every candidate is blocked, clears the
    neighborhood's tabu bits and takes the top-ranked one. The selected
    solution's bit is cleared on improvement and set otherwise, and the
    stagnation flag resets on improvement.
    """
    spec = state.spec
    neigh = neighbors(state.current, spec)
    if not neigh:
        raise DegenerateNeighborhoodError(
            f"no admissible moves from {state.current} with a "
            f"{spec.n_angles}-entry codebook"
        )
    scored = []
    for nb in neigh:
        c = probe.cost_of(nb.indices)
        p = solution_index(nb.indices, spec)
        scored.append((c, p, nb.indices))
    state.search_evals += len(scored)
    bits_before = {p: state.tabu[p - 1] for _, p, _ in scored}
    ranked = sorted(scored, key=lambda t: (-t[0], t[1]))

    selected = None
    for cand in ranked:
        if cand[0] > state.best_cost or state.tabu[cand[1] - 1] == 0:
            selected = cand
            break
    after_reset = False
    if selected is None:
        for _, p, _ in scored:
            state.tabu[p - 1] = 0
        after_reset = True
        selected = ranked[0]

    c, p, idx = selected
    admitted_by = "aspiration" if c > state.best_cost else "non_tabu"
    improving = c > state.best_cost
    if improving:
        state.tabu[p - 1] = 0
        state.best_cost = c
        state.best_indices = idx
        state.flag = 0
    else:
        state.tabu[p - 1] = 1
        state.flag += 1
    state.current = idx
    if trace is not None:
        trace.append(
            TsStepTrace(
                selected_p=p,
                selected_cost=c,
                tabu_bit_before=bits_before[p],
                admitted_by=admitted_by,
                after_reset=after_reset,
                improving=improving,
                flag_after=state.flag,
                n_evals=len(scored),
            )
        )


def ts_search(
    probe,
    params: TsParams,
    start: tuple[int, ...] | None = None,
    trace: list | None = None,
) -> TsResult:
    """Run one tabu walk from a single start (default: first stratified start)."""
    spec = probe.spec
    if start is None:
        start = initial_solutions(spec, 1)[0]
    else:
        start = tuple(int(q) for q in start)
        if not has_distinct_columns(start):
            raise ValueError(f"start {start} has repeated columns")
    start_cost = probe.cost_of(start)
    state = TabuState(spec, start, start_cost)
    iterations = 0
    stop_reason = "max_iter"
    for i in range(1, params.max_iter + 1):
        ts_step(state, probe, trace=trace)
        iterations = i
        if state.flag >= params.max_len:
            stop_reason = "stagnation"
            break
    return TsResult(
        indices=state.best_indices,
        cost=state.best_cost,
        iterations=iterations,
        search_evals=state.search_evals,
        init_evals=1,
        stop_reason=stop_reason,
    )


def ts_multistart(
    probe,
    params: TsParams,
    starts: list[tuple[int, ...]] | None = None,
    trace: list | None = None,
) -> MultistartResult:
    """Best of m independent runs; ties go to the smaller solution index."""
    if starts is None:
        starts = initial_solutions(probe.spec, params.m_restarts)
    if not starts:
        raise ValueError("at least one start is required")
    runs = tuple(ts_search(probe, params, start=s, trace=trace) for s in starts)
    best = min(runs, key=lambda r: (-r.cost, solution_index(r.indices, probe.spec)))
    return MultistartResult(
        indices=best.indices,
        cost=best.cost,
        search_evals=sum(r.search_evals for r in runs),
        init_evals=sum(r.init_evals for r in runs),
        restarts=runs,
    )
