"""Exhaustive joint search over both codebooks.

Evaluates every ordered pair of distinct-column selections on both sides and
returns the objective-maximizing pair. The candidate space is the product of
two falling factorials, so this is the oracle baseline, not a deployable
scheme; a ceiling guards against accidentally launching the largest cases.

The pair objective only depends on the channel through the matrix of
cross-products between receive and transmit codebook columns, so the whole
sweep reduces to gathers from one small matrix plus batched 2x2 algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codebook import (
    CodebookSpec,
    materialize,
    steering_columns,
    steering_gram,
    valid_solutions,
)
from .exceptions import BudgetExceededError
from . import metric
from .metric import DEGENERATE_GRAM_TOL, EvalCounter, LinkBudget

__all__ = ["DEFAULT_EVAL_CEILING", "FsResult", "fs_complexity", "full_search"]

# Large enough for 5-bit codebooks (~9.8e5 pairs), blocks 6-bit (~1.6e7) runs
# unless the caller raises it deliberately.
DEFAULT_EVAL_CEILING = 1_000_000


@dataclass(frozen=True)
class FsResult:
    """Outcome of an exhaustive pair sweep."""

    precoder_indices: tuple[int, ...]
    combiner_indices: tuple[int, ...]
    cost: float
    rate: float
    evals: int


def _n_valid(spec: CodebookSpec) -> int:
    n = 1
    for i in range(spec.n_rf):
        n *= spec.n_angles - i
    return n


def fs_complexity(spec_t: CodebookSpec, spec_r: CodebookSpec) -> int:
    """Number of candidate pairs the exhaustive search evaluates."""
    return _n_valid(spec_t) * _n_valid(spec_r)


def full_search(
    h: np.ndarray,
    spec_t: CodebookSpec,
    spec_r: CodebookSpec,
    budget: LinkBudget,
    *,
    eval_ceiling: int = DEFAULT_EVAL_CEILING,
    counter: EvalCounter | None = None,
    n_streams: int | None = None,
    chunk_pairs: int = 1_000_000,
) -> FsResult:
    """Evaluate all valid pairs and return the best, ties to the smallest indices.

    Rank-deficient combiner candidates (numerically coinciding columns, which
    the distinct-index rule does not exclude on this angle grid) are evaluated
    and counted but pinned to the floor value 1.0 so they never win. The tie
    rule is lexicographic on (precoder solution index, combiner solution
    index); the chunked scan preserves it for any chunk size.

    Args:
        h: channel matrix, shape (spec_r.n_antennas, spec_t.n_antennas).
        eval_ceiling: maximum candidate-pair count this call may evaluate.
        chunk_pairs: candidate pairs per vectorized block, a memory knob only.

    Raises:
        BudgetExceededError: the pair count exceeds eval_ceiling.
    """
    h = np.asarray(h, dtype=np.complex128)
    if h.shape != (spec_r.n_antennas, spec_t.n_antennas):
        raise ValueError(
            f"channel shape {h.shape} does not match codebooks "
            f"({spec_r.n_antennas}, {spec_t.n_antennas})"
        )
    if not np.isfinite(h).all():
        raise ValueError("channel matrix contains non-finite entries")
    total = fs_complexity(spec_t, spec_r)
    if total > eval_ceiling:
        raise BudgetExceededError(
            f"exhaustive search needs {total} evaluations, ceiling is {eval_ceiling}"
        )
    if chunk_pairs < 1:
        raise ValueError(f"chunk_pairs must be positive, got {chunk_pairs}")

    ns = spec_t.n_rf if n_streams is None else n_streams
    w = spec_r.n_rf
    rho_ns = budget.rho / ns

    cand_t = np.array(list(valid_solutions(spec_t)), dtype=np.int64) - 1
    cand_r = np.array(list(valid_solutions(spec_r)), dtype=np.int64) - 1
    n_t, n_r = len(cand_t), len(cand_r)

    z = steering_columns(spec_r).conj().T @ (h @ steering_columns(spec_t))

    # Per-combiner noise covariance inverses, degenerate candidates masked.
    gram_sub = steering_gram(spec_r)[cand_r[:, :, None], cand_r[:, None, :]]
    if w == 1:
        gdet = gram_sub[:, 0, 0].real
    elif w == 2:
        gdet = (gram_sub[:, 0, 0] * gram_sub[:, 1, 1] - gram_sub[:, 0, 1] * gram_sub[:, 1, 0]).real
    else:
        gdet = np.linalg.det(gram_sub).real
    degenerate = gdet < DEGENERATE_GRAM_TOL
    rn = budget.sigma2 * gram_sub
    rn[degenerate] = np.eye(w)
    rn_inv = np.linalg.inv(rn)

    best_cost = -math.inf
    best_t = best_r = -1
    chunk_t = max(1, chunk_pairs // n_r)
    for start in range(0, n_t, chunk_t):
        ct = cand_t[start : start + chunk_t]
        g = z[cand_r[None, :, :, None], ct[:, None, None, :]]
        ggh = g @ np.conj(np.swapaxes(g, -1, -2))
        a = rho_ns * (rn_inv[None, :, :, :] @ ggh)
        if w == 1:
            costs = 1.0 + a[..., 0, 0].real
        elif w == 2:
            costs = (
                (1.0 + a[..., 0, 0]) * (1.0 + a[..., 1, 1]) - a[..., 0, 1] * a[..., 1, 0]
            ).real
        else:
            eye = np.eye(w)
            costs = np.linalg.det(eye + a).real
        costs[:, degenerate] = 1.0
        flat = int(np.argmax(costs))
        cmax = float(costs.flat[flat])
        if cmax > best_cost:
            best_cost = cmax
            best_t = start + flat // n_r
            best_r = flat % n_r
    if counter is not None:
        counter.add(total)

    p_idx = tuple(int(q) + 1 for q in cand_t[best_t])
    c_idx = tuple(int(q) + 1 for q in cand_r[best_r])
    if degenerate[best_r]:
        final_cost = 1.0
    else:
        # Report through the scalar objective path so equal pairs found by
        # other searches compare bit-identically.
        g_best = metric.effective_channel(
            h, materialize(p_idx, spec_t), materialize(c_idx, spec_r)
        )
        final_cost = metric.cost(
            g_best, materialize(c_idx, spec_r), budget, n_streams=ns
        )
    return FsResult(
        precoder_indices=p_idx,
        combiner_indices=c_idx,
        cost=final_cost,
        rate=metric.rate(final_cost),
        evals=total,
    )
