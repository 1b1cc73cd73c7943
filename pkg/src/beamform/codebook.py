"""Quantized beamsteering codebooks and the index arithmetic over them.

A codebook quantizes the steering angle to 2^bits values; an analog precoder
or combiner picks one codebook column per RF chain. Selections are written as
1-based column index tuples (q_1, ..., q_n_rf) and also as a single 1-based
solution index obtained by reading the tuple as a base-2^bits number, which
gives the search routines a flat, bijective address space.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .channel import ArrayGeometry, ula_response

__all__ = [
    "CodebookSpec",
    "Neighbor",
    "angle_of_index",
    "materialize",
    "steering_columns",
    "steering_gram",
    "solution_index",
    "index_to_columns",
    "has_distinct_columns",
    "valid_solutions",
    "invalid_solution_indices",
    "neighbors",
]


@dataclass(frozen=True)
class CodebookSpec:
    """One side's codebook: array size, RF chain count and angle resolution."""

    n_antennas: int
    n_rf: int
    bits: int
    geometry: ArrayGeometry = ArrayGeometry()

    def __post_init__(self) -> None:
        if not (isinstance(self.n_antennas, int) and self.n_antennas >= 1):
            raise ValueError(f"n_antennas must be a positive integer, got {self.n_antennas!r}")
        if not (isinstance(self.n_rf, int) and self.n_rf >= 1):
            raise ValueError(f"n_rf must be a positive integer, got {self.n_rf!r}")
        if not (isinstance(self.bits, int) and self.bits >= 1):
            raise ValueError(f"bits must be a positive integer, got {self.bits!r}")
        if self.n_rf > self.n_angles:
            raise ValueError(
                f"cannot pick {self.n_rf} distinct columns from a "
                f"{self.n_angles}-entry codebook"
            )

    @property
    def n_angles(self) -> int:
        """Number of quantized steering angles, 2^bits."""
        return 1 << self.bits

    @property
    def n_solutions(self) -> int:
        """Size of the flat solution index space, (2^bits)^n_rf."""
        return self.n_angles**self.n_rf


class Neighbor(NamedTuple):
    """One admissible move: the move slot u it came from and the new tuple."""

    slot: int
    indices: tuple[int, ...]


def angle_of_index(index: int, bits: int) -> float:
    """Quantized steering angle 2*pi*index/2^bits for a 1-based codebook index."""
    n_angles = 1 << bits
    if not (isinstance(index, int) and 1 <= index <= n_angles):
        raise ValueError(f"column index must be in [1, {n_angles}], got {index!r}")
    return 2.0 * math.pi * index / n_angles


def _check_indices(indices: tuple[int, ...], spec: CodebookSpec) -> tuple[int, ...]:
    indices = tuple(indices)
    if len(indices) != spec.n_rf:
        raise ValueError(f"expected {spec.n_rf} column indices, got {len(indices)}")
    for q in indices:
        if not (isinstance(q, (int, np.integer)) and 1 <= q <= spec.n_angles):
            raise ValueError(f"column index must be in [1, {spec.n_angles}], got {q!r}")
    return tuple(int(q) for q in indices)


@lru_cache(maxsize=None)
def steering_columns(spec: CodebookSpec) -> np.ndarray:
    """All codebook columns as an (n_antennas, 2^bits) matrix, column j = index j+1.

    Cached per spec; the array is marked read-only so shared state stays safe.
    """
    cols = np.column_stack(
        [
            ula_response(spec.n_antennas, angle_of_index(q, spec.bits), spec.geometry)
            for q in range(1, spec.n_angles + 1)
        ]
    )
    cols.flags.writeable = False
    return cols


@lru_cache(maxsize=None)
def steering_gram(spec: CodebookSpec) -> np.ndarray:
    """Gram matrix of the codebook columns, (2^bits, 2^bits), read-only."""
    cols = steering_columns(spec)
    gram = cols.conj().T @ cols
    gram.flags.writeable = False
    return gram


def materialize(indices: tuple[int, ...], spec: CodebookSpec) -> np.ndarray:
    """Build the (n_antennas, n_rf) matrix whose columns are the selected entries.

    Every entry has squared modulus 1/n_antennas, the constant-modulus
    constraint of phase-shifter analog front ends.
    """
    indices = _check_indices(indices, spec)
    cols = steering_columns(spec)
    return cols[:, [q - 1 for q in indices]].copy()


def solution_index(indices: tuple[int, ...], spec: CodebookSpec) -> int:
    """Flat 1-based solution index of a column tuple.

    The tuple is read as a base-2^bits number with the first column most
    significant: p = sum_m (q_m - 1) * (2^bits)^(n_rf - m) + 1.
    """
    indices = _check_indices(indices, spec)
    p = 0
    for q in indices:
        p = p * spec.n_angles + (q - 1)
    return p + 1


def index_to_columns(p: int, spec: CodebookSpec) -> tuple[int, ...]:
    """Inverse of solution_index; p must lie in [1, (2^bits)^n_rf]."""
    if not (isinstance(p, (int, np.integer)) and 1 <= p <= spec.n_solutions):
        raise ValueError(f"solution index must be in [1, {spec.n_solutions}], got {p!r}")
    rem = int(p) - 1
    digits = []
    for _ in range(spec.n_rf):
        rem, d = divmod(rem, spec.n_angles)
        digits.append(d + 1)
    return tuple(reversed(digits))


def has_distinct_columns(indices: tuple[int, ...]) -> bool:
    """True when no column index repeats (required for full multiplexing gain)."""
    return len(set(indices)) == len(indices)


def valid_solutions(spec: CodebookSpec):
    """All distinct-column tuples in ascending solution-index order."""
    return itertools.permutations(range(1, spec.n_angles + 1), spec.n_rf)


@lru_cache(maxsize=None)
def invalid_solution_indices(spec: CodebookSpec) -> frozenset[int]:
    """Solution indices of tuples with repeated columns (permanently excluded)."""
    return frozenset(
        p
        for p, tup in enumerate(itertools.product(range(1, spec.n_angles + 1), repeat=spec.n_rf), start=1)
        if len(set(tup)) != len(tup)
    )


def neighbors(indices: tuple[int, ...], spec: CodebookSpec) -> list[Neighbor]:
    """Single-step moves around a column tuple.

    Move slot u in 1..2*n_rf adjusts column ceil(u/2) by -1 (odd u) or +1
    (even u), clamped to [1, 2^bits]. Moves that clamp onto the input itself
    or produce a repeated column are omitted; surviving entries keep their
    original u slot so logs stay reproducible.
    """
    indices = _check_indices(indices, spec)
    out: list[Neighbor] = []
    for u in range(1, 2 * spec.n_rf + 1):
        col = (u + 1) // 2
        delta = -1 if u % 2 == 1 else 1
        moved = min(max(indices[col - 1] + delta, 1), spec.n_angles)
        if moved == indices[col - 1]:
            continue
        cand = indices[: col - 1] + (moved,) + indices[col:]
        if not has_distinct_columns(cand):
            continue
        out.append(Neighbor(slot=u, indices=cand))
    return out
