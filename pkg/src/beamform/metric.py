"""Spectral-efficiency objective for jointly selected precoder/combiner pairs.

The objective is the Gaussian-signalling rate determinant
phi = det(I + (rho/n_streams) * R_n^{-1} g g^H) with g the combined effective
channel and R_n = sigma2 * C^H C the post-combining noise covariance; the
achievable rate is log2(phi). Search code never touches the channel matrix
directly: it evaluates candidates through the probe classes below, which
precompute all per-codebook-column products once per fixed opposite side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codebook import CodebookSpec, steering_columns, steering_gram
from .exceptions import SingularCombinerError

__all__ = [
    "DEGENERATE_GRAM_TOL",
    "EvalCounter",
    "LinkBudget",
    "effective_channel",
    "noise_covariance",
    "cost",
    "rate",
    "update_precoder_column",
    "update_combiner_column",
    "PrecoderSearchProbe",
    "CombinerSearchProbe",
]

# det(C^H C) of unit-norm columns lies in [0, 1]; values below this mean the
# selected columns numerically coincide (the angle grid maps n and
# 2^(bits-1) - n to the same steering vector), so R_n is not invertible.
DEGENERATE_GRAM_TOL = 1e-9


class EvalCounter:
    """Running tally of objective evaluations (cache hits still count as one)."""

    __slots__ = ("count",)

    def __init__(self) -> None:
        self.count = 0

    def add(self, n: int = 1) -> None:
        self.count += n

    def __repr__(self) -> str:
        return f"EvalCounter(count={self.count})"


@dataclass(frozen=True)
class LinkBudget:
    """Transmit power and per-antenna noise variance; snr = rho/sigma2."""

    rho: float
    sigma2: float = 1.0

    def __post_init__(self) -> None:
        if not self.rho > 0:
            raise ValueError(f"rho must be positive, got {self.rho}")
        if not self.sigma2 > 0:
            raise ValueError(f"sigma2 must be positive, got {self.sigma2}")

    @classmethod
    def from_snr_db(cls, snr_db: float, sigma2: float = 1.0) -> "LinkBudget":
        return cls(rho=sigma2 * 10.0 ** (snr_db / 10.0), sigma2=sigma2)

    @property
    def snr_db(self) -> float:
        return 10.0 * math.log10(self.rho / self.sigma2)


def effective_channel(h: np.ndarray, precoder: np.ndarray, combiner: np.ndarray) -> np.ndarray:
    """Combined effective channel g = C^H H P, shape (combiner cols, precoder cols)."""
    h = np.asarray(h)
    if h.ndim != 2:
        raise ValueError(f"channel must be a matrix, got ndim={h.ndim}")
    if precoder.shape[0] != h.shape[1] or combiner.shape[0] != h.shape[0]:
        raise ValueError(
            f"shape mismatch: channel {h.shape}, precoder {precoder.shape}, "
            f"combiner {combiner.shape}"
        )
    return combiner.conj().T @ h @ precoder


def noise_covariance(combiner: np.ndarray, sigma2: float = 1.0) -> np.ndarray:
    """Post-combining noise covariance sigma2 * C^H C."""
    return sigma2 * (combiner.conj().T @ combiner)


def cost(
    g: np.ndarray,
    combiner: np.ndarray,
    budget: LinkBudget,
    n_streams: int | None = None,
    counter: EvalCounter | None = None,
) -> float:
    """Objective value det(I + (rho/n_streams) R_n^{-1} g g^H), always >= 1.

    Raises SingularCombinerError when the combiner columns coincide to within
    numerical precision, which makes R_n non-invertible.
    """
    g = np.asarray(g, dtype=np.complex128)
    combiner = np.asarray(combiner, dtype=np.complex128)
    if g.shape[0] != combiner.shape[1]:
        raise ValueError(
            f"g has {g.shape[0]} rows but the combiner has {combiner.shape[1]} columns"
        )
    ns = g.shape[1] if n_streams is None else n_streams
    gram = combiner.conj().T @ combiner
    if float(np.linalg.det(gram).real) < DEGENERATE_GRAM_TOL:
        raise SingularCombinerError(
            "combiner columns numerically coincide; noise covariance is singular"
        )
    rn = budget.sigma2 * gram
    m = np.eye(g.shape[0]) + (budget.rho / ns) * np.linalg.solve(rn, g @ g.conj().T)
    value = float(np.linalg.det(m).real)
    if counter is not None:
        counter.add(1)
    return value


def rate(cost_value: float) -> float:
    """Achievable rate log2(cost) in bit/s/Hz; the objective is never below 1."""
    if cost_value < 1.0:
        raise ValueError(
            f"objective value {cost_value} is below 1; the determinant form "
            "cannot go below 1 except through numerical breakdown"
        )
    return math.log2(cost_value)


def update_precoder_column(
    g: np.ndarray,
    h: np.ndarray,
    combiner: np.ndarray,
    new_column: np.ndarray,
    position: int,
) -> np.ndarray:
    """Copy of g with precoder column `position` (0-based) replaced.

    Costs one tall matrix-vector product instead of the full triple product.
    """
    if not 0 <= position < g.shape[1]:
        raise ValueError(f"position {position} outside [0, {g.shape[1]})")
    if new_column.shape != (h.shape[1],):
        raise ValueError(
            f"new column has shape {new_column.shape}, expected ({h.shape[1]},)"
        )
    out = np.array(g, dtype=np.complex128, copy=True)
    out[:, position] = combiner.conj().T @ (h @ new_column)
    return out


def update_combiner_column(
    g: np.ndarray,
    h: np.ndarray,
    precoder: np.ndarray,
    new_column: np.ndarray,
    position: int,
) -> np.ndarray:
    """Copy of g with combiner column `position` (0-based) replaced (a row of g)."""
    if not 0 <= position < g.shape[0]:
        raise ValueError(f"position {position} outside [0, {g.shape[0]})")
    if new_column.shape != (h.shape[0],):
        raise ValueError(
            f"new column has shape {new_column.shape}, expected ({h.shape[0]},)"
        )
    out = np.array(g, dtype=np.complex128, copy=True)
    out[position, :] = new_column.conj() @ (h @ precoder)
    return out


def _cost2(g00, g01, g10, g11, r00, r01, r10, r11) -> float:
    # det(I2 + R (G G^H)) with R = (rho/ns) Rn^{-1}, all scalar complex math;
    # this is the hot path of the tabu search, keep it allocation-free.
    h00 = g00.real * g00.real + g00.imag * g00.imag + g01.real * g01.real + g01.imag * g01.imag
    h11 = g10.real * g10.real + g10.imag * g10.imag + g11.real * g11.real + g11.imag * g11.imag
    h01 = g00 * g10.conjugate() + g01 * g11.conjugate()
    h10 = h01.conjugate()
    a00 = r00 * h00 + r01 * h10
    a01 = r00 * h01 + r01 * h11
    a10 = r10 * h00 + r11 * h10
    a11 = r10 * h01 + r11 * h11
    return ((1.0 + a00) * (1.0 + a11) - a01 * a10).real


class PrecoderSearchProbe:
    """Evaluates transmit-side candidates against a fixed combiner.

    All products C^H H f_q are computed once per probe; cost_of then only
    gathers the candidate's columns and evaluates the small determinant.
    """

    def __init__(
        self,
        h: np.ndarray,
        combiner: np.ndarray,
        spec: CodebookSpec,
        budget: LinkBudget,
        counter: EvalCounter | None = None,
        n_streams: int | None = None,
    ) -> None:
        h = np.asarray(h, dtype=np.complex128)
        combiner = np.asarray(combiner, dtype=np.complex128)
        if combiner.shape[0] != h.shape[0]:
            raise ValueError(
                f"combiner has {combiner.shape[0]} rows, channel has {h.shape[0]}"
            )
        if h.shape[1] != spec.n_antennas:
            raise ValueError(
                f"channel has {h.shape[1]} transmit antennas, codebook expects {spec.n_antennas}"
            )
        self.spec = spec
        self.budget = budget
        self.counter = counter if counter is not None else EvalCounter()
        self.n_streams = spec.n_rf if n_streams is None else n_streams

        gram = combiner.conj().T @ combiner
        if float(np.linalg.det(gram).real) < DEGENERATE_GRAM_TOL:
            raise SingularCombinerError(
                "fixed combiner has numerically coinciding columns"
            )
        rn = budget.sigma2 * gram
        self._eff = combiner.conj().T @ (h @ steering_columns(spec))
        self._rpn = (budget.rho / self.n_streams) * np.linalg.inv(rn)
        w = combiner.shape[1]
        self._fast2 = w == 2 and spec.n_rf == 2
        self._fast1 = w == 1 and spec.n_rf == 1
        if self._fast2:
            self._row0 = [complex(v) for v in self._eff[0]]
            self._row1 = [complex(v) for v in self._eff[1]]
            self._r00 = complex(self._rpn[0, 0])
            self._r01 = complex(self._rpn[0, 1])
            self._r10 = complex(self._rpn[1, 0])
            self._r11 = complex(self._rpn[1, 1])
        elif self._fast1:
            self._row0 = [complex(v) for v in self._eff[0]]
            self._scale = float(self._rpn[0, 0].real)

    def cost_of(self, indices: tuple[int, ...]) -> float:
        """Objective value of one candidate column tuple; counts one evaluation."""
        self.counter.count += 1
        if self._fast2:
            i0 = indices[0] - 1
            i1 = indices[1] - 1
            return _cost2(
                self._row0[i0], self._row0[i1], self._row1[i0], self._row1[i1],
                self._r00, self._r01, self._r10, self._r11,
            )
        if self._fast1:
            g = self._row0[indices[0] - 1]
            return 1.0 + self._scale * (g.real * g.real + g.imag * g.imag)
        g = self._eff[:, [q - 1 for q in indices]]
        m = np.eye(g.shape[0]) + self._rpn @ (g @ g.conj().T)
        return float(np.linalg.det(m).real)


class CombinerSearchProbe:
    """Evaluates receive-side candidates against a fixed precoder.

    Candidates whose columns numerically coincide (the grid's mirrored-angle
    pairs) are rank-deficient at the receiver; they are evaluated and counted
    but get the floor value 1.0 (zero rate) so they can never be selected.
    """

    def __init__(
        self,
        h: np.ndarray,
        precoder: np.ndarray,
        spec: CodebookSpec,
        budget: LinkBudget,
        counter: EvalCounter | None = None,
        n_streams: int | None = None,
    ) -> None:
        h = np.asarray(h, dtype=np.complex128)
        precoder = np.asarray(precoder, dtype=np.complex128)
        if precoder.shape[0] != h.shape[1]:
            raise ValueError(
                f"precoder has {precoder.shape[0]} rows, channel has {h.shape[1]} columns"
            )
        if h.shape[0] != spec.n_antennas:
            raise ValueError(
                f"channel has {h.shape[0]} receive antennas, codebook expects {spec.n_antennas}"
            )
        self.spec = spec
        self.budget = budget
        self.counter = counter if counter is not None else EvalCounter()
        self.n_streams = precoder.shape[1] if n_streams is None else n_streams

        cols = steering_columns(spec)
        self._eff = cols.conj().T @ (h @ precoder)
        self._gram = steering_gram(spec)
        self._rho_ns = budget.rho / self.n_streams
        self._sigma2 = budget.sigma2
        self._fast2 = precoder.shape[1] == 2 and spec.n_rf == 2
        self._fast1 = precoder.shape[1] == 1 and spec.n_rf == 1
        if self._fast2:
            self._col0 = [complex(v) for v in self._eff[:, 0]]
            self._col1 = [complex(v) for v in self._eff[:, 1]]
            self._gram_list = [[complex(v) for v in row] for row in self._gram]
        elif self._fast1:
            self._col0 = [complex(v) for v in self._eff[:, 0]]
            self._gdiag = [float(v.real) for v in np.diag(self._gram)]

    def cost_of(self, indices: tuple[int, ...]) -> float:
        """Objective value of one candidate column tuple; counts one evaluation."""
        self.counter.count += 1
        if self._fast2:
            i0 = indices[0] - 1
            i1 = indices[1] - 1
            gram = self._gram_list
            w00 = gram[i0][i0].real
            w11 = gram[i1][i1].real
            w01 = gram[i0][i1]
            w10 = gram[i1][i0]
            gdet = w00 * w11 - (w01 * w10).real
            if gdet < DEGENERATE_GRAM_TOL:
                return 1.0
            s = self._rho_ns / (self._sigma2 * gdet)
            return _cost2(
                self._col0[i0], self._col1[i0], self._col0[i1], self._col1[i1],
                s * w11, -s * w01, -s * w10, s * w00,
            )
        if self._fast1:
            g = self._col0[indices[0] - 1]
            rn = self._sigma2 * self._gdiag[indices[0] - 1]
            return 1.0 + (self._rho_ns / rn) * (g.real * g.real + g.imag * g.imag)
        idx = [q - 1 for q in indices]
        sub = np.asarray(self._gram[np.ix_(idx, idx)])
        if float(np.linalg.det(sub).real) < DEGENERATE_GRAM_TOL:
            return 1.0
        g = self._eff[idx, :]
        rn = self._sigma2 * sub
        m = np.eye(len(idx)) + self._rho_ns * np.linalg.solve(rn, g @ g.conj().T)
        return float(np.linalg.det(m).real)
