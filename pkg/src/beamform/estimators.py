"""Scikit-learn style estimators wrapping the selection searches.

Both estimators treat one complex channel matrix as the data: fit(H) runs the
search and exposes the selected codebook columns and achieved rate as fitted
attributes. They compose with sklearn tooling (get_params/set_params, clone).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_channel_matrix, check_positive_int
from .channel import ArrayGeometry
from .codebook import CodebookSpec, materialize
from .full_search import DEFAULT_EVAL_CEILING, full_search
from .metric import EvalCounter, LinkBudget, cost, effective_channel, rate
from .turbo import TurboParams, turbo_search

__all__ = ["FullSearchBeamformer", "TurboTabuBeamformer"]


class _BeamSelectorMixin:
    """Shared fit plumbing; subclasses implement _run(h, spec_t, spec_r, budget)."""

    def _specs(self, h: np.ndarray) -> tuple[CodebookSpec, CodebookSpec]:
        bits = check_positive_int(self.bits, "bits")
        n_rf = check_positive_int(self.n_rf, "n_rf")
        geometry = ArrayGeometry(spacing_over_wavelength=self.spacing)
        spec_t = CodebookSpec(n_antennas=h.shape[1], n_rf=n_rf, bits=bits, geometry=geometry)
        spec_r = CodebookSpec(n_antennas=h.shape[0], n_rf=n_rf, bits=bits, geometry=geometry)
        return spec_t, spec_r

    def fit(self, X, y=None):
        """Select a precoder/combiner pair for the channel matrix X.

        Args:
            X: complex channel matrix, shape (n_rx_antennas, n_tx_antennas).
            y: ignored, present for sklearn API compatibility.

        Returns:
            self, with precoder_indices_, combiner_indices_, precoder_,
            combiner_, cost_, rate_ and n_evaluations_ set.
        """
        h = check_channel_matrix(X)
        spec_t, spec_r = self._specs(h)
        budget = LinkBudget.from_snr_db(self.snr_db)
        self._run(h, spec_t, spec_r, budget)
        self.n_features_in_ = h.shape[1]
        self.channel_shape_ = h.shape
        self.precoder_ = materialize(self.precoder_indices_, spec_t)
        self.combiner_ = materialize(self.combiner_indices_, spec_r)
        return self

    def score(self, X, y=None) -> float:
        """Rate of the fitted pair on the given channel, in bit/s/Hz."""
        check_is_fitted(self)
        h = check_channel_matrix(X)
        if h.shape != self.channel_shape_:
            raise ValueError(
                f"channel shape {h.shape} does not match the fitted shape "
                f"{self.channel_shape_}"
            )
        budget = LinkBudget.from_snr_db(self.snr_db)
        g = effective_channel(h, self.precoder_, self.combiner_)
        return rate(cost(g, self.combiner_, budget, n_streams=self.precoder_.shape[1]))


class FullSearchBeamformer(_BeamSelectorMixin, BaseEstimator):
    """Exhaustive-search beam selection, the oracle baseline.

    Parameters
    ----------
    bits : angle resolution of both codebooks (2^bits entries).
    n_rf : RF chains per side, one data stream each.
    snr_db : link SNR in dB (unit noise variance).
    eval_ceiling : refuse runs needing more candidate-pair evaluations.
    spacing : array element spacing in wavelengths.
    """

    def __init__(self, bits=4, n_rf=2, snr_db=0.0, eval_ceiling=DEFAULT_EVAL_CEILING, spacing=0.5):
        self.bits = bits
        self.n_rf = n_rf
        self.snr_db = snr_db
        self.eval_ceiling = eval_ceiling
        self.spacing = spacing

    def _run(self, h, spec_t, spec_r, budget) -> None:
        counter = EvalCounter()
        res = full_search(
            h, spec_t, spec_r, budget, eval_ceiling=self.eval_ceiling, counter=counter
        )
        self.precoder_indices_ = res.precoder_indices
        self.combiner_indices_ = res.combiner_indices
        self.cost_ = res.cost
        self.rate_ = res.rate
        self.n_evaluations_ = counter.count


class TurboTabuBeamformer(_BeamSelectorMixin, BaseEstimator):
    """Alternating tabu-search beam selection.

    Parameters
    ----------
    bits, n_rf, snr_db, spacing : as in FullSearchBeamformer.
    max_iter : tabu step cap per restart.
    max_len : consecutive non-improving steps before a restart stops.
    n_restarts : stratified restarts per side search.
    n_rounds : alternating transmitter/receiver rounds.
    warm_start : seed each side with the previous round's solution.
    """

    def __init__(
        self,
        bits=4,
        n_rf=2,
        snr_db=0.0,
        max_iter=500,
        max_len=100,
        n_restarts=1,
        n_rounds=4,
        warm_start=True,
        spacing=0.5,
    ):
        self.bits = bits
        self.n_rf = n_rf
        self.snr_db = snr_db
        self.max_iter = max_iter
        self.max_len = max_len
        self.n_restarts = n_restarts
        self.n_rounds = n_rounds
        self.warm_start = warm_start
        self.spacing = spacing

    def _run(self, h, spec_t, spec_r, budget) -> None:
        params = TurboParams.shared(
            max_iter=self.max_iter,
            max_len=self.max_len,
            m_restarts=self.n_restarts,
            k_iterations=self.n_rounds,
            warm_start=self.warm_start,
        )
        res = turbo_search(h, spec_t, spec_r, budget, params)
        self.precoder_indices_ = res.precoder_indices
        self.combiner_indices_ = res.combiner_indices
        self.cost_ = res.cost
        self.rate_ = res.rate
        self.per_round_rates_ = res.per_round_rates
        self.message_rounds_ = res.message_rounds
        self.n_evaluations_ = res.evals_total
