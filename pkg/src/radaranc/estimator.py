"""scikit-learn style front end for the interference canceller.

``InterferenceCanceller`` is a transformer: ``fit`` learns the gating
threshold from the reference halves of a frame (or accepts a fixed one),
``transform`` maps an (M, N) complex baseband frame to the (M, N/2)
mitigated positive-half spectra.  Parameters follow the usual
``get_params`` / ``set_params`` contract so the canceller drops into
pipelines and grid searches operating on complex radar frames.
"""

from __future__ import annotations

import numbers

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .anc import AncParams, AncTrace, auto_threshold, mitigate_cpi
from .spectral import range_fft, split
from .synth import CpiFrame
from .validation import check_cpi_array


class InterferenceCanceller(BaseEstimator, TransformerMixin):
    """Adaptive-noise-canceller mitigation as a transformer.

    Parameters:
        filter_len: LMS filter length L
        gamma: step-size divisor, dw = 2 / (gamma * ref power)
        threshold: "auto" to estimate the gate from the data in ``fit``
            (reference noise floor + ``margin_db``), or a linear power
        margin_db: margin over the noise floor for the auto threshold
        window: FFT window, "rect" or "hann"
        tap_conjugation: "input" (standard complex LMS) or "error"

    Attributes:
        threshold_: resolved linear gate power after ``fit``
        n_fast_: fast-time length seen at fit time
    """

    def __init__(
        self,
        filter_len: int = 8,
        gamma: float = 100.0,
        threshold="auto",
        margin_db: float = 10.0,
        window: str = "rect",
        tap_conjugation: str = "input",
    ):
        self.filter_len = filter_len
        self.gamma = gamma
        self.threshold = threshold
        self.margin_db = margin_db
        self.window = window
        self.tap_conjugation = tap_conjugation

    def _as_array(self, X) -> np.ndarray:
        if isinstance(X, CpiFrame):
            return check_cpi_array(X.data)
        return check_cpi_array(X)

    def fit(self, X, y=None):
        """Resolve the gating threshold on a frame.

        With ``threshold="auto"`` the reference halves of all chirps are
        pooled and the gate is set at the per-bin noise floor plus the
        margin, scaled to total half-spectrum power.
        """
        data = self._as_array(X)
        self.n_fast_ = data.shape[1]
        if isinstance(self.threshold, str):
            if self.threshold != "auto":
                raise ValueError(f"threshold must be 'auto' or a number, got {self.threshold!r}")
            refs = np.stack(
                [split(range_fft(row, self.n_fast_, self.window)).ref for row in data]
            )
            self.threshold_ = auto_threshold(refs, self.margin_db)
        elif isinstance(self.threshold, numbers.Real):
            if self.threshold < 0:
                raise ValueError("threshold must be non-negative")
            self.threshold_ = float(self.threshold)
        else:
            raise ValueError(f"threshold must be 'auto' or a number, got {self.threshold!r}")
        return self

    def transform(self, X) -> np.ndarray:
        """Mitigate a frame; returns the (M, N/2) cleaned spectra."""
        out, _ = self.mitigate(X)
        return out

    def mitigate(self, X) -> tuple[np.ndarray, list[AncTrace]]:
        """Like ``transform`` but also returns the per-chirp traces."""
        if not hasattr(self, "threshold_"):
            raise RuntimeError("canceller is not fitted; call fit(X) first")
        data = self._as_array(X)
        frame = X if isinstance(X, CpiFrame) else CpiFrame(data=data, f_s=1.0)
        params = AncParams(
            filter_len=self.filter_len, threshold=self.threshold_, gamma=self.gamma
        )
        return mitigate_cpi(frame, params, window=self.window,
                            conjugate=self.tap_conjugation)
