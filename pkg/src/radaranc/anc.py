"""Adaptive noise canceller: estimate the interference in the primary
channel from the mirrored reference channel and subtract it.

Per chirp: range FFT, split into halves, estimate reference power, and if
it clears the gating threshold run a complex LMS filter along the bins
with the taps initialized to (1, 0, ..., 0) -- the fixed point when the
reference is an exact mirror of the primary interference.  The error
sequence is the cleaned positive-half spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .metrics import noise_floor
from .spectral import interference_power, range_fft, split
from .synth import CpiFrame

TAP_CONJUGATION = ("input", "error")


@dataclass(frozen=True)
class AncParams:
    """Mitigation knobs.

    Attributes:
        filter_len: L, adaptive filter taps
        threshold: reference-power gate (linear); the canceller runs only
            when sum |ref|^2 exceeds it
        gamma: step-size divisor, dw = 2 / (gamma * P); gamma > 1 keeps
            dw strictly inside the stability region
        max_dw: explicit step-size override (replaces the power rule)
    """

    filter_len: int = 8
    threshold: float = 0.0
    gamma: float = 100.0
    max_dw: Optional[float] = None

    def __post_init__(self):
        if self.filter_len < 1:
            raise ValueError("filter_len must be at least 1")
        if self.gamma <= 1.0:
            raise ValueError("gamma must exceed 1")
        if self.threshold < 0:
            raise ValueError("threshold must be non-negative")
        if self.max_dw is not None and self.max_dw <= 0:
            raise ValueError("max_dw must be positive when given")


@dataclass(frozen=True)
class AncTrace:
    """Per-chirp diagnostics from :func:`mitigate_cpi`."""

    applied: bool
    ref_power: float
    dw_used: float = 0.0
    taps_final: Optional[np.ndarray] = None
    error_power_by_iter: Optional[np.ndarray] = None


def step_size(P: float, gamma: float) -> float:
    """LMS step dw = 2 / (gamma * P).

    With P the total reference power over N/2 bins and gamma > 1, dw is
    strictly below the 2 / (input power) convergence bound.
    """
    if P <= 0:
        raise ValueError("step size undefined for non-positive power; gating "
                         "should have bypassed this chirp")
    if gamma <= 1.0:
        raise ValueError("gamma must exceed 1")
    return 2.0 / (gamma * P)


def lms_cancel(
    pri: np.ndarray,
    ref: np.ndarray,
    filter_len: int,
    dw: float,
    conjugate: str = "input",
    track_error: bool = False,
) -> tuple[np.ndarray, np.ndarray] | tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Run the LMS canceller over one pri/ref pair.

    Iterates k = 0..K-1: the newest reference sample is shifted into the
    front of the length-L input window f_i, the filter output w . f_i is
    subtracted from pri[k] to form the error, and the taps move by
    dw * conj(f_i) * eps (the standard complex LMS direction).  Taps start
    at (1, 0, ..., 0), so an exactly mirrored reference is cancelled
    without any adaptation.

    ``conjugate="error"`` instead applies dw * f_i * conj(eps), the update
    as sometimes written with a transposed (unconjugated) filter output;
    the two coincide for real data but the error-conjugating form is only
    stable while the tap error stays real, so it is offered for
    experiments, not as the default.

    Returns:
        (eps, taps) -- the error sequence (cleaned primary) and final
        taps; with ``track_error=True`` also |eps|^2 per iteration.
    """
    p = np.asarray(pri, dtype=np.complex128)
    r = np.asarray(ref, dtype=np.complex128)
    if p.ndim != 1 or r.ndim != 1 or p.shape != r.shape:
        raise ValueError("pri and ref must be 1-D vectors of equal length")
    if not (np.all(np.isfinite(p.view(np.float64))) and np.all(np.isfinite(r.view(np.float64)))):
        raise ValueError("pri and ref must be finite")
    k_len = len(p)
    if filter_len > k_len:
        raise ValueError(f"filter_len {filter_len} exceeds sequence length {k_len}")
    if dw <= 0:
        raise ValueError("dw must be positive")
    if conjugate not in TAP_CONJUGATION:
        raise ValueError(f"conjugate must be one of {TAP_CONJUGATION}")

    w = np.zeros(filter_len, dtype=np.complex128)
    w[0] = 1.0
    f_i = np.zeros(filter_len, dtype=np.complex128)
    eps = np.empty(k_len, dtype=np.complex128)
    err_pow = np.empty(k_len) if track_error else None
    conj_input = conjugate == "input"

    for k in range(k_len):
        f_i[1:] = f_i[:-1]
        f_i[0] = r[k]
        e = p[k] - w @ f_i
        eps[k] = e
        if conj_input:
            w += dw * np.conj(f_i) * e
        else:
            w += dw * f_i * np.conj(e)
        if track_error:
            err_pow[k] = (e * e.conjugate()).real

    if track_error:
        return eps, w, err_pow
    return eps, w


def ref_noise_floor(ref_rows: np.ndarray) -> float:
    """Per-bin noise floor (dB) of a capture's reference halves.

    Thermal noise is flat across bins and chirps while interference only
    ever adds power, so the floor is the lowest per-bin median over each
    (chirp, quarter-band) block: quiet chirps dominate when the capture
    has any, and the filter's stop region dominates when every chirp is
    hit.  Captures with interference in every quarter of every chirp
    cannot self-calibrate.
    """
    rows = np.atleast_2d(np.asarray(ref_rows))
    power_db = 10.0 * np.log10(np.abs(rows) ** 2 + np.finfo(float).tiny)
    quarter = max(rows.shape[1] // 4, 1)
    return min(
        noise_floor(row[start : start + quarter])
        for row in power_db
        for start in range(0, rows.shape[1], quarter)
    )


def auto_threshold(ref_rows: np.ndarray, margin_db: float = 10.0) -> float:
    """Gate threshold from data: the per-bin reference noise floor plus a
    margin, expressed as total power over the half spectrum."""
    rows = np.atleast_2d(np.asarray(ref_rows))
    floor_db = ref_noise_floor(rows)
    n_half = rows.shape[1]
    return n_half * 10.0 ** ((floor_db + margin_db) / 10.0)


def mitigate_cpi(
    frame: CpiFrame,
    params: AncParams,
    window: str = "rect",
    conjugate: str = "input",
    track_error: bool = False,
    n_threads: int = 1,
) -> tuple[np.ndarray, list[AncTrace]]:
    """Run the full per-chirp mitigation pipeline over a CPI.

    Each row is range-FFT'd and split; rows whose reference power exceeds
    ``params.threshold`` are cleaned by the LMS canceller (taps and step
    size re-initialized per chirp), the rest pass through unchanged.
    Chirps are independent, so they may be processed by up to
    ``n_threads`` workers; results are ordered by chirp index either way.

    Returns:
        (out, traces): out is (M, N/2) complex -- the error sequence for
        mitigated rows, the raw positive half for bypassed rows.
    """
    n = frame.n_fast
    out = np.empty((frame.m_chirps, n // 2), dtype=np.complex128)
    traces: list[Optional[AncTrace]] = [None] * frame.m_chirps

    def _one(i: int) -> None:
        ss = split(range_fft(frame.data[i], n, window))
        p_ref = interference_power(ss.ref)
        if p_ref > params.threshold:
            dw = params.max_dw if params.max_dw is not None else step_size(p_ref, params.gamma)
            res = lms_cancel(ss.pri, ss.ref, params.filter_len, dw,
                             conjugate=conjugate, track_error=track_error)
            out[i] = res[0]
            traces[i] = AncTrace(
                applied=True, ref_power=p_ref, dw_used=dw, taps_final=res[1],
                error_power_by_iter=res[2] if track_error else None,
            )
        else:
            out[i] = ss.pri
            traces[i] = AncTrace(applied=False, ref_power=p_ref)

    if n_threads > 1 and frame.m_chirps > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            list(pool.map(_one, range(frame.m_chirps)))
    else:
        for i in range(frame.m_chirps):
            _one(i)
    return out, traces
