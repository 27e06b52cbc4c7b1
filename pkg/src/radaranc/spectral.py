"""Range-FFT, positive/negative half split, and Doppler processing.

The split feeds the adaptive canceller: the positive half of the range
FFT is the primary channel (targets plus interference), the conjugated
and order-reversed negative half is the reference channel (interference
only, mirror-symmetric to the primary for ideal interference).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .waveform import ChirpConfig, SPEED_OF_LIGHT

WINDOWS = ("rect", "hann")


@dataclass(frozen=True)
class SplitSpectrum:
    """Positive-half / mirrored-negative-half pair of one range FFT.

    Attributes:
        pri: bins 0 .. N/2-1 of the FFT
        ref: conj(fft[N-1-n]) for n = 0 .. N/2-1
        n_fft: original FFT size N
    """

    pri: np.ndarray
    ref: np.ndarray
    n_fft: int


def _window(n: int, kind: str) -> np.ndarray:
    if kind == "rect":
        return np.ones(n)
    if kind == "hann":
        return np.hanning(n)
    raise ValueError(f"unknown window {kind!r}; expected one of {WINDOWS}")


def range_fft(chirp_samples: np.ndarray, n_fft: int, window: str = "rect") -> np.ndarray:
    """Unnormalized forward DFT of one chirp, zero-padded to ``n_fft``."""
    x = np.asarray(chirp_samples)
    if x.ndim != 1:
        raise ValueError("chirp_samples must be 1-D")
    if len(x) > n_fft:
        raise ValueError(f"{len(x)} samples exceed FFT size {n_fft}")
    if n_fft < 2 or (n_fft & (n_fft - 1)) != 0:
        raise ValueError("n_fft must be a power of two")
    return np.fft.fft(x * _window(len(x), window), n_fft)


def split(spectrum: np.ndarray) -> SplitSpectrum:
    """Split a full FFT into primary and mirrored reference halves."""
    y = np.asarray(spectrum)
    n = len(y)
    if n % 2 != 0:
        raise ValueError("spectrum length must be even")
    pri = y[: n // 2].copy()
    ref = np.conj(y[n // 2 :][::-1])
    return SplitSpectrum(pri=pri, ref=ref, n_fft=n)


def unsplit(ss: SplitSpectrum) -> np.ndarray:
    """Reassemble the full FFT from a SplitSpectrum (inverse of split)."""
    return np.concatenate([ss.pri, np.conj(ss.ref[::-1])])


def interference_power(ref: np.ndarray) -> float:
    """Total power of the reference half: sum |ref(n)|^2."""
    r = np.asarray(ref)
    return float(np.sum(np.abs(r) ** 2).real)


@dataclass(frozen=True)
class RangeDopplerMap:
    """Doppler-processed CPI in dB power.

    Attributes:
        power: (m_chirps, n_fast/2) dB, Doppler centered (row M/2 = 0 m/s)
        range_axis: meters per range column (bin index when uncalibrated)
        doppler_axis: m/s per Doppler row (bin index when uncalibrated)
    """

    power: np.ndarray
    range_axis: np.ndarray
    doppler_axis: np.ndarray


def doppler_fft(
    filtered: np.ndarray, config: Optional[ChirpConfig] = None
) -> RangeDopplerMap:
    """FFT across chirps of filtered range-FFT data, shifted and in dB.

    Args:
        filtered: (M, N/2) complex matrix, one row per chirp
        config: victim chirp parameters; when given, the axes carry
            physical units (meters, m/s), otherwise bin indices.
    """
    x = np.atleast_2d(np.asarray(filtered))
    m, n_half = x.shape
    m_fft = 1 << max(m - 1, 0).bit_length()  # next power of two
    dop = np.fft.fftshift(np.fft.fft(x, n=m_fft, axis=0), axes=0)
    power_db = 10.0 * np.log10(np.abs(dop) ** 2 + np.finfo(float).tiny)

    if config is not None:
        rng_axis = np.arange(n_half) * config.range_bin_m
        prf = 1.0 / config.t_chirp
        dop_hz = (np.arange(m_fft) - m_fft // 2) * prf / m_fft
        dop_axis = dop_hz * SPEED_OF_LIGHT / (2.0 * config.f_c)
    else:
        rng_axis = np.arange(n_half, dtype=float)
        dop_axis = np.arange(m_fft, dtype=float) - m_fft // 2
    return RangeDopplerMap(power=power_db, range_axis=rng_axis, doppler_axis=dop_axis)
