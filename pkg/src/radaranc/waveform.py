"""FMCW chirp descriptions and the closed-form dechirped-tone relations.

A chirp-sequence FMCW radar mixes the received signal with its own
transmit sweep, so a point target at range d turns into a constant beat
tone.  Everything here is stateless arithmetic on chirp parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

SPEED_OF_LIGHT = 299_792_458.0  # m/s, exact

# Relative tolerance for the chirp-rate consistency check mu == bw / (n_fast / f_s).
_MU_RTOL = 1e-6


@dataclass(frozen=True)
class ChirpConfig:
    """One radar's waveform and receiver parameters.

    The sweep bandwidth is referenced to the ADC capture window: the
    chirp rate satisfies ``mu == bw / (n_fast / f_s)``.  The capture
    window ``n_fast / f_s`` may be shorter than the chirp duration
    ``t_chirp`` (ADC start delay), never longer.

    Attributes:
        f_c: start frequency of the sweep, Hz
        bw: swept bandwidth over the capture window, Hz (0 for CW)
        t_chirp: chirp repetition period, s
        f_s: complex ADC sample rate, Hz
        bw_lpf: anti-aliasing filter passband edge, Hz
        n_fast: fast-time samples per chirp (FFT size), power of two
        m_chirps: chirps per coherent processing interval
        mu: chirp rate, Hz/s; derived from bw when omitted
    """

    f_c: float
    bw: float
    t_chirp: float
    f_s: float
    bw_lpf: float
    n_fast: int
    m_chirps: int
    mu: float = field(default=-1.0)

    def __post_init__(self):
        if min(self.f_c, self.t_chirp, self.f_s, self.bw_lpf) <= 0:
            raise ValueError("f_c, t_chirp, f_s and bw_lpf must be strictly positive")
        if self.bw < 0:
            raise ValueError("bw must be non-negative")
        if self.n_fast < 1 or (self.n_fast & (self.n_fast - 1)) != 0:
            raise ValueError(f"n_fast must be a power of two, got {self.n_fast}")
        if self.m_chirps < 1:
            raise ValueError("m_chirps must be at least 1")
        if self.f_s <= 2.0 * self.bw_lpf:
            raise ValueError(
                f"f_s = {self.f_s:g} Hz must exceed twice the AAF passband "
                f"{self.bw_lpf:g} Hz"
            )
        if self.t_sweep > self.t_chirp * (1.0 + 1e-9):
            raise ValueError("capture window n_fast/f_s exceeds chirp duration")
        derived_mu = self.bw / self.t_sweep
        if self.mu < 0:
            object.__setattr__(self, "mu", derived_mu)
        elif not math.isclose(self.mu, derived_mu, rel_tol=_MU_RTOL, abs_tol=1e-9):
            raise ValueError(
                f"mu = {self.mu:g} inconsistent with bw/(n_fast/f_s) = {derived_mu:g}"
            )

    @property
    def t_sweep(self) -> float:
        """ADC capture window per chirp, s."""
        return self.n_fast / self.f_s

    @property
    def range_bin_m(self) -> float:
        """Meters spanned by one FFT bin: c * f_s / (2 * mu * n_fast)."""
        return SPEED_OF_LIGHT * self.f_s / (2.0 * self.mu * self.n_fast)


@dataclass(frozen=True)
class BeatTone:
    """A dechirped target return: one complex tone per chirp.

    Attributes:
        freq: beat frequency, Hz
        amp: linear amplitude
        phase: initial phase, rad
    """

    freq: float
    amp: float
    phase: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.freq):
            raise ValueError("beat frequency must be finite")
        if self.amp < 0:
            raise ValueError("amplitude must be non-negative")


def beat_frequency(target_range: float, mu: float) -> float:
    """Beat frequency of a static target: 2 * d * mu / c.

    Args:
        target_range: one-way range d, meters (>= 0)
        mu: chirp rate, Hz/s (> 0)
    """
    if target_range < 0:
        raise ValueError("range must be non-negative")
    if mu <= 0:
        raise ValueError("chirp rate must be positive")
    return 2.0 * target_range * mu / SPEED_OF_LIGHT


def doppler_frequency(radial_velocity: float, f_c: float) -> float:
    """Doppler shift 2 * v * f_c / c; approaching targets are positive.

    The sign convention is fixed here once: positive radial velocity
    means the target closes range and raises the beat frequency.
    """
    if f_c <= 0:
        raise ValueError("carrier frequency must be positive")
    return 2.0 * radial_velocity * f_c / SPEED_OF_LIGHT


def unambiguous_range(config: ChirpConfig) -> float:
    """Largest range whose beat stays inside the AAF: c * bw_lpf / (2 * mu)."""
    if config.mu <= 0:
        raise ValueError("unambiguous range undefined for mu <= 0")
    return SPEED_OF_LIGHT * config.bw_lpf / (2.0 * config.mu)


def range_resolution(config: ChirpConfig) -> float:
    """Range resolution c / (2 * BW)."""
    if config.bw <= 0:
        raise ValueError("range resolution undefined for bw <= 0")
    return SPEED_OF_LIGHT / (2.0 * config.bw)
