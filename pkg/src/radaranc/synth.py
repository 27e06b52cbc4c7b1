"""Victim-receiver baseband synthesis.

The chain mirrors an FMCW receive path after the quadrature mixer: target
echoes and interference are generated at 4x the ADC rate (so out-of-band
interference exists before filtering, like in the analog chain), pushed
through a real-coefficient linear-phase AAF, decimated to the ADC rate,
and finally complex AWGN is added.

Echoes are coherent with the victim sweep and therefore come out as clean
positive-frequency tones.  Interference is not coherent: the aggressor
sweep beats against the victim sweep and crosses the receiver band as an
LFM-like transient.  Strong interference exercises both quadrature rails,
so its baseband footprint carries a conjugate (image) component alongside
the direct one; the complex gain of that image path is
``IMAGE_PATH_GAIN``.  With a unit image gain the footprint is a real
cosine and its spectrum is exactly mirror-symmetric about the axis of the
positive/negative half split, which is the idealized symmetry the
downstream canceller relies on.  The shipped default keeps the image gain
slightly off unity so the mirrored halves differ by a small complex
factor the adaptive filter has to learn.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal as sps

from .scene import Interferer, Scene, Target
from .waveform import SPEED_OF_LIGHT, ChirpConfig, beat_frequency, doppler_frequency

# Oversampling factor ahead of the AAF.
OS_FACTOR = 4

# Complex gain of the conjugate (image) component of interference at the
# mixer output, relative to the direct component.  Magnitude below one
# models imperfect image response, the phase models quadrature skew of the
# non-coherent path.  Unity would make interference exactly real-valued.
IMAGE_PATH_GAIN = 0.97 * np.exp(0.38j)

# RNG substream tags (SeedSequence spawn keys).
_COMP_NOISE = 0
_COMP_INTERFERER = 1


@dataclass(frozen=True)
class FirFilter:
    """Linear-phase FIR anti-aliasing filter.

    Attributes:
        taps: real coefficients, symmetric (type I)
        group_delay: samples, (len(taps) - 1) / 2
    """

    taps: np.ndarray
    group_delay: int

    def response_at(self, freq: float, rate: float) -> complex:
        """Frequency response at ``freq`` Hz for sample rate ``rate``."""
        n = np.arange(len(self.taps))
        return complex(np.sum(self.taps * np.exp(-2j * np.pi * freq * n / rate)))


@dataclass(frozen=True)
class CpiFrame:
    """One coherent processing interval of complex baseband samples.

    Attributes:
        data: (m_chirps, n_fast) complex64, row per chirp
        f_s: ADC sample rate, Hz
        scene_digest: 32-byte digest of the generating scene
    """

    data: np.ndarray
    f_s: float
    scene_digest: bytes = b"\x00" * 32

    def __post_init__(self):
        arr = np.ascontiguousarray(self.data, dtype=np.complex64)
        if arr.ndim != 2:
            raise ValueError("frame data must be 2-D (chirps x fast time)")
        if not np.all(np.isfinite(arr.view(np.float32))):
            raise ValueError("frame data must be finite")
        object.__setattr__(self, "data", arr)
        if len(self.scene_digest) != 32:
            raise ValueError("scene_digest must be 32 bytes")

    @property
    def m_chirps(self) -> int:
        return self.data.shape[0]

    @property
    def n_fast(self) -> int:
        return self.data.shape[1]


def design_aaf(passband: float, stopband: float, rate: float) -> FirFilter:
    """Kaiser windowed-sinc lowpass emulating the receiver AAF.

    Args:
        passband: passband edge, Hz
        stopband: stopband edge, Hz (>= 60 dB attenuation beyond it)
        rate: sample rate the filter runs at, Hz
    """
    if not 0 < passband < stopband < rate / 2:
        raise ValueError(
            f"band edges must satisfy 0 < passband < stopband < rate/2, "
            f"got ({passband:g}, {stopband:g}) at {rate:g} Hz"
        )
    # 5 dB margin over the 60 dB requirement.
    numtaps, beta = sps.kaiserord(65.0, (stopband - passband) / (rate / 2))
    numtaps |= 1  # force type I (odd length, symmetric)
    taps = sps.firwin(
        numtaps, (passband + stopband) / 2, window=("kaiser", beta), fs=rate
    )
    return FirFilter(taps=taps, group_delay=(numtaps - 1) // 2)


def _apply_aaf(x: np.ndarray, aaf: FirFilter) -> np.ndarray:
    """Filter and remove the linear-phase group delay (passband zero-phase)."""
    full = sps.fftconvolve(x, aaf.taps.astype(np.complex128), mode="full")
    return full[aaf.group_delay : aaf.group_delay + len(x)]


def _target_amplitude(target: Target, path_loss: bool) -> float:
    amp = float(np.sqrt(target.rcs_norm))
    if path_loss and target.range > 0:
        amp /= target.range**2
    return amp


def synth_echo(
    target: Target,
    victim: ChirpConfig,
    chirp_index: int,
    path_loss: bool = False,
) -> np.ndarray:
    """Dechirped echo of one target over one chirp, at OS_FACTOR * f_s.

    A single tone at beat + Doppler frequency; motion advances the phase
    by 2*pi*f_D*t_chirp from chirp to chirp.  The carrier phase at the
    target round trip fixes the (deterministic) initial phase.
    """
    f_os = OS_FACTOR * victim.f_s
    n_os = OS_FACTOR * victim.n_fast
    t = np.arange(n_os) / f_os
    f_beat = beat_frequency(target.range, victim.mu)
    f_dop = doppler_frequency(target.velocity, victim.f_c)
    phase0 = -4.0 * np.pi * victim.f_c * target.range / SPEED_OF_LIGHT
    phase = (
        2.0 * np.pi * (f_beat + f_dop) * t
        + 2.0 * np.pi * f_dop * chirp_index * victim.t_chirp
        + phase0
    )
    return _target_amplitude(target, path_loss) * np.exp(1j * phase)


def _interferer_phase_table(intf: Interferer, victim: ChirpConfig, rng) -> np.ndarray:
    """Per-aggressor-chirp start phases covering one CPI (plus two chirps
    of guard on each side): a random initial phase plus a random walk
    (clock drift between the two radars)."""
    cpi_span = victim.m_chirps * victim.t_chirp
    n_chirps = int(np.ceil(cpi_span / intf.chirp.t_chirp)) + 5
    phase0 = rng.uniform(0.0, 2.0 * np.pi)
    if intf.phase_walk_std > 0:
        steps = rng.normal(0.0, intf.phase_walk_std, size=n_chirps)
    else:
        steps = np.zeros(n_chirps)
    return phase0 + np.cumsum(steps)


def synth_interference(
    intf: Interferer,
    victim: ChirpConfig,
    chirp_index: int,
    rng,
    image_gain: complex = IMAGE_PATH_GAIN,
) -> np.ndarray:
    """Dechirped interference over one victim chirp, at OS_FACTOR * f_s.

    The direct component is a complex exponential whose instantaneous
    frequency is the carrier offset plus the sweep-rate difference times
    time (quadratic phase), offset by the aggressor chirp timing; the
    image component is its conjugate scaled by ``image_gain``.  Samples
    where the beat falls outside the oversampled Nyquist band carry no
    energy (the front end is band limited), so each band crossing appears
    exactly once.  The whole footprint rides on a carrier half an FFT bin
    below DC, which centers the direct/image pair on the mirror axis of
    the downstream positive/negative half split.

    Args:
        rng: ``numpy.random.Generator``; the per-aggressor-chirp phase
            walk for the whole CPI is drawn from it up front, so calls for
            different ``chirp_index`` with identically seeded generators
            share one consistent walk.
    """
    chirp_phases = _interferer_phase_table(intf, victim, rng)
    f_os = OS_FACTOR * victim.f_s
    n_os = OS_FACTOR * victim.n_fast
    t = chirp_index * victim.t_chirp + np.arange(n_os) / f_os

    t_a = intf.chirp.t_chirp
    # Offsets repeat with the aggressor period; whole periods only renumber
    # chirps, so canonicalize into [0, t_a).
    off = intf.timing_offset % t_a
    # Aggressor chirp index; the phase table starts two chirps early.
    k = np.floor((t - off) / t_a).astype(int)
    k_idx = k + 2
    if np.any(k_idx < 0) or np.any(k_idx >= len(chirp_phases)):
        raise ValueError("aggressor phase table does not cover this chirp")
    ta = t - off - k * t_a  # time into the aggressor chirp

    tv = t - chirp_index * victim.t_chirp  # time into the victim chirp
    dfc = intf.chirp.f_c - victim.f_c
    # Instantaneous beat of aggressor against the victim sweep.
    f_inst = dfc + intf.chirp.mu * ta - victim.mu * tv
    in_band = np.abs(f_inst) < 0.5 * f_os

    phase = (
        2.0 * np.pi * (dfc * tv + 0.5 * intf.chirp.mu * ta**2 - 0.5 * victim.mu * tv**2)
        + chirp_phases[k_idx]
    )
    direct = np.exp(1j * phase)
    footprint = 0.5 * (direct + image_gain * np.conj(direct))
    # Half-bin alignment carrier (frequency -f_s / (2 n_fast)).
    align = np.exp(-1j * np.pi * victim.f_s * tv / victim.n_fast)
    return np.where(in_band, intf.amp * footprint * align, 0.0 + 0.0j)


def synthesize(scene: Scene, image_gain: complex = IMAGE_PATH_GAIN) -> CpiFrame:
    """Generate the victim CPI for a scene.

    Deterministic for a fixed scene seed: noise uses one RNG substream
    per chirp and each interferer draws its phase walk from its own
    substream, so chirps can be produced independently or in parallel
    without changing the output.
    """
    victim = scene.victim
    aaf = design_aaf(victim.bw_lpf, 2.0 * victim.bw_lpf, OS_FACTOR * victim.f_s)
    rows = np.empty((victim.m_chirps, victim.n_fast), dtype=np.complex128)
    for i in range(victim.m_chirps):
        rows[i] = _synth_chirp(scene, i, aaf, image_gain)
    return CpiFrame(data=rows, f_s=victim.f_s, scene_digest=scene.digest())


def _interferer_rng(scene: Scene, index: int):
    return np.random.default_rng(
        np.random.SeedSequence(scene.seed, spawn_key=(_COMP_INTERFERER, index))
    )


def _synth_chirp(scene, chirp_index, aaf, image_gain) -> np.ndarray:
    victim = scene.victim
    n_os = OS_FACTOR * victim.n_fast
    acc = np.zeros(n_os, dtype=np.complex128)
    for target in scene.targets:
        acc += synth_echo(target, victim, chirp_index, scene.path_loss)
    for j, intf in enumerate(scene.interferers):
        acc += synth_interference(
            intf, victim, chirp_index, _interferer_rng(scene, j), image_gain
        )

    filtered = _apply_aaf(acc, aaf)
    decimated = filtered[::OS_FACTOR]

    if scene.noise_power > 0:
        rng = np.random.default_rng(
            np.random.SeedSequence(scene.seed, spawn_key=(_COMP_NOISE, chirp_index))
        )
        sigma = np.sqrt(scene.noise_power / 2.0)
        decimated = decimated + (
            rng.normal(0.0, sigma, victim.n_fast)
            + 1j * rng.normal(0.0, sigma, victim.n_fast)
        )
    return decimated
