"""Evaluation: CFAR-window SIR, noise floor, ghost-target probability, STFT.

SIR here scores mitigation quality at known truth cells, not detection:
the peak is searched within one bin of the truth cell and the floor is
the mean linear power over the CFAR reference cells around it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CfarWindow:
    """Reference/guard cell arrangement around a cell under test.

    Counts are totals split evenly on both sides: the default 20/6 means
    10 reference and 3 guard cells per side (per dimension in 2-D).
    """

    ref_cells: int = 20
    guard_cells: int = 6

    def __post_init__(self):
        if self.ref_cells <= 0:
            raise ValueError("ref_cells must be positive")
        if self.guard_cells < 0:
            raise ValueError("guard_cells must be non-negative")

    @property
    def ref_per_side(self) -> int:
        return max(self.ref_cells // 2, 1)

    @property
    def guard_per_side(self) -> int:
        return self.guard_cells // 2


@dataclass(frozen=True)
class SirReport:
    """Signal-to-interference ratio at one truth cell."""

    target_bin: tuple[int, ...]
    peak_db: float
    floor_db: float
    window: CfarWindow

    @property
    def sir_db(self) -> float:
        return self.peak_db - self.floor_db


def _db_to_lin(x_db: np.ndarray) -> np.ndarray:
    return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0)


def sir_1d(spectrum_db: np.ndarray, target_bin: int, window: CfarWindow = CfarWindow()) -> SirReport:
    """SIR of a known target bin in a 1-D dB spectrum.

    Peak: max over target_bin +/- 1 (absorbs straddle loss).  Floor: mean
    linear power over the reference cells outside the guard cells on both
    sides, clipped at the spectrum edges.
    """
    s = np.asarray(spectrum_db, dtype=float)
    if s.ndim != 1:
        raise ValueError("spectrum must be 1-D")
    n = len(s)
    if not 0 <= target_bin < n:
        raise ValueError(f"target_bin {target_bin} outside spectrum of {n} bins")

    lo = max(target_bin - 1, 0)
    peak_db = float(np.max(s[lo : target_bin + 2]))

    g, r = window.guard_per_side, window.ref_per_side
    left = s[max(target_bin - g - r, 0) : max(target_bin - g, 0)]
    right = s[target_bin + g + 1 : target_bin + g + 1 + r]
    cells = np.concatenate([left, right])
    if cells.size == 0:
        raise ValueError("no reference cells available inside the spectrum")
    floor_db = float(10.0 * np.log10(np.mean(_db_to_lin(cells))))
    return SirReport(target_bin=(target_bin,), peak_db=peak_db, floor_db=floor_db, window=window)


def sir_2d(map_db: np.ndarray, cell: tuple[int, int], window: CfarWindow = CfarWindow()) -> SirReport:
    """SIR of a known (row, col) cell in a 2-D dB map.

    The floor is the mean linear power over the rectangular ring of
    reference cells outside the guard box, clipped at the map edges.
    """
    m = np.asarray(map_db, dtype=float)
    if m.ndim != 2:
        raise ValueError("map must be 2-D")
    row, col = cell
    if not (0 <= row < m.shape[0] and 0 <= col < m.shape[1]):
        raise ValueError(f"cell {cell} outside map of shape {m.shape}")

    r0, r1 = max(row - 1, 0), min(row + 2, m.shape[0])
    c0, c1 = max(col - 1, 0), min(col + 2, m.shape[1])
    peak_db = float(np.max(m[r0:r1, c0:c1]))

    g, r = window.guard_per_side, window.ref_per_side
    out_r0, out_r1 = max(row - g - r, 0), min(row + g + r + 1, m.shape[0])
    out_c0, out_c1 = max(col - g - r, 0), min(col + g + r + 1, m.shape[1])
    block = m[out_r0:out_r1, out_c0:out_c1]
    mask = np.ones(block.shape, dtype=bool)
    gr0, gr1 = max(row - g, 0) - out_r0, min(row + g + 1, m.shape[0]) - out_r0
    gc0, gc1 = max(col - g, 0) - out_c0, min(col + g + 1, m.shape[1]) - out_c0
    mask[gr0:gr1, gc0:gc1] = False
    cells = block[mask]
    if cells.size == 0:
        raise ValueError("no reference cells available inside the map")
    floor_db = float(10.0 * np.log10(np.mean(_db_to_lin(cells))))
    return SirReport(target_bin=(row, col), peak_db=peak_db, floor_db=floor_db, window=window)


def noise_floor(ref_spectrum_db: np.ndarray) -> float:
    """Noise floor estimate: median per-bin dB power (spur robust)."""
    s = np.asarray(ref_spectrum_db, dtype=float)
    if s.size == 0:
        raise ValueError("empty spectrum")
    return float(np.median(s))


def ghost_probability(bw_lpf: float, bw: float) -> float:
    """Probability that a same-parameter interferer lands a ghost target
    inside the receiver band: bw_lpf / bw."""
    if not 0 <= bw_lpf <= bw or bw <= 0:
        raise ValueError("require 0 <= bw_lpf <= bw and bw > 0")
    return bw_lpf / bw


def stft(samples: np.ndarray, win_len: int, hop: int) -> np.ndarray:
    """Magnitude of sliding Hann-windowed FFTs, one row per frame.

    Rows are FFT-shifted so negative frequencies come first, matching the
    complex-baseband view of a sweep crossing the band.
    """
    x = np.asarray(samples)
    if x.ndim != 1:
        raise ValueError("samples must be 1-D")
    if win_len > len(x):
        raise ValueError("window longer than the signal")
    if hop < 1:
        raise ValueError("hop must be positive")
    win = np.hanning(win_len)
    starts = range(0, len(x) - win_len + 1, hop)
    frames = np.stack([x[s : s + win_len] * win for s in starts])
    return np.abs(np.fft.fftshift(np.fft.fft(frames, axis=1), axes=1))
