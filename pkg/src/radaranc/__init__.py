"""FMCW radar mutual-interference simulation and mitigation.

Simulates dechirped automotive-radar baseband frames (targets plus
interfering radars), and cleans them with an adaptive noise canceller
that uses the mirrored negative half of the range FFT as the reference
channel.
"""

from .waveform import (
    SPEED_OF_LIGHT,
    BeatTone,
    ChirpConfig,
    beat_frequency,
    doppler_frequency,
    range_resolution,
    unambiguous_range,
)
from .scene import (
    Interferer,
    Scene,
    Target,
    load_scenario,
    save_scenario,
    table1_scene,
    table2_scene,
)
from .synth import CpiFrame, FirFilter, design_aaf, synth_echo, synth_interference, synthesize
from .spectral import (
    RangeDopplerMap,
    SplitSpectrum,
    doppler_fft,
    interference_power,
    range_fft,
    split,
    unsplit,
)
from .anc import (
    AncParams,
    AncTrace,
    auto_threshold,
    lms_cancel,
    mitigate_cpi,
    ref_noise_floor,
    step_size,
)
from .metrics import CfarWindow, SirReport, ghost_probability, noise_floor, sir_1d, sir_2d, stft
from .io import CaptureFormatError, IqFileHeader, export_csv, read_cpi, read_header, write_cpi
from .estimator import InterferenceCanceller

__version__ = "0.1.0"

__all__ = [
    "SPEED_OF_LIGHT",
    "AncParams",
    "AncTrace",
    "BeatTone",
    "CaptureFormatError",
    "CfarWindow",
    "ChirpConfig",
    "CpiFrame",
    "FirFilter",
    "InterferenceCanceller",
    "Interferer",
    "IqFileHeader",
    "RangeDopplerMap",
    "Scene",
    "SirReport",
    "SplitSpectrum",
    "Target",
    "auto_threshold",
    "beat_frequency",
    "design_aaf",
    "doppler_fft",
    "doppler_frequency",
    "export_csv",
    "ghost_probability",
    "interference_power",
    "lms_cancel",
    "load_scenario",
    "mitigate_cpi",
    "noise_floor",
    "range_fft",
    "range_resolution",
    "read_cpi",
    "read_header",
    "ref_noise_floor",
    "save_scenario",
    "sir_1d",
    "sir_2d",
    "split",
    "step_size",
    "stft",
    "synth_echo",
    "synth_interference",
    "synthesize",
    "table1_scene",
    "table2_scene",
    "unambiguous_range",
    "unsplit",
    "write_cpi",
]
