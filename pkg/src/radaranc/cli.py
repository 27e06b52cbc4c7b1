"""Command line pipeline: simulate scenes, mitigate captures, report SIR.

    radaranc simulate --scenario scenarios/table1.scenario --out run1
    radaranc mitigate run1/capture.ranc --out run1 --sweep-gamma 50,100,150
    radaranc analyze run1

Every run writes a manifest with the exact configuration, the seed and
sha-256 digests of all outputs, so a run can be reproduced byte for byte
from the manifest alone.  Exit codes: 0 success, 1 usage/configuration
error, 2 runtime/data error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .anc import AncParams, mitigate_cpi, ref_noise_floor
from .io import CaptureFormatError, export_csv, read_cpi, write_cpi
from .metrics import SirReport, ghost_probability, sir_1d, sir_2d
from .scene import Scene, load_scenario, scene_from_dict, scene_to_dict
from .spectral import doppler_fft, range_fft, split
from .synth import synthesize
from .waveform import doppler_frequency

USAGE_ERROR = 1
DATA_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with 2
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


class CliError(Exception):
    def __init__(self, message: str, code: int = DATA_ERROR):
        super().__init__(message)
        self.code = code


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_manifest(out_dir: Path, name: str, doc: dict) -> None:
    doc = dict(doc, version=__version__)
    (out_dir / name).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _power_db(rows: np.ndarray) -> np.ndarray:
    return 10.0 * np.log10(np.abs(rows) ** 2 + np.finfo(float).tiny)


def _split_frame(frame) -> tuple[np.ndarray, np.ndarray]:
    pris, refs = [], []
    for row in frame.data:
        ss = split(range_fft(row, frame.n_fast))
        pris.append(ss.pri)
        refs.append(ss.ref)
    return np.array(pris), np.array(refs)


def cmd_simulate(args) -> int:
    scenario_path = Path(args.scenario)
    if not scenario_path.is_file():
        raise CliError(f"scenario file not found: {scenario_path}", USAGE_ERROR)
    scene = load_scenario(scenario_path)
    if args.seed is not None:
        scene = replace(scene, seed=args.seed)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    frame = synthesize(scene)
    capture = out_dir / "capture.ranc"
    write_cpi(frame, capture)
    _write_manifest(out_dir, "manifest.json", {
        "command": "simulate",
        "scenario": scene_to_dict(scene),
        "seed": scene.seed,
        "outputs": {capture.name: _sha256(capture)},
    })
    print(f"wrote {capture} ({frame.m_chirps}x{frame.n_fast} @ {frame.f_s:g} Hz)")
    return 0


def _resolve_scene(args, capture_path: Path) -> Scene | None:
    if args.scenario:
        scenario_path = Path(args.scenario)
        if not scenario_path.is_file():
            raise CliError(f"scenario file not found: {scenario_path}", USAGE_ERROR)
        return load_scenario(scenario_path)
    sibling = capture_path.parent / "manifest.json"
    if sibling.is_file():
        doc = json.loads(sibling.read_text())
        if "scenario" in doc:
            return scene_from_dict(doc["scenario"])
    return None


def _truth_cells(scene: Scene, n_half: int, m_chirps: int):
    """(range_bin, doppler_row) per target from the scenario geometry.

    Doppler rows are indices into the shifted Doppler FFT, which pads the
    chirp count to the next power of two.
    """
    m_dop = 1 << max(m_chirps - 1, 0).bit_length()
    cells = []
    for t in scene.targets:
        rng_bin = int(round(t.range / scene.victim.range_bin_m))
        f_d = doppler_frequency(t.velocity, scene.victim.f_c)
        prf = 1.0 / scene.victim.t_chirp
        dop_row = m_dop // 2 + int(round(f_d / prf * m_dop)) if m_dop > 1 else 0
        cells.append((min(rng_bin, n_half - 1), dop_row))
    return cells


def _report_dict(idx: int, stage: str, kind: str, rep: SirReport) -> dict:
    return {
        "target": idx,
        "stage": stage,
        "kind": kind,
        "cell": list(rep.target_bin),
        "peak_db": rep.peak_db,
        "floor_db": rep.floor_db,
        "sir_db": rep.sir_db,
    }


def cmd_mitigate(args) -> int:
    capture_path = Path(args.capture)
    if not capture_path.is_file():
        raise CliError(f"capture not found: {capture_path}", USAGE_ERROR)
    frame = read_cpi(capture_path)
    scene = _resolve_scene(args, capture_path)

    gammas = args.sweep_gamma if args.sweep_gamma else [args.gamma]
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    pris, refs = _split_frame(frame)
    n_half = frame.n_fast // 2

    if args.threshold == "auto":
        floor_db = ref_noise_floor(refs)
        threshold = n_half * 10.0 ** ((floor_db + 10.0) / 10.0)
        threshold_doc = {
            "mode": "auto",
            "ref_noise_floor_db": floor_db,
            "margin_db": 10.0,
            "linear": threshold,
            "total_db": 10.0 * np.log10(threshold),
        }
    else:
        try:
            total_db = float(args.threshold)
        except ValueError:
            raise CliError(f"--threshold must be 'auto' or a dB value, got {args.threshold!r}",
                           USAGE_ERROR)
        threshold = 10.0 ** (total_db / 10.0)
        threshold_doc = {"mode": "explicit", "linear": threshold, "total_db": total_db}

    bins = np.arange(n_half)
    chirps = np.arange(frame.m_chirps)
    outputs = {}

    def emit(name, matrix, cols, rows=None):
        path = out_dir / name
        export_csv(matrix, path, cols, rows, corner="chirp")
        outputs[name] = _sha256(path)

    emit("pri_db.csv", _power_db(pris), bins, chirps)
    emit("ref_db.csv", _power_db(refs), bins, chirps)

    do_doppler = frame.m_chirps > 1
    rd_before = None
    if do_doppler:
        rd_before = doppler_fft(pris, scene.victim if scene else None)
        emit("rd_before_db.csv", rd_before.power, rd_before.range_axis,
             rd_before.doppler_axis)

    reports = []
    cells = _truth_cells(scene, n_half, frame.m_chirps) if scene else []
    # 1-D reports use the most interfered chirp, like the single-chirp demo.
    demo_chirp = int(np.argmax(np.sum(np.abs(refs) ** 2, axis=1)))
    for idx, (rbin, drow) in enumerate(cells):
        reports.append(_report_dict(idx, "unmitigated", "1d",
                                    sir_1d(_power_db(pris[demo_chirp]), rbin)))
        if do_doppler:
            reports.append(_report_dict(idx, "unmitigated", "2d",
                                        sir_2d(rd_before.power, (drow, rbin))))

    n_threads = int(os.environ.get("RADAR_ANC_THREADS", "1") or "1")
    gate_stats = {}
    for gamma in gammas:
        params = AncParams(filter_len=args.filter_len, threshold=threshold, gamma=gamma)
        out, traces = mitigate_cpi(frame, params, window=args.window, n_threads=n_threads)
        tag = f"gamma{gamma:g}"
        emit(f"mitigated_db_{tag}.csv", _power_db(out), bins, chirps)
        flags = np.array([[t.applied, 10.0 * np.log10(max(t.ref_power, np.finfo(float).tiny)),
                           t.dw_used] for t in traces])
        emit(f"applied_{tag}.csv", flags, ["applied", "ref_power_db", "dw"], chirps)
        gate_stats[tag] = {"applied": int(sum(t.applied for t in traces)),
                           "chirps": frame.m_chirps}
        rd_after = None
        if do_doppler:
            rd_after = doppler_fft(out, scene.victim if scene else None)
            emit(f"rd_after_db_{tag}.csv", rd_after.power, rd_after.range_axis,
                 rd_after.doppler_axis)
        for idx, (rbin, drow) in enumerate(cells):
            stage = f"mitigated[{tag}]"
            reports.append(_report_dict(idx, stage, "1d",
                                        sir_1d(_power_db(out[demo_chirp]), rbin)))
            if do_doppler:
                reports.append(_report_dict(idx, stage, "2d",
                                            sir_2d(rd_after.power, (drow, rbin))))

    if reports:
        path = out_dir / "sir_reports.json"
        path.write_text(json.dumps(reports, indent=2, sort_keys=True) + "\n")
        outputs[path.name] = _sha256(path)

    _write_manifest(out_dir, "manifest_mitigate.json", {
        "command": "mitigate",
        "capture": {"path": str(capture_path), "sha256": _sha256(capture_path)},
        "params": {
            "filter_len": args.filter_len,
            "gammas": gammas,
            "threshold": threshold_doc,
            "window": args.window,
            "threads": n_threads,
        },
        "gating": gate_stats,
        "outputs": outputs,
    })
    applied_join = ", ".join(f"{k}: {v['applied']}/{v['chirps']}" for k, v in gate_stats.items())
    print(f"mitigated {capture_path.name} -> {out_dir} (chirps gated {applied_join})")
    return 0


def cmd_analyze(args) -> int:
    run_dir = Path(args.run_dir)
    if not run_dir.is_dir():
        raise CliError(f"run directory not found: {run_dir}", USAGE_ERROR)
    sim_manifest = run_dir / "manifest.json"
    mit_manifest = run_dir / "manifest_mitigate.json"
    reports_path = run_dir / "sir_reports.json"
    if not (sim_manifest.is_file() or mit_manifest.is_file()):
        raise CliError(f"no manifests in {run_dir}; nothing to analyze")

    summary: dict = {"run_dir": str(run_dir)}
    lines = [f"run: {run_dir}"]

    if sim_manifest.is_file():
        doc = json.loads(sim_manifest.read_text())
        scene = scene_from_dict(doc["scenario"])
        summary["seed"] = doc.get("seed")
        victim = scene.victim
        p_ghost = ghost_probability(victim.bw_lpf, victim.bw) if victim.bw > 0 else None
        summary["ghost_probability"] = p_ghost
        if p_ghost is not None:
            lines.append(f"ghost-target probability (bw_lpf/bw): {p_ghost:.4f}")

    if mit_manifest.is_file():
        doc = json.loads(mit_manifest.read_text())
        summary["gating"] = doc.get("gating")
        summary["threshold"] = doc["params"]["threshold"]
        for tag, st in (doc.get("gating") or {}).items():
            lines.append(f"gating {tag}: {st['applied']}/{st['chirps']} chirps mitigated")

    if reports_path.is_file():
        reports = json.loads(reports_path.read_text())
        summary["sir_reports"] = reports
        base = {(r["target"], r["kind"]): r["sir_db"] for r in reports
                if r["stage"] == "unmitigated"}
        delta = []
        for r in reports:
            if r["stage"] == "unmitigated":
                lines.append(f"target {r['target']} {r['kind']} unmitigated: "
                             f"SIR {r['sir_db']:.2f} dB")
            else:
                before = base.get((r["target"], r["kind"]))
                d = r["sir_db"] - before if before is not None else float("nan")
                delta.append({"target": r["target"], "kind": r["kind"],
                              "stage": r["stage"], "delta_sir_db": d})
                lines.append(f"target {r['target']} {r['kind']} {r['stage']}: "
                             f"SIR {r['sir_db']:.2f} dB (delta {d:+.2f} dB)")
        summary["delta_sir"] = delta

    (run_dir / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    print("\n".join(lines))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="radaranc",
                     description="FMCW interference simulation and mitigation")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="synthesize a scenario into a .ranc capture")
    sim.add_argument("--scenario", required=True, help="scenario YAML file")
    sim.add_argument("--out", required=True, help="output run directory")
    sim.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    sim.set_defaults(func=cmd_simulate)

    mit = sub.add_parser("mitigate", help="run the canceller over a capture")
    mit.add_argument("capture", help=".ranc capture file")
    mit.add_argument("--out", required=True, help="output run directory")
    mit.add_argument("--scenario", default=None,
                     help="scenario for truth cells (default: manifest next to capture)")
    mit.add_argument("--gamma", type=float, default=100.0, help="step-size divisor")
    mit.add_argument("--sweep-gamma", type=_gamma_list, default=None,
                     metavar="G1,G2,...", help="run several step sizes")
    mit.add_argument("--filter-len", type=int, default=8, help="LMS filter length")
    mit.add_argument("--threshold", default="auto",
                     help="'auto' or gate level in dB of total reference power")
    mit.add_argument("--window", choices=("rect", "hann"), default="rect")
    mit.set_defaults(func=cmd_mitigate)

    ana = sub.add_parser("analyze", help="summarize a run directory")
    ana.add_argument("run_dir", help="directory holding manifests and reports")
    ana.set_defaults(func=cmd_analyze)
    return parser


def _gamma_list(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad gamma list {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty gamma list")
    return values


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"radaranc: error: {exc}", file=sys.stderr)
        return exc.code
    except (CaptureFormatError, ValueError, OSError) as exc:
        print(f"radaranc: error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
