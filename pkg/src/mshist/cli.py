"""Batch front end: ``mshist INPUT... [-o OUTPUT] [options]``."""

from __future__ import annotations

import argparse
import csv
import os
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import io
from .core import ToneParams, validate_params
from .metrics import CSV_FIELDS, quality_report
from .tonemap import MsHist, extract_luminance, restore_color


@dataclass
class RunConfig:
    inputs: list[Path]
    output: Path | None = None
    bins: int = 5
    epsilon: float = 0.1
    scales: int | str = "auto"
    sat: float = 0.6
    metrics: Path | None = None
    sweep_bins: list[int] | None = None
    sweep_eps: list[float] | None = None
    dump_scales: Path | None = None
    threads: int | str = 1

    @property
    def params(self) -> ToneParams:
        return ToneParams(bins=self.bins, epsilon=self.epsilon, scales=self.scales, sat=self.sat)

    @property
    def workers(self) -> int:
        if self.threads == "auto":
            return os.cpu_count() or 1
        return int(self.threads)

    @property
    def sweeping(self) -> bool:
        return bool(self.sweep_bins or self.sweep_eps)


def _format_eps(v: float) -> str:
    return f"{v:g}"


def sweep_name(stem: str, bins: int, eps: float, ext: str = ".png") -> str:
    return f"{stem}_n{bins}_eps{_format_eps(eps)}{ext}"


def _output_path(cfg: RunConfig, src: Path) -> Path:
    if cfg.output is None:
        return src.with_name(f"{src.stem}_mshist.png")
    if len(cfg.inputs) > 1 or cfg.sweeping or cfg.output.is_dir():
        return cfg.output / f"{src.stem}.png"
    return cfg.output


def _append_metrics(path: Path, rows: list[dict]) -> None:
    new = not path.exists() or path.stat().st_size == 0
    with path.open("a", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        if new:
            writer.writeheader()
        writer.writerows(rows)


def _render(img, params: ToneParams, workers: int, dump: Path | None, stem: str):
    L = extract_luminance(img)
    engine = MsHist(L, params)
    if dump is not None:
        dump.mkdir(parents=True, exist_ok=True)
        for i in range(len(engine.plan)):
            tone = engine.scale_tone(i, workers)
            score = engine.scale_score(i, workers) * 255.0
            io.save(dump / f"{stem}_scale{i + 1}_tone.png", tone)
            io.save(dump / f"{stem}_scale{i + 1}_score.png", score)
    out = engine.render(workers)
    return restore_color(img, L, out, engine.params.sat, engine.params.log_floor)


def process_file(cfg: RunConfig, src: Path) -> list[dict]:
    """Tone-map one input and write every requested artifact. Returns metric rows."""
    img = io.load(src)
    base = cfg.params
    if cfg.sweeping:
        grid = [(n, e) for n in (cfg.sweep_bins or [cfg.bins]) for e in (cfg.sweep_eps or [cfg.epsilon])]
        outdir = cfg.output if cfg.output is not None else src.parent
        outdir.mkdir(parents=True, exist_ok=True)
        jobs = [(replace(base, bins=n, epsilon=e), outdir / sweep_name(src.stem, n, e)) for n, e in grid]
    else:
        dst = _output_path(cfg, src)
        dst.parent.mkdir(parents=True, exist_ok=True)
        jobs = [(base, dst)]

    rows = []
    for k, (params, dst) in enumerate(jobs):
        params = validate_params(params, img.width, img.height)
        dump = cfg.dump_scales if k == 0 else None
        rgb = _render(img, params, cfg.workers, dump, src.stem)
        data = io.write_display(rgb, io.ImageFileKind.PPM if dst.suffix.lower() == ".ppm" else io.ImageFileKind.PNG)
        dst.write_bytes(data)
        if cfg.metrics is not None:
            shown = io.to_bytes(rgb).astype(np.float64)
            rows.append(quality_report(shown, dst.name).csv_row())
    return rows


def run(cfg: RunConfig) -> int:
    failed = False
    for src in cfg.inputs:
        try:
            rows = process_file(cfg, Path(src))
        except Exception as exc:  # one bad file must not stop the batch
            print(f"mshist: {src}: {exc}", file=sys.stderr)
            failed = True
            continue
        if rows:
            _append_metrics(cfg.metrics, rows)
    return 1 if failed else 0


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v]


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v]


def _scales(text: str):
    return text if text == "auto" else int(text)


def _threads(text: str):
    if text == "auto":
        return text
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("threads must be >= 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mshist",
        description="Tone-map Radiance .hdr / .pfm radiance maps with multi-scale histogram synthesis.",
    )
    p.add_argument("inputs", nargs="+", type=Path, help="radiance maps (.hdr or .pfm)")
    p.add_argument("-o", "--output", type=Path,
                   help="output file, or directory when several inputs or a sweep are given")
    p.add_argument("--bins", type=int, default=5, help="histogram bins (default 5)")
    p.add_argument("--epsilon", type=float, default=0.1, help="variance regularizer (default 0.1)")
    p.add_argument("--sat", type=float, default=0.6, help="colour saturation exponent (default 0.6)")
    p.add_argument("--scales", type=_scales, default="auto",
                   help="pyramid levels, or 'auto' to halve down to 64 pixels (default)")
    p.add_argument("--metrics", type=Path, help="append brightness/sharpness/contrast rows to this CSV")
    p.add_argument("--sweep-bins", type=_int_list, help="comma-separated bin counts to sweep")
    p.add_argument("--sweep-eps", type=_float_list, help="comma-separated epsilon values to sweep")
    p.add_argument("--dump-scales", type=Path, help="write per-scale tone and score images here")
    p.add_argument("--threads", type=_threads, default=1, help="worker threads, or 'auto'")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        inputs=args.inputs, output=args.output, bins=args.bins, epsilon=args.epsilon,
        scales=args.scales, sat=args.sat, metrics=args.metrics, sweep_bins=args.sweep_bins,
        sweep_eps=args.sweep_eps, dump_scales=args.dump_scales, threads=args.threads,
    )
    try:
        for n in cfg.sweep_bins or [cfg.bins]:
            for e in cfg.sweep_eps or [cfg.epsilon]:
                validate_params(replace(cfg.params, bins=n, epsilon=e, scales="auto"), 1, 1)
        if cfg.scales != "auto" and cfg.scales < 1:
            raise ValueError("scales must be >= 1")
    except ValueError as exc:
        parser.error(str(exc))
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
