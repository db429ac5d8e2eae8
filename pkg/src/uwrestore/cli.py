"""Command-line surface for the restoration toolkit.

Subcommands: search, restore, degrade, evaluate, export-pairs, rf.
JSON reports carry "schema_version": 1 and contain no timestamps, so a
fixed seed and fixed inputs reproduce them byte for byte.  Exit codes:
0 success, 1 partial failure (some frames failed), 2 invalid usage.
"""

from __future__ import annotations

import argparse
import glob
import json
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict

import numpy as np

from .clahe import ClaheConfig
from .config import PipelineConfig, build_config, load_config_file
from .degrade import DegradeParams, degrade
from .fitness import fitness_score, restoration_fitness
from .image import ImageBuf, load_image, resize, save_image
from .quality import entropy, mean_abs_laplacian, patch_underwater_map, underwater_index
from .receptive import LayerSpec, map_size, preset_chain, rf_box, rf_chain
from .restore import FilterParams, restore
from .swarm import SwarmConfig, search

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_USAGE = 2


def _json_dump(obj, path: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _expand_frames(patterns: list[str]) -> list[str]:
    """Globs expand sorted; literal paths pass through in given order."""
    out: list[str] = []
    for pat in patterns:
        if any(ch in pat for ch in "*?["):
            out.extend(sorted(glob.glob(pat)))
        else:
            out.append(pat)
    return out


def _load_frames(paths: list[str]) -> tuple[list[tuple[str, ImageBuf]], int]:
    """Load what can be loaded; count failures instead of aborting."""
    loaded: list[tuple[str, ImageBuf]] = []
    failures = 0
    for path in paths:
        try:
            loaded.append((path, load_image(path)))
        except (OSError, ValueError) as exc:
            log.error("cannot read %s: %s", path, exc)
            failures += 1
    return loaded, failures


def _params_from(args, cfg: PipelineConfig) -> FilterParams:
    """Filter parameters: --params file wins, then flags, then config."""
    k = cfg.filter_params.k
    noise_ratio = cfg.filter_params.noise_ratio
    if args.params:
        with open(args.params, encoding="utf-8") as fh:
            blob = json.load(fh)
        body = blob.get("params", blob)
        k = float(body["k"])
        noise_ratio = float(body["noise_ratio"])
    if getattr(args, "k", None) is not None:
        k = args.k
    if getattr(args, "noise_ratio", None) is not None:
        noise_ratio = args.noise_ratio
    return FilterParams(k=k, noise_ratio=noise_ratio)


def _clahe_from(args, cfg: PipelineConfig) -> ClaheConfig:
    if getattr(args, "no_clahe", False):
        return ClaheConfig(
            tiles_x=cfg.clahe.tiles_x,
            tiles_y=cfg.clahe.tiles_y,
            clip_limit=cfg.clahe.clip_limit,
            enabled=False,
        )
    return cfg.clahe


def _pipeline_config(args) -> PipelineConfig:
    sections = load_config_file(args.config) if args.config else {}
    overrides: dict[str, dict] = {}
    if getattr(args, "seed", None) is not None:
        overrides["swarm"] = {"seed": args.seed}
    return build_config(sections, overrides)


def _out_name(path: str, out_dir: str, taken: set[str]) -> str:
    """Basename in out_dir; collisions get _2, _3, ... with a warning."""
    base = os.path.basename(path)
    stem, ext = os.path.splitext(base)
    if not ext:
        ext = ".png"
    name = stem + ext
    serial = 1
    while name in taken:
        serial += 1
        name = f"{stem}_{serial}{ext}"
    if serial > 1:
        log.warning("output name collision for %s; writing %s", path, name)
    taken.add(name)
    return os.path.join(out_dir, name)


def _map_frames(jobs: int, fn, items):
    """Frame-level parallelism; results come back in input order."""
    if jobs <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def cmd_search(args) -> int:
    cfg = _pipeline_config(args)
    paths = _expand_frames(args.frames)
    if args.ref:
        paths = [args.ref]
    frames, failures = _load_frames(paths)
    if not frames:
        log.error("no readable frame to search on")
        return EXIT_PARTIAL
    name, frame = frames[0]
    objective = restoration_fitness(frame, cfg.swarm.bounds, cfg.weights)
    result = search(objective, cfg.swarm)
    if result.fitness == 0.0:
        log.warning("fitness landscape is flat (constant frame?); parameters are arbitrary")
    report = {
        "schema_version": SCHEMA_VERSION,
        "frame": name,
        "params": {"k": result.params.k, "noise_ratio": result.params.noise_ratio},
        "position": list(result.position),
        "fitness": result.fitness,
        "evaluations": result.evaluations,
        "trace": result.trace,
        "seed": cfg.swarm.seed,
    }
    _json_dump(report, args.out)
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_restore(args) -> int:
    cfg = _pipeline_config(args)
    params = _params_from(args, cfg)
    clahe_cfg = _clahe_from(args, cfg)
    paths = _expand_frames(args.frames)
    frames, failures = _load_frames(paths)
    if not frames:
        log.error("no readable frames")
        return EXIT_PARTIAL
    os.makedirs(args.out, exist_ok=True)

    def work(item):
        _, img = item
        t0 = time.perf_counter()
        out = restore(img, params, clahe_cfg)
        return out, time.perf_counter() - t0

    results = _map_frames(args.jobs, work, frames)
    taken: set[str] = set()
    total = 0.0
    for (path, _), (out, dt) in zip(frames, results):
        dest = _out_name(path, args.out, taken)
        save_image(out, dest)
        total += dt
        print(f"{path}  {dt * 1000.0:8.2f} ms")
    fps = len(frames) / total if total > 0 else float("inf")
    print(f"restored {len(frames)} frame(s) in {total:.3f} s  ({fps:.1f} fps)")
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_degrade(args) -> int:
    paths = _expand_frames(args.frames)
    frames, failures = _load_frames(paths)
    if not frames:
        log.error("no readable frames")
        return EXIT_PARTIAL
    att = tuple(args.attenuation)
    params = DegradeParams(
        k=args.k if args.k is not None else 1.0,
        attenuation=att,
        noise_sigma=args.noise_sigma,
        seed=args.seed if args.seed is not None else 0,
    )
    os.makedirs(args.out, exist_ok=True)
    results = _map_frames(args.jobs, lambda item: degrade(item[1], params), frames)
    taken: set[str] = set()
    for (path, _), out in zip(frames, results):
        save_image(out, _out_name(path, args.out, taken))
    print(f"degraded {len(frames)} frame(s) -> {args.out}")
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_evaluate(args) -> int:
    cfg = _pipeline_config(args)
    paths = _expand_frames(args.frames)
    frames, failures = _load_frames(paths)
    if not frames:
        log.error("no readable frames")
        return EXIT_PARTIAL

    def work(item):
        name, img = item
        rep = underwater_index(img)
        score = fitness_score(img, cfg.weights)
        record = {
            "frame": name,
            "underwater": asdict(rep),
            "fitness": asdict(score),
            "entropy": entropy(img),
            "laplace": mean_abs_laplacian(img),
        }
        if args.patch_grid:
            grid = patch_underwater_map(img, preset_chain(args.patch_chain))
            record["patch_underwater"] = [[float(v) for v in row] for row in grid]
        return record

    records = _map_frames(args.jobs, work, frames)
    header = f"{'frame':<32} {'U':>9} {'offset':>8} {'entropy':>8} {'laplace':>8} {'xi':>10}"
    print(header)
    for rec in records:
        print(
            f"{os.path.basename(rec['frame']):<32} {rec['underwater']['value']:>9.3f} "
            f"{rec['underwater']['offset']:>8.4f} {rec['entropy']:>8.3f} "
            f"{rec['laplace']:>8.4f} {rec['fitness']['value']:>10.6f}"
        )
    _json_dump({"schema_version": SCHEMA_VERSION, "frames": records}, args.out)
    return EXIT_PARTIAL if failures else EXIT_OK


def _center_square(img: ImageBuf, side: int) -> ImageBuf:
    """Center-crop to the largest square, then resize to side x side."""
    h, w = img.height, img.width
    edge = min(h, w)
    y0 = (h - edge) // 2
    x0 = (w - edge) // 2
    crop = ImageBuf(img.data[:, y0 : y0 + edge, x0 : x0 + edge].copy())
    if edge == side:
        return crop
    return resize(crop, side, side)


def cmd_export_pairs(args) -> int:
    cfg = _pipeline_config(args)
    params = _params_from(args, cfg)
    clahe_cfg = _clahe_from(args, cfg)
    paths = _expand_frames(args.frames)
    frames, failures = _load_frames(paths)
    if not frames:
        log.error("no readable frames")
        return EXIT_PARTIAL
    a_dir = os.path.join(args.out, "A")
    b_dir = os.path.join(args.out, "B")
    os.makedirs(a_dir, exist_ok=True)
    os.makedirs(b_dir, exist_ok=True)

    def work(item):
        _, img = item
        original = _center_square(img, args.size)
        restored = restore(original, params, clahe_cfg)
        return original, restored

    results = _map_frames(args.jobs, work, frames)
    taken: set[str] = set()
    names: list[str] = []
    for (path, _), (original, restored) in zip(frames, results):
        dest_a = _out_name(path, a_dir, taken)
        name = os.path.basename(dest_a)
        save_image(original, dest_a)
        save_image(restored, os.path.join(b_dir, name))
        names.append(name)
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "count": len(names),
        "names": names,
        "params": {"k": params.k, "noise_ratio": params.noise_ratio},
        "size": args.size,
        "clahe": {
            "tiles_x": clahe_cfg.tiles_x,
            "tiles_y": clahe_cfg.tiles_y,
            "clip_limit": clahe_cfg.clip_limit,
            "enabled": clahe_cfg.enabled,
        },
    }
    _json_dump(manifest, os.path.join(args.out, "manifest.json"))
    print(f"exported {len(names)} pair(s) -> {args.out}")
    return EXIT_PARTIAL if failures else EXIT_OK


def _parse_chain(text: str) -> tuple[LayerSpec, ...]:
    """Chain spec "k,s,p;k,s,p;..." or "k,s,p*n" for repeats."""
    layers: list[LayerSpec] = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if "*" in part:
            body, _, count = part.partition("*")
            repeat = int(count)
        else:
            body, repeat = part, 1
        nums = [int(v) for v in body.split(",")]
        if len(nums) != 3:
            raise ValueError(f"layer spec needs kernel,stride,padding: {part!r}")
        layers.extend([LayerSpec(*nums)] * repeat)
    if not layers:
        raise ValueError("empty chain spec")
    return tuple(layers)


def cmd_rf(args) -> int:
    chain = preset_chain(args.preset) if args.preset else _parse_chain(args.chain)
    report: dict = {
        "schema_version": SCHEMA_VERSION,
        "chain": [[sp.kernel, sp.stride, sp.padding] for sp in chain],
        "rf_per_layer": rf_chain(chain),
        "rf": rf_chain(chain)[0],
    }
    if args.input_extent:
        sizes = map_size(chain, args.input_extent)
        report["map_sizes"] = sizes
        grid = sizes[-1]
        if args.boxes:
            report["boxes"] = [
                {
                    "cell": [x, y],
                    "x_min": box.x_min,
                    "x_max": box.x_max,
                    "y_min": box.y_min,
                    "y_max": box.y_max,
                    "size": box.size,
                }
                for y in range(grid)
                for x in range(grid)
                for box in [rf_box(chain, (x, y), args.input_extent)]
            ]
    _json_dump(report, args.out)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uwrestore",
        description="Underwater image restoration: filtering, search, metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, frames=True):
        if frames:
            p.add_argument("frames", nargs="*", help="input frames (paths or globs)")
        p.add_argument("--config", help="YAML config file")
        p.add_argument("--params", help="JSON file with filter parameters")
        p.add_argument("--seed", type=int, help="override the search seed")
        p.add_argument("--jobs", type=int, default=1, help="parallel worker count")
        p.add_argument("--out", help="output file or directory")

    p = sub.add_parser("search", help="search filter parameters on a reference frame")
    common(p)
    p.add_argument("--ref", help="explicit reference frame (default: first input)")
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("restore", help="restore frames with given parameters")
    common(p)
    p.add_argument("--k", type=float, help="blur strength override")
    p.add_argument("--noise-ratio", type=float, help="regularization override")
    p.add_argument("--no-clahe", action="store_true", help="skip the equalization stage")
    p.set_defaults(fn=cmd_restore)

    p = sub.add_parser("degrade", help="synthesize degradation on frames")
    common(p)
    p.add_argument("--k", type=float, help="blur strength (default 1.0)")
    p.add_argument(
        "--attenuation",
        type=float,
        nargs=3,
        default=(1.0, 1.0, 1.0),
        metavar=("R", "G", "B"),
        help="per-channel attenuation factors",
    )
    p.add_argument("--noise-sigma", type=float, default=0.0, help="additive noise sigma")
    p.set_defaults(fn=cmd_degrade)

    p = sub.add_parser("evaluate", help="no-reference quality report")
    common(p)
    p.add_argument("--patch-grid", action="store_true", help="include the patch index grid")
    p.add_argument(
        "--patch-chain",
        default="stem+ub",
        help="chain preset for the patch grid (default stem+ub)",
    )
    p.set_defaults(fn=cmd_evaluate)

    p = sub.add_parser("export-pairs", help="write an aligned A/B training dataset")
    common(p)
    p.add_argument("--k", type=float, help="blur strength override")
    p.add_argument("--noise-ratio", type=float, help="regularization override")
    p.add_argument("--no-clahe", action="store_true", help="skip the equalization stage")
    p.add_argument("--size", type=int, default=512, help="output side length (default 512)")
    p.set_defaults(fn=cmd_export_pairs)

    p = sub.add_parser("rf", help="receptive-field geometry of a conv chain")
    common(p, frames=False)
    p.add_argument("--chain", help='layer spec "k,s,p;k,s,p" or "4,2,1*3;4,1,1*2"')
    p.add_argument("--preset", help="named chain: stem, ab, ub, stem+ab, stem+ub")
    p.add_argument("--input-extent", type=int, help="square input size for map sizes")
    p.add_argument("--boxes", action="store_true", help="emit per-cell receptive boxes")
    p.set_defaults(fn=cmd_rf)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "rf" and bool(args.chain) == bool(args.preset):
        parser.error("rf needs exactly one of --chain or --preset")
    try:
        return args.fn(args)
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
