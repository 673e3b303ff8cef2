"""Command line front end.

Subcommands cover each pipeline stage plus a chained run:

    parse-clock    clock text -> play windows
    assemble       detection records -> records with jersey numbers
    classify-team  records + crop images -> records with team labels
    log            windows + records -> game log
    evaluate       records vs ground truth -> metrics report
    preprocess     image -> OCR-ready image
    augment        image -> blurred and scaled copies
    synth          seeded synthetic game files
    pipeline       parse-clock + assemble + log in one call

Exit codes: 0 success, 1 input error, 2 internal error.  Diagnostics for
skipped lines go to stderr; outputs go to --output or stdout.
"""

from __future__ import annotations

import argparse
import sys
import tempfile
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from .clock import (
    format_play_windows,
    parse_clock_stream,
    parse_play_windows,
    segment_plays,
)
from .config import (
    ConfigError,
    build_assembly,
    build_game_config,
    build_profiles,
    build_segmenter,
    format_config,
    load_values,
)
from .gamelog import (
    emit_game_log,
    load_detections,
    parse_detection,
    roster_lines,
    serialize_detection,
    synchronize,
)
from .imageops import (
    binary_threshold,
    gaussian_blur,
    invert,
    pad_to_square,
    read_image,
    scale,
    to_grayscale,
    write_image,
)
from .jersey import assemble_number, suppress_digits
from .matching import match_detections
from .metrics import confusion_matrix, evaluate_detections
from .synth import SynthConfig, generate_game
from .teamcolor import channel_histogram, classify_team, extract_strip


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; the documented contract is exit 1
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _read_lines(path: str) -> list[str]:
    return Path(path).read_text(encoding="utf-8").splitlines()


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _report_diagnostics(diagnostics: Sequence[str]) -> None:
    for d in diagnostics:
        print(d, file=sys.stderr)
    if diagnostics:
        print(f"{len(diagnostics)} malformed line(s) skipped", file=sys.stderr)


def _values_with_overrides(args: argparse.Namespace, overrides: dict[str, str]) -> tuple[dict, Path]:
    values, base_dir = load_values(getattr(args, "config", None))
    for key, attr in overrides.items():
        v = getattr(args, attr, None)
        if v is not None:
            values[key] = str(v)
    return values, base_dir


# stage functions are shared between the per-stage subcommands and
# `pipeline`, so a chained run is byte-identical to running the stages
# by hand with intermediate files

def _stage_parse_clock(input_path: str, values: dict, strict: bool) -> tuple[str, tuple[str, ...]]:
    result = parse_clock_stream(_read_lines(input_path), strict=strict)
    windows = segment_plays(result.readings, build_segmenter(values))
    return format_play_windows(windows), result.diagnostics


def _stage_assemble(input_path: str, values: dict, strict: bool) -> tuple[str, tuple[str, ...]]:
    cfg = build_assembly(values)
    out: list[str] = []
    diagnostics: list[str] = []
    for line_number, raw in enumerate(_read_lines(input_path), start=1):
        stripped = raw.strip()
        if stripped == "" or stripped.startswith("#"):
            continue
        try:
            d = parse_detection(stripped, line_number)
        except ValueError as exc:
            if strict:
                raise
            diagnostics.append(str(exc))
            continue
        number = assemble_number(suppress_digits(d.digits, cfg), cfg)
        out.append(serialize_detection(replace(d, number=number)))
    return "".join(line + "\n" for line in out), tuple(diagnostics)


def _stage_classify_team(
    input_path: str, crops_dir: str, values: dict, strict: bool
) -> tuple[str, tuple[str, ...]]:
    home_profile, away_profile = build_profiles(values)
    try:
        h_frac = float(values["strip_height_fraction"])
        w_frac = float(values["strip_width_fraction"])
    except ValueError:
        raise ConfigError("strip fractions must be numbers") from None
    crops = Path(crops_dir)
    out: list[str] = []
    diagnostics: list[str] = []
    frame_counters: dict[int, int] = {}
    for line_number, raw in enumerate(_read_lines(input_path), start=1):
        stripped = raw.strip()
        if stripped == "" or stripped.startswith("#"):
            continue
        try:
            d = parse_detection(stripped, line_number)
        except ValueError as exc:
            if strict:
                raise
            diagnostics.append(str(exc))
            continue
        index = frame_counters.get(d.frame_index, 0)
        frame_counters[d.frame_index] = index + 1
        crop_path = crops / f"{d.frame_index}_{index}.ppm"
        if crop_path.exists():
            strip = extract_strip(read_image(crop_path), h_frac, w_frac)
            label = classify_team(channel_histogram(strip), home_profile, away_profile)
            d = replace(d, team=label)
        else:
            diagnostics.append(f"record line {line_number}: no crop {crop_path.name}, team kept")
        out.append(serialize_detection(d))
    return "".join(line + "\n" for line in out), tuple(diagnostics)


def _stage_log(
    windows_path: str, records_path: str, values: dict, base_dir: Path,
    side: str, fmt: str, strict: bool,
) -> tuple[str, tuple[str, ...]]:
    game_config = build_game_config(values, base_dir=base_dir)
    windows = parse_play_windows(Path(windows_path).read_text(encoding="utf-8"))
    loaded = load_detections(_read_lines(records_path), strict=strict)
    roster = game_config.home_roster if side == "home" else game_config.away_roster
    entries = synchronize(
        windows,
        loaded.by_frame,
        roster,
        home_team=game_config.home_team,
        away_team=game_config.away_team,
        side=side,
        min_appearances=game_config.min_appearances,
    )
    return emit_game_log(entries, fmt), loaded.diagnostics


def _matrix_rows(matrix, fmt: str) -> str:
    return "".join(" ".join(fmt % v for v in row) + "\n" for row in matrix)


def _stage_evaluate(
    preds_path: str, truth_path: str, match_iou: float, include_confusion: bool, strict: bool
) -> tuple[str, tuple[str, ...]]:
    preds_loaded = load_detections(_read_lines(preds_path), strict=strict)
    truth_loaded = load_detections(_read_lines(truth_path), strict=strict)
    preds_map = {f: [(d.box, d.score) for d in ds] for f, ds in preds_loaded.by_frame.items()}
    gts_map = {f: [d.box for d in ds] for f, ds in truth_loaded.by_frame.items()}
    text = evaluate_detections(preds_map, gts_map).to_text()
    diagnostics = list(preds_loaded.diagnostics) + list(truth_loaded.diagnostics)
    if include_confusion:
        pairs: list[tuple[int, int]] = []
        for f in sorted(gts_map):
            matches = match_detections(preds_map[f], gts_map[f], match_iou)
            for i, g in enumerate(matches):
                if g is None:
                    continue
                predicted = preds_loaded.by_frame[f][i].number
                true = truth_loaded.by_frame[f][g].number
                if predicted is None or true is None:
                    continue
                if len(str(predicted)) != len(str(true)):
                    diagnostics.append(
                        f"frame {f}: digit counts differ ({true} vs {predicted}), pair skipped"
                    )
                    continue
                pairs.extend((int(t), int(p)) for t, p in zip(str(true), str(predicted)))
        cm = confusion_matrix(pairs)
        text += "confusion_counts\n" + _matrix_rows(cm.counts, "%d")
        text += "confusion_normalized\n" + _matrix_rows(cm.normalized, "%.4f")
    return text, tuple(diagnostics)


def _cmd_parse_clock(args: argparse.Namespace) -> int:
    values, _ = _values_with_overrides(args, {
        "play_clock_reset_jump": "play_clock_jump",
        "game_clock_gap": "game_clock_gap",
        "quarter_start": "quarter_start",
        "quarter_rearm_below": "quarter_rearm_below",
        "min_play_frames": "min_play_frames",
    })
    text, diagnostics = _stage_parse_clock(args.input, values, args.strict)
    _report_diagnostics(diagnostics)
    _emit(text, args.output)
    return 0


def _cmd_assemble(args: argparse.Namespace) -> int:
    values, _ = _values_with_overrides(args, {
        "iou_suppress_threshold": "iou_threshold",
        "confidence_threshold": "confidence_threshold",
        "max_digits": "max_digits",
    })
    text, diagnostics = _stage_assemble(args.input, values, args.strict)
    _report_diagnostics(diagnostics)
    _emit(text, args.output)
    return 0


def _cmd_classify_team(args: argparse.Namespace) -> int:
    values, _ = _values_with_overrides(args, {"dominance_margin": "margin"})
    text, diagnostics = _stage_classify_team(args.input, args.crops, values, args.strict)
    _report_diagnostics(diagnostics)
    _emit(text, args.output)
    return 0


def _cmd_log(args: argparse.Namespace) -> int:
    values, base_dir = _values_with_overrides(args, {"min_appearances": "min_appearances"})
    text, diagnostics = _stage_log(
        args.windows, args.records, values, base_dir, args.side, args.format, args.strict
    )
    _report_diagnostics(diagnostics)
    _emit(text, args.output)
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    text, diagnostics = _stage_evaluate(
        args.preds, args.truth, args.match_iou, args.confusion, args.strict
    )
    _report_diagnostics(diagnostics)
    _emit(text, args.output)
    return 0


def _cmd_preprocess(args: argparse.Namespace) -> int:
    image = read_image(args.input)
    ocr_ready = invert(binary_threshold(to_grayscale(image), args.threshold))
    if args.pad:
        ocr_ready = pad_to_square(ocr_ready)
    write_image(ocr_ready, args.output)
    return 0


def _cmd_augment(args: argparse.Namespace) -> int:
    image = read_image(args.input)
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.input).stem
    suffix = ".pgm" if image.channels == 1 else ".ppm"
    written = []
    blur_path = out_dir / f"{stem}_blur{suffix}"
    write_image(gaussian_blur(image, args.sigma), blur_path)
    written.append(blur_path)
    try:
        factors = [float(f) for f in args.factors.split(",") if f.strip() != ""]
    except ValueError:
        raise _UsageError(f"--factors must be comma-separated numbers (got {args.factors!r})") from None
    for factor in factors:
        path = out_dir / f"{stem}_x{factor:g}{suffix}"
        write_image(scale(image, factor), path)
        written.append(path)
    for path in written:
        print(f"wrote {path}", file=sys.stderr)
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    cfg = SynthConfig(
        seed=args.seed,
        quarters=args.quarters,
        plays_per_quarter=args.plays_per_quarter,
        frames_per_second=args.fps,
        players_per_play=(args.players_min, args.players_max),
        ocr_corruption_rate=args.ocr_corruption,
        digit_error_rate=args.digit_error,
        detection_drop_rate=args.detection_drop,
    )
    game = generate_game(cfg)
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    files = {
        "clock.txt": "".join(line + "\n" for line in game.clock_lines),
        "detections.txt": "".join(line + "\n" for line in game.detection_lines),
        "roster_home.txt": roster_lines(game.roster),
        "truth_log.csv": emit_game_log(game.truth, "delimited"),
        "truth_log.jsonl": emit_game_log(game.truth, "structured"),
        "game.cfg": format_config(
            {
                "home_team": game.home_team,
                "away_team": game.away_team,
                "home_roster": "roster_home.txt",
            }
        ),
    }
    for name, text in files.items():
        (out_dir / name).write_text(text, encoding="utf-8")
    print(f"wrote {len(files)} files to {out_dir}", file=sys.stderr)
    return 0


def _cmd_pipeline(args: argparse.Namespace) -> int:
    values, base_dir = _values_with_overrides(args, {})
    if args.workdir is not None:
        workdir = Path(args.workdir)
        workdir.mkdir(parents=True, exist_ok=True)
        cleanup = None
    else:
        cleanup = tempfile.TemporaryDirectory(prefix="playlog-")
        workdir = Path(cleanup.name)
    try:
        windows_path = workdir / "windows.txt"
        assembled_path = workdir / "records_assembled.txt"

        windows_text, diagnostics = _stage_parse_clock(args.clock, values, args.strict)
        _report_diagnostics(diagnostics)
        windows_path.write_text(windows_text, encoding="utf-8")

        assembled_text, diagnostics = _stage_assemble(args.records, values, args.strict)
        _report_diagnostics(diagnostics)
        assembled_path.write_text(assembled_text, encoding="utf-8")

        log_text, diagnostics = _stage_log(
            str(windows_path), str(assembled_path), values, base_dir,
            args.side, args.format, args.strict,
        )
        _report_diagnostics(diagnostics)
        _emit(log_text, args.output)
    finally:
        if cleanup is not None:
            cleanup.cleanup()
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="playlog", description="Broadcast football game-log pipeline.")
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)

    def common(p: argparse.ArgumentParser, config: bool = True) -> None:
        if config:
            p.add_argument("--config", help="run configuration file (key = value lines)")
        p.add_argument("--output", help="output file (default: stdout)")
        p.add_argument("--strict", action="store_true", help="malformed input lines are fatal")

    p = sub.add_parser("parse-clock", help="clock text to play windows")
    p.add_argument("--input", required=True, help="clock text file: 'frame mm:ss play' per line")
    common(p)
    p.add_argument("--play-clock-jump", type=int, dest="play_clock_jump", help="play-clock reset jump, seconds")
    p.add_argument("--game-clock-gap", type=int, dest="game_clock_gap", help="game-clock gap trigger, seconds")
    p.add_argument("--quarter-start", type=int, dest="quarter_start", help="quarter length, seconds")
    p.add_argument("--quarter-rearm-below", type=int, dest="quarter_rearm_below", help="hysteresis re-arm level, seconds")
    p.add_argument("--min-play-frames", type=int, dest="min_play_frames", help="drop windows shorter than this many readings")
    p.set_defaults(func=_cmd_parse_clock)

    p = sub.add_parser("assemble", help="resolve jersey numbers on detection records")
    p.add_argument("--input", required=True, help="detection records file")
    common(p)
    p.add_argument("--iou-threshold", type=float, dest="iou_threshold", help="digit suppression IoU")
    p.add_argument("--confidence-threshold", type=float, dest="confidence_threshold", help="digit confidence gate")
    p.add_argument("--max-digits", type=int, dest="max_digits", help="digits kept per number")
    p.set_defaults(func=_cmd_assemble)

    p = sub.add_parser("classify-team", help="label records home/away from crop colors")
    p.add_argument("--input", required=True, help="detection records file")
    p.add_argument("--crops", required=True, help="directory of <frame>_<i>.ppm player crops")
    common(p)
    p.add_argument("--margin", type=float, help="channel dominance margin")
    p.set_defaults(func=_cmd_classify_team)

    p = sub.add_parser("log", help="build the game log from windows + records")
    p.add_argument("--windows", required=True, help="play windows file (parse-clock output)")
    p.add_argument("--records", required=True, help="detection records with numbers and teams")
    common(p)
    p.add_argument("--format", choices=("delimited", "structured"), default="delimited")
    p.add_argument("--side", choices=("home", "away"), default="home", help="which team to aggregate")
    p.add_argument("--min-appearances", type=int, dest="min_appearances", help="frames a number must appear in")
    p.set_defaults(func=_cmd_log)

    p = sub.add_parser("evaluate", help="score detection records against ground truth")
    p.add_argument("--preds", required=True, help="predicted detection records")
    p.add_argument("--truth", required=True, help="ground-truth detection records")
    common(p, config=False)
    p.add_argument("--match-iou", type=float, dest="match_iou", default=0.50, help="IoU for digit confusion pairing")
    p.add_argument("--confusion", action="store_true", help="append the digit confusion matrix")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("preprocess", help="grayscale + threshold + invert for OCR")
    p.add_argument("--input", required=True, help="PPM/PGM image")
    p.add_argument("--output", required=True, help="output PGM path")
    p.add_argument("--threshold", type=int, default=128, help="binarization threshold 0..255")
    p.add_argument("--pad", action="store_true", help="zero-pad to a square")
    p.set_defaults(func=_cmd_preprocess)

    p = sub.add_parser("augment", help="blurred and scaled copies of an image")
    p.add_argument("--input", required=True, help="PPM/PGM image")
    p.add_argument("--output-dir", required=True, dest="output_dir", help="directory for the copies")
    p.add_argument("--sigma", type=float, default=1.0, help="Gaussian blur sigma")
    p.add_argument("--factors", default="0.5,2.0", help="comma-separated scale factors")
    p.set_defaults(func=_cmd_augment)

    p = sub.add_parser("synth", help="generate a seeded synthetic game")
    p.add_argument("--seed", type=int, required=True, help="generator seed (required)")
    p.add_argument("--output", required=True, help="directory for the generated files")
    p.add_argument("--quarters", type=int, default=2)
    p.add_argument("--plays-per-quarter", type=int, dest="plays_per_quarter", default=3)
    p.add_argument("--fps", type=int, default=30, help="frames per game-clock second")
    p.add_argument("--players-min", type=int, dest="players_min", default=6)
    p.add_argument("--players-max", type=int, dest="players_max", default=11)
    p.add_argument("--ocr-corruption", type=float, dest="ocr_corruption", default=0.0)
    p.add_argument("--digit-error", type=float, dest="digit_error", default=0.0)
    p.add_argument("--detection-drop", type=float, dest="detection_drop", default=0.0)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("pipeline", help="parse-clock + assemble + log, chained")
    p.add_argument("--clock", required=True, help="clock text file")
    p.add_argument("--records", required=True, help="detection records file")
    common(p)
    p.add_argument("--format", choices=("delimited", "structured"), default="delimited")
    p.add_argument("--side", choices=("home", "away"), default="home")
    p.add_argument("--workdir", help="keep intermediate files here (default: temp dir)")
    p.set_defaults(func=_cmd_pipeline)

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    """Parse arguments and run one subcommand; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr, end="")
        return 1
    except SystemExit as exc:  # argparse --help
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
