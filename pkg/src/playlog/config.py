"""Flat key-value run configuration.

Lines are ``key = value``; '#' starts a comment.  Every pipeline
threshold has a key here with its standard default, so a config file only
needs to name what it changes.  Roster paths are resolved relative to the
config file.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping

from .clock import SegmenterConfig
from .gamelog import GameConfig, load_roster
from .jersey import AssemblyConfig
from .teamcolor import DOMINANCE_MARGIN, STRIP_HEIGHT_FRACTION, STRIP_WIDTH_FRACTION, TeamColorProfile


class ConfigError(ValueError):
    """The run configuration file is malformed or inconsistent."""


DEFAULTS: Mapping[str, str] = {
    "home_team": "Home",
    "away_team": "Away",
    "home_roster": "",
    "away_roster": "",
    "iou_suppress_threshold": "0.55",
    "confidence_threshold": "0.97",
    "max_digits": "2",
    "play_clock_reset_jump": "5",
    "game_clock_gap": "40",
    "quarter_start": "900",
    "quarter_rearm_below": "120",
    "min_play_frames": "2",
    "focal_gamma": "2",
    "min_appearances": "1",
    "strip_height_fraction": str(STRIP_HEIGHT_FRACTION),
    "strip_width_fraction": str(STRIP_WIDTH_FRACTION),
    "dominance_margin": str(DOMINANCE_MARGIN),
    "home_color_mode": "dominant-channel",
    "home_color_channel": "red",
    "away_color_mode": "no-dominant",
    "away_color_channel": "",
}


def parse_config_text(text: str) -> dict[str, str]:
    """Key-value lines to a dict over the defaults; unknown keys fail."""
    values = dict(DEFAULTS)
    for line_number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped == "" or stripped.startswith("#"):
            continue
        key, sep, value = stripped.partition("=")
        if sep == "":
            raise ConfigError(f"config line {line_number}: expected 'key = value', got {raw!r}")
        key = key.strip()
        if key not in DEFAULTS:
            raise ConfigError(f"config line {line_number}: unknown key {key!r}")
        values[key] = value.strip()
    return values


def _int_value(values: Mapping[str, str], key: str) -> int:
    try:
        return int(values[key])
    except ValueError:
        raise ConfigError(f"config key {key} must be an integer (got {values[key]!r})") from None


def _float_value(values: Mapping[str, str], key: str) -> float:
    try:
        return float(values[key])
    except ValueError:
        raise ConfigError(f"config key {key} must be a number (got {values[key]!r})") from None


def _profile(values: Mapping[str, str], label: str) -> TeamColorProfile:
    mode = values[f"{label}_color_mode"]
    channel = values[f"{label}_color_channel"] or None
    if mode == "no-dominant":
        channel = None
    return TeamColorProfile(
        label=label,
        mode=mode,
        channel=channel,
        dominance_margin=_float_value(values, "dominance_margin"),
    )


def build_game_config(values: Mapping[str, str], base_dir: Path | None = None) -> GameConfig:
    """Typed GameConfig from parsed key-value pairs.

    Roster keys, when set, are file paths resolved against base_dir; when
    empty, the roster is empty (every number reports as unrostered).
    """
    base = base_dir or Path(".")
    rosters = {}
    for side in ("home", "away"):
        path_text = values[f"{side}_roster"]
        if path_text:
            path = Path(path_text)
            if not path.is_absolute():
                path = base / path
            try:
                lines = path.read_text(encoding="utf-8").splitlines()
            except OSError as exc:
                raise ConfigError(f"cannot read {side} roster {path}: {exc}") from None
            rosters[side] = load_roster(lines, team_name=values[f"{side}_team"])
        else:
            rosters[side] = load_roster([], team_name=values[f"{side}_team"])
    home_profile, away_profile = build_profiles(values)
    try:
        return GameConfig(
            home_team=values["home_team"],
            away_team=values["away_team"],
            home_roster=rosters["home"],
            away_roster=rosters["away"],
            home_profile=home_profile,
            away_profile=away_profile,
            segmenter=build_segmenter(values),
            assembly=build_assembly(values),
            strip_height_fraction=_float_value(values, "strip_height_fraction"),
            strip_width_fraction=_float_value(values, "strip_width_fraction"),
            focal_gamma=_float_value(values, "focal_gamma"),
            min_appearances=_int_value(values, "min_appearances"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_values(path: str | Path | None) -> tuple[dict[str, str], Path]:
    """Raw key-value view of a config file (or pure defaults) plus its base dir."""
    if path is None:
        return dict(DEFAULTS), Path(".")
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc}") from None
    return parse_config_text(text), p.parent


def build_segmenter(values: Mapping[str, str]) -> SegmenterConfig:
    try:
        return SegmenterConfig(
            play_clock_reset_jump=_int_value(values, "play_clock_reset_jump"),
            game_clock_gap=_int_value(values, "game_clock_gap"),
            quarter_start=_int_value(values, "quarter_start"),
            quarter_rearm_below=_int_value(values, "quarter_rearm_below"),
            min_play_frames=_int_value(values, "min_play_frames"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def build_assembly(values: Mapping[str, str]) -> AssemblyConfig:
    try:
        return AssemblyConfig(
            iou_suppress_threshold=_float_value(values, "iou_suppress_threshold"),
            confidence_threshold=_float_value(values, "confidence_threshold"),
            max_digits=_int_value(values, "max_digits"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def build_profiles(values: Mapping[str, str]) -> tuple[TeamColorProfile, TeamColorProfile]:
    try:
        return _profile(values, "home"), _profile(values, "away")
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path: str | Path | None) -> GameConfig:
    """Load a config file, or the all-defaults config when path is None."""
    if path is None:
        return build_game_config(dict(DEFAULTS))
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc}") from None
    return build_game_config(parse_config_text(text), base_dir=p.parent)


def format_config(values: Mapping[str, str]) -> str:
    """Write key-value pairs back out in a stable order."""
    merged = dict(DEFAULTS)
    merged.update(values)
    unknown = set(values) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return "".join(f"{key} = {merged[key]}\n" for key in DEFAULTS)
