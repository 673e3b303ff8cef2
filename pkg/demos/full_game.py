"""
Closed loop on a synthetic game
===============================

Generate a seeded game (clock text, detection records, roster, truth
log), push the streams through the whole pipeline, and compare against
the truth the generator wrote down.
"""

from dataclasses import replace

from playlog import (
    AssemblyConfig,
    SynthConfig,
    assemble_number,
    emit_game_log,
    generate_game,
    load_detections,
    parse_clock_stream,
    segment_plays,
    suppress_digits,
    synchronize,
)

game = generate_game(SynthConfig(seed=42, quarters=2, plays_per_quarter=3, frames_per_second=5))
print(f"{game.home_team} vs {game.away_team}")
print(f"{len(game.clock_lines)} clock lines, {len(game.detection_lines)} detection records")

windows = segment_plays(parse_clock_stream(game.clock_lines).readings)
print(f"{len(windows)} plays recovered")

assembly = AssemblyConfig()
records = {
    frame: [
        replace(d, number=assemble_number(suppress_digits(d.digits, assembly), assembly))
        for d in ds
    ]
    for frame, ds in load_detections(game.detection_lines).by_frame.items()
}

entries = synchronize(
    windows, records, game.roster,
    home_team=game.home_team, away_team=game.away_team,
)

print()
print(emit_game_log(entries, "delimited"), end="")
print()
print("matches truth log:", entries == list(game.truth))
