# Scoreboard clock text to play windows. The stream below covers two
# plays separated by a broadcast cut (unreadable clocks), with one
# corrupted OCR line that gets skipped with a diagnostic.

from playlog import format_play_windows, parse_clock_stream, segment_plays

lines = """\
100 15:00 40
150 14:58 38
200 14:56 36
250 14:54 34
260 0 0
270 0 0
300 13:53 40
310 9?:?3 39
350 13:40 27
400 13:24 11
""".splitlines()

result = parse_clock_stream(lines)
for diagnostic in result.diagnostics:
    print("skipped:", diagnostic)

windows = segment_plays(result.readings)
print()
print("play quarter frames          clock")
for w in windows:
    print(f"{w.play_number:4d} {w.quarter:7d} {w.frame_start:5d}..{w.frame_end:<5d}", end="   ")
    print(f"{w.start_time}s -> {w.end_time}s")

print()
print(format_play_windows(windows), end="")
