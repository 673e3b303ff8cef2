"""Classify player crops by torso strip color.

Home wears a red-dominant jersey, away wears gray. The classifier looks
at channel means over a centered strip and decides which profile the
crop satisfies; "unknown" when neither or both fit.
"""

from playlog import (
    PixelImage,
    TeamColorProfile,
    channel_histogram,
    classify_team,
    extract_strip,
)

home = TeamColorProfile(label="home", mode="dominant-channel", channel="red")
away = TeamColorProfile(label="away", mode="no-dominant")


def crop(rgb):
    return PixelImage(20, 30, 3, list(rgb) * (20 * 30))


for name, rgb in [("red shirt", (190, 40, 50)), ("gray shirt", (110, 108, 112)), ("green shirt", (40, 190, 50))]:
    strip = extract_strip(crop(rgb), 0.2, 0.6)
    hist = channel_histogram(strip)
    label = classify_team(hist, home, away)
    print(f"{name}: means={tuple(round(m, 1) for m in hist.means)} -> {label}")
