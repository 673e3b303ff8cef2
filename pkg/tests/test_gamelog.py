"""Rosters, record lines, synchronization, log emission."""

import random

import pytest

from playlog import (
    BoundingBox,
    DigitDetection,
    GameConfig,
    GameLogEntry,
    InvariantError,
    PlayWindow,
    PlayerDetection,
    RecordError,
    Roster,
    emit_game_log,
    load_detections,
    load_roster,
    parse_detection,
    parse_game_log,
    resolve_names,
    roster_lines,
    serialize_detection,
    serialize_detections,
    synchronize,
)


class TestRoster:
    def test_basic_lines(self):
        r = load_roster(["3: Calvin Ridley; Bradley Sylve", "10: A Player"], team_name="Alabama")
        assert r.team_name == "Alabama"
        assert r.entries[3] == ("Calvin Ridley", "Bradley Sylve")
        assert r.entries[10] == ("A Player",)

    def test_comments_and_blanks(self):
        r = load_roster(["# squad", "", "5: X"])
        assert list(r.entries) == [5]

    def test_number_repeats_accumulate(self):
        r = load_roster(["7: Offense Guy", "7: Defense Guy"])
        assert r.entries[7] == ("Offense Guy", "Defense Guy")

    def test_exact_duplicate_rejected(self):
        with pytest.raises(RecordError):
            load_roster(["7: Same Guy", "7: Same Guy"])

    @pytest.mark.parametrize("bad", [
        "100: Too High",
        "x: No Number",
        "5 Missing Colon",
        "5: ",
        "5: A;;B",
    ])
    def test_rejects(self, bad):
        with pytest.raises(RecordError):
            load_roster([bad])

    def test_lines_round_trip(self):
        rng = random.Random(55)
        entries = {}
        for number in rng.sample(range(100), 12):
            entries[number] = tuple(f"Player {number}{suffix}" for suffix in ("", " Jr")[: rng.randint(1, 2)])
        r = Roster(team_name="T", entries=entries)
        assert load_roster(roster_lines(r).splitlines(), team_name="T") == r

    def test_error_names_line(self):
        with pytest.raises(RecordError, match="roster line 2"):
            load_roster(["1: A", "bad"])


class TestResolveNames:
    ROSTER = Roster(team_name="Alabama", entries={3: ("Calvin Ridley", "Bradley Sylve"), 10: ("Solo",)})

    def test_single(self):
        assert resolve_names(10, self.ROSTER) == "Solo"

    def test_shared_number_joined(self):
        assert resolve_names(3, self.ROSTER) == "Calvin Ridley or Bradley Sylve"

    def test_unrostered(self):
        assert resolve_names(44, self.ROSTER) == "#44 (unrostered)"


def detection(frame=0, x=10, y=20, w=40, h=60, score=0.9, team="home", number=None, digits=()):
    return PlayerDetection(frame_index=frame, box=BoundingBox(x, y, w, h), score=score,
                           digits=digits, number=number, team=team)


def digit(value, conf, x):
    return DigitDetection(box=BoundingBox(x, 12, 10, 14), digit=value, confidence=conf)


class TestRecordLines:
    def test_bare_record(self):
        line = serialize_detection(detection())
        assert line == "0 10 20 40 60 0.9 home - 0"
        assert parse_detection(line) == detection()

    def test_record_with_digits_and_number(self):
        d = detection(frame=17, number=51, digits=(digit(5, 0.99, 4), digit(1, 0.98, 18)))
        line = serialize_detection(d)
        assert line.split()[:9] == ["17", "10", "20", "40", "60", "0.9", "home", "51", "2"]
        assert parse_detection(line) == d

    def test_float_geometry_round_trips(self):
        d = detection(x=10.25, score=0.8125)
        assert parse_detection(serialize_detection(d)) == d

    def test_round_trip_sweep(self):
        rng = random.Random(300)
        for _ in range(200):
            digits = tuple(
                digit(rng.randrange(10), round(rng.uniform(0.5, 1.0), 4), 4 + 14 * i)
                for i in range(rng.randint(0, 3))
            )
            d = detection(
                frame=rng.randrange(10000),
                x=rng.choice([rng.randrange(500), round(rng.uniform(0, 500), 2)]),
                score=round(rng.random(), 4),
                team=rng.choice(["home", "away", "unknown"]),
                number=rng.choice([None, rng.randrange(100)]),
                digits=digits,
            )
            assert parse_detection(serialize_detection(d)) == d

    @pytest.mark.parametrize("bad", [
        "0 10 20 40 60 0.9 home -",          # missing digit count
        "0 10 20 40 60 0.9 home - 1",        # count says 1, no digit fields
        "0 10 20 40 60 0.9 home - 1 5 0.99 4 12 10",  # short digit chunk
        "0 10 20 40 60 1.5 home - 0",        # score out of range
        "0 10 20 40 60 0.9 blue - 0",        # unknown team
        "0 10 20 40 60 0.9 home 104 0",      # number out of range
        "x 10 20 40 60 0.9 home - 0",
    ])
    def test_rejects(self, bad):
        with pytest.raises(RecordError):
            parse_detection(bad)

    def test_error_names_line(self):
        with pytest.raises(RecordError, match="record line 7"):
            parse_detection("junk", 7)


class TestLoadDetections:
    def test_groups_by_frame_preserving_order(self):
        lines = [
            serialize_detection(detection(frame=2, x=1)),
            serialize_detection(detection(frame=1)),
            serialize_detection(detection(frame=2, x=2)),
        ]
        result = load_detections(lines)
        assert sorted(result.by_frame) == [1, 2]
        assert [d.box.x for d in result.by_frame[2]] == [1, 2]

    def test_malformed_line_becomes_diagnostic(self):
        lines = [serialize_detection(detection()), "garbage", "# comment", ""]
        result = load_detections(lines)
        assert len(result.by_frame[0]) == 1
        assert len(result.diagnostics) == 1
        assert "line 2" in result.diagnostics[0]

    def test_strict_raises(self):
        with pytest.raises(RecordError):
            load_detections(["garbage"], strict=True)

    def test_serialize_round_trip(self):
        ds = [detection(frame=f, x=f) for f in (3, 1, 3)]
        text = serialize_detections(ds)
        result = load_detections(text.splitlines())
        assert len(result.by_frame[3]) == 2


WINDOW = PlayWindow(play_number=1, quarter=1, frame_start=10, frame_end=12,
                    start_time=900, end_time=894)
ROSTER = Roster(team_name="Alabama", entries={3: ("Calvin Ridley", "Bradley Sylve"), 5: ("Someone",)})


class TestSynchronize:
    def entry(self, **kwargs):
        base = dict(windows=[WINDOW], roster=ROSTER, home_team="Alabama",
                    away_team="Michigan State")
        base.update(kwargs)
        windows = base.pop("windows")
        detections = base.pop("detections", {})
        return synchronize(windows, detections, base.pop("roster"), **base)

    def test_collects_home_numbers_in_window(self):
        detections = {
            10: [detection(frame=10, number=3), detection(frame=10, number=44)],
            11: [detection(frame=11, number=5, team="home")],
        }
        entries = self.entry(detections=detections)
        assert entries[0].participants == {
            3: "Calvin Ridley or Bradley Sylve",
            5: "Someone",
            44: "#44 (unrostered)",
        }
        assert entries[0].play_number == 1
        assert entries[0].home_team == "Alabama"

    def test_ignores_away_unknown_and_unnumbered(self):
        detections = {
            10: [
                detection(frame=10, number=9, team="away"),
                detection(frame=10, number=8, team="unknown"),
                detection(frame=10, number=None, team="home"),
            ],
        }
        assert self.entry(detections=detections)[0].participants == {}

    def test_frames_outside_window_ignored(self):
        detections = {
            9: [detection(frame=9, number=3)],
            13: [detection(frame=13, number=5)],
        }
        assert self.entry(detections=detections)[0].participants == {}

    def test_min_appearances_counts_frames_not_records(self):
        detections = {
            # number 3 twice in one frame: one appearance
            10: [detection(frame=10, number=3, x=1), detection(frame=10, number=3, x=2)],
            11: [detection(frame=11, number=5)],
            12: [detection(frame=12, number=5)],
        }
        entries = synchronize([WINDOW], detections, ROSTER, home_team="A", away_team="B",
                              min_appearances=2)
        assert list(entries[0].participants) == [5]

    def test_away_side_uses_away_records(self):
        away_roster = Roster(team_name="Michigan State", entries={9: ("MSU Guy",)})
        detections = {10: [detection(frame=10, number=9, team="away"),
                           detection(frame=10, number=3, team="home")]}
        entries = synchronize([WINDOW], detections, away_roster, home_team="A", away_team="B",
                              side="away")
        assert entries[0].participants == {9: "MSU Guy"}

    def test_bad_side(self):
        with pytest.raises(InvariantError):
            synchronize([], {}, ROSTER, home_team="A", away_team="B", side="offense")

    def test_one_entry_per_window_in_order(self):
        w2 = PlayWindow(play_number=2, quarter=1, frame_start=20, frame_end=21,
                        start_time=833, end_time=804)
        entries = self.entry(windows=[WINDOW, w2])
        assert [e.play_number for e in entries] == [1, 2]


def sample_entries():
    return [
        GameLogEntry(play_number=1, quarter=1, start_time=900, end_time=894,
                     home_team="Alabama", away_team="Michigan State",
                     participants={3: "Calvin Ridley or Bradley Sylve", 44: "#44 (unrostered)"}),
        GameLogEntry(play_number=2, quarter=1, start_time=833, end_time=804,
                     home_team="Alabama", away_team="Michigan State", participants={}),
    ]


class TestEmitGameLog:
    def test_delimited_layout(self):
        text = emit_game_log(sample_entries(), format="delimited")
        lines = text.splitlines()
        assert lines[0] == (
            "Play number,Quarter,Start time,End time,Home,Away,"
            "Participating players of Home team"
        )
        assert lines[1].startswith("1,1,15:00,14:54,Alabama,Michigan State,")
        assert "3: Calvin Ridley or Bradley Sylve; 44: #44 (unrostered)" in lines[1]
        assert lines[2] == "2,1,13:53,13:24,Alabama,Michigan State,"

    def test_participant_cell_is_quoted_when_needed(self):
        # the cell is a "; " join, so csv quoting only kicks in when a
        # name itself carries a comma
        entry = GameLogEntry(play_number=1, quarter=1, start_time=900, end_time=894,
                             home_team="A", away_team="B",
                             participants={1: "Last, First"})
        quoted = emit_game_log([entry], format="delimited").splitlines()[1]
        assert quoted.endswith('"1: Last, First"')

    def test_structured_round_trip(self):
        entries = sample_entries()
        assert parse_game_log(emit_game_log(entries, format="structured")) == entries

    def test_structured_is_json_lines(self):
        import json

        text = emit_game_log(sample_entries(), format="structured")
        rows = [json.loads(line) for line in text.splitlines()]
        assert rows[0]["play_number"] == 1
        assert rows[0]["start_time"] == "15:00"
        assert rows[0]["participants"][0] == {"number": 3, "name": "Calvin Ridley or Bradley Sylve"}

    def test_unknown_format(self):
        with pytest.raises(InvariantError):
            emit_game_log([], format="tsv")

    def test_parse_rejects_bad_line(self):
        with pytest.raises(RecordError, match="game log line 1"):
            parse_game_log('{"play_number": 1}')


class TestGameConfig:
    def test_defaults(self):
        cfg = GameConfig(home_team="A", away_team="B",
                         home_roster=Roster(team_name="A"), away_roster=Roster(team_name="B"))
        assert cfg.min_appearances == 1
        assert cfg.segmenter.quarter_start == 900

    def test_team_names_must_differ(self):
        with pytest.raises(InvariantError):
            GameConfig(home_team="A", away_team="A",
                       home_roster=Roster(team_name="A"), away_roster=Roster(team_name="A"))

    def test_rosters_required(self):
        with pytest.raises(InvariantError):
            GameConfig(home_team="A", away_team="B", home_roster={}, away_roster={})
