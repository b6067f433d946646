import csv
import dataclasses
import io

import pytest

from conftest import write_synthetic_raw_csv
from hitsong.errors import ParameterError, SchemaError
from hitsong.ingest import (
    AUDIO_FEATURES,
    CLEAN_COLUMNS,
    AudioFeatures,
    aggregate_songs,
    clean,
    label,
    label_records,
    parse_dataset,
    read_clean_csv,
    removal_reason,
    write_clean_csv,
)

HEADER = "title,artist,week_date,rank,broad_genre," + ",".join(AUDIO_FEATURES) + ",lyrics"
AUDIO_CELLS = ",".join("0.5" for _ in AUDIO_FEATURES)


def _csv(*lines: str) -> io.StringIO:
    return io.StringIO("\n".join([HEADER, *lines]) + "\n")


def test_parse_single_valid_line():
    rows = parse_dataset(_csv(f"Song A,Artist X,2012-01-07,5,pop,{AUDIO_CELLS},la la la"))
    assert len(rows) == 1
    assert rows[0].ok
    assert rows[0].rank == 5
    assert rows[0].audio.energy == 0.5


def test_parse_bad_rank_flags_row():
    rows = parse_dataset(_csv(f"Song A,Artist X,2012-01-07,abc,pop,{AUDIO_CELLS},la"))
    assert len(rows) == 1
    assert not rows[0].ok
    assert aggregate_songs(rows) == []


def test_parse_rank_out_of_range_flags_row():
    rows = parse_dataset(_csv(f"Song A,Artist X,2012-01-07,101,pop,{AUDIO_CELLS},la"))
    assert not rows[0].ok


def test_parse_bad_audio_cell_is_missing_not_zero():
    cells = AUDIO_CELLS.replace("0.5", "oops", 1)
    rows = parse_dataset(_csv(f"Song A,Artist X,2012-01-07,5,pop,{cells},la"))
    assert rows[0].ok  # the row is usable, the audio cell is just missing
    assert rows[0].audio.energy is None


def test_missing_required_column_is_schema_error():
    bad = io.StringIO("title,artist\nSong A,Artist X\n")
    with pytest.raises(SchemaError):
        parse_dataset(bad)


def test_audio_features_has_exactly_12_fields():
    assert len(dataclasses.fields(AudioFeatures)) == 12
    assert tuple(f.name for f in dataclasses.fields(AudioFeatures)) == AUDIO_FEATURES


def test_aggregate_weeks_and_peak():
    rows = parse_dataset(
        _csv(
            f"Song A,Artist X,2012-01-07,40,pop,{AUDIO_CELLS},la",
            f"Song A,Artist X,2012-01-14,12,pop,{AUDIO_CELLS},la",
            f"Song A,Artist X,2012-01-21,25,pop,{AUDIO_CELLS},la",
        )
    )
    songs = aggregate_songs(rows)
    assert len(songs) == 1
    assert songs[0].weeks_on_chart == 3
    assert songs[0].peak_rank == 12


def test_aggregate_distinct_songs():
    rows = parse_dataset(
        _csv(
            f"Song A,Artist X,2012-01-07,40,pop,{AUDIO_CELLS},la",
            f"Song B,Artist X,2012-01-07,41,rock,{AUDIO_CELLS},la",
        )
    )
    assert len(aggregate_songs(rows)) == 2


def test_aggregate_key_folds_case_and_whitespace():
    rows = parse_dataset(
        _csv(
            f"Song  A,Artist X,2012-01-07,40,pop,{AUDIO_CELLS},la",
            f"song a,ARTIST X,2012-01-14,12,pop,{AUDIO_CELLS},la",
        )
    )
    assert len(aggregate_songs(rows)) == 1


def test_aggregate_idempotent_on_unique_rows():
    rows = parse_dataset(
        _csv(
            f"Song A,Artist X,2012-01-07,40,pop,{AUDIO_CELLS},la",
            f"Song B,Artist Y,2012-01-07,41,rock,{AUDIO_CELLS},la",
        )
    )
    songs = aggregate_songs(rows)
    assert [s.weeks_on_chart for s in songs] == [1, 1]
    assert len(songs) == len(rows)


def test_aggregate_conflicting_audio_warns_first_wins():
    cells_b = AUDIO_CELLS.replace("0.5", "0.9", 1)
    rows = parse_dataset(
        _csv(
            f"Song A,Artist X,2012-01-07,40,pop,{AUDIO_CELLS},la",
            f"Song A,Artist X,2012-01-14,12,pop,{cells_b},la",
        )
    )
    with pytest.warns(UserWarning, match="varies across weeks"):
        songs = aggregate_songs(rows)
    assert songs[0].audio.energy == 0.5


def test_clean_removes_missing_and_unknown():
    cells_missing = AUDIO_CELLS.replace("0.5", "", 1)
    rows = parse_dataset(
        _csv(
            f"Keep Me,Artist X,2012-01-07,40,pop,{AUDIO_CELLS},la",
            f"No Lyrics,Artist X,2012-01-07,40,pop,{AUDIO_CELLS},",
            f"No Audio,Artist X,2012-01-07,40,pop,{cells_missing},la",
            f"Weird Genre,Artist X,2012-01-07,40,polka,{AUDIO_CELLS},la",
        )
    )
    songs = aggregate_songs(rows)
    kept = clean(songs)
    assert [s.title for s in kept] == ["Keep Me"]
    reasons = {s.title: removal_reason(s) for s in songs}
    assert reasons["No Lyrics"] == "missing_lyrics"
    assert reasons["No Audio"] == "missing_audio"
    assert reasons["Weird Genre"] == "unknown_genre"


def test_clean_is_pure_filter():
    rows = parse_dataset(_csv(f"Keep Me,Artist X,2012-01-07,40,pop,{AUDIO_CELLS},la"))
    songs = aggregate_songs(rows)
    assert clean(songs)[0] is songs[0]


@pytest.mark.parametrize("peak,expected", [(10, 1), (11, 0), (1, 1), (100, 0)])
def test_label_boundaries(peak, expected):
    rows = parse_dataset(_csv(f"Song A,Artist X,2012-01-07,{peak},pop,{AUDIO_CELLS},la"))
    record = aggregate_songs(rows)[0]
    assert label(record) == expected


def test_label_invariant_on_cleaned_records():
    rows = parse_dataset(
        _csv(
            f"Song A,Artist X,2012-01-07,3,pop,{AUDIO_CELLS},la",
            f"Song B,Artist Y,2012-01-07,55,rock,{AUDIO_CELLS},la",
        )
    )
    for rec in label_records(clean(aggregate_songs(rows))):
        assert rec.label in (0, 1)
        assert rec.label == (1 if rec.peak_rank <= 10 else 0)


def test_label_rejects_bad_peak():
    rec = aggregate_songs(parse_dataset(_csv(f"Song A,Artist X,2012-01-07,5,pop,{AUDIO_CELLS},la")))[0]
    with pytest.raises(ParameterError):
        label(dataclasses.replace(rec, peak_rank=0))


def test_weeks_sum_matches_good_rows(synthetic_csv):
    rows = parse_dataset(synthetic_csv)
    good = [r for r in rows if r.ok]
    songs = aggregate_songs(rows)
    assert sum(s.weeks_on_chart for s in songs) == len(good)


def test_parse_row_count_matches_line_count(synthetic_csv):
    # the synthetic fixture has no embedded newlines, so a raw line count works
    with open(synthetic_csv, encoding="utf-8") as fh:
        n_lines = sum(1 for _ in fh)
    assert len(parse_dataset(synthetic_csv)) == n_lines - 1


def test_column_map_remaps_headers():
    raw = io.StringIO(
        "Song,Performer,date,position,genre," + ",".join(AUDIO_FEATURES) + ",words\n"
        f"Song A,Artist X,2012-01-07,5,pop,{AUDIO_CELLS},la\n"
    )
    mapping = {
        "title": "Song",
        "artist": "Performer",
        "week_date": "date",
        "rank": "position",
        "broad_genre": "genre",
        "lyrics": "words",
    }
    rows = parse_dataset(raw, mapping)
    assert rows[0].title == "Song A"
    assert rows[0].rank == 5


def test_clean_csv_roundtrip(tmp_path, synthetic_csv):
    records = label_records(clean(aggregate_songs(parse_dataset(synthetic_csv))))
    path = tmp_path / "cleaned.csv"
    write_clean_csv(records, path)
    with open(path, encoding="utf-8", newline="") as fh:
        assert next(csv.reader(fh)) == list(CLEAN_COLUMNS)
    back = read_clean_csv(path)
    assert back == records
