"""Raw chart CSV -> cleaned, labeled song records.

The raw export has one row per (song, chart week).  Parsing keeps every
data line and flags unusable ones instead of aborting; aggregation folds
the weekly rows into unique songs; cleaning drops songs with missing
audio or lyrics or an unrecognized genre; labeling marks a song a hit
when its best chart position ever reached the top 10.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import warnings
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import IO, Iterable

from .errors import ParameterError, SchemaError

# Audio feature columns, in the canonical order used everywhere downstream.
AUDIO_FEATURES: tuple[str, ...] = (
    "energy",
    "liveness",
    "tempo",
    "speechiness",
    "acousticness",
    "time_signature",
    "key",
    "duration_ms",
    "loudness",
    "valence",
    "mode",
    "danceability",
)

GENRES: tuple[str, ...] = ("country", "edm", "pop", "r&b", "rock", "rap")

HIT_RANK_THRESHOLD = 10

#: canonical field -> default CSV header (overridable via column_map)
REQUIRED_COLUMNS: tuple[str, ...] = ("title", "artist", "week_date", "rank", "broad_genre", "lyrics") + AUDIO_FEATURES

AUDIO_CONFLICT_TOLERANCE = 1e-6


@dataclass(frozen=True)
class AudioFeatures:
    """The 12 per-track audio descriptors; None marks a missing cell."""

    energy: float | None = None
    liveness: float | None = None
    tempo: float | None = None
    speechiness: float | None = None
    acousticness: float | None = None
    time_signature: float | None = None
    key: float | None = None
    duration_ms: float | None = None
    loudness: float | None = None
    valence: float | None = None
    mode: float | None = None
    danceability: float | None = None

    def as_tuple(self) -> tuple[float | None, ...]:
        return tuple(getattr(self, name) for name in AUDIO_FEATURES)

    def is_complete(self) -> bool:
        return all(v is not None for v in self.as_tuple())


@dataclass(frozen=True)
class RawRow:
    """One parsed CSV line; ``problems`` is empty when the row is usable."""

    title: str
    artist: str
    week_date: date | None
    rank: int | None
    broad_genre: str
    audio: AudioFeatures
    lyrics: str
    problems: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.problems


@dataclass(frozen=True)
class SongRecord:
    """One unique song after aggregation; ``label`` is attached after cleaning."""

    title: str
    artist: str
    weeks_on_chart: int
    peak_rank: int
    broad_genre: str
    audio: AudioFeatures
    lyrics: str
    label: int | None = None

    @property
    def key(self) -> tuple[str, str]:
        return song_key(self.title, self.artist)


def song_key(title: str, artist: str) -> tuple[str, str]:
    """Identity key: case-folded, whitespace-collapsed (title, artist)."""
    return (" ".join(title.split()).casefold(), " ".join(artist.split()).casefold())


def _open_text(source: str | Path | IO[bytes] | IO[str]) -> IO[str]:
    if isinstance(source, (str, Path)):
        return open(source, encoding="utf-8", newline="")
    if isinstance(source, io.TextIOBase):
        return source
    return io.TextIOWrapper(source, encoding="utf-8", newline="")


def _parse_float(cell: str | None) -> float | None:
    if cell is None:
        return None
    try:
        return float(cell.strip())
    except ValueError:
        return None


def parse_dataset(
    source: str | Path | IO[bytes] | IO[str],
    column_map: dict[str, str] | None = None,
) -> list[RawRow]:
    """Parse the raw weekly-chart CSV into RawRows.

    ``column_map`` maps canonical field names to the file's header names
    (identity by default).  A missing required column raises SchemaError;
    a bad rank or date only flags that row; an unparseable audio cell is
    recorded as missing so the song can be dropped during cleaning.
    """
    colmap = {name: name for name in REQUIRED_COLUMNS}
    if column_map:
        unknown = set(column_map) - set(REQUIRED_COLUMNS)
        if unknown:
            raise SchemaError(f"column_map has unknown canonical fields: {sorted(unknown)}")
        colmap.update(column_map)

    fh = _open_text(source)
    reader = csv.DictReader(fh)
    if reader.fieldnames is None:
        raise SchemaError("input CSV is empty (no header row)")
    missing = [colmap[name] for name in REQUIRED_COLUMNS if colmap[name] not in reader.fieldnames]
    if missing:
        raise SchemaError(f"input CSV is missing required columns: {missing}")

    rows: list[RawRow] = []
    for record in reader:
        problems: list[str] = []

        rank: int | None = None
        rank_cell = (record.get(colmap["rank"]) or "").strip()
        try:
            rank = int(rank_cell)
        except ValueError:
            problems.append(f"unparseable rank {rank_cell!r}")
        else:
            if not 1 <= rank <= 100:
                problems.append(f"rank {rank} outside [1, 100]")
                rank = None

        week: date | None = None
        date_cell = (record.get(colmap["week_date"]) or "").strip()
        try:
            week = date.fromisoformat(date_cell[:10])
        except ValueError:
            problems.append(f"unparseable week_date {date_cell!r}")

        audio = AudioFeatures(**{name: _parse_float(record.get(colmap[name])) for name in AUDIO_FEATURES})
        rows.append(
            RawRow(
                title=(record.get(colmap["title"]) or "").strip(),
                artist=(record.get(colmap["artist"]) or "").strip(),
                week_date=week,
                rank=rank,
                broad_genre=(record.get(colmap["broad_genre"]) or "").strip().casefold(),
                audio=audio,
                lyrics=record.get(colmap["lyrics"]) or "",
                problems=tuple(problems),
            )
        )
    return rows


def aggregate_songs(rows: Iterable[RawRow]) -> list[SongRecord]:
    """Fold weekly rows into unique songs (malformed rows are skipped).

    weeks_on_chart counts the rows consumed; peak_rank is the best (lowest)
    rank; genre, audio and lyrics come from the earliest week on the
    assumption they are constant per song.  Audio values disagreeing with
    the first week beyond 1e-6 produce a warning, first occurrence wins.
    Output order is first-appearance order.
    """
    groups: dict[tuple[str, str], list[RawRow]] = {}
    for row in rows:
        if not row.ok:
            continue
        groups.setdefault(song_key(row.title, row.artist), []).append(row)

    records: list[SongRecord] = []
    for key, group in groups.items():
        ordered = sorted(group, key=lambda r: r.week_date)  # stable: file order breaks date ties
        first = ordered[0]
        for later in ordered[1:]:
            for name in AUDIO_FEATURES:
                a, b = getattr(first.audio, name), getattr(later.audio, name)
                if a is not None and b is not None and abs(a - b) > AUDIO_CONFLICT_TOLERANCE:
                    warnings.warn(
                        f"song {key}: audio field {name!r} varies across weeks "
                        f"({a!r} vs {b!r}); keeping the first occurrence",
                        stacklevel=2,
                    )
                    break
            else:
                continue
            break
        records.append(
            SongRecord(
                title=first.title,
                artist=first.artist,
                weeks_on_chart=len(group),
                peak_rank=min(r.rank for r in group),
                broad_genre=first.broad_genre,
                audio=first.audio,
                lyrics=first.lyrics,
            )
        )
    return records


def removal_reason(record: SongRecord) -> str | None:
    """Why ``clean`` would drop this record, or None if it is kept."""
    if not record.audio.is_complete():
        return "missing_audio"
    if not record.lyrics.strip():
        return "missing_lyrics"
    if record.broad_genre not in GENRES:
        return "unknown_genre"
    return None


def clean(records: Iterable[SongRecord]) -> list[SongRecord]:
    """Pure filter: keep only records with complete audio, lyrics and a known genre."""
    return [r for r in records if removal_reason(r) is None]


def label(record: SongRecord) -> int:
    """1 when the song ever reached the top 10, else 0."""
    if not 1 <= record.peak_rank <= 100:
        raise ParameterError(f"peak_rank {record.peak_rank} outside [1, 100]")
    return 1 if record.peak_rank <= HIT_RANK_THRESHOLD else 0


def label_records(records: Iterable[SongRecord]) -> list[SongRecord]:
    """Attach the hit label to every record."""
    return [dataclasses.replace(r, label=label(r)) for r in records]


# Cleaned-dataset CSV: canonical column order.
CLEAN_COLUMNS: tuple[str, ...] = (
    "title",
    "artist",
    "weeks_on_chart",
    "peak_rank",
    "broad_genre",
    *AUDIO_FEATURES,
    "lyrics",
    "label",
)


def write_clean_csv(records: Iterable[SongRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CLEAN_COLUMNS)
        for r in records:
            writer.writerow(
                [r.title, r.artist, r.weeks_on_chart, r.peak_rank, r.broad_genre]
                + [repr(v) for v in r.audio.as_tuple()]
                + [r.lyrics, r.label]
            )


def read_clean_csv(path: str | Path) -> list[SongRecord]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or list(reader.fieldnames) != list(CLEAN_COLUMNS):
            raise SchemaError(f"{path} is not a cleaned dataset (unexpected columns)")
        records = []
        for row in reader:
            records.append(
                SongRecord(
                    title=row["title"],
                    artist=row["artist"],
                    weeks_on_chart=int(row["weeks_on_chart"]),
                    peak_rank=int(row["peak_rank"]),
                    broad_genre=row["broad_genre"],
                    audio=AudioFeatures(**{name: float(row[name]) for name in AUDIO_FEATURES}),
                    lyrics=row["lyrics"],
                    label=int(row["label"]),
                )
            )
    return records
