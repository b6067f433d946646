"""Shared fixtures: tiny matrices and a deterministic synthetic raw-chart CSV."""

from __future__ import annotations

import csv
from datetime import date, timedelta
from pathlib import Path

import numpy as np
import pytest

from hitsong.features import FeatureMatrix
from hitsong.ingest import AUDIO_FEATURES, GENRES

WORDS = (
    "midnight", "diamond", "summer", "burning", "forever", "dancing",
    "shadow", "golden", "thunder", "wildfire", "heartbeat", "stranger",
    "paradise", "electric", "horizon", "velvet", "gravity", "echoes",
    "rhythm", "sunrise", "carousel", "lightning", "whisper", "castle",
)

ARTISTS = (
    "Nova Rain", "The Gilded Owls", "Marlow Vane", "Cobalt City",
    "June & the Meteors", "Harlan Pike", "Silver Atlas", "Ruby Calloway",
    "The Night Ferries", "Oak and Ivy", "Della Frost", "Camden Wolfe",
)


def _audio_row(rng: np.random.Generator) -> dict[str, float]:
    return {
        "energy": round(float(rng.random()), 4),
        "liveness": round(float(rng.random()), 4),
        "tempo": round(float(rng.uniform(60, 200)), 2),
        "speechiness": round(float(rng.random()), 4),
        "acousticness": round(float(rng.random()), 4),
        "time_signature": float(rng.choice([3, 4, 4, 4, 5])),
        "key": float(rng.integers(0, 12)),
        "duration_ms": float(rng.integers(120_000, 300_000)),
        "loudness": round(float(rng.uniform(-20, 0)), 3),
        "valence": round(float(rng.random()), 4),
        "mode": float(rng.integers(0, 2)),
        "danceability": round(float(rng.random()), 4),
    }


def write_synthetic_raw_csv(path: str | Path, n_rows: int = 300, seed: int = 20260810) -> None:
    """Deterministic synthetic weekly-chart CSV with n_rows data lines.

    Contains hits and non-hits across all six genres plus the dirty cases
    the pipeline must handle: a couple of malformed rows, songs missing an
    audio value or lyrics, and one unknown genre.
    """
    rng = np.random.default_rng(seed)
    start = date(2012, 1, 7)
    used_titles: set[tuple[str, str]] = set()
    rows: list[dict] = []
    song_idx = 0

    def new_song(weeks: int, hit: bool, flaw: str | None = None) -> None:
        nonlocal song_idx
        while True:
            n_words = int(rng.integers(1, 4))
            title_words = list(rng.choice(WORDS, size=n_words, replace=False))
            if rng.random() < 0.3:
                title_words.insert(0, "the")
            title = " ".join(title_words).title()
            artist = str(rng.choice(ARTISTS))
            if (title, artist) not in used_titles:
                used_titles.add((title, artist))
                break
        genre = "folk" if flaw == "genre" else str(rng.choice(GENRES))
        audio = _audio_row(rng)
        if flaw == "audio":
            audio[str(rng.choice(AUDIO_FEATURES))] = None
        if flaw == "lyrics":
            lyrics = ""
        else:
            lyrics = " ".join(rng.choice(WORDS, size=int(rng.integers(10, 28))))
        if hit:
            ranks = [int(rng.integers(1, 11))] + [int(rng.integers(1, 101)) for _ in range(weeks - 1)]
        else:
            ranks = [int(rng.integers(11, 101)) for _ in range(weeks)]
        first_week = int(rng.integers(0, 200))
        for w in range(weeks):
            rows.append(
                {
                    "title": title,
                    "artist": artist,
                    "week_date": (start + timedelta(weeks=first_week + w)).isoformat(),
                    "rank": ranks[w],
                    "broad_genre": genre,
                    "lyrics": lyrics,
                    **audio,
                }
            )
        song_idx += 1

    # dirty songs first so they always fit within the row budget
    new_song(2, hit=False, flaw="audio")
    new_song(1, hit=False, flaw="audio")
    new_song(2, hit=False, flaw="lyrics")
    new_song(1, hit=False, flaw="genre")
    new_song(56, hit=True)  # exercises the top continuity bin
    new_song(24, hit=True)
    new_song(14, hit=False)

    target_good = n_rows - 2  # two malformed lines appended below
    while len(rows) < target_good:
        budget = target_good - len(rows)
        weeks = int(min(budget, rng.integers(1, 6)))
        new_song(weeks, hit=bool(rng.random() < 0.20))
    # two malformed lines: unparseable rank / unparseable date
    bad = dict(rows[0])
    bad.update(title="Broken Row", artist="Nobody", rank="abc")
    rows.append(bad)
    bad = dict(rows[1])
    bad.update(title="Broken Date", artist="Nobody", week_date="not-a-date")
    rows.append(bad)

    order = rng.permutation(len(rows))
    header = ["title", "artist", "week_date", "rank", "broad_genre", *AUDIO_FEATURES, "lyrics"]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=header)
        writer.writeheader()
        for i in order:
            row = {k: ("" if v is None else v) for k, v in rows[i].items()}
            writer.writerow(row)


@pytest.fixture(scope="session")
def synthetic_csv(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("data") / "raw.csv"
    write_synthetic_raw_csv(path)
    return path


def random_matrix(n: int, d: int, seed: int, positive_rate: float = 0.5) -> FeatureMatrix:
    """Random feature matrix with labels independent of the features."""
    rng = np.random.default_rng(seed)
    values = rng.random((n, d))
    labels = (rng.random(n) < positive_rate).astype(np.int64)
    # ensure both classes show up
    if labels.sum() == 0:
        labels[0] = 1
    if labels.sum() == n:
        labels[0] = 0
    names = tuple(f"f{i}" for i in range(d))
    return FeatureMatrix(names, values, labels, tuple(f"r{i}" for i in range(n)))
