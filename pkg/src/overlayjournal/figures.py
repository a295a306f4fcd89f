"""Figure rendering for the stats report path.

The analytics module stays pure; this module is its plotting consumer. Each
chart is written as a PNG next to the report so the numbers and the pictures
come from the same run.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .analytics import ReviewRecord, frequency_counts


def _bar_chart(pairs: list[tuple[str, int]], title: str, ylabel: str, path: Path) -> None:
    labels = [key for key, _ in pairs]
    counts = [count for _, count in pairs]
    fig, ax = plt.subplots(figsize=(max(6, 0.45 * len(labels)), 4))
    ax.bar(range(len(labels)), counts, color="#4878a8")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=45, ha="right")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_figures(records: Sequence[ReviewRecord], out_dir: str | Path) -> list[Path]:
    """Render the standard editorial charts; returns the files written.

    Charts with no underlying data are skipped rather than drawn empty.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    if not records:
        return written

    days = [r.days_to_publication for r in records]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.hist(days, bins=min(30, max(5, len(set(days)))), color="#4878a8", edgecolor="white")
    ax.set_xlabel("Days between submission and publication")
    ax.set_ylabel("Articles")
    ax.set_title("Time to publication")
    fig.tight_layout()
    path = out / "time_to_publication.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    for field, title, filename in (
        ("languages", "Programming languages", "languages.png"),
        ("editor_handle", "Articles per editor", "editors.png"),
        ("author_countries", "Authors per country", "author_countries.png"),
    ):
        pairs = frequency_counts(records, field)
        if not pairs:
            continue
        chart = out / filename
        _bar_chart(pairs, title, "Count", chart)
        written.append(chart)
    return written
