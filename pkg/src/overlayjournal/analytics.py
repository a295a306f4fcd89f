"""Editorial analytics: the per-article cost model and review statistics.

All computations are pure functions over immutable inputs. Quantiles use
linear interpolation between order statistics (the common "type 7"
convention). Standard deviations are population standard deviations: the
figures describe the full set of published articles, not a sample.
"""

from __future__ import annotations

import csv
import json
import statistics
from collections import Counter
from dataclasses import dataclass
from datetime import date
from decimal import Decimal, ROUND_HALF_DOWN, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .errors import EmptyInput, InvalidField

REPORT_SCHEMA_VERSION = 1

CSV_COLUMNS = (
    "submission_id",
    "submitted_at",
    "published_at",
    "reviewer_count",
    "reviewers_contacted",
    "editor_handle",
    "languages",
    "author_countries",
)


@dataclass(frozen=True)
class ReviewRecord:
    """One published article's review history, as read from the records CSV."""

    submission_id: str
    submitted_at: date
    published_at: date
    reviewer_count: int
    reviewers_contacted: int
    editor_handle: str
    languages: tuple[str, ...] = ()
    author_countries: tuple[str, ...] = ()

    def __post_init__(self):
        if self.published_at < self.submitted_at:
            raise InvalidField(
                f"{self.submission_id}: published_at precedes submitted_at"
            )
        if self.reviewer_count < 1:
            raise InvalidField(f"{self.submission_id}: published records need a reviewer")
        if self.reviewers_contacted < 0:
            raise InvalidField(f"{self.submission_id}: negative outreach count")

    @property
    def days_to_publication(self) -> int:
        return (self.published_at - self.submitted_at).days


@dataclass(frozen=True)
class StatsSummary:
    count: int
    mean: float
    median: float
    interquartile_range: float
    std_dev: float
    minimum: float
    maximum: float

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "mean": self.mean,
            "median": self.median,
            "interquartile_range": self.interquartile_range,
            "std_dev": self.std_dev,
            "minimum": self.minimum,
            "maximum": self.maximum,
        }


@dataclass(frozen=True)
class ReviewerStats:
    mean_reviewers: float
    sd_reviewers: float
    mean_contacted: float
    sd_contacted: float
    contacts_per_review: float

    def to_dict(self) -> dict:
        return {
            "mean_reviewers": self.mean_reviewers,
            "sd_reviewers": self.sd_reviewers,
            "mean_contacted": self.mean_contacted,
            "sd_contacted": self.sd_contacted,
            "contacts_per_review": self.contacts_per_review,
        }


class CostParameters:
    """Yearly membership fee, per-article DOI fee, and monthly hosting cost.

    Amounts are held as exact rationals so the cost model never accumulates
    binary floating-point error.
    """

    def __init__(self, membership_fee, per_article_doi_fee, hosting_monthly):
        self.membership_fee = _to_fraction(membership_fee, "membership_fee")
        self.per_article_doi_fee = _to_fraction(per_article_doi_fee, "per_article_doi_fee")
        self.hosting_monthly = _to_fraction(hosting_monthly, "hosting_monthly")

    def to_dict(self) -> dict:
        return {
            "membership_fee": float(self.membership_fee),
            "per_article_doi_fee": float(self.per_article_doi_fee),
            "hosting_monthly": float(self.hosting_monthly),
        }


def _to_fraction(value, name: str) -> Fraction:
    fraction = Fraction(str(value)) if isinstance(value, float) else Fraction(value)
    if fraction < 0:
        raise InvalidField(f"{name} must be non-negative")
    return fraction


def per_article_cost_exact(p: CostParameters, articles_per_year: int) -> Fraction:
    """Exact yearly cost per article: (membership + DOI fees + 12 months hosting) / n."""
    if articles_per_year < 1:
        raise InvalidField("articles_per_year must be at least 1")
    total = p.membership_fee + p.per_article_doi_fee * articles_per_year + p.hosting_monthly * 12
    return total / articles_per_year


def per_article_cost(p: CostParameters, articles_per_year: int) -> Decimal:
    """Per-article cost in cents for display.

    Ties round toward zero, which is what the published journal figures use
    (e.g. an exact 3.515 displays as 3.51).
    """
    exact = per_article_cost_exact(p, articles_per_year)
    with localcontext() as ctx:
        ctx.prec = 50
        quotient = Decimal(exact.numerator) / Decimal(exact.denominator)
    return quotient.quantize(Decimal("0.01"), rounding=ROUND_HALF_DOWN)


def summarize_values(values: Sequence[float]) -> StatsSummary:
    """Mean/median/IQR/population-sd/min/max of a non-empty value list."""
    if not values:
        raise EmptyInput("no values to summarize")
    xs = sorted(float(v) for v in values)
    n = len(xs)
    mean = statistics.fmean(xs)
    if n == 1:
        iqr = 0.0
    else:
        q1, _, q3 = statistics.quantiles(xs, n=4, method="inclusive")
        iqr = q3 - q1
    return StatsSummary(
        count=n,
        mean=mean,
        median=float(statistics.median(xs)),
        interquartile_range=iqr,
        std_dev=statistics.pstdev(xs, mu=mean),
        minimum=xs[0],
        maximum=xs[-1],
    )


def time_to_publication_stats(records: Sequence[ReviewRecord]) -> StatsSummary:
    """Statistics over whole days between submission and publication."""
    if not records:
        raise EmptyInput("no review records")
    return summarize_values([r.days_to_publication for r in records])


def reviewer_stats(records: Sequence[ReviewRecord]) -> ReviewerStats:
    """Reviewer-load and outreach statistics.

    ``contacts_per_review`` is the ratio of the two means; it is reported as
    computed rather than forced to match any externally published rounding.
    """
    if not records:
        raise EmptyInput("no review records")
    reviewer_counts = [r.reviewer_count for r in records]
    contacted = [r.reviewers_contacted for r in records]
    mean_reviewers = statistics.fmean(reviewer_counts)
    mean_contacted = statistics.fmean(contacted)
    return ReviewerStats(
        mean_reviewers=mean_reviewers,
        sd_reviewers=statistics.pstdev(reviewer_counts),
        mean_contacted=mean_contacted,
        sd_contacted=statistics.pstdev(contacted),
        contacts_per_review=mean_contacted / mean_reviewers if mean_reviewers else 0.0,
    )


def frequency_counts(
    records: Sequence[ReviewRecord], field: str
) -> list[tuple[str, int]]:
    """Occurrence counts, descending, ties broken lexicographically.

    Multi-valued fields count once per occurrence, so totals can exceed the
    record count. Empty values land in the "unknown" bucket.
    """
    if field not in ("languages", "author_countries", "editor_handle"):
        raise InvalidField(f"no countable field named {field!r}")
    counter: Counter[str] = Counter()
    for record in records:
        value = getattr(record, field)
        values = [value] if isinstance(value, str) else list(value)
        counter.update(v if v else "unknown" for v in values)
    return sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))


def export_report(
    records: Sequence[ReviewRecord], params: CostParameters | None = None
) -> dict:
    """One JSON-ready document aggregating every statistic above.

    With no records the sections are present but zeroed, so consumers can
    render an empty dashboard without special cases.
    """
    if records:
        timing = time_to_publication_stats(records).to_dict()
        reviewers = reviewer_stats(records).to_dict()
    else:
        timing = StatsSummary(0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0).to_dict()
        reviewers = ReviewerStats(0.0, 0.0, 0.0, 0.0, 0.0).to_dict()
    report = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "record_count": len(records),
        "time_to_publication_days": timing,
        "reviewers": reviewers,
        "languages": [list(pair) for pair in frequency_counts(records, "languages")],
        "author_countries": [
            list(pair) for pair in frequency_counts(records, "author_countries")
        ],
        "editors": [list(pair) for pair in frequency_counts(records, "editor_handle")],
    }
    if params is not None:
        cost = params.to_dict()
        cost["articles_per_year"] = len(records) or None
        cost["per_article_cost"] = (
            float(per_article_cost(params, len(records))) if records else None
        )
        report["cost_model"] = cost
    return report


# -- CSV / JSON plumbing ---------------------------------------------------------


def _split_multi(cell: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in cell.split(";") if part.strip())


def load_records(path: str | Path) -> list[ReviewRecord]:
    """Read review records from the CSV interchange format."""
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [column for column in CSV_COLUMNS if column not in header]
        if missing:
            raise InvalidField(f"records CSV lacks columns: {', '.join(missing)}")
        records = []
        for row in reader:
            records.append(
                ReviewRecord(
                    submission_id=row["submission_id"],
                    submitted_at=date.fromisoformat(row["submitted_at"]),
                    published_at=date.fromisoformat(row["published_at"]),
                    reviewer_count=int(row["reviewer_count"]),
                    reviewers_contacted=int(row["reviewers_contacted"]),
                    editor_handle=row["editor_handle"],
                    languages=_split_multi(row["languages"]),
                    author_countries=_split_multi(row["author_countries"]),
                )
            )
    return records


def write_records(records: Iterable[ReviewRecord], path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    r.submission_id,
                    r.submitted_at.isoformat(),
                    r.published_at.isoformat(),
                    r.reviewer_count,
                    r.reviewers_contacted,
                    r.editor_handle,
                    ";".join(r.languages),
                    ";".join(r.author_countries),
                ]
            )


def write_report(report: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")


def write_summary_csv(report: dict, path: str | Path) -> None:
    """Flat key,value projection of the report's headline numbers."""
    timing = report["time_to_publication_days"]
    reviewers = report["reviewers"]
    rows = [("record_count", report["record_count"])]
    rows += [(f"days_{key}", value) for key, value in timing.items()]
    rows += [(key, value) for key, value in reviewers.items()]
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "value"])
        writer.writerows(rows)
