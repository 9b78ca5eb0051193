"""Statistical post-processing: normalization, outlier filtering, drift ranking.

Feature drift between two builds is measured per slot: both samples are
scaled onto a shared [0,1] range (min-max over their union, so medians stay
comparable), each side is filtered once with the classic three-sigma rule
(population sigma, single pass), and the ranking key is the absolute gap of
the medians. Mean gaps are carried alongside for reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import EmptyInput, OutOfRange, RegistryMismatch, TooFewSamples


@dataclass
class SampleSet:
    label: str
    values: list[float]


@dataclass
class FeatureDrift:
    index: int
    name: str
    median_a: float
    median_b: float
    median_gap: float
    mean_gap: float
    kept_a: int
    kept_b: int


@dataclass
class DriftReport:
    features: list[FeatureDrift]
    top_k: list[int]
    registry_version: str


@dataclass
class CdfSeries:
    points: list[tuple[float, float]]  # (ratio, fraction <= ratio)
    minimum: float
    maximum: float
    mean: float


def _check_values(values: list[float]) -> None:
    if any(math.isnan(v) for v in values):
        raise ValueError("NaN is not a valid sample value")


def normalize(values: list[float]) -> list[float]:
    """Min-max scale to [0,1]; constant input maps to all zeros."""
    if not values:
        raise EmptyInput("cannot normalize an empty list")
    _check_values(values)
    lo, hi = min(values), max(values)
    if hi == lo:
        return [0.0] * len(values)
    span = hi - lo
    return [(v - lo) / span for v in values]


def three_sigma_filter(values: list[float]) -> tuple[list[float], list[float]]:
    """Single-pass outlier cut: keep v iff |v - mean| <= 3 * population sigma."""
    if len(values) < 2:
        raise TooFewSamples("three-sigma filter needs at least two samples")
    _check_values(values)
    mu = sum(values) / len(values)
    sigma = math.sqrt(sum((v - mu) ** 2 for v in values) / len(values))
    if sigma == 0:
        return list(values), []
    kept, removed = [], []
    for v in values:
        (kept if abs(v - mu) <= 3 * sigma else removed).append(v)
    return kept, removed


def median(values: list[float]) -> float:
    if not values:
        raise EmptyInput("median of an empty list")
    ordered = sorted(values)
    mid = len(ordered) // 2
    if len(ordered) % 2:
        return ordered[mid]
    return (ordered[mid - 1] + ordered[mid]) / 2


def _shared_scale(a: list[float], b: list[float]) -> tuple[list[float], list[float]]:
    union = a + b
    lo, hi = min(union), max(union)
    if hi == lo:
        return [0.0] * len(a), [0.0] * len(b)
    span = hi - lo
    return [(v - lo) / span for v in a], [(v - lo) / span for v in b]


def _prepared(a: list[float], b: list[float]) -> tuple[list[float], list[float]]:
    if not a or not b:
        raise EmptyInput("both sample sets must be non-empty")
    _check_values(a)
    _check_values(b)
    na, nb = _shared_scale(a, b)
    ka, _ = three_sigma_filter(na) if len(na) >= 2 else (na, [])
    kb, _ = three_sigma_filter(nb) if len(nb) >= 2 else (nb, [])
    # a filter can only drop points strictly away from the mean, never all
    return ka or na, kb or nb


def median_gap(a: SampleSet, b: SampleSet) -> float:
    """|median(a) - median(b)| on the shared scale after outlier removal."""
    ka, kb = _prepared(a.values, b.values)
    return abs(median(ka) - median(kb))


def rank_features(
    table_a: dict[str, list[float]],
    table_b: dict[str, list[float]],
    k: int,
    names: list[str] | None = None,
    registry_version_a: str = "",
    registry_version_b: str = "",
) -> DriftReport:
    """Per-slot drift between two per-function feature tables.

    Tables map function name -> 62 slot values; column i gathers the values
    of slot i+1 across functions.
    """
    if registry_version_a != registry_version_b:
        raise RegistryMismatch(
            f"registry {registry_version_a!r} vs {registry_version_b!r}"
        )
    if k < 1:
        raise ValueError("k must be >= 1")
    if not table_a or not table_b:
        raise EmptyInput("both feature tables must be non-empty")

    n_slots = len(next(iter(table_a.values())))
    drifts: list[FeatureDrift] = []
    for i in range(n_slots):
        col_a = [row[i] for row in table_a.values()]
        col_b = [row[i] for row in table_b.values()]
        ka, kb = _prepared(col_a, col_b)
        med_a, med_b = median(ka), median(kb)
        mean_gap = abs(sum(ka) / len(ka) - sum(kb) / len(kb))
        drifts.append(
            FeatureDrift(
                index=i + 1,
                name=names[i] if names else f"f{i + 1}",
                median_a=med_a,
                median_b=med_b,
                median_gap=abs(med_a - med_b),
                mean_gap=mean_gap,
                kept_a=len(ka),
                kept_b=len(kb),
            )
        )
    ranked = sorted(drifts, key=lambda d: (-d.median_gap, d.index))
    top_k = [d.index for d in ranked[: min(k, n_slots)]]
    return DriftReport(features=drifts, top_k=top_k,
                       registry_version=registry_version_a)


def inlining_cdf(ratios: list[float]) -> CdfSeries:
    """Empirical CDF of inlining ratios plus min/max/mean summary."""
    if not ratios:
        raise EmptyInput("cannot build a CDF from no ratios")
    _check_values(ratios)
    if any(r < 0 or r > 1 for r in ratios):
        raise OutOfRange("inlining ratios must lie in [0, 1]")
    n = len(ratios)
    ordered = sorted(ratios)
    points: list[tuple[float, float]] = []
    seen = 0
    for i, r in enumerate(ordered):
        seen = i + 1
        if i + 1 < n and ordered[i + 1] == r:
            continue
        points.append((r, seen / n))
    return CdfSeries(
        points=points,
        minimum=ordered[0],
        maximum=ordered[-1],
        mean=sum(ordered) / n,
    )


# --- report rendering ---

def drift_report_to_csv(report: DriftReport) -> str:
    lines = ["index,name,median_a,median_b,gap,kept_a,kept_b"]
    for d in report.features:
        lines.append(
            f'{d.index},"{d.name}",{d.median_a:.6g},{d.median_b:.6g},'
            f"{d.median_gap:.6g},{d.kept_a},{d.kept_b}"
        )
    return "\n".join(lines) + "\n"


def cdf_to_csv(series: CdfSeries) -> str:
    lines = ["ratio,fraction"]
    for ratio, fraction in series.points:
        lines.append(f"{ratio:.4f},{fraction:.6g}")
    return "\n".join(lines) + "\n"


def polyline_svg(
    points: list[tuple[float, float]],
    title: str = "",
    width: int = 640,
    height: int = 400,
    x_label: str = "",
    y_label: str = "",
) -> str:
    """Self-contained SVG rendering of one series as a polyline."""
    if not points:
        raise EmptyInput("no points to plot")
    margin = 48
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    x_span = (x_hi - x_lo) or 1.0
    y_span = (y_hi - y_lo) or 1.0

    def sx(x: float) -> float:
        return margin + (x - x_lo) / x_span * (width - 2 * margin)

    def sy(y: float) -> float:
        return height - margin - (y - y_lo) / y_span * (height - 2 * margin)

    coords = " ".join(f"{sx(x):.1f},{sy(y):.1f}" for x, y in points)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" '
        f'stroke="black"/>',
        f'<polyline fill="none" stroke="#1f77b4" stroke-width="1.5" points="{coords}"/>',
    ]
    if title:
        parts.append(
            f'<text x="{width / 2:.0f}" y="20" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>'
        )
    if x_label:
        parts.append(
            f'<text x="{width / 2:.0f}" y="{height - 10}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{x_label}</text>'
        )
    if y_label:
        parts.append(
            f'<text x="14" y="{height / 2:.0f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12" '
            f'transform="rotate(-90 14 {height / 2:.0f})">{y_label}</text>'
        )
    for tick, label in ((x_lo, f"{x_lo:.4g}"), (x_hi, f"{x_hi:.4g}")):
        parts.append(
            f'<text x="{sx(tick):.1f}" y="{height - margin + 16}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="10">{label}</text>'
        )
    for tick, label in ((y_lo, f"{y_lo:.4g}"), (y_hi, f"{y_hi:.4g}")):
        parts.append(
            f'<text x="{margin - 6}" y="{sy(tick):.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
