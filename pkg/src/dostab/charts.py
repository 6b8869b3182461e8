"""Individuals, moving-range and EWMA control charts over a score series.

Sigma is estimated from the average span-2 moving range, sigma = MRbar / d2.
Limits sit 3 sigma either side of the mean. A point is out of control only if
it lies strictly beyond a limit (by more than ``LIMIT_TOL``, which absorbs
float rounding in degenerate zero-width charts).
"""
from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .errors import BadLambdaError, SeriesTooShortError

D2 = 1.128   # unbiasing constant, moving range of span 2
D4 = 3.267   # MR chart upper factor, span 2
L = 3.0      # limit width in sigmas
LIMIT_TOL = 1e-12

CHART_COLUMNS = ("index", "point", "center", "lcl", "ucl", "violation")


class ChartKind(enum.Enum):
    INDIVIDUAL = "I"
    MOVING_RANGE = "MR"
    EWMA = "EWMA"


class Side(enum.Enum):
    HIGH = "High"
    LOW = "Low"


@dataclass(frozen=True)
class EwmaConfig:
    lam: float = 0.2

    def __post_init__(self):
        if not 0 < self.lam <= 1:
            raise BadLambdaError(f"EWMA lambda must be in (0, 1], got {self.lam}")


@dataclass(frozen=True)
class ControlChart:
    kind: ChartKind
    points: Tuple[float, ...]
    center: float
    lcl: Tuple[float, ...]
    ucl: Tuple[float, ...]
    sigma: float
    offset: int = 0  # series position of points[0]

    @property
    def violations(self) -> List[int]:
        return [k for k, _ in detect_violations(self)]


def _check_series(series: Sequence[float]) -> List[float]:
    xs = [float(v) for v in series]
    if len(xs) < 2:
        raise SeriesTooShortError(f"need at least 2 points, got {len(xs)}")
    return xs


def _mean(xs):
    return math.fsum(xs) / len(xs)


def moving_ranges(series: Sequence[float]) -> List[float]:
    xs = _check_series(series)
    return [abs(b - a) for a, b in zip(xs, xs[1:])]


def sigma_hat(series: Sequence[float]) -> float:
    return _mean(moving_ranges(series)) / D2


def i_chart(series: Sequence[float]) -> ControlChart:
    xs = _check_series(series)
    center = _mean(xs)
    sigma = sigma_hat(xs)
    n = len(xs)
    return ControlChart(ChartKind.INDIVIDUAL, tuple(xs), center,
                        (center - L * sigma,) * n, (center + L * sigma,) * n, sigma)


def mr_chart(series: Sequence[float]) -> ControlChart:
    mrs = moving_ranges(series)
    mr_bar = _mean(mrs)
    n = len(mrs)
    return ControlChart(ChartKind.MOVING_RANGE, tuple(mrs), mr_bar,
                        (0.0,) * n, (D4 * mr_bar,) * n, mr_bar / D2, offset=1)


def ewma_chart(series: Sequence[float], cfg: EwmaConfig = EwmaConfig()) -> ControlChart:
    """EWMA started at the series mean, with exact time-varying limits."""
    xs = _check_series(series)
    lam = cfg.lam
    center = _mean(xs)
    sigma = sigma_hat(xs)
    z = center
    points, lcl, ucl = [], [], []
    for i, x in enumerate(xs, start=1):
        z = lam * x + (1 - lam) * z
        points.append(z)
        half = L * sigma * math.sqrt(lam / (2 - lam) * (1 - (1 - lam) ** (2 * i)))
        lcl.append(center - half)
        ucl.append(center + half)
    return ControlChart(ChartKind.EWMA, tuple(points), center, tuple(lcl), tuple(ucl), sigma)


def detect_violations(chart: ControlChart) -> List[Tuple[int, Side]]:
    """(index, side) for every point strictly outside its own limits, in index order."""
    out = []
    for k, (p, lo, hi) in enumerate(zip(chart.points, chart.lcl, chart.ucl)):
        if p > hi + LIMIT_TOL:
            out.append((k, Side.HIGH))
        elif p < lo - LIMIT_TOL:
            out.append((k, Side.LOW))
    return out


def _rows(chart: ControlChart):
    sides = dict(detect_violations(chart))
    for k, p in enumerate(chart.points):
        side = sides.get(k)
        yield (k + chart.offset, p, chart.center, chart.lcl[k], chart.ucl[k],
               side.value if side else "")


def chart_csv(chart: ControlChart) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CHART_COLUMNS)
    for idx, p, c, lo, hi, v in _rows(chart):
        w.writerow([idx, repr(p), repr(c), repr(lo), repr(hi), v])
    return buf.getvalue()


def chart_to_dict(chart: ControlChart) -> dict:
    return {
        "kind": chart.kind.value,
        "center": chart.center,
        "sigma": chart.sigma,
        "points": [{"index": idx, "point": p, "lcl": lo, "ucl": hi, "violation": v or None}
                   for idx, p, _, lo, hi, v in _rows(chart)],
        "violations": [{"index": k + chart.offset, "side": s.value}
                       for k, s in detect_violations(chart)],
    }


def chart_json(chart: ControlChart) -> str:
    return json.dumps(chart_to_dict(chart), indent=2, sort_keys=True) + "\n"


def render_svg(chart: ControlChart, path, title: str = "") -> None:
    """Draw the chart to an SVG file (needs matplotlib)."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    xs = [k + chart.offset + 1 for k in range(len(chart.points))]
    fig, ax = plt.subplots(figsize=(8, 3))
    ax.plot(xs, chart.points, marker="o", ms=3, lw=1, color="tab:blue")
    ax.axhline(chart.center, color="tab:green", lw=1)
    ax.step(xs, chart.ucl, where="mid", color="tab:red", lw=1)
    ax.step(xs, chart.lcl, where="mid", color="tab:red", lw=1)
    bad = chart.violations
    ax.plot([xs[k] for k in bad], [chart.points[k] for k in bad], "rs", ms=5)
    ax.set_title(title or f"{chart.kind.value} chart")
    ax.set_xlabel("interval")
    fig.tight_layout()
    # fixed metadata keeps the file reproducible
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
