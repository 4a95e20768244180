"""Cumulative polarization chart and per-word association-distribution chart.

Both charts are emitted as standalone SVG 1.1 with fixed-precision
coordinates, so identical data always produces byte-identical files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .association import PoleWordsets, TopicWordset, single_word_association
from .embeddings import EmbeddingSpace, cosine

COLOR_A = "#2e7d32"
COLOR_B = "#c62828"
COLOR_CUMULATE = "#000000"


@dataclass
class SpaceBar:
    label: str
    beta_a: float
    beta_b: float
    cumulate: float

    def to_dict(self):
        return {
            "label": self.label,
            "beta_a": self.beta_a,
            "beta_b": self.beta_b,
            "cumulate": self.cumulate,
        }


@dataclass
class CumulativePlotData:
    topic_label: str
    pole_label_a: str
    pole_label_b: str
    bars: list  # one SpaceBar per space, space1 first

    def to_dict(self):
        return {
            "topic_label": self.topic_label,
            "pole_label_a": self.pole_label_a,
            "pole_label_b": self.pole_label_b,
            "bars": [b.to_dict() for b in self.bars],
        }

    @classmethod
    def from_dict(cls, raw):
        return cls(
            topic_label=raw["topic_label"],
            pole_label_a=raw["pole_label_a"],
            pole_label_b=raw["pole_label_b"],
            bars=[SpaceBar(**b) for b in raw["bars"]],
        )


@dataclass
class WordDistribution:
    """Association distributions of one topic word in one space."""

    word: str
    space_label: str
    delta_a: list  # cosines to every word of pole A
    delta_b: list
    mean_a: float
    mean_b: float
    dominant_pole: str  # "A" | "B"

    def to_dict(self):
        return {
            "word": self.word,
            "space_label": self.space_label,
            "delta_a": list(self.delta_a),
            "delta_b": list(self.delta_b),
            "mean_a": self.mean_a,
            "mean_b": self.mean_b,
            "dominant_pole": self.dominant_pole,
        }


@dataclass
class DetailPlotData:
    topic_label: str
    pole_label_a: str
    pole_label_b: str
    space_labels: list
    words: list
    distributions: list  # WordDistribution, word-major then space order

    def to_dict(self):
        return {
            "topic_label": self.topic_label,
            "pole_label_a": self.pole_label_a,
            "pole_label_b": self.pole_label_b,
            "space_labels": list(self.space_labels),
            "words": list(self.words),
            "distributions": [d.to_dict() for d in self.distributions],
        }

    @classmethod
    def from_dict(cls, raw):
        return cls(
            topic_label=raw["topic_label"],
            pole_label_a=raw["pole_label_a"],
            pole_label_b=raw["pole_label_b"],
            space_labels=list(raw["space_labels"]),
            words=list(raw["words"]),
            distributions=[WordDistribution(**d) for d in raw["distributions"]],
        )


def _betas(topic, space, poles):
    beta_a = math.fsum(
        math.fsum(cosine(space.vector(w), space.vector(a)) for a in poles.words_a)
        / len(poles.words_a)
        for w in topic.words
    )
    beta_b = math.fsum(
        math.fsum(cosine(space.vector(w), space.vector(b)) for b in poles.words_b)
        / len(poles.words_b)
        for w in topic.words
    )
    return beta_a, beta_b


def cumulative_data(
    topic: TopicWordset,
    space1: EmbeddingSpace,
    space2: EmbeddingSpace,
    poles: PoleWordsets,
) -> CumulativePlotData:
    """Per-space sums of mean pole associations; the cumulate dot of each bar
    is beta_a - beta_b, and the difference of the two cumulates is the SWEAT
    score."""
    bars = []
    for space in (space1, space2):
        space.require(topic.words + poles.words_a + poles.words_b, "plot inputs")
        beta_a, beta_b = _betas(topic, space, poles)
        bars.append(
            SpaceBar(
                label=space.label,
                beta_a=beta_a,
                beta_b=beta_b,
                cumulate=beta_a - beta_b,
            )
        )
    return CumulativePlotData(
        topic_label=topic.label,
        pole_label_a=poles.label_a,
        pole_label_b=poles.label_b,
        bars=bars,
    )


def detail_data(
    topic: TopicWordset,
    space1: EmbeddingSpace,
    space2: EmbeddingSpace,
    poles: PoleWordsets,
) -> DetailPlotData:
    """Per-word cosine distributions to each pole, in each space."""
    for space in (space1, space2):
        space.require(topic.words + poles.words_a + poles.words_b, "plot inputs")
    distributions = []
    for word in topic.words:
        for space in (space1, space2):
            wv = space.vector(word)
            delta_a = [cosine(wv, space.vector(a)) for a in poles.words_a]
            delta_b = [cosine(wv, space.vector(b)) for b in poles.words_b]
            mean_a = math.fsum(delta_a) / len(delta_a)
            mean_b = math.fsum(delta_b) / len(delta_b)
            distributions.append(
                WordDistribution(
                    word=word,
                    space_label=space.label,
                    delta_a=delta_a,
                    delta_b=delta_b,
                    mean_a=mean_a,
                    mean_b=mean_b,
                    dominant_pole="A" if mean_a >= mean_b else "B",
                )
            )
            # Definitional identity with the statistical core; cheap to keep
            # honest here rather than let the two drift apart.
            assert abs(
                (mean_a - mean_b) - single_word_association(word, space, poles)
            ) < 1e-12
    return DetailPlotData(
        topic_label=topic.label,
        pole_label_a=poles.label_a,
        pole_label_b=poles.label_b,
        space_labels=[space1.label, space2.label],
        words=list(topic.words),
        distributions=distributions,
    )


def _f(v: float) -> str:
    return f"{v:.2f}"


def _tick(v: float) -> str:
    return f"{v:.4g}"


class _Svg:
    def __init__(self, width, height):
        self.width = width
        self.height = height
        self.parts = [
            '<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">\n'
        ]

    def rect(self, x, y, w, h, fill, extra=""):
        self.parts.append(
            f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}" '
            f'fill="{fill}"{extra}/>\n'
        )

    def line(self, x1, y1, x2, y2, stroke, width=1.0):
        self.parts.append(
            f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
            f'stroke="{stroke}" stroke-width="{_f(width)}"/>\n'
        )

    def circle(self, cx, cy, r, fill, cls=""):
        attr = f' class="{cls}"' if cls else ""
        self.parts.append(
            f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r)}" '
            f'fill="{fill}"{attr}/>\n'
        )

    def polygon(self, points, fill):
        pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in points)
        self.parts.append(f'<polygon points="{pts}" fill="{fill}"/>\n')

    def text(self, x, y, s, size=12, anchor="start", fill="#000000"):
        self.parts.append(
            f'<text x="{_f(x)}" y="{_f(y)}" font-family="sans-serif" '
            f'font-size="{size}" text-anchor="{anchor}" fill="{fill}">'
            f"{escape(s)}</text>\n"
        )

    def write(self, path):
        self.parts.append("</svg>\n")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("".join(self.parts))


class _Scale:
    """Linear value -> pixel map over a symmetric-around-zero domain."""

    def __init__(self, vmin, vmax, px_min, px_max):
        self.vmin = vmin
        self.vmax = vmax
        self.px_min = px_min
        self.px_max = px_max

    def __call__(self, v):
        span = self.vmax - self.vmin
        return self.px_min + (v - self.vmin) / span * (self.px_max - self.px_min)


def _symmetric_domain(magnitudes):
    m = max((abs(v) for v in magnitudes), default=0.0)
    if m == 0.0:
        m = 1.0
    return -1.1 * m, 1.1 * m


def _axis(svg, scale, y):
    svg.line(scale.px_min, y, scale.px_max, y, "#555555")
    for v in (scale.vmin, 0.0, scale.vmax):
        x = scale(v)
        svg.line(x, y, x, y + 5, "#555555")
        svg.text(x, y + 18, _tick(v), size=10, anchor="middle")


def render_cumulative(
    data: CumulativePlotData,
    path: str,
    width: int = 640,
    color_a: str = COLOR_A,
    color_b: str = COLOR_B,
) -> None:
    """Centered horizontal stacked bars, one per space: pole-A mass drawn
    rightward, pole-B mass leftward, black cumulate dot at beta_a - beta_b.
    The horizontal scale auto-fits the data and is printed on the axis."""
    margin_l, margin_r, top, row_h, axis_h = 100, 30, 56, 64, 30
    height = top + row_h * len(data.bars) + axis_h
    svg = _Svg(width, height)

    vmin, vmax = _symmetric_domain(
        [v for b in data.bars for v in (b.beta_a, -b.beta_b, b.cumulate)]
    )
    scale = _Scale(vmin, vmax, margin_l, width - margin_r)

    svg.text(margin_l, 20, f"topic: {data.topic_label}", size=14)
    svg.rect(margin_l, 30, 10, 10, color_a)
    svg.text(margin_l + 14, 39, data.pole_label_a, size=11)
    svg.rect(margin_l + 130, 30, 10, 10, color_b)
    svg.text(margin_l + 144, 39, data.pole_label_b, size=11)

    x_zero = scale(0.0)
    for i, bar in enumerate(data.bars):
        y = top + i * row_h
        bar_h = 26.0
        y_bar = y + (row_h - bar_h) / 2.0
        svg.text(margin_l - 8, y_bar + bar_h / 2 + 4, bar.label, anchor="end")
        # A mass rightward from zero, B mass on the negative side.
        xa = scale(bar.beta_a)
        svg.rect(min(x_zero, xa), y_bar, abs(xa - x_zero), bar_h, color_a)
        xb = scale(-bar.beta_b)
        svg.rect(min(x_zero, xb), y_bar, abs(xb - x_zero), bar_h, color_b)
        svg.circle(
            scale(bar.cumulate), y_bar + bar_h / 2.0, 5, COLOR_CUMULATE,
            cls="cumulate",
        )
    svg.line(x_zero, top, x_zero, top + row_h * len(data.bars), "#888888")
    _axis(svg, scale, top + row_h * len(data.bars) + 4)
    svg.write(path)


def _boxplot(svg, scale, values, y, half_h, color):
    vals = np.asarray(values, dtype=np.float64)
    lo, hi = float(vals.min()), float(vals.max())
    q1 = float(np.percentile(vals, 25, method="linear"))
    q3 = float(np.percentile(vals, 75, method="linear"))
    mean = math.fsum(values) / len(values)
    svg.line(scale(lo), y, scale(hi), y, color)
    svg.rect(scale(q1), y - half_h, max(scale(q3) - scale(q1), 0.0),
             2 * half_h, color, extra=' fill-opacity="0.35"')
    for v in (lo, hi):
        svg.line(scale(v), y - half_h, scale(v), y + half_h, color)
    # Belt marks the mean, not the median.
    svg.line(scale(mean), y - half_h, scale(mean), y + half_h, color, width=2.0)
    return mean


def _arrow(svg, scale, mean_a, mean_b, y, color):
    x1, x2 = scale(mean_a), scale(mean_b)
    svg.line(x1, y, x2, y, color, width=1.5)
    head = 5.0 if x2 >= x1 else -5.0
    svg.polygon(
        [(x2, y), (x2 - head, y - 3.5), (x2 - head, y + 3.5)], color
    )


def render_detail(
    data: DetailPlotData,
    path: str,
    panel_width: int = 360,
    color_a: str = COLOR_A,
    color_b: str = COLOR_B,
) -> None:
    """Two side-by-side canvasses (one per space); each topic word gets a
    pair of pole-colored boxplots with mean belts, min/max whiskers, and an
    arrow from mean_a to mean_b colored by the dominant pole."""
    colors = {"A": color_a, "B": color_b}
    margin_l, gap, margin_r, top, row_h, axis_h = 90, 40, 20, 64, 56, 30
    width = margin_l + 2 * panel_width + gap + margin_r
    height = top + row_h * len(data.words) + axis_h
    svg = _Svg(width, height)

    all_vals = [
        v for d in data.distributions for v in list(d.delta_a) + list(d.delta_b)
    ]
    vmin, vmax = _symmetric_domain(all_vals)

    svg.text(margin_l, 20, f"topic: {data.topic_label}", size=14)
    svg.rect(margin_l, 30, 10, 10, color_a)
    svg.text(margin_l + 14, 39, data.pole_label_a, size=11)
    svg.rect(margin_l + 130, 30, 10, 10, color_b)
    svg.text(margin_l + 144, 39, data.pole_label_b, size=11)

    by_key = {(d.word, d.space_label): d for d in data.distributions}
    for panel, space_label in enumerate(data.space_labels):
        px_min = margin_l + panel * (panel_width + gap)
        scale = _Scale(vmin, vmax, px_min, px_min + panel_width)
        svg.text((px_min + px_min + panel_width) / 2, 52, space_label,
                 size=12, anchor="middle")
        for i, word in enumerate(data.words):
            d = by_key[(word, space_label)]
            y = top + i * row_h
            if panel == 0:
                svg.text(margin_l - 8, y + row_h / 2 + 4, word, anchor="end")
            y_a = y + row_h * 0.30
            y_b = y + row_h * 0.70
            _boxplot(svg, scale, d.delta_a, y_a, 7.0, color_a)
            _boxplot(svg, scale, d.delta_b, y_b, 7.0, color_b)
            _arrow(svg, scale, d.mean_a, d.mean_b, y + row_h * 0.5,
                   colors[d.dominant_pole])
        _axis(svg, scale, top + row_h * len(data.words) + 4)
    svg.write(path)
