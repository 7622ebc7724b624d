"""Render evaluation artifacts: agreement tables, n-gram charts, heatmaps.

Every renderer is a pure function from values to bytes-stable text:
SVG is hand-templated markup (no plotting library), numbers are
formatted with explicit precision and a period decimal separator, and
CSV/JSON carry the same rounded values. Identical inputs therefore
produce byte-identical artifacts on any platform.

Output layout under the report directory:

* ``<a>-<b>/jaccard.{csv,json}``: per-chapter label-agreement table
* ``<a>-<b>/cosine.{csv,json}``: per-chapter mean(std) similarity table
* ``<corpus>/ngrams_{2,3}.{csv,svg}``: top n-gram tables and bar charts
* ``<corpus>/heatmap.svg``: 10x10 label co-occurrence heatmap
* ``<corpus>/sentiment_cumulative.svg``: per-label verse counts
* ``extremes_{most,least}.{csv,json}``: highest/lowest scoring verses
"""

from __future__ import annotations

import csv
import io
import math
import re
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

from .corpus import TranslationCorpus
from .errors import ValidationError
from .semantic import (
    ChapterStats,
    SimilarityRecord,
    all_chapter_stats,
    embed_corpus,
    extremes,
    pooled_stats,
    verse_similarities,
)
from .sentiment import (
    CANONICAL_LABELS,
    chapter_jaccard,
    cooccurrence,
    cumulative_counts,
    predict_corpus,
)
from .textstats import top_ngrams

FORMATS = ("csv", "json", "svg")

_COSINE_CELL = re.compile(r"^(-?\d+\.\d{2})\((\d+\.\d{3})\)$")


def _csv_text(rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def render_jaccard_table(columns: dict[str, list[tuple[int, float]]]) -> tuple[str, dict]:
    """Chapter rows plus an Average row (mean of the chapter values).

    ``columns`` maps a pair label to its (chapter, score) sequence; all
    columns must cover the same chapters in the same order. Returns
    (csv text, json document) carrying identical numbers: the CSV shows
    3 decimals, the JSON holds the same values rounded to 3 decimals.
    """
    if not columns:
        raise ValidationError("jaccard table needs at least one column")
    labels = list(columns)
    chapters = [ch for ch, _ in columns[labels[0]]]
    if not chapters:
        raise ValidationError("jaccard table needs at least one chapter row")
    for label in labels:
        if [ch for ch, _ in columns[label]] != chapters:
            raise ValidationError(f"column {label!r} covers different chapters")

    averages = {
        label: math.fsum(v for _, v in columns[label]) / len(chapters) for label in labels
    }
    rows: list[list[str]] = [["chapter", *labels]]
    for i, chapter in enumerate(chapters):
        rows.append([str(chapter)] + [f"{columns[label][i][1]:.3f}" for label in labels])
    rows.append(["Average"] + [f"{averages[label]:.3f}" for label in labels])

    doc = {
        "chapters": chapters,
        "columns": [
            {
                "pair": label,
                "scores": [round(v, 3) for _, v in columns[label]],
                "average": round(averages[label], 3),
            }
            for label in labels
        ],
    }
    return _csv_text(rows), doc


def format_cosine_cell(mean: float, std: float) -> str:
    """Mean to 2 decimals, population std in brackets to 3: ``0.52(0.156)``."""
    return f"{mean:.2f}({std:.3f})"


def parse_cosine_cell(cell: str) -> tuple[float, float]:
    match = _COSINE_CELL.match(cell)
    if match is None:
        raise ValidationError(f"not a mean(std) cell: {cell!r}")
    return float(match.group(1)), float(match.group(2))


def render_cosine_table(
    columns: dict[str, list[ChapterStats]],
    pooled: dict[str, ChapterStats] | None = None,
) -> tuple[str, dict]:
    """Chapter rows of mean(std) cells plus an Average row.

    The Average cell is the mean of the chapter means with the mean of
    the chapter stds in brackets. A pooled per-verse mean/std can be
    supplied per column; it is emitted in the JSON document only.
    """
    if not columns:
        raise ValidationError("cosine table needs at least one column")
    labels = list(columns)
    chapters = [s.chapter for s in columns[labels[0]]]
    if not chapters:
        raise ValidationError("cosine table needs at least one chapter row")
    for label in labels:
        if [s.chapter for s in columns[label]] != chapters:
            raise ValidationError(f"column {label!r} covers different chapters")

    rows: list[list[str]] = [["chapter", *labels]]
    for i, chapter in enumerate(chapters):
        rows.append(
            [str(chapter)]
            + [format_cosine_cell(columns[label][i].mean, columns[label][i].std) for label in labels]
        )
    averages = {}
    for label in labels:
        stats = columns[label]
        averages[label] = (
            math.fsum(s.mean for s in stats) / len(stats),
            math.fsum(s.std for s in stats) / len(stats),
        )
    rows.append(["Average"] + [format_cosine_cell(*averages[label]) for label in labels])

    doc_columns = []
    for label in labels:
        entry = {
            "pair": label,
            "cells": [
                {"chapter": s.chapter, "mean": round(s.mean, 2), "std": round(s.std, 3), "n": s.n}
                for s in columns[label]
            ],
            "average": {
                "mean": round(averages[label][0], 2),
                "std": round(averages[label][1], 3),
            },
        }
        if pooled is not None and label in pooled:
            entry["pooled"] = {
                "mean": round(pooled[label].mean, 2),
                "std": round(pooled[label].std, 3),
                "n": pooled[label].n,
            }
        doc_columns.append(entry)
    doc = {"chapters": chapters, "columns": doc_columns}
    return _csv_text(rows), doc


def similarity_csv(records: Sequence[SimilarityRecord]) -> str:
    """Verse-level scores: ``chapter, verse, score, pair`` (score to 6 decimals)."""
    rows: list[list[str]] = [["chapter", "verse", "score", "pair"]]
    for r in records:
        rows.append([str(r.ref.chapter), str(r.ref.verse), f"{r.score:.6f}", f"{r.pair[0]}-{r.pair[1]}"])
    return _csv_text(rows)


def similarity_json(records: Sequence[SimilarityRecord]) -> list[dict]:
    return [
        {
            "chapter": r.ref.chapter,
            "verse": r.ref.verse,
            "score": round(r.score, 6),
            "pair": f"{r.pair[0]}-{r.pair[1]}",
        }
        for r in records
    ]


def ngram_csv(entries: Sequence[tuple[tuple[str, ...], int]]) -> str:
    rows: list[list[str]] = [["ngram", "count"]]
    for gram, count in entries:
        rows.append([" ".join(gram), str(count)])
    return _csv_text(rows)


def render_bars_svg(entries: Sequence[tuple[str, float]], title: str) -> str:
    """Horizontal bar chart; bars keep the given order, ties included."""
    if not entries:
        raise ValidationError("bar chart needs at least one entry")
    width = 900
    left, right = 280, 80
    top, row_h, bar_h = 56, 30, 22
    plot_w = width - left - right
    height = top + row_h * len(entries) + 20
    max_value = max(value for _, value in entries)
    scale = plot_w / max_value if max_value > 0 else 0.0

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
        f'<text x="{width // 2}" y="28" text-anchor="middle" font-size="16" fill="#1a1a1a">{escape(title)}</text>',
    ]
    for i, (label, value) in enumerate(entries):
        y = top + i * row_h
        bar_w = f"{value * scale:.2f}"
        value_text = str(int(value)) if float(value).is_integer() else f"{value:.3f}"
        parts.append(f'<rect x="{left}" y="{y}" width="{bar_w}" height="{bar_h}" fill="#4878a8"/>')
        parts.append(
            f'<text x="{left - 8}" y="{y + 15}" text-anchor="end" font-size="12" '
            f'fill="#1a1a1a">{escape(label)}</text>'
        )
        parts.append(
            f'<text x="{left + float(bar_w) + 6:.2f}" y="{y + 15}" text-anchor="start" '
            f'font-size="12" fill="#1a1a1a">{escape(value_text)}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_heatmap_svg(
    matrix: Sequence[Sequence[int]],
    title: str,
    labels: Sequence[str] = CANONICAL_LABELS,
) -> str:
    """Square count grid, shading linear in the maximum count, values printed."""
    n = len(labels)
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise ValidationError(f"heatmap needs a {n}x{n} matrix")
    cell = 46
    left, top = 130, 96
    width = left + n * cell + 30
    height = top + n * cell + 30
    max_count = max((value for row in matrix for value in row), default=0)
    denom = max_count if max_count > 0 else 1

    def shade(value: int) -> tuple[str, str]:
        frac = value / denom
        r = round(255 + (31 - 255) * frac)
        g = round(255 + (58 - 255) * frac)
        b = round(255 + (95 - 255) * frac)
        text = "#ffffff" if frac > 0.55 else "#1a1a1a"
        return f"#{r:02x}{g:02x}{b:02x}", text

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
        f'<text x="{width // 2}" y="26" text-anchor="middle" font-size="16" fill="#1a1a1a">{escape(title)}</text>',
    ]
    for j, label in enumerate(labels):
        x = left + j * cell + cell // 2
        parts.append(
            f'<text x="{x}" y="{top - 10}" text-anchor="start" font-size="11" fill="#1a1a1a" '
            f'transform="rotate(-50 {x} {top - 10})">{escape(label)}</text>'
        )
    for i, label in enumerate(labels):
        y = top + i * cell
        parts.append(
            f'<text x="{left - 8}" y="{y + cell // 2 + 4}" text-anchor="end" font-size="11" '
            f'fill="#1a1a1a">{escape(label)}</text>'
        )
        for j in range(n):
            value = matrix[i][j]
            fill, text_fill = shade(value)
            x = left + j * cell
            parts.append(
                f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" fill="{fill}" '
                f'stroke="#d0d0d0" stroke-width="1"/>'
            )
            parts.append(
                f'<text x="{x + cell // 2}" y="{y + cell // 2 + 4}" text-anchor="middle" '
                f'font-size="11" fill="{text_fill}">{value}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _write(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def _json_text(doc) -> str:
    import json

    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


def generate_report(
    corpora: dict[str, TranslationCorpus],
    pairs: Sequence[tuple[str, str]],
    out_dir: str | Path,
    embedding_provider,
    sentiment_provider,
    chapters: Sequence[int] | None = None,
    formats: Sequence[str] = FORMATS,
    threshold: float = 0.5,
    stoplist=None,
    top_k: int = 10,
    extremes_k: int = 10,
    skip_both_empty: bool = False,
) -> list[Path]:
    """Run the full pipeline and write every artifact for the requested formats."""
    if not pairs:
        raise ValidationError("report needs at least one corpus pair")
    formats = tuple(formats)
    if not formats:
        raise ValidationError("report needs at least one output format")
    for fmt in formats:
        if fmt not in FORMATS:
            raise ValidationError(f"unknown format {fmt!r}; choose from {FORMATS}")
    for a, b in pairs:
        for cid in (a, b):
            if cid not in corpora:
                raise ValidationError(f"pair references unknown corpus {cid!r}")

    out = Path(out_dir)
    want_csv = "csv" in formats
    want_json = "json" in formats
    want_svg = "svg" in formats

    corpus_ids: list[str] = []
    for a, b in pairs:
        for cid in (a, b):
            if cid not in corpus_ids:
                corpus_ids.append(cid)

    predictions = {cid: predict_corpus(sentiment_provider, corpora[cid], threshold) for cid in corpus_ids}
    embeddings = {cid: embed_corpus(embedding_provider, corpora[cid]) for cid in corpus_ids}

    written: list[Path] = []
    all_records: list[SimilarityRecord] = []

    for a, b in pairs:
        pair_label = f"{a}-{b}"
        pair_dir = out / pair_label

        preds_a, preds_b = predictions[a], predictions[b]
        common_refs = sorted(set(preds_a.per_verse) & set(preds_b.per_verse))
        if chapters is None:
            pair_chapters = sorted({ref.chapter for ref in common_refs})
        else:
            pair_chapters = list(chapters)
        if not pair_chapters:
            raise ValidationError(f"no common chapters for pair {pair_label}")
        jacc_column = [
            (ch, chapter_jaccard(preds_a, preds_b, ch, skip_both_empty=skip_both_empty))
            for ch in pair_chapters
        ]
        jacc_csv, jacc_doc = render_jaccard_table({pair_label: jacc_column})
        if want_csv:
            written.append(_write(pair_dir / "jaccard.csv", jacc_csv))
        if want_json:
            written.append(_write(pair_dir / "jaccard.json", _json_text(jacc_doc)))

        records = verse_similarities(embeddings[a], embeddings[b])
        records = [r for r in records if r.ref.chapter in set(pair_chapters)]
        if not records:
            raise ValidationError(f"no verse similarities for pair {pair_label}")
        stats = all_chapter_stats(records)
        cos_csv, cos_doc = render_cosine_table(
            {pair_label: stats}, pooled={pair_label: pooled_stats(records)}
        )
        if want_csv:
            written.append(_write(pair_dir / "cosine.csv", cos_csv))
        if want_json:
            written.append(_write(pair_dir / "cosine.json", _json_text(cos_doc)))
        all_records.extend(records)

    for cid in corpus_ids:
        corpus_dir = out / cid
        for n in (2, 3):
            entries = top_ngrams(corpora[cid], n, top_k, stoplist)
            if want_csv:
                written.append(_write(corpus_dir / f"ngrams_{n}.csv", ngram_csv(entries)))
            if want_svg and entries:
                bars = [(" ".join(gram), count) for gram, count in entries]
                svg = render_bars_svg(bars, f"Top {n}-grams: {cid}")
                written.append(_write(corpus_dir / f"ngrams_{n}.svg", svg))
        if want_svg:
            matrix = cooccurrence(predictions[cid])
            written.append(
                _write(corpus_dir / "heatmap.svg", render_heatmap_svg(matrix, f"Label co-occurrence: {cid}"))
            )
            counts = cumulative_counts(predictions[cid])
            bars = [(label, counts[label]) for label in CANONICAL_LABELS]
            written.append(
                _write(
                    corpus_dir / "sentiment_cumulative.svg",
                    render_bars_svg(bars, f"Cumulative sentiments: {cid}"),
                )
            )

    for direction in ("most", "least"):
        chosen = extremes(all_records, extremes_k, direction)
        if want_csv:
            written.append(_write(out / f"extremes_{direction}.csv", similarity_csv(chosen)))
        if want_json:
            written.append(_write(out / f"extremes_{direction}.json", _json_text(similarity_json(chosen))))

    return written
