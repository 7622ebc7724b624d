"""Verse-aligned corpus model: loading, saving, cleaning, and alignment.

A corpus lives in a directory holding two files:

* ``manifest.json``: identity and provenance
  (``{"id", "title", "translator", "language", "source"}``)
* ``verses.jsonl``: one verse per line,
  ``{"chapter": int, "verse": int, "text": str}``, UTF-8, LF endings

Cleaning turns raw verse text into a single normalized line:

* Unicode NFC normalization
* verse-numbering tokens removed ("1.1", "||2-47||", "॥१-१॥",
  standalone digit groups)
* line breaks collapsed to single spaces
* characters outside a conservative charset dropped: letters and
  combining marks, digits inside words, apostrophes, hyphens, and
  basic sentence punctuation (danda included)
* whitespace collapsed, edges trimmed

Cleaning is idempotent and never invents text. Devanagari letters pass
through untouched so a Sanskrit source survives the round trip to a
translation provider.
"""

from __future__ import annotations

import json
import logging
import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CorpusError

log = logging.getLogger(__name__)

# A whitespace-delimited token of digits plus verse-number separators
# (dot, hyphen/dashes, pipe, danda) with at least one digit. \d also
# matches Devanagari digits.
_NUMBERING = re.compile(r"(?<!\S)[\d.\-–—|।॥]*\d[\d.\-–—|।॥]*(?!\S)")
_LINE_BREAKS = re.compile(r"[\r\n\v\f  ]+")

# Typographic variants folded to plain ASCII before the charset filter.
_CHAR_EQUIV = str.maketrans({
    "‘": "'", "’": "'", "ʼ": "'",
    "“": '"', "”": '"', "„": '"',
    "–": "-", "—": "-", "―": "-",
})

# Basic sentence punctuation kept by the charset filter. Danda (।, ॥)
# stays so Devanagari sentence structure survives.
_ALLOWED_PUNCT = frozenset(".,;:!?\"'-।॥")


def _filter_token(token: str) -> str:
    has_letter = any(unicodedata.category(c)[0] in ("L", "M") for c in token)
    had_digit = any(unicodedata.category(c)[0] == "N" for c in token)
    if had_digit and not has_letter:
        # residual numbering glued to punctuation, e.g. "18.78:"
        return ""
    out = []
    for c in token:
        cat = unicodedata.category(c)[0]
        if cat in ("L", "M"):
            out.append(c)
        elif cat == "N":
            if has_letter:
                out.append(c)
        elif c in _ALLOWED_PUNCT:
            out.append(c)
    return "".join(out)


def clean_verse(raw: str) -> str:
    """Normalize one raw verse to a single clean line. Total and idempotent."""
    text = unicodedata.normalize("NFC", raw)
    text = _NUMBERING.sub(" ", text)
    text = _LINE_BREAKS.sub(" ", text)
    text = text.translate(_CHAR_EQUIV)
    parts = []
    for token in text.split():
        kept = _filter_token(token)
        if kept:
            parts.append(kept)
    return " ".join(parts)


@dataclass(frozen=True, order=True)
class VerseRef:
    """(chapter, verse) coordinate; totally ordered by chapter then verse."""

    chapter: int
    verse: int

    def __post_init__(self) -> None:
        if self.chapter < 1 or self.verse < 1:
            raise ValueError(f"chapter and verse must be >= 1, got {self.chapter}.{self.verse}")

    def __str__(self) -> str:
        return f"{self.chapter}.{self.verse}"


@dataclass(frozen=True)
class Verse:
    ref: VerseRef
    raw_text: str
    clean_text: str

    @classmethod
    def from_raw(cls, ref: VerseRef, raw_text: str) -> "Verse":
        return cls(ref=ref, raw_text=raw_text, clean_text=clean_verse(raw_text))


@dataclass(frozen=True)
class TranslationCorpus:
    """One translator's verse collection. Immutable after construction."""

    id: str
    title: str
    translator: str
    language: str
    verses: dict[VerseRef, Verse] = field(default_factory=dict)
    source: str = ""

    def __len__(self) -> int:
        return len(self.verses)

    def __iter__(self):
        for ref in self.refs():
            yield self.verses[ref]

    def refs(self) -> list[VerseRef]:
        return sorted(self.verses)

    def chapters(self) -> list[int]:
        return sorted({ref.chapter for ref in self.verses})


def load_corpus(directory_path: str | Path) -> TranslationCorpus:
    """Read manifest.json + verses.jsonl from a corpus directory."""
    directory = Path(directory_path)
    manifest_path = directory / "manifest.json"
    verses_path = directory / "verses.jsonl"
    if not manifest_path.is_file():
        raise CorpusError(f"missing manifest: {manifest_path}")
    if not verses_path.is_file():
        raise CorpusError(f"missing verses file: {verses_path}")

    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CorpusError(f"{manifest_path}: malformed JSON: {exc}") from exc
    for key in ("id", "title", "translator", "language"):
        if not isinstance(manifest.get(key), str):
            raise CorpusError(f"{manifest_path}: missing or non-string field {key!r}")
    corpus_id = manifest["id"]
    if not corpus_id or any(c.isspace() for c in corpus_id):
        raise CorpusError(f"{manifest_path}: corpus id must be a non-empty token without whitespace")

    verses: dict[VerseRef, Verse] = {}
    with verses_path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{verses_path}:{lineno}: malformed JSONL line: {exc}") from exc
            try:
                chapter = record["chapter"]
                verse_no = record["verse"]
                text = record["text"]
            except (KeyError, TypeError) as exc:
                raise CorpusError(f"{verses_path}:{lineno}: record must have chapter, verse, text") from exc
            if not isinstance(chapter, int) or not isinstance(verse_no, int):
                raise CorpusError(f"{verses_path}:{lineno}: chapter and verse must be integers")
            if not isinstance(text, str) or not text:
                raise CorpusError(f"{verses_path}:{lineno}: empty text field")
            try:
                ref = VerseRef(chapter, verse_no)
            except ValueError as exc:
                raise CorpusError(f"{verses_path}:{lineno}: {exc}") from exc
            if ref in verses:
                raise CorpusError(f"{verses_path}:{lineno}: duplicate verse reference {ref}")
            verses[ref] = Verse.from_raw(ref, text)

    return TranslationCorpus(
        id=corpus_id,
        title=manifest["title"],
        translator=manifest["translator"],
        language=manifest["language"],
        verses=verses,
        source=manifest.get("source", ""),
    )


def save_corpus(corpus: TranslationCorpus, directory_path: str | Path) -> Path:
    """Write a corpus back to the directory layout; raw text round-trips byte-exact."""
    directory = Path(directory_path)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = {
        "id": corpus.id,
        "title": corpus.title,
        "translator": corpus.translator,
        "language": corpus.language,
        "source": corpus.source,
    }
    with (directory / "manifest.json").open("w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    with (directory / "verses.jsonl").open("w", encoding="utf-8", newline="\n") as fh:
        for ref in corpus.refs():
            row = {"chapter": ref.chapter, "verse": ref.verse, "text": corpus.verses[ref].raw_text}
            fh.write(json.dumps(row, ensure_ascii=False))
            fh.write("\n")
    return directory


def align(a: TranslationCorpus, b: TranslationCorpus) -> list[tuple[VerseRef, Verse, Verse]]:
    """Pair verses present in both corpora, sorted by ref; warn on the rest."""
    refs_a = set(a.verses)
    refs_b = set(b.verses)
    for ref in sorted(refs_a - refs_b):
        log.warning("verse %s present in %s but not in %s", ref, a.id, b.id)
    for ref in sorted(refs_b - refs_a):
        log.warning("verse %s present in %s but not in %s", ref, b.id, a.id)
    return [(ref, a.verses[ref], b.verses[ref]) for ref in sorted(refs_a & refs_b)]


def chapter_slice(corpus: TranslationCorpus, chapter: int) -> list[Verse]:
    """All verses of one chapter, sorted by verse index; empty if absent."""
    if chapter < 1:
        raise ValueError(f"chapter must be >= 1, got {chapter}")
    refs = sorted(ref for ref in corpus.verses if ref.chapter == chapter)
    return [corpus.verses[ref] for ref in refs]


def bundled_corpus_dir(corpus_id: str) -> Path:
    """Directory of a corpus shipped inside the package."""
    from importlib import resources

    root = resources.files("verse_eval").joinpath("data", "corpora", corpus_id)
    path = Path(str(root))
    if not path.is_dir():
        raise CorpusError(f"no bundled corpus named {corpus_id!r}")
    return path
