"""Command-line surface for the evaluation pipeline.

Subcommands: ingest, translate, ngrams, sentiment predict, sentiment
summary, jaccard, embed, semantic, keywords, report. Data goes to files
or stdout; diagnostics go to stderr. Exit codes: 0 success, 2 usage
error, 1 runtime error.

Environment: VERSE_EVAL_ENDPOINT overrides the inference-service URL
for http providers, VERSE_EVAL_CACHE sets the translation cache path.
Prediction files inside a --preds-dir are found as <id>.preds.jsonl.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import acquire, corpus, providers, report, semantic, sentiment, textstats
from .errors import ConfigError, VerseEvalError


def parse_chapters(spec: str) -> list[int] | None:
    """Comma list with ranges: "3,5,7-12,15-17". "all" selects everything."""
    spec = spec.strip()
    if not spec:
        raise ConfigError("empty chapter selection")
    if spec.lower() == "all":
        return None
    chapters: set[int] = set()
    for part in spec.split(","):
        part = part.strip()
        if not part:
            raise ConfigError(f"empty item in chapter selection {spec!r}")
        if "-" in part:
            lo_text, hi_text = part.split("-", 1)
            try:
                lo, hi = int(lo_text), int(hi_text)
            except ValueError as exc:
                raise ConfigError(f"bad chapter range {part!r}") from exc
            if lo < 1 or hi < lo:
                raise ConfigError(f"bad chapter range {part!r}")
            chapters.update(range(lo, hi + 1))
        else:
            try:
                value = int(part)
            except ValueError as exc:
                raise ConfigError(f"bad chapter number {part!r}") from exc
            if value < 1:
                raise ConfigError(f"bad chapter number {part!r}")
            chapters.add(value)
    return sorted(chapters)


def _chapters_flag(text: str) -> list[int] | None:
    try:
        return parse_chapters(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _print_table(headers: list[str], rows: list[list[str]]) -> None:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    print("  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip())
    for row in rows:
        print("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())


def _add_provider_flags(parser: argparse.ArgumentParser, default_kind: str = "mock") -> None:
    parser.add_argument("--provider", choices=("mock", "file", "http"), default=default_kind,
                        help="provider kind (default: %(default)s)")
    parser.add_argument("--store", help="store file for the file provider")
    parser.add_argument("--endpoint", help="service URL for the http provider "
                                           "(default: $VERSE_EVAL_ENDPOINT)")
    parser.add_argument("--batch-size", type=int, default=25, help="texts per request (default: %(default)s)")
    parser.add_argument("--timeout", type=float, default=30.0, help="request timeout in seconds")
    parser.add_argument("--max-retries", type=int, default=3, help="attempts per request (default: %(default)s)")


def _provider_config(args: argparse.Namespace) -> providers.ProviderConfig:
    endpoint = None
    file_path = None
    if args.provider == "http":
        endpoint = args.endpoint or os.environ.get("VERSE_EVAL_ENDPOINT")
        if not endpoint:
            raise ConfigError("http provider needs --endpoint or VERSE_EVAL_ENDPOINT")
    elif args.provider == "file":
        if not args.store:
            raise ConfigError("file provider needs --store")
        file_path = args.store
    return providers.ProviderConfig(
        kind=args.provider,
        endpoint=endpoint,
        file_path=file_path,
        batch_size=args.batch_size,
        timeout=args.timeout,
        max_retries=args.max_retries,
    )


def _stoplist(args: argparse.Namespace) -> frozenset[str] | None:
    if getattr(args, "keep_stopwords", False):
        return frozenset()
    if getattr(args, "stoplist", None):
        return textstats.load_stoplist(args.stoplist)
    return None


def _cmd_ingest(args: argparse.Namespace) -> int:
    loaded = corpus.load_corpus(args.dir)
    chapters = loaded.chapters()
    span = f"{chapters[0]}-{chapters[-1]}" if chapters else "none"
    print(f"{loaded.id}: {len(loaded)} verses, chapters {span} ({loaded.title})")
    if args.out:
        corpus.save_corpus(loaded, args.out)
        print(f"saved to {args.out}")
    return 0


def _cmd_translate(args: argparse.Namespace) -> int:
    source = corpus.load_corpus(args.source)
    config = _provider_config(args)
    provider = providers.translation_provider(
        config, source_lang=args.source_lang, target_lang=args.target_lang
    )
    cache_path = args.cache or os.environ.get("VERSE_EVAL_CACHE") or (
        Path(args.out) / "translations.cache.jsonl"
    )
    cache = acquire.TranslationCache(cache_path)
    built = acquire.build_parallel_corpus(
        source,
        provider,
        corpus_id=args.id,
        cache=cache,
        title=args.title,
        language=args.target_lang,
        batch_size=args.batch_size,
        rate_limit=args.rate_limit,
        max_retries=args.max_retries,
        parallelism=args.parallelism,
    )
    corpus.save_corpus(built, args.out)
    failed = len(source) - len(built)
    print(f"{built.id}: {len(built)} verses translated, {failed} failed, cache at {cache_path}")
    return 0


def _cmd_ngrams(args: argparse.Namespace) -> int:
    loaded = corpus.load_corpus(args.corpus)
    entries = textstats.top_ngrams(loaded, args.n, args.k, _stoplist(args))
    if args.csv:
        Path(args.csv).parent.mkdir(parents=True, exist_ok=True)
        Path(args.csv).write_text(report.ngram_csv(entries), encoding="utf-8")
        print(f"wrote {args.csv}")
    else:
        _print_table(["ngram", "count"], [[" ".join(g), str(c)] for g, c in entries])
    return 0


def _cmd_sentiment_predict(args: argparse.Namespace) -> int:
    loaded = corpus.load_corpus(args.corpus)
    provider = providers.sentiment_provider(_provider_config(args))
    preds = sentiment.predict_corpus(provider, loaded, threshold=args.threshold)
    sentiment.save_predictions(preds, args.out)
    print(f"wrote {args.out} ({len(preds.per_verse)} verses, threshold {args.threshold})")
    return 0


def _cmd_sentiment_summary(args: argparse.Namespace) -> int:
    preds = sentiment.load_predictions(args.preds)
    counts = sentiment.cumulative_counts(preds, chapter=args.chapter)
    rows = [[label, str(counts[label])] for label in sentiment.CANONICAL_LABELS]
    if args.csv:
        lines = ["label,count"] + [f"{label},{counts[label]}" for label in sentiment.CANONICAL_LABELS]
        Path(args.csv).parent.mkdir(parents=True, exist_ok=True)
        Path(args.csv).write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"wrote {args.csv}")
    else:
        scope = f"chapter {args.chapter}" if args.chapter else "all chapters"
        print(f"{preds.corpus_id} ({scope}):")
        _print_table(["label", "verses"], rows)
    return 0


def _load_preds_pair(args: argparse.Namespace) -> tuple:
    preds_dir = Path(args.preds_dir)
    path_a = preds_dir / f"{args.a}.preds.jsonl"
    path_b = preds_dir / f"{args.b}.preds.jsonl"
    return sentiment.load_predictions(path_a), sentiment.load_predictions(path_b)


def _cmd_jaccard(args: argparse.Namespace) -> int:
    preds_a, preds_b = _load_preds_pair(args)
    if args.chapters is None:
        chapters = sorted(
            {ref.chapter for ref in set(preds_a.per_verse) & set(preds_b.per_verse)}
        )
    else:
        chapters = args.chapters
    if not chapters:
        raise ConfigError(f"no common chapters between {args.a} and {args.b}")
    column = [
        (ch, sentiment.chapter_jaccard(preds_a, preds_b, ch, skip_both_empty=args.skip_empty))
        for ch in chapters
    ]
    rows = [[str(ch), f"{score:.3f}"] for ch, score in column]
    if len(column) > 1:
        import math

        rows.append(["Average", f"{math.fsum(s for _, s in column) / len(column):.3f}"])
    _print_table(["chapter", f"{args.a}-{args.b}"], rows)
    if args.csv:
        csv_text, _ = report.render_jaccard_table({f"{args.a}-{args.b}": column})
        Path(args.csv).parent.mkdir(parents=True, exist_ok=True)
        Path(args.csv).write_text(csv_text, encoding="utf-8")
        print(f"wrote {args.csv}")
    return 0


def _cmd_embed(args: argparse.Namespace) -> int:
    loaded = corpus.load_corpus(args.corpus)
    provider = providers.embedding_provider(_provider_config(args))
    embeddings = semantic.embed_corpus(provider, loaded)
    semantic.save_embeddings(embeddings, args.out)
    print(f"wrote {args.out} ({len(embeddings.per_verse)} vectors, dim {embeddings.dim})")
    return 0


def _cmd_semantic(args: argparse.Namespace) -> int:
    set_a = semantic.load_embeddings(args.a)
    set_b = semantic.load_embeddings(args.b)
    records = semantic.verse_similarities(set_a, set_b)
    if args.chapters is not None:
        wanted = set(args.chapters)
        records = [r for r in records if r.ref.chapter in wanted]
    if not records:
        raise ConfigError("no overlapping verses to compare")
    stats = semantic.all_chapter_stats(records)
    rows = [
        [str(s.chapter), report.format_cosine_cell(s.mean, s.std), str(s.n)] for s in stats
    ]
    pooled = semantic.pooled_stats(records)
    rows.append(["All", report.format_cosine_cell(pooled.mean, pooled.std), str(pooled.n)])
    _print_table(["chapter", "mean(std)", "verses"], rows)
    if args.extremes:
        for direction in ("most", "least"):
            print(f"{direction} similar:")
            for r in semantic.extremes(records, args.extremes, direction):
                print(f"  {r.ref}  {r.score:.6f}")
    if args.csv:
        Path(args.csv).parent.mkdir(parents=True, exist_ok=True)
        Path(args.csv).write_text(report.similarity_csv(records), encoding="utf-8")
        print(f"wrote {args.csv}")
    return 0


def _cmd_keywords(args: argparse.Namespace) -> int:
    if args.text:
        document = args.text
    else:
        loaded = corpus.load_corpus(args.corpus)
        document = " ".join(v.clean_text for v in loaded)
    provider = providers.embedding_provider(_provider_config(args))
    picked = semantic.mmr_keywords(
        document,
        provider,
        ngram_range=(args.ngram_min, args.ngram_max),
        k=args.k,
        lam=args.lam,
        stoplist=_stoplist(args),
    )
    _print_table(["phrase", "relevance"], [[p, f"{r:.4f}"] for p, r in picked])
    return 0


def _section(config: dict, name: str) -> dict:
    value = config.get(name, {})
    if not isinstance(value, dict):
        raise ConfigError(f"config section [{name}] must be a table")
    return value


def _provider_from_section(section: dict, batch_default: int = 25) -> providers.ProviderConfig:
    kind = section.get("provider", "mock")
    endpoint = section.get("endpoint") or os.environ.get("VERSE_EVAL_ENDPOINT")
    return providers.ProviderConfig(
        kind=kind,
        endpoint=endpoint if kind == "http" else None,
        file_path=section.get("store") if kind == "file" else None,
        batch_size=int(section.get("batch_size", batch_default)),
        timeout=float(section.get("timeout", 30.0)),
        max_retries=int(section.get("max_retries", 3)),
    )


def _cmd_report(args: argparse.Namespace) -> int:
    config_path = Path(args.config)
    if not config_path.is_file():
        raise ConfigError(f"config file not found: {config_path}")
    try:
        with config_path.open("rb") as fh:
            config = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{config_path}: invalid TOML: {exc}") from exc

    corpus_section = _section(config, "corpus")
    report_section = _section(config, "report")
    sentiment_section = _section(config, "sentiment")
    semantic_section = _section(config, "semantic")
    textstats_section = _section(config, "textstats")

    pairs_raw = report_section.get("pairs")
    if not isinstance(pairs_raw, list) or not pairs_raw:
        raise ConfigError("config needs report.pairs = [[\"a\", \"b\"], ...]")
    pairs: list[tuple[str, str]] = []
    for item in pairs_raw:
        if not isinstance(item, list) or len(item) != 2:
            raise ConfigError(f"bad pair entry {item!r}")
        pairs.append((str(item[0]), str(item[1])))

    corpus_root = Path(corpus_section.get("dir", "corpora"))
    ids = corpus_section.get("ids")
    if ids is None:
        ids = []
        for a, b in pairs:
            for cid in (a, b):
                if cid not in ids:
                    ids.append(cid)
    corpora = {cid: corpus.load_corpus(corpus_root / cid) for cid in ids}

    # flags win over the config file
    out_dir = args.out_dir or report_section.get("out_dir", "report")
    if args.chapters is not None:
        chapters = args.chapters
    else:
        chapters_text = report_section.get("chapters", "all")
        chapters = parse_chapters(str(chapters_text))
    if args.formats:
        formats = tuple(f.strip() for f in args.formats.split(",") if f.strip())
    else:
        formats = tuple(report_section.get("formats", list(report.FORMATS)))
    threshold = args.threshold if args.threshold is not None else float(
        sentiment_section.get("threshold", 0.5)
    )

    stoplist = None
    if textstats_section.get("stoplist"):
        stoplist = textstats.load_stoplist(textstats_section["stoplist"])

    embed_provider = providers.embedding_provider(_provider_from_section(semantic_section))
    sent_provider = providers.sentiment_provider(_provider_from_section(sentiment_section))

    written = report.generate_report(
        corpora,
        pairs,
        out_dir,
        embed_provider,
        sent_provider,
        chapters=chapters,
        formats=formats,
        threshold=threshold,
        stoplist=stoplist,
        top_k=int(report_section.get("top_k", 10)),
        extremes_k=int(report_section.get("extremes_k", 10)),
        skip_both_empty=bool(report_section.get("skip_both_empty", False)),
    )
    for path in written:
        print(path)
    print(f"{len(written)} artifacts in {out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="verse-eval",
        description="Compare verse-aligned translations: sentiment agreement, "
                    "semantic similarity, n-grams, keywords, reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate a corpus directory and summarize it")
    p.add_argument("--dir", required=True, help="corpus directory (manifest.json + verses.jsonl)")
    p.add_argument("--out", help="re-save the normalized corpus here")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("translate", help="build a machine-translated corpus")
    p.add_argument("--source", required=True, help="source corpus directory")
    p.add_argument("--id", required=True, help="id for the new corpus")
    p.add_argument("--out", required=True, help="output corpus directory")
    p.add_argument("--source-lang", default="sa")
    p.add_argument("--target-lang", default="en")
    p.add_argument("--cache", help="translation cache path (default: $VERSE_EVAL_CACHE "
                                   "or <out>/translations.cache.jsonl)")
    p.add_argument("--rate-limit", type=float, default=5.0, help="requests per second")
    p.add_argument("--parallelism", type=int, default=4, help="batches in flight")
    p.add_argument("--title", help="title for the new corpus")
    _add_provider_flags(p)
    p.set_defaults(func=_cmd_translate)

    p = sub.add_parser("ngrams", help="top n-grams of a corpus")
    p.add_argument("--corpus", required=True, help="corpus directory")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--stoplist", help="custom stopword file (one token per line)")
    p.add_argument("--keep-stopwords", action="store_true", help="skip stopword filtering")
    p.add_argument("--csv", help="write the table to this CSV file")
    p.set_defaults(func=_cmd_ngrams)

    p = sub.add_parser("sentiment", help="predict or summarize sentiment labels")
    sent_sub = p.add_subparsers(dest="subcommand", required=True)

    sp = sent_sub.add_parser("predict", help="predict per-verse probabilities")
    sp.add_argument("--corpus", required=True, help="corpus directory")
    sp.add_argument("--threshold", type=float, default=0.5)
    sp.add_argument("--out", required=True, help="predictions JSONL path")
    _add_provider_flags(sp)
    sp.set_defaults(func=_cmd_sentiment_predict)

    sp = sent_sub.add_parser("summary", help="per-label verse counts")
    sp.add_argument("--preds", required=True, help="predictions JSONL path")
    sp.add_argument("--chapter", type=int, help="restrict to one chapter")
    sp.add_argument("--csv", help="write label,count rows to this CSV file")
    sp.set_defaults(func=_cmd_sentiment_summary)

    p = sub.add_parser("jaccard", help="per-chapter label agreement between two prediction files")
    p.add_argument("--a", required=True, help="first corpus id (<id>.preds.jsonl in --preds-dir)")
    p.add_argument("--b", required=True, help="second corpus id")
    p.add_argument("--preds-dir", required=True, help="directory holding prediction files")
    p.add_argument("--chapters", type=_chapters_flag, default=None,
                   help='chapter selection like "3,5,7-12" (default: all common)')
    p.add_argument("--skip-empty", action="store_true",
                   help="skip verses where both label sets are empty")
    p.add_argument("--csv", help="write the table to this CSV file")
    p.set_defaults(func=_cmd_jaccard)

    p = sub.add_parser("embed", help="embed every verse of a corpus")
    p.add_argument("--corpus", required=True, help="corpus directory")
    p.add_argument("--out", required=True, help="embeddings JSONL path")
    _add_provider_flags(p)
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("semantic", help="verse similarity statistics between two embedding files")
    p.add_argument("--a", required=True, help="first embeddings JSONL")
    p.add_argument("--b", required=True, help="second embeddings JSONL")
    p.add_argument("--chapters", type=_chapters_flag, default=None)
    p.add_argument("--extremes", type=int, help="also list the k most/least similar verses")
    p.add_argument("--csv", help="write per-verse scores to this CSV file")
    p.set_defaults(func=_cmd_semantic)

    p = sub.add_parser("keywords", help="extract keywords with maximal marginal relevance")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--corpus", help="corpus directory (keywords of the whole text)")
    group.add_argument("--text", help="raw document text")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--lambda", dest="lam", type=float, default=0.5,
                   help="relevance/diversity trade-off in [0,1] (default: %(default)s)")
    p.add_argument("--ngram-min", type=int, default=1)
    p.add_argument("--ngram-max", type=int, default=3)
    p.add_argument("--stoplist", help="custom stopword file")
    _add_provider_flags(p)
    p.set_defaults(func=_cmd_keywords)

    p = sub.add_parser("report", help="run the full pipeline from a TOML config")
    p.add_argument("--config", required=True, help="TOML configuration file")
    p.add_argument("--out-dir", help="override report.out_dir")
    p.add_argument("--chapters", type=_chapters_flag, default=None, help="override report.chapters")
    p.add_argument("--formats", help="override report.formats, e.g. csv,json")
    p.add_argument("--threshold", type=float, help="override sentiment.threshold")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except VerseEvalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
