"""Command-line behavior: tables on stdout, exit codes, config handling."""

import json

import pytest

from verse_eval.cli import main, parse_chapters
from verse_eval.corpus import bundled_corpus_dir
from verse_eval.errors import ConfigError


def test_parse_chapters_spec():
    assert parse_chapters("3,5,7-12,15-17") == [3, 5, 7, 8, 9, 10, 11, 12, 15, 16, 17]
    assert parse_chapters("4") == [4]
    assert parse_chapters("all") is None
    assert parse_chapters("5,3,3") == [3, 5]
    for bad in ("", "x", "3-1", "0", "1-", ",", "2,,3"):
        with pytest.raises(ConfigError):
            parse_chapters(bad)


def test_jaccard_single_chapter_row(data_dir, capsys):
    code = main([
        "jaccard", "--a", "GT", "--b", "Gandhi",
        "--chapters", "3", "--preds-dir", str(data_dir / "preds"),
    ])
    out = capsys.readouterr().out
    assert code == 0
    lines = [l for l in out.splitlines() if l.strip()]
    assert lines[0].split() == ["chapter", "GT-Gandhi"]
    assert lines[1].split() == ["3", "0.500"]
    assert len(lines) == 2  # single chapter: no Average row


def test_jaccard_csv_output(data_dir, tmp_path, capsys):
    out_csv = tmp_path / "j.csv"
    code = main([
        "jaccard", "--a", "GT", "--b", "Gandhi",
        "--preds-dir", str(data_dir / "preds"), "--csv", str(out_csv),
    ])
    assert code == 0
    assert out_csv.read_text(encoding="utf-8").splitlines()[0] == "chapter,GT-Gandhi"


def test_jaccard_missing_preds_exit_1(data_dir, capsys):
    code = main([
        "jaccard", "--a", "GT", "--b", "Nope", "--preds-dir", str(data_dir / "preds"),
    ])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["jaccard", "--a", "GT"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["jaccard", "--a", "A", "--b", "B", "--preds-dir", "x", "--chapters", "junk"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_ngrams_table(capsys):
    code = main(["ngrams", "--corpus", str(bundled_corpus_dir("gt")), "--n", "2", "--k", "3"])
    out = capsys.readouterr().out
    assert code == 0
    lines = out.splitlines()
    assert lines[1].split() == ["supreme", "personality", "200"]
    assert lines[2].split() == ["personality", "godhead", "175"]
    assert lines[3].split() == ["living", "entities", "140"]


def test_ingest_summary(data_dir, capsys):
    code = main(["ingest", "--dir", str(data_dir / "mini" / "GT")])
    out = capsys.readouterr().out
    assert code == 0
    assert "GT: 7 verses, chapters 1-2" in out


def test_sentiment_predict_then_summary(data_dir, tmp_path, capsys):
    preds_path = tmp_path / "GT.preds.jsonl"
    code = main([
        "sentiment", "predict", "--corpus", str(data_dir / "mini" / "GT"),
        "--out", str(preds_path),
    ])
    assert code == 0
    assert preds_path.is_file()
    header = json.loads(preds_path.read_text(encoding="utf-8").splitlines()[0])
    assert header["corpus_id"] == "GT"

    capsys.readouterr()
    code = main(["sentiment", "summary", "--preds", str(preds_path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "optimistic" in out and "joking" in out


def test_embed_then_semantic(data_dir, tmp_path, capsys):
    emb_a = tmp_path / "GT.emb.jsonl"
    emb_b = tmp_path / "Gandhi.emb.jsonl"
    assert main(["embed", "--corpus", str(data_dir / "mini" / "GT"), "--out", str(emb_a)]) == 0
    assert main(["embed", "--corpus", str(data_dir / "mini" / "Gandhi"), "--out", str(emb_b)]) == 0
    capsys.readouterr()
    csv_path = tmp_path / "sim.csv"
    code = main([
        "semantic", "--a", str(emb_a), "--b", str(emb_b),
        "--csv", str(csv_path), "--extremes", "2",
    ])
    out = capsys.readouterr().out
    assert code == 0
    assert "mean(std)" in out
    assert "most similar:" in out
    assert csv_path.read_text(encoding="utf-8").startswith("chapter,verse,score,pair")


def test_keywords_from_text(capsys):
    code = main([
        "keywords", "--text", "the wisdom of battle and the wisdom of peace",
        "--k", "3",
    ])
    out = capsys.readouterr().out
    assert code == 0
    assert "phrase" in out.splitlines()[0]
    assert len(out.splitlines()) >= 2


def test_translate_with_replay_fixture(data_dir, tmp_path, capsys):
    out_dir = tmp_path / "sanskrit-en"
    code = main([
        "translate", "--source", str(bundled_corpus_dir("sanskrit")),
        "--id", "sanskrit-en", "--out", str(out_dir),
        "--provider", "file", "--store", str(data_dir / "replay_translations.jsonl"),
    ])
    assert code == 0
    assert (out_dir / "manifest.json").is_file()
    manifest = json.loads((out_dir / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["id"] == "sanskrit-en"
    assert (out_dir / "translations.cache.jsonl").is_file()


def test_cache_env_fallback(data_dir, tmp_path, capsys, monkeypatch):
    cache_path = tmp_path / "env-cache.jsonl"
    monkeypatch.setenv("VERSE_EVAL_CACHE", str(cache_path))
    out_dir = tmp_path / "out"
    code = main([
        "translate", "--source", str(bundled_corpus_dir("sanskrit")),
        "--id", "x", "--out", str(out_dir),
        "--provider", "file", "--store", str(data_dir / "replay_translations.jsonl"),
    ])
    assert code == 0
    assert cache_path.is_file()


def test_http_provider_requires_endpoint(data_dir, capsys, monkeypatch):
    monkeypatch.delenv("VERSE_EVAL_ENDPOINT", raising=False)
    code = main([
        "sentiment", "predict", "--corpus", str(data_dir / "mini" / "GT"),
        "--out", "/tmp/never-written.jsonl", "--provider", "http",
    ])
    assert code == 1
    assert "VERSE_EVAL_ENDPOINT" in capsys.readouterr().err


def test_report_from_config(data_dir, tmp_path, capsys):
    out_dir = tmp_path / "report"
    config = tmp_path / "eval.toml"
    config.write_text(
        f"""
[corpus]
dir = "{data_dir / 'mini'}"

[sentiment]
provider = "mock"
threshold = 0.5

[semantic]
provider = "mock"

[report]
pairs = [["GT", "Gandhi"]]
out_dir = "{out_dir}"
""",
        encoding="utf-8",
    )
    code = main(["report", "--config", str(config)])
    out = capsys.readouterr().out
    assert code == 0
    assert (out_dir / "GT-Gandhi" / "jaccard.csv").is_file()
    assert (out_dir / "GT" / "heatmap.svg").is_file()
    assert "artifacts" in out


def test_report_flags_override_config(data_dir, tmp_path, capsys):
    config = tmp_path / "eval.toml"
    config.write_text(
        f"""
[corpus]
dir = "{data_dir / 'mini'}"

[sentiment]
provider = "mock"

[semantic]
provider = "mock"

[report]
pairs = [["GT", "Gandhi"]]
out_dir = "{tmp_path / 'ignored'}"
""",
        encoding="utf-8",
    )
    out_dir = tmp_path / "flag-out"
    code = main([
        "report", "--config", str(config),
        "--out-dir", str(out_dir), "--formats", "csv", "--chapters", "1",
    ])
    assert code == 0
    assert not (tmp_path / "ignored").exists()
    files = [p for p in out_dir.rglob("*") if p.is_file()]
    assert files and all(p.suffix == ".csv" for p in files)
    jaccard = (out_dir / "GT-Gandhi" / "jaccard.csv").read_text(encoding="utf-8")
    assert [l.split(",")[0] for l in jaccard.splitlines()[1:]] == ["1", "Average"]


def test_report_bad_config_exit_1(tmp_path, capsys):
    config = tmp_path / "bad.toml"
    config.write_text("[report]\n", encoding="utf-8")
    assert main(["report", "--config", str(config)]) == 1
    assert main(["report", "--config", str(tmp_path / "missing.toml")]) == 1
    config.write_text("not toml ][", encoding="utf-8")
    assert main(["report", "--config", str(config)]) == 1
