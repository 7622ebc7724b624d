"""Regenerate the bundled fixture corpora and the replay translation fixture.

The four English corpora are synthetic: filler sentences drawn from a
seeded RNG plus scheduled signature sentences that pin the top bigram
counts to known values. The Sanskrit corpus holds five public-domain
verses with traditional numbering marks so the cleaning path has real
input to chew on. Run from the repo root after installing the package:

    python tools/make_fixture_corpora.py
"""

from __future__ import annotations

import argparse
import json
import random
from pathlib import Path

from verse_eval.corpus import TranslationCorpus, Verse, VerseRef, clean_verse, save_corpus
from verse_eval.textstats import top_ngrams

# 18 chapters, 700 verses total, chapter 12 has 20
CHAPTER_SIZES = [47, 72, 43, 42, 29, 47, 30, 28, 34, 42, 55, 20, 34, 27, 20, 24, 28, 78]

# No word here may appear in any signature sentence below; fixed template
# words must all be stopwords so filler bigrams stay randomized.
VOCAB = [
    "arjuna", "krishna", "wisdom", "battle", "duty", "mind", "soul", "world",
    "truth", "peace", "knowledge", "devotion", "faith", "war", "sorrow",
    "delusion", "senses", "anger", "yoga", "path", "light", "darkness",
    "heaven", "earth", "sage", "warrior", "king", "field", "work", "worship",
    "freedom", "bondage", "birth", "death", "nature", "law", "fear", "hope",
    "victory", "grief", "mercy", "wonder", "silence", "stillness",
]

TEMPLATES = [
    "The {0} of the {1} is the {2}.",
    "In the {0} there is no {1}.",
    "O {0}, my {1} is with the {2}.",
    "Those who have {0} will have {1}.",
    "What {0} can be in this {1}?",
    "Such a {0} is not the {1}.",
    "The {0} and the {1} are in the {2}.",
    "He who has no {0} has the {1}.",
]

# (sentence, modulus, remainder): fires on flat verse index i when i % m == r.
SCHEDULES: dict[str, list[tuple[str, int, int]]] = {
    "gt": [
        ("The supreme personality of godhead.", 4, 0),
        ("A supreme personality.", 28, 14),
        ("All living entities.", 5, 2),
    ],
    "gandhi": [
        ("The fruit of action.", 4, 1),
        ("Without attachment.", 5, 1),
        ("Pleasure and pain.", 6, 3),
        ("Sacrifice charity and austerity.", 10, 5),
    ],
    "easwaran": [
        ("In every creation.", 7, 2),
        ("He dwells in every creation.", 9, 4),
        ("Selfish desire.", 5, 3),
        ("The supreme goal.", 6, 1),
        ("Attain the supreme goal.", 35, 6),
    ],
    "purohit": [
        ("The supreme spirit.", 4, 3),
        ("Right action.", 5, 4),
        ("Pleasure and pain.", 6, 5),
        ("Everything movable and immovable.", 10, 7),
        ("Purity passion and ignorance.", 14, 9),
    ],
}

MANIFESTS = {
    "gt": ("Synthetic fixture, machine-translation register", "fixture (simulated machine translation)"),
    "gandhi": ("Synthetic fixture, expert register A", "fixture (expert style A)"),
    "easwaran": ("Synthetic fixture, expert register B", "fixture (expert style B)"),
    "purohit": ("Synthetic fixture, expert register C", "fixture (expert style C)"),
}

EXPECTED_TOP3 = {
    "gt": [(("supreme", "personality"), 200), (("personality", "godhead"), 175),
           (("living", "entities"), 140)],
    "gandhi": [(("fruit", "action"), 175), (("without", "attachment"), 140),
               (("pleasure", "pain"), 117)],
    "easwaran": [(("every", "creation"), 178), (("selfish", "desire"), 140),
                 (("supreme", "goal"), 137)],
    "purohit": [(("supreme", "spirit"), 175), (("right", "action"), 140),
                (("pleasure", "pain"), 116)],
}

SANSKRIT_VERSES = [
    (1, 1, "धृतराष्ट्र उवाच । धर्मक्षेत्रे कुरुक्षेत्रे समवेता युयुत्सवः । "
           "मामकाः पाण्डवाश्चैव किमकुर्वत सञ्जय ॥१-१॥"),
    (2, 47, "कर्मण्येवाधिकारस्ते मा फलेषु कदाचन । "
            "मा कर्मफलहेतुर्भूर्मा ते सङ्गोऽस्त्वकर्मणि ॥२-४७॥"),
    (4, 7, "यदा यदा हि धर्मस्य ग्लानिर्भवति भारत । "
           "अभ्युत्थानमधर्मस्य तदात्मानं सृजाम्यहम् ॥४-७॥"),
    (12, 8, "मय्येव मन आधत्स्व मयि बुद्धिं निवेशय । "
            "निवसिष्यसि मय्येव अत ऊर्ध्वं न संशयः ॥१२-८॥"),
    (18, 78, "यत्र योगेश्वरः कृष्णो यत्र पार्थो धनुर्धरः । "
             "तत्र श्रीर्विजयो भूतिर्ध्रुवा नीतिर्मतिर्मम ॥१८-७८॥"),
]

SANSKRIT_TRANSLATIONS = [
    "Dhritarashtra said: On the field of dharma, at Kurukshetra, assembled "
    "and eager to fight, what did my people and the Pandavas do, O Sanjaya?",
    "Your right is to the work alone, never to its fruits. Let not the fruit "
    "of action be your motive, nor let your attachment be to inaction.",
    "Whenever righteousness declines and unrighteousness rises, O Bharata, "
    "then I send forth myself.",
    "Fix your mind on Me alone, rest your thought in Me. In Me you will live "
    "hereafter; of this there is no doubt.",
    "Wherever Krishna the lord of yoga is, wherever Partha the archer is, "
    "there fortune, victory, welfare, and firm justice are. Such is my conviction.",
]

# Extra recorded pair exercising romanized input in replay/cache tests.
EXTRA_REPLAY_PAIR = (
    "mayy eva mana ādhatsva mayi buddhiṃ niveśaya "
    "nivasiṣyasi mayy eva ata ūrdhvaṃ na saṃśayaḥ",
    "Concentrate on Me in Me in Me, fix your mind on Me. You will live in Me. "
    "In Me alone, there is no doubt that there is no doubt about it.",
)


def filler_sentence(rng: random.Random) -> str:
    template = rng.choice(TEMPLATES)
    words = rng.sample(VOCAB, 3)
    return template.format(*words)


def build_english_corpus(corpus_id: str) -> TranslationCorpus:
    rng = random.Random(f"verse-eval:{corpus_id}")
    title, translator = MANIFESTS[corpus_id]
    verses: dict[VerseRef, Verse] = {}
    i = 0
    for chapter, size in enumerate(CHAPTER_SIZES, start=1):
        for verse_no in range(1, size + 1):
            sentences = [s for s, m, r in SCHEDULES[corpus_id] if i % m == r]
            sentences += [filler_sentence(rng) for _ in range(rng.randint(1, 2))]
            ref = VerseRef(chapter, verse_no)
            verses[ref] = Verse.from_raw(ref, " ".join(sentences))
            i += 1
    return TranslationCorpus(
        id=corpus_id,
        title=title,
        translator=translator,
        language="en",
        verses=verses,
        source="generated by tools/make_fixture_corpora.py",
    )


def build_sanskrit_corpus() -> TranslationCorpus:
    verses = {}
    for chapter, verse_no, text in SANSKRIT_VERSES:
        ref = VerseRef(chapter, verse_no)
        verses[ref] = Verse.from_raw(ref, text)
    return TranslationCorpus(
        id="sanskrit",
        title="Sanskrit sample, five public-domain verses",
        translator="traditional text",
        language="sa",
        verses=verses,
        source="public-domain verses with traditional numbering marks",
    )


def write_replay_fixture(sanskrit: TranslationCorpus, path: Path) -> None:
    provider = "replay:replay_translations"
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for (ref, translation) in zip(sanskrit.refs(), SANSKRIT_TRANSLATIONS):
            row = {
                "provider": provider,
                "source": sanskrit.verses[ref].clean_text,
                "translation": translation,
            }
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")
        source, translation = EXTRA_REPLAY_PAIR
        row = {"provider": provider, "source": source, "translation": translation}
        fh.write(json.dumps(row, ensure_ascii=False) + "\n")


def check_invariants(corpus: TranslationCorpus) -> None:
    assert len(corpus) == 700, f"{corpus.id}: expected 700 verses, got {len(corpus)}"
    ch12 = sum(1 for ref in corpus.refs() if ref.chapter == 12)
    assert ch12 == 20, f"{corpus.id}: chapter 12 has {ch12} verses"
    got = top_ngrams(corpus, 2, 3)
    want = EXPECTED_TOP3[corpus.id]
    assert got == want, f"{corpus.id}: top bigrams {got} != {want}"
    # the third count must clear fourth place so the ranking is stable
    fourth = top_ngrams(corpus, 2, 4)[-1]
    assert fourth[1] < want[-1][1], f"{corpus.id}: fourth place {fourth} ties third"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--root", default=str(Path(__file__).resolve().parent.parent),
                        help="repository root (default: inferred)")
    args = parser.parse_args()
    root = Path(args.root)
    corpora_dir = root / "src" / "verse_eval" / "data" / "corpora"

    for corpus_id in SCHEDULES:
        corpus = build_english_corpus(corpus_id)
        check_invariants(corpus)
        save_corpus(corpus, corpora_dir / corpus_id)
        print(f"{corpus_id}: {len(corpus)} verses -> {corpora_dir / corpus_id}")

    sanskrit = build_sanskrit_corpus()
    save_corpus(sanskrit, corpora_dir / "sanskrit")
    print(f"sanskrit: {len(sanskrit)} verses -> {corpora_dir / 'sanskrit'}")

    replay_path = root / "tests" / "data" / "replay_translations.jsonl"
    write_replay_fixture(sanskrit, replay_path)
    print(f"replay fixture -> {replay_path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
