"""Shared fixtures: tiny randomly initialized checkpoints built offline.

The checkpoints exercise the full load/serve path without any network:
a 2-layer BERT with hidden size 768 (the dimension the wire contract
promises) over a handwritten 40-token vocabulary.
"""

import os

os.environ.setdefault("TRANSFORMERS_VERBOSITY", "error")
os.environ.setdefault("HF_HUB_DISABLE_PROGRESS_BARS", "1")

import pytest
import torch
from transformers import BertConfig, BertForSequenceClassification, BertModel, BertTokenizer

from verse_eval.sentiment import CANONICAL_LABELS

VOCAB = (
    "[PAD] [UNK] [CLS] [SEP] [MASK] the of and who are all from "
    "sacrifice freed sin eat remains righteous men residue selfish cook "
    "themselves food spirit service minded enjoy feast only for sake own "
    "but wicked satisfaction prepare their feed on"
).split()


def _write_tokenizer(target):
    vocab_file = target / "vocab.txt"
    vocab_file.write_text("\n".join(VOCAB) + "\n", encoding="utf-8")
    BertTokenizer(str(vocab_file)).save_pretrained(target)


def _base_config(**extra):
    return BertConfig(
        vocab_size=len(VOCAB),
        hidden_size=768,
        num_hidden_layers=2,
        num_attention_heads=4,
        intermediate_size=256,
        max_position_embeddings=64,
        **extra,
    )


@pytest.fixture(scope="session")
def embed_checkpoint(tmp_path_factory):
    target = tmp_path_factory.mktemp("ckpt") / "embed"
    torch.manual_seed(7)
    BertModel(_base_config()).save_pretrained(target)
    _write_tokenizer(target)
    return str(target)


def _sentiment_checkpoint(tmp_path_factory, labels, seed):
    target = tmp_path_factory.mktemp("ckpt") / "senti"
    config = _base_config(
        num_labels=len(labels),
        problem_type="multi_label_classification",
        id2label={i: label for i, label in enumerate(labels)},
        label2id={label: i for i, label in enumerate(labels)},
    )
    torch.manual_seed(seed)
    BertForSequenceClassification(config).save_pretrained(target)
    _write_tokenizer(target)
    return str(target)


@pytest.fixture(scope="session")
def sentiment_checkpoint(tmp_path_factory):
    return _sentiment_checkpoint(tmp_path_factory, list(CANONICAL_LABELS), seed=11)


@pytest.fixture(scope="session")
def scrambled_label_checkpoint(tmp_path_factory):
    labels = list(CANONICAL_LABELS)
    labels[0], labels[1] = labels[1], labels[0]
    return _sentiment_checkpoint(tmp_path_factory, labels, seed=13)
