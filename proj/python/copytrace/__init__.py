"""Python bindings for the copytrace document-similarity engine."""

import json

from ._core import (
    Corpus,
    CopytraceError,
    HashParams,
    Sentence,
    classify,
    hash_full,
    normalize,
    percentage,
    search,
    segment,
)


def compare(corpus, a, b):
    """Comparison report of documents ``a`` and ``b`` as a dict."""
    return json.loads(corpus.compare_json(a, b))


__all__ = [
    "Corpus",
    "CopytraceError",
    "HashParams",
    "Sentence",
    "classify",
    "compare",
    "hash_full",
    "normalize",
    "percentage",
    "search",
    "segment",
]
