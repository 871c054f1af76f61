"""Noun-phrase chunking over Universal POS tags.

The chunk grammar is (ADJ|NOUN|PROPN)* (NOUN|PROPN): take each maximal
run of adjectives and nominals, trim trailing adjectives so the run ends
on a nominal, and drop runs without one.
"""
from __future__ import annotations

from .captions import TaggedCaption

NOMINAL = frozenset({"NOUN", "PROPN"})
CHUNKABLE = frozenset({"ADJ", "NOUN", "PROPN"})

STOP_WORDS = frozenset(
    """
    a an the this that these those it its his her hers their theirs my mine
    your yours our ours i you he she they we me him them us who whom which
    what one ones other others another some any such same own thing things
    something anything nothing everything someone anyone everyone nobody
    somebody anybody everybody none all both each few more most
    """.split()
)


def extract_noun_phrases(caption: TaggedCaption,
                         stop_words: frozenset[str] = STOP_WORDS) -> list[str]:
    """Case-folded noun phrases in left-to-right order.

    Runs made purely of stop words are dropped; empty captions give an
    empty list.
    """
    phrases: list[str] = []
    run: list[str] = []
    run_tags: list[str] = []

    def flush():
        if not run:
            return
        # trim trailing adjectives so the chunk ends with a nominal
        end = len(run)
        while end > 0 and run_tags[end - 1] not in NOMINAL:
            end -= 1
        if end == 0:
            run.clear()
            run_tags.clear()
            return
        words = [w.casefold() for w in run[:end]]
        if any(w not in stop_words for w in words):
            phrases.append(" ".join(words))
        run.clear()
        run_tags.clear()

    for surface, tag in caption.tokens:
        if tag in CHUNKABLE:
            run.append(surface)
            run_tags.append(tag)
        else:
            flush()
    flush()
    return phrases
