"""Tagged-caption input format.

One caption per line, tokens separated by single spaces, each token
written `surface_TAG` with TAG a Universal POS tag. Literal underscores
inside a surface are escaped as `\\_`.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

UNIVERSAL_TAGS = frozenset(
    "ADJ ADP ADV AUX CCONJ DET INTJ NOUN NUM PART PRON PROPN PUNCT SCONJ SYM VERB X".split()
)


@dataclass
class TaggedCaption:
    tokens: list[tuple[str, str]]  # (surface, pos)


def _split_token(token: str) -> tuple[str, str]:
    # the tag starts after the last underscore not escaped by a backslash
    for i in range(len(token) - 1, -1, -1):
        if token[i] == "_" and (i == 0 or token[i - 1] != "\\"):
            surface = token[:i].replace("\\_", "_")
            return surface, token[i + 1 :]
    raise ValueError(f"token {token!r} has no POS tag separator")


def parse_caption(line: str) -> TaggedCaption:
    tokens = []
    for token in line.split(" "):
        if not token:
            continue
        surface, tag = _split_token(token)
        if not surface:
            raise ValueError(f"token {token!r} has an empty surface")
        tokens.append((surface, tag))
    return TaggedCaption(tokens=tokens)


def format_caption(caption: TaggedCaption) -> str:
    return " ".join(
        f"{surface.replace('_', chr(92) + '_')}_{tag}"
        for surface, tag in caption.tokens
    )


def read_caption_file(path) -> Iterator[TaggedCaption]:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.strip():
                yield parse_caption(line)


def write_caption_file(captions: Iterable[TaggedCaption], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for caption in captions:
            fh.write(format_caption(caption) + "\n")


def caption_sources(paths) -> list[tuple[str, Iterator[TaggedCaption]]]:
    return [(str(p), read_caption_file(p)) for p in map(Path, paths)]
