from .build import (
    BankBuildConfig,
    BankManifest,
    ConceptBank,
    bank_from_arrays,
    build_bank,
    dedup_similar,
    filter_class_similar,
    filter_length,
    load_bank,
    save_bank,
)
from .captions import (
    TaggedCaption,
    caption_sources,
    format_caption,
    parse_caption,
    read_caption_file,
    write_caption_file,
)
from .chunker import STOP_WORDS, extract_noun_phrases

__all__ = [
    "BankBuildConfig",
    "BankManifest",
    "ConceptBank",
    "STOP_WORDS",
    "TaggedCaption",
    "bank_from_arrays",
    "build_bank",
    "caption_sources",
    "dedup_similar",
    "extract_noun_phrases",
    "filter_class_similar",
    "filter_length",
    "format_caption",
    "load_bank",
    "parse_caption",
    "read_caption_file",
    "save_bank",
    "write_caption_file",
]
