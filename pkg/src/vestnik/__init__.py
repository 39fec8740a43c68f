"""Search engine for OCR-noisy historical Bulgarian newspapers.

The pipeline: clean raw page text, detect its orthography version, correct
post-OCR errors against a lexicon, index the corrected text with positions,
then answer modern-spelling queries across both orthographies.
"""

from .aligned import AlignedSample, FormatError, load_aligned_file
from .analyzer import (
    CleanPage,
    RawPage,
    Token,
    TokenKind,
    UnterminatedMetadataBlock,
    dehyphenate,
    strip_metadata,
    tokenize,
)
from .lexicon import Lexicon
from .orthography import (
    ConversionRule,
    EmptyText,
    InvalidLexicon,
    OrthographyRules,
    OrthographyVersion,
    SpellingConverter,
    VariantSet,
    YatLexicon,
    convert_lexicon,
    detect_version,
    to_historical,
    to_modern,
)

__version__ = "0.1.0"

__all__ = [
    "AlignedSample",
    "CleanPage",
    "ConversionRule",
    "EmptyText",
    "FormatError",
    "InvalidLexicon",
    "Lexicon",
    "OrthographyRules",
    "OrthographyVersion",
    "RawPage",
    "SpellingConverter",
    "Token",
    "TokenKind",
    "UnterminatedMetadataBlock",
    "VariantSet",
    "YatLexicon",
    "convert_lexicon",
    "dehyphenate",
    "detect_version",
    "load_aligned_file",
    "strip_metadata",
    "to_historical",
    "to_modern",
    "tokenize",
    "__version__",
]
