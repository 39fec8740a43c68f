"""Post-OCR error detection and correction."""

from .align import CharAlignment, EditOp, align_chars, char_alignment
from .channel import (
    Candidate,
    ConfusionModel,
    generate_candidates,
    learn_confusion,
    weighted_edit_distance,
)
from .corrector import Correction, correct_page, flag_tokens
from .detector import (
    DetectorConfig,
    DetectorGradients,
    DetectorModel,
    EmptyCorpus,
    SequenceTooLong,
    baseline_detect,
    detector_forward,
    detector_gradient,
    token_is_erroneous,
    train_detector,
)
from .subtokens import PieceVocabulary, SubPiece, SubTokenization, subtokenize

__all__ = [
    "Candidate",
    "CharAlignment",
    "Correction",
    "ConfusionModel",
    "DetectorConfig",
    "DetectorGradients",
    "DetectorModel",
    "EditOp",
    "EmptyCorpus",
    "PieceVocabulary",
    "SequenceTooLong",
    "SubPiece",
    "SubTokenization",
    "align_chars",
    "baseline_detect",
    "char_alignment",
    "correct_page",
    "detector_forward",
    "detector_gradient",
    "flag_tokens",
    "generate_candidates",
    "learn_confusion",
    "subtokenize",
    "token_is_erroneous",
    "train_detector",
    "weighted_edit_distance",
]
