"""Post-editing core bindings."""

from ._postedit import (
    Error,
    Project,
    dice_bigram,
    diff,
    diff_patch,
    greedy_align,
    intersect_align,
    lexicon_matches,
    nfc,
    normalize,
    slp1_to_devanagari,
    split_sentences,
    tokenize,
)

__all__ = [
    "Error",
    "Project",
    "dice_bigram",
    "diff",
    "diff_patch",
    "greedy_align",
    "intersect_align",
    "lexicon_matches",
    "nfc",
    "normalize",
    "slp1_to_devanagari",
    "split_sentences",
    "tokenize",
]
