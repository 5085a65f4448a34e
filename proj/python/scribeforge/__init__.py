"""Strikethrough blots and StackMix line synthesis for handwriting recognition data.

Images are numpy uint8 arrays shaped (height, width), 0 = ink, 255 = paper.
"""

from ._scribeforge import (
    AlignmentInfeasible,
    BlotConfig,
    CorruptBoundary,
    FormatError,
    InvalidTranscript,
    Synthesizer,
    UndefinedDenominator,
    UnsynthesizableLine,
    apply_handwritten_blots,
    augment,
    bernstein,
    bezier_point,
    build_index,
    composite_ink,
    evaluate,
    extract_boundaries,
    hstack,
    levenshtein,
    load_image,
    preview,
    read_posterior_file,
    resize_to_height,
    save_image,
    segment,
    synthesize,
    vstack,
    write_posterior_file,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
