"""Regularity program synthesis and program-guided image manipulation."""

from ._core import (
    Draw,
    DomainError,
    GrammarError,
    IoError,
    Program,
    RegsynthError,
    SchemaError,
    SyntaxError,
    detect,
    edit,
    extrapolate,
    inpaint,
    read_image,
    set_threads,
    synthesize,
    write_image,
)

__all__ = [
    "Draw",
    "DomainError",
    "GrammarError",
    "IoError",
    "Program",
    "RegsynthError",
    "SchemaError",
    "SyntaxError",
    "detect",
    "edit",
    "extrapolate",
    "inpaint",
    "read_image",
    "set_threads",
    "synthesize",
    "write_image",
]
