"""Synthetic OCR sample generation: shaped Arabic text composed onto
backgrounds with configurable fonts, layouts, and distortions, emitting
images plus ground-truth sidecars."""

from .config import (BackgroundSpec, FontSpec, ForgeConfig, LayoutSpec,
                     OutputSpec, validate_config, font_covers_arabic)
from .generate import generate_dataset, generate_sample, sample_seed

__all__ = [
    "BackgroundSpec",
    "FontSpec",
    "ForgeConfig",
    "LayoutSpec",
    "OutputSpec",
    "validate_config",
    "font_covers_arabic",
    "generate_dataset",
    "generate_sample",
    "sample_seed",
]
