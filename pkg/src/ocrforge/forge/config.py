"""Forge run configuration: schema, loading, and validation diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

# Distortions are applied in this fixed order: geometric first so box
# math stays exact, photometric after, compression damage last.
DISTORTION_ORDER = ("perspective_warp", "rotation", "gaussian_blur",
                    "gaussian_noise", "brightness", "contrast",
                    "jpeg_artifacts")

# name -> (range parameter, hard bounds on the range values)
_DISTORTION_PARAMS = {
    "rotation": ("degrees", (-180.0, 180.0)),
    "gaussian_blur": ("sigma", (0.0, 50.0)),
    "gaussian_noise": ("stddev", (0.0, 128.0)),
    "jpeg_artifacts": ("quality", (1, 95)),
    "perspective_warp": ("displacement", (0.0, 0.25)),
    "brightness": ("factor", (0.1, 3.0)),
    "contrast": ("factor", (0.1, 3.0)),
}

# Presentation-form range every font must cover to render shaped Arabic.
REQUIRED_GLYPH_RANGE = (0xFE8D, 0xFEFC)


@dataclass(frozen=True)
class FontSpec:
    path: str
    weight: float = 1.0


@dataclass(frozen=True)
class BackgroundSpec:
    kind: str                      # "solid" | "image"
    color: tuple = (255, 255, 255)
    path: str | None = None
    weight: float = 1.0


@dataclass(frozen=True)
class LayoutSpec:
    kind: str = "page"             # "page" | "line" | "poster"
    width: int = 800
    height: int = 600
    margins: int = 32
    line_spacing: float = 1.4
    max_lines: int = 8
    alignment: str = "right"       # "right" | "center" | "justified"


@dataclass(frozen=True)
class OutputSpec:
    format: str = "png"
    count: int = 100


@dataclass(frozen=True)
class ForgeConfig:
    master_seed: int
    corpus_path: str
    fonts: tuple[FontSpec, ...]
    backgrounds: tuple[BackgroundSpec, ...] = (BackgroundSpec(kind="solid"),)
    layout: LayoutSpec = LayoutSpec()
    font_size_range: tuple[int, int] = (20, 36)
    distortions: dict = field(default_factory=dict)
    output: OutputSpec = OutputSpec()

    @classmethod
    def from_dict(cls, d: dict) -> "ForgeConfig":
        known = {"master_seed", "corpus_path", "fonts", "backgrounds",
                 "layout", "font_size_range", "distortions", "output"}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        fonts = tuple(FontSpec(**f) for f in d.get("fonts", []))
        backgrounds = tuple(
            BackgroundSpec(**{**b, "color": tuple(b.get("color", (255, 255, 255)))})
            for b in d.get("backgrounds", [{"kind": "solid"}]))
        return cls(
            master_seed=int(d["master_seed"]),
            corpus_path=d["corpus_path"],
            fonts=fonts,
            backgrounds=backgrounds,
            layout=LayoutSpec(**d.get("layout", {})),
            font_size_range=tuple(d.get("font_size_range", (20, 36))),
            distortions={k: dict(v) for k, v in d.get("distortions", {}).items()},
            output=OutputSpec(**d.get("output", {})),
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "ForgeConfig":
        with open(path, encoding="utf-8") as f:
            return cls.from_dict(yaml.safe_load(f))

    def to_dict(self) -> dict:
        return {
            "master_seed": self.master_seed,
            "corpus_path": self.corpus_path,
            "fonts": [vars(f) | {} for f in self.fonts],
            "backgrounds": [
                {"kind": b.kind, "color": list(b.color), "path": b.path,
                 "weight": b.weight} for b in self.backgrounds],
            "layout": vars(self.layout) | {},
            "font_size_range": list(self.font_size_range),
            "distortions": self.distortions,
            "output": vars(self.output) | {},
        }


def font_covers_arabic(font_path: str) -> bool:
    """Probe a font's cmap for the required presentation-form range."""
    from fontTools.ttLib import TTFont
    try:
        cmap = TTFont(font_path, fontNumber=0).getBestCmap()
    except Exception:
        return False
    lo, hi = REQUIRED_GLYPH_RANGE
    return all(cp in cmap for cp in range(lo, hi + 1))


def validate_config(cfg: ForgeConfig) -> list[str]:
    """All violations as diagnostics; empty list means usable."""
    diags: list[str] = []
    if not cfg.fonts:
        diags.append("fonts: empty")
    for f in cfg.fonts:
        if not Path(f.path).exists():
            diags.append(f"fonts: unreadable file: {f.path}")
        elif not font_covers_arabic(f.path):
            diags.append(f"fonts: font lacks Arabic presentation forms: {f.path}")
        if f.weight <= 0:
            diags.append(f"fonts: weight must be positive: {f.path}")
    for b in cfg.backgrounds:
        if b.kind not in ("solid", "image"):
            diags.append(f"backgrounds: unknown kind {b.kind!r}")
        if b.kind == "image" and (b.path is None or not Path(b.path).exists()):
            diags.append(f"backgrounds: unreadable file: {b.path}")
    if not Path(cfg.corpus_path).exists():
        diags.append(f"corpus_path: unreadable file: {cfg.corpus_path}")
    lo, hi = cfg.font_size_range
    if lo > hi or lo <= 0:
        diags.append(f"font_size_range: bad range [{lo}, {hi}]")
    if cfg.layout.kind not in ("page", "line", "poster"):
        diags.append(f"layout.kind: unknown {cfg.layout.kind!r}")
    if cfg.layout.alignment not in ("right", "center", "justified"):
        diags.append(f"layout.alignment: unknown {cfg.layout.alignment!r}")
    if cfg.layout.max_lines < 1:
        diags.append("layout.max_lines: must be >= 1")
    for name, spec in cfg.distortions.items():
        if name not in _DISTORTION_PARAMS:
            diags.append(f"distortions.{name}: unknown distortion")
            continue
        p = spec.get("p", 0.0)
        if not 0.0 <= p <= 1.0:
            diags.append(f"distortions.{name}.p out of [0,1]")
        param, (plo, phi) = _DISTORTION_PARAMS[name]
        rng = spec.get(param)
        if rng is None:
            diags.append(f"distortions.{name}.{param}: missing range")
        else:
            a, b = rng
            if a > b:
                diags.append(f"distortions.{name}.{param}: min > max")
            if a < plo or b > phi:
                diags.append(f"distortions.{name}.{param}: outside [{plo}, {phi}]")
    if cfg.output.format != "png":
        diags.append(f"output.format: only png is supported, got {cfg.output.format!r}")
    if cfg.output.count < 1:
        diags.append("output.count: must be >= 1")
    return diags
