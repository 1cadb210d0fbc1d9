"""Text layout and rasterization onto backgrounds.

Lines are shaped (joining + ligatures + simplified bidi) and drawn word
by word so every word box is known exactly at render time. RTL lines
start at the right margin; embedded Latin/digit runs keep their internal
order via the shaper.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from PIL import Image, ImageDraw, ImageFont

from ..errors import FontRenderError, TextTooLong
from ..shaping import shape_line
from .config import ForgeConfig, LayoutSpec


@lru_cache(maxsize=64)
def _load_font(path: str, size: int) -> ImageFont.FreeTypeFont:
    try:
        return ImageFont.truetype(path, size=size)
    except OSError as e:
        raise FontRenderError(f"cannot load font {path}: {e}") from e


@lru_cache(maxsize=4096)
def _visual(word: str) -> str:
    return shape_line(word).visual_text()


def _width(font: ImageFont.FreeTypeFont, text: str) -> float:
    return font.getlength(text)


def wrap_text(text: str, font: ImageFont.FreeTypeFont, max_width: float) -> list[list[str]]:
    """Greedy wrap into lines of words; raises TextTooLong when a single
    word exceeds the line width."""
    space_w = _width(font, " ")
    lines: list[list[str]] = []
    cur: list[str] = []
    cur_w = 0.0
    for word in text.split():
        w = _width(font, _visual(word))
        if w > max_width:
            raise TextTooLong(f"word wider than line: {word!r}")
        add = w if not cur else w + space_w
        if cur_w + add > max_width:
            lines.append(cur)
            cur, cur_w = [word], w
        else:
            cur.append(word)
            cur_w += add
    if cur:
        lines.append(cur)
    return lines


@dataclass
class RenderedPage:
    image: Image.Image
    ground_truth: str
    line_boxes: list[tuple[int, int, int, int]]
    word_boxes: list[tuple[tuple[int, int, int, int], str]]
    font_path: str
    font_size: int
    fill_color: tuple = (255, 255, 255)


def fit_text(text: str, font_path: str, layout: LayoutSpec,
             size_lo: int, size_hi: int, sampled_size: int) -> tuple[int, list[list[str]]]:
    """Find the largest usable font size <= sampled_size at which the text
    wraps into at most layout.max_lines lines."""
    max_width = layout.width - 2 * layout.margins
    max_lines = 1 if layout.kind == "line" else layout.max_lines
    for size in range(min(sampled_size, size_hi), size_lo - 1, -1):
        font = _load_font(font_path, size)
        try:
            lines = wrap_text(text, font, max_width)
        except TextTooLong:
            continue
        if len(lines) <= max_lines:
            usable_h = layout.height - 2 * layout.margins
            if len(lines) * size * layout.line_spacing <= usable_h:
                return size, lines
    raise TextTooLong(
        f"text does not fit {max_lines} lines at size {size_lo}: {text[:40]!r}")


def make_background(spec, width: int, height: int) -> tuple[Image.Image, tuple]:
    """Returns (background image, fill color used for transform borders)."""
    if spec.kind == "solid":
        color = tuple(spec.color)
        return Image.new("RGB", (width, height), color), color
    im = Image.open(spec.path).convert("RGB").resize((width, height))
    # Border fill for geometric transforms: mean color keeps edges sane.
    color = tuple(int(c) for c in im.resize((1, 1)).getpixel((0, 0)))
    return im, color


def render_page(text: str, font_path: str, sampled_size: int,
                background_spec, layout: LayoutSpec,
                size_range: tuple[int, int],
                ink=(16, 16, 16)) -> RenderedPage:
    size, lines = fit_text(text, font_path, layout, size_range[0],
                           size_range[1], sampled_size)
    font = _load_font(font_path, size)
    image, fill_color = make_background(background_spec, layout.width, layout.height)
    draw = ImageDraw.Draw(image)

    line_h = size * layout.line_spacing
    space_w = _width(font, " ")
    max_width = layout.width - 2 * layout.margins
    line_boxes = []
    word_boxes = []

    y = float(layout.margins)
    if layout.kind == "poster":
        # Center the block vertically.
        y = max((layout.height - len(lines) * line_h) / 2.0, layout.margins)

    for words in lines:
        vis_words = [_visual(w) for w in words]
        widths = [_width(font, v) for v in vis_words]
        total = sum(widths) + space_w * (len(words) - 1)

        gap = space_w
        if layout.alignment == "center" or layout.kind == "poster":
            x_right = layout.margins + (max_width + total) / 2.0
        elif layout.alignment == "justified" and len(words) > 1 and total < max_width:
            gap = space_w + (max_width - total) / (len(words) - 1)
            x_right = float(layout.margins + max_width)
        else:  # right
            x_right = float(layout.margins + max_width)

        # RTL page: first logical word sits rightmost.
        ink_boxes = []
        for word, vis, w in zip(words, vis_words, widths):
            x = x_right - w
            draw.text((x, y), vis, font=font, fill=ink)
            bbox = draw.textbbox((x, y), vis, font=font)
            box = (int(bbox[0]), int(bbox[1]),
                   int(bbox[2] - bbox[0]), int(bbox[3] - bbox[1]))
            word_boxes.append((box, word))
            ink_boxes.append(box)
            x_right = x - gap

        x0 = min(b[0] for b in ink_boxes)
        y0 = min(b[1] for b in ink_boxes)
        x1 = max(b[0] + b[2] for b in ink_boxes)
        y1 = max(b[1] + b[3] for b in ink_boxes)
        line_boxes.append((x0, y0, x1 - x0, y1 - y0))
        y += line_h

    ground_truth = "\n".join(" ".join(words) for words in lines)
    return RenderedPage(image=image, ground_truth=ground_truth,
                        line_boxes=line_boxes, word_boxes=word_boxes,
                        font_path=font_path, font_size=size,
                        fill_color=fill_color)
