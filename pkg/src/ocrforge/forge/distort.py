"""Distortion pipeline: samples per-distortion parameters from the
per-sample RNG and applies them in the fixed order

    perspective_warp -> rotation -> blur -> noise -> brightness ->
    contrast -> jpeg_artifacts

Geometric steps compose a forward homography that generate_sample uses
to carry boxes into the output frame; photometric steps leave geometry
untouched.
"""

from __future__ import annotations

import io
import math
import random

import numpy as np
from PIL import Image, ImageEnhance, ImageFilter

from . import geometry
from .config import DISTORTION_ORDER


def sample_distortions(distortions: dict, rng: random.Random) -> list[dict]:
    """Decide which distortions fire and with what parameters. Consumes
    RNG state in the fixed application order so results are reproducible
    regardless of which distortions are configured off."""
    applied = []
    for name in DISTORTION_ORDER:
        spec = distortions.get(name)
        if spec is None:
            continue
        fire = rng.random() < spec.get("p", 0.0)
        if name == "rotation":
            lo, hi = spec["degrees"]
            params = {"degrees": rng.uniform(lo, hi)}
        elif name == "gaussian_blur":
            lo, hi = spec["sigma"]
            params = {"sigma": rng.uniform(lo, hi)}
        elif name == "gaussian_noise":
            lo, hi = spec["stddev"]
            params = {"stddev": rng.uniform(lo, hi),
                      "noise_seed": rng.getrandbits(63)}
        elif name == "jpeg_artifacts":
            lo, hi = spec["quality"]
            params = {"quality": rng.randint(int(lo), int(hi))}
        elif name == "perspective_warp":
            lo, hi = spec["displacement"]
            params = {"displacement": rng.uniform(lo, hi),
                      "corner_jitter": [rng.uniform(0, 1) for _ in range(8)]}
        elif name in ("brightness", "contrast"):
            lo, hi = spec["factor"]
            params = {"factor": rng.uniform(lo, hi)}
        if fire:
            applied.append({"name": name, **params})
    return applied


def apply_distortions(image: Image.Image, applied: list[dict],
                      fill_color: tuple) -> tuple[Image.Image, np.ndarray]:
    """Returns the distorted image and the composed forward transform."""
    m = geometry.identity()
    for d in applied:
        name = d["name"]
        if name == "perspective_warp":
            image, step = _warp(image, d, fill_color)
            m = step @ m
        elif name == "rotation":
            image, step = _rotate(image, d["degrees"], fill_color)
            m = step @ m
        elif name == "gaussian_blur":
            image = image.filter(ImageFilter.GaussianBlur(d["sigma"]))
        elif name == "gaussian_noise":
            image = _noise(image, d["stddev"], d["noise_seed"])
        elif name == "brightness":
            image = ImageEnhance.Brightness(image).enhance(d["factor"])
        elif name == "contrast":
            image = ImageEnhance.Contrast(image).enhance(d["factor"])
        elif name == "jpeg_artifacts":
            buf = io.BytesIO()
            image.save(buf, format="JPEG", quality=d["quality"])
            buf.seek(0)
            image = Image.open(buf).convert("RGB")
    return image, m


def _rotate(image: Image.Image, deg: float,
            fill_color: tuple) -> tuple[Image.Image, np.ndarray]:
    w, h = image.size
    rot = geometry.rotation_about(deg, w / 2.0, h / 2.0)
    corners = geometry.apply(rot, [(0, 0), (w, 0), (w, h), (0, h)])
    x0, y0 = corners.min(axis=0)
    x1, y1 = corners.max(axis=0)
    new_w, new_h = int(math.ceil(x1 - x0)), int(math.ceil(y1 - y0))
    forward = geometry.translation(-x0, -y0) @ rot
    image = image.transform((new_w, new_h), Image.AFFINE,
                            geometry.pil_inverse_affine(forward),
                            resample=Image.BILINEAR, fillcolor=fill_color)
    return image, forward


def _warp(image: Image.Image, d: dict,
          fill_color: tuple) -> tuple[Image.Image, np.ndarray]:
    w, h = image.size
    max_d = d["displacement"] * min(w, h)
    j = d["corner_jitter"]
    src = [(0, 0), (w, 0), (w, h), (0, h)]
    # Pull each corner inward by an independent jittered amount.
    dst = [(0 + j[0] * max_d, 0 + j[1] * max_d),
           (w - j[2] * max_d, 0 + j[3] * max_d),
           (w - j[4] * max_d, h - j[5] * max_d),
           (0 + j[6] * max_d, h - j[7] * max_d)]
    forward = geometry.quad_to_quad(src, dst)
    image = image.transform((w, h), Image.PERSPECTIVE,
                            geometry.pil_inverse_perspective(forward),
                            resample=Image.BILINEAR, fillcolor=fill_color)
    return image, forward


def _noise(image: Image.Image, stddev: float, seed: int) -> Image.Image:
    arr = np.asarray(image, dtype=np.float32)
    noise = np.random.default_rng(seed).normal(0.0, stddev, arr.shape)
    return Image.fromarray(np.clip(arr + noise, 0, 255).astype(np.uint8))
