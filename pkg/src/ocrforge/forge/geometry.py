"""Homogeneous 2D transforms used to carry boxes through geometric
distortions.

Transforms are 3x3 matrices acting on column vectors (x, y, 1); the
composed forward map is applied to box corners, and the recorded box is
the axis-aligned hull of the transformed corners.
"""

from __future__ import annotations

import math

import numpy as np


def identity() -> np.ndarray:
    return np.eye(3)


def rotation_about(deg: float, cx: float, cy: float) -> np.ndarray:
    """Rotation by deg (CCW in image coordinates) about (cx, cy)."""
    t = math.radians(deg)
    c, s = math.cos(t), math.sin(t)
    rot = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    pre = np.array([[1.0, 0.0, -cx], [0.0, 1.0, -cy], [0.0, 0.0, 1.0]])
    post = np.array([[1.0, 0.0, cx], [0.0, 1.0, cy], [0.0, 0.0, 1.0]])
    return post @ rot @ pre


def translation(tx: float, ty: float) -> np.ndarray:
    m = np.eye(3)
    m[0, 2] = tx
    m[1, 2] = ty
    return m


def quad_to_quad(src: list[tuple[float, float]],
                 dst: list[tuple[float, float]]) -> np.ndarray:
    """Homography mapping the four src points onto the four dst points."""
    a = []
    b = []
    for (x, y), (u, v) in zip(src, dst):
        a.append([x, y, 1, 0, 0, 0, -u * x, -u * y])
        a.append([0, 0, 0, x, y, 1, -v * x, -v * y])
        b.extend([u, v])
    h = np.linalg.solve(np.array(a, dtype=float), np.array(b, dtype=float))
    return np.array([[h[0], h[1], h[2]],
                     [h[3], h[4], h[5]],
                     [h[6], h[7], 1.0]])


def apply(m: np.ndarray, points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    ones = np.ones((len(pts), 1))
    hom = (m @ np.hstack([pts, ones]).T).T
    return hom[:, :2] / hom[:, 2:3]


def box_corners(box) -> list[tuple[float, float]]:
    x, y, w, h = box
    return [(x, y), (x + w, y), (x + w, y + h), (x, y + h)]


def hull_box(points) -> tuple[float, float, float, float]:
    pts = np.asarray(points, dtype=float)
    x0, y0 = pts.min(axis=0)
    x1, y1 = pts.max(axis=0)
    return (x0, y0, x1 - x0, y1 - y0)


def transform_box(m: np.ndarray, box) -> tuple[float, float, float, float]:
    return hull_box(apply(m, box_corners(box)))


def round_clamp_box(box, width: int, height: int) -> tuple[int, int, int, int]:
    """Round to ints and clamp into [0, width] x [0, height]."""
    x, y, w, h = box
    x0 = min(max(int(round(x)), 0), width)
    y0 = min(max(int(round(y)), 0), height)
    x1 = min(max(int(round(x + w)), 0), width)
    y1 = min(max(int(round(y + h)), 0), height)
    return (x0, y0, max(x1 - x0, 0), max(y1 - y0, 0))


def pil_inverse_affine(m: np.ndarray) -> tuple[float, ...]:
    """PIL AFFINE transform wants output->input coefficients."""
    inv = np.linalg.inv(m)
    return (inv[0, 0], inv[0, 1], inv[0, 2], inv[1, 0], inv[1, 1], inv[1, 2])


def pil_inverse_perspective(m: np.ndarray) -> tuple[float, ...]:
    """PIL PERSPECTIVE transform wants output->input coefficients."""
    inv = np.linalg.inv(m)
    inv = inv / inv[2, 2]
    return (inv[0, 0], inv[0, 1], inv[0, 2],
            inv[1, 0], inv[1, 1], inv[1, 2],
            inv[2, 0], inv[2, 1])
