"""Image quantization and PNG I/O.

All float images in this package live in [0, 1] and are kept on the exact
1/255 grid (``quantize`` is applied by the renderer and by every consumer of
generated pixels), so PNG round trips are lossless and pixel-equality tests
are exact.
"""

from __future__ import annotations

import numpy as np
from PIL import Image


def quantize(img: np.ndarray) -> np.ndarray:
    """Snap a [0, 1] float image onto the 1/255 grid (round half up)."""
    img = np.clip(img, 0.0, 1.0)
    return np.floor(img * 255.0 + 0.5) / 255.0


def to_uint8(img: np.ndarray) -> np.ndarray:
    return np.floor(np.clip(img, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def from_uint8(arr: np.ndarray) -> np.ndarray:
    return arr.astype(np.float64) / 255.0


def save_png(path, img: np.ndarray) -> None:
    """Write an H x W x 3 float image in [0, 1] as 8-bit RGB PNG."""
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"expected HxWx3 image, got shape {img.shape}")
    Image.fromarray(to_uint8(img), mode="RGB").save(path, format="PNG")


def load_png(path) -> np.ndarray:
    """Read an 8-bit RGB PNG as an H x W x 3 float image in [0, 1]."""
    with Image.open(path) as im:
        arr = np.asarray(im.convert("RGB"), dtype=np.uint8)
    return from_uint8(arr)


def save_mask_png(path, mask: np.ndarray) -> None:
    """Write a binary keep-mask as single-channel PNG (0 or 255)."""
    m = np.asarray(mask)
    if m.ndim != 2:
        raise ValueError(f"expected HxW mask, got shape {m.shape}")
    if not np.isin(m, (0, 1)).all():
        raise ValueError("mask values must be 0 or 1")
    Image.fromarray((m * 255).astype(np.uint8), mode="L").save(path, format="PNG")


def load_mask_png(path) -> np.ndarray:
    """Read a 0/255 single-channel PNG back to a binary {0, 1} mask."""
    with Image.open(path) as im:
        arr = np.asarray(im.convert("L"), dtype=np.uint8)
    return (arr >= 128).astype(np.uint8)
