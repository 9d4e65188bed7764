"""Decoding, geometry normalization and sRGB -> CIE L*a*b* conversion.

Landscape inputs (width >= height, squares included) become 640x480,
portrait inputs become 480x640. Resampling is bilinear and stretches to
the target; no cropping or rotation is performed. Color conversion uses
the D65 illuminant and the 2 degree standard observer.
"""

import io
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DegenerateImage, UndecodableImage

LANDSCAPE = (640, 480)
PORTRAIT = (480, 640)

# linear sRGB -> XYZ, D65 / 2 degree observer
_RGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
# white = the matrix's own response to (1,1,1) so that sRGB white maps to
# exactly (100, 0, 0) and the gray axis carries zero chroma
_WHITE_D65 = _RGB_TO_XYZ.sum(axis=1)

_EPS = (6.0 / 29.0) ** 3
_KAPPA_INV = 1.0 / (3.0 * (6.0 / 29.0) ** 2)


class LabPixel(NamedTuple):
    L: float
    a: float
    b: float


@dataclass(frozen=True)
class StandardImage:
    """Geometry-normalized sRGB image; pixels is (height, width, 3) uint8."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        if (self.width, self.height) not in (LANDSCAPE, PORTRAIT):
            raise ValueError(f"non-standard size {self.width}x{self.height}")
        if self.pixels.shape != (self.height, self.width, 3):
            raise ValueError("pixel buffer does not match declared size")


@dataclass(frozen=True)
class LabImage:
    """Same grid as the source StandardImage; pixels is (height, width, 3) float64."""

    width: int
    height: int
    pixels: np.ndarray


def decode(raw: bytes) -> np.ndarray:
    """Decode JPEG/PNG bytes to an (h, w, 3) uint8 array."""
    try:
        img = Image.open(io.BytesIO(raw))
        img.load()
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise UndecodableImage(str(exc)) from exc
    if img.width < 2 or img.height < 2:
        raise DegenerateImage(f"{img.width}x{img.height}")
    return np.asarray(img.convert("RGB"), dtype=np.uint8)


def normalize_geometry(raw: bytes) -> StandardImage:
    """Decode and stretch to 640x480 (landscape/square) or 480x640 (portrait)."""
    arr = decode(raw)
    h, w = arr.shape[:2]
    target = LANDSCAPE if w >= h else PORTRAIT
    if (w, h) != target:
        img = Image.fromarray(arr).resize(target, Image.BILINEAR)
        arr = np.asarray(img, dtype=np.uint8)
    return StandardImage(width=target[0], height=target[1], pixels=arr)


def _lab_from_linear(rgb_lin: np.ndarray) -> np.ndarray:
    xyz = rgb_lin @ _RGB_TO_XYZ.T
    t = xyz / _WHITE_D65
    f = np.where(t > _EPS, np.cbrt(t), t * _KAPPA_INV + 4.0 / 29.0)
    fx, fy, fz = f[..., 0], f[..., 1], f[..., 2]
    out = np.empty_like(xyz)
    out[..., 0] = 116.0 * fy - 16.0
    out[..., 1] = 500.0 * (fx - fy)
    out[..., 2] = 200.0 * (fy - fz)
    return out


def srgb_array_to_lab(pixels: np.ndarray) -> np.ndarray:
    """Vectorized sRGB (uint8, any shape ending in 3) -> L*a*b* float64."""
    c = pixels.astype(np.float64) / 255.0
    lin = np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)
    return _lab_from_linear(lin)


def srgb_to_lab(r: int, g: int, b: int) -> LabPixel:
    lab = srgb_array_to_lab(np.array([r, g, b], dtype=np.uint8))
    return LabPixel(float(lab[0]), float(lab[1]), float(lab[2]))


def to_lab(image: StandardImage) -> LabImage:
    return LabImage(width=image.width, height=image.height, pixels=srgb_array_to_lab(image.pixels))
