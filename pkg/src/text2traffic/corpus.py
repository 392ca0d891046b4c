"""Procedural traffic-scene layouts and their deterministic renderer.

Scenes are flat 2.5-D compositions: a sky band, a road surface whose shape
depends on the camera view, weather/lighting adjustments, and solid class
glyphs drawn inside ground-truth bounding boxes. Rendering is a pure function
of the layout, and every emitted pixel sits on the 1/255 grid so PNG round
trips and pixel-diff oracles are exact.

Color and geometry constants are chosen so that two contracts hold exactly:

* backgrounds are clamped to [0.02, 0.90] and object backdrops darken by
  x0.8, which always moves a pixel by more than one 8-bit step;
* every palette color has at least one channel outside the background range,
  so a glyph pixel can never equal the background it covers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .boxes import iou

CLASS_NAMES = (
    "car",
    "truck",
    "pedestrian",
    "traffic_cone",
    "pothole",
    "stone",
    "box",
    "dog",
    "puddle",
    "plastic_bag",
)

VIEWS = ("vehicle_side", "roadside")
WEATHERS = ("clear", "rain", "fog", "night")
ROAD_TYPES = ("urban", "highway", "rural", "tunnel")

# name -> RGB; every color carries one channel <= 0.01 or >= 0.92 (outside
# the clamped background range) so glyphs always differ from what they cover.
COLORS = {
    "red": (0.92, 0.10, 0.10),
    "orange": (0.95, 0.55, 0.08),
    "yellow": (0.95, 0.88, 0.10),
    "green": (0.01, 0.70, 0.20),
    "blue": (0.10, 0.30, 0.95),
    "white": (0.97, 0.97, 0.95),
    "black": (0.01, 0.01, 0.01),
    "silver": (0.92, 0.93, 0.95),
    "brown": (0.45, 0.28, 0.01),
}

CLASS_COLOR_CHOICES = {
    "car": ("red", "blue", "white", "black", "silver", "green"),
    "truck": ("white", "red", "blue", "silver", "green"),
    "pedestrian": ("red", "blue", "yellow", "green", "white", "black"),
    "traffic_cone": ("orange", "red", "yellow"),
    "pothole": ("black", "brown"),
    "stone": ("silver", "brown", "black"),
    "box": ("brown", "white", "yellow"),
    "dog": ("brown", "black", "white"),
    "puddle": ("blue", "silver"),
    "plastic_bag": ("white", "yellow", "blue"),
}

# (width_lo, width_hi, height_lo, height_hi) at the 64-pixel scale; the
# traffic cone stays a fixed 8x8 glyph so small-object metrics are comparable
# across the corpus.
CLASS_SIZE_RANGES = {
    "car": (12, 18, 8, 12),
    "truck": (14, 20, 10, 14),
    "pedestrian": (4, 6, 10, 14),
    "traffic_cone": (8, 8, 8, 8),
    "pothole": (8, 14, 4, 8),
    "stone": (5, 8, 4, 7),
    "box": (7, 11, 7, 11),
    "dog": (8, 12, 5, 8),
    "puddle": (10, 18, 4, 8),
    "plastic_bag": (5, 8, 5, 8),
}

RESOLUTIONS = ((64, 64), (64, 96))  # (H, W) buckets

MAX_OBJECTS = 8
MAX_OVERLAP_IOU = 0.3
PLACEMENT_RETRIES = 100

BG_MIN, BG_MAX = 0.02, 0.90
BACKDROP_FACTOR = 0.8

Rect = tuple[int, int, int, int]


def position_cell(bbox: Rect, width: int, height: int) -> str:
    """Map a bbox center onto the 3x3 grid, e.g. ``left-near``.

    Columns split the width in thirds (left/center/right); rows split the
    height with the bottom third nearest the camera (near/middle/far).
    """
    cx = 0.5 * (bbox[0] + bbox[2])
    cy = 0.5 * (bbox[1] + bbox[3])
    col = "left" if cx < width / 3 else ("center" if cx < 2 * width / 3 else "right")
    row = "far" if cy < height / 3 else ("middle" if cy < 2 * height / 3 else "near")
    return f"{col}-{row}"


@dataclass(frozen=True)
class SceneObject:
    class_name: str
    bbox: Rect  # (x0, y0, x1, y1), half-open pixel coords
    color: str
    position_cell: str

    def validate(self, width: int, height: int) -> None:
        if self.class_name not in CLASS_NAMES:
            raise ValueError(f"unknown class {self.class_name!r}")
        if self.color not in COLORS:
            raise ValueError(f"unknown color {self.color!r}")
        x0, y0, x1, y1 = self.bbox
        if not (0 <= x0 < x1 <= width and 0 <= y0 < y1 <= height):
            raise ValueError(f"bbox {self.bbox} outside {width}x{height} image")
        if self.position_cell != position_cell(self.bbox, width, height):
            raise ValueError("position_cell inconsistent with bbox center")


@dataclass(frozen=True)
class SceneLayout:
    view: str
    weather: str
    road_type: str
    objects: tuple[SceneObject, ...]
    width: int
    height: int
    seed: int

    def validate(self) -> None:
        if self.view not in VIEWS:
            raise ValueError(f"unknown view {self.view!r}")
        if self.weather not in WEATHERS:
            raise ValueError(f"unknown weather {self.weather!r}")
        if self.road_type not in ROAD_TYPES:
            raise ValueError(f"unknown road type {self.road_type!r}")
        if len(self.objects) > MAX_OBJECTS:
            raise ValueError(f"too many objects ({len(self.objects)})")
        for obj in self.objects:
            obj.validate(self.width, self.height)


@dataclass
class CorpusConfig:
    """Sampling distributions for procedural generation.

    Weights need not be normalized; negative weights are rejected. The
    vehicle-side/roadside ratio defaults to 50/50 (the mix is configurable
    because no canonical value exists).
    """

    view_weights: dict = field(
        default_factory=lambda: {"vehicle_side": 0.5, "roadside": 0.5}
    )
    weather_weights: dict = field(
        default_factory=lambda: {"clear": 0.55, "rain": 0.15, "fog": 0.15, "night": 0.15}
    )
    road_weights: dict = field(
        default_factory=lambda: {"urban": 0.4, "highway": 0.25, "rural": 0.2, "tunnel": 0.15}
    )
    class_weights: dict = field(
        default_factory=lambda: {name: 1.0 for name in CLASS_NAMES}
    )
    resolution_weights: dict = field(
        default_factory=lambda: {res: 1.0 for res in RESOLUTIONS}
    )
    min_objects: int = 0
    max_objects: int = 5

    def validate(self) -> None:
        for label, table in (
            ("view", self.view_weights),
            ("weather", self.weather_weights),
            ("road_type", self.road_weights),
            ("class", self.class_weights),
            ("resolution", self.resolution_weights),
        ):
            if not table:
                raise ValueError(f"empty {label} weight table")
            if any(w < 0 for w in table.values()):
                raise ValueError(f"negative weight in {label} distribution")
            if sum(table.values()) <= 0:
                raise ValueError(f"all-zero {label} distribution")
        if not (0 <= self.min_objects <= self.max_objects <= MAX_OBJECTS):
            raise ValueError("invalid objects-per-scene range")


def _weighted_choice(rng: np.random.Generator, table: dict):
    keys = list(table.keys())
    w = np.asarray([table[k] for k in keys], dtype=np.float64)
    return keys[rng.choice(len(keys), p=w / w.sum())]


def derive_record_seed(seed: int, index: int) -> int:
    """Stable per-record seed so any record regenerates in isolation."""
    state = np.random.SeedSequence((seed, index)).generate_state(2, np.uint64)
    return int(state[0] ^ (state[1] << np.uint64(1)) & np.uint64(0xFFFFFFFFFFFFFFFF))


def generate_layout(seed: int, index: int, config: CorpusConfig | None = None) -> SceneLayout:
    """Draw one layout; identical (seed, index, config) gives identical output."""
    config = config or CorpusConfig()
    config.validate()
    record_seed = derive_record_seed(seed, index)
    rng = np.random.Generator(np.random.PCG64(record_seed))

    height, width = _weighted_choice(rng, config.resolution_weights)
    view = _weighted_choice(rng, config.view_weights)
    weather = _weighted_choice(rng, config.weather_weights)
    road_type = _weighted_choice(rng, config.road_weights)

    n_objects = int(rng.integers(config.min_objects, config.max_objects + 1))
    horizon = _horizon_row(view, height)
    objects: list[SceneObject] = []
    for _ in range(n_objects):
        obj = _place_object(rng, config, width, height, horizon, [o.bbox for o in objects])
        if obj is not None:
            objects.append(obj)

    layout = SceneLayout(
        view=view,
        weather=weather,
        road_type=road_type,
        objects=tuple(objects),
        width=width,
        height=height,
        seed=record_seed,
    )
    layout.validate()
    return layout


def _place_object(rng, config, width, height, horizon, placed) -> SceneObject | None:
    class_name = _weighted_choice(rng, config.class_weights)
    w_lo, w_hi, h_lo, h_hi = CLASS_SIZE_RANGES[class_name]
    color = CLASS_COLOR_CHOICES[class_name][
        rng.integers(0, len(CLASS_COLOR_CHOICES[class_name]))
    ]
    for _ in range(PLACEMENT_RETRIES):
        w = int(rng.integers(w_lo, w_hi + 1))
        h = int(rng.integers(h_lo, h_hi + 1))
        y_lo = horizon + 1
        y_hi = height - h - 1
        if y_hi < y_lo:
            continue
        x0 = int(rng.integers(1, width - w - 1))
        y0 = int(rng.integers(y_lo, y_hi + 1))
        bbox = (x0, y0, x0 + w, y0 + h)
        if all(iou(bbox, other) <= MAX_OVERLAP_IOU for other in placed):
            return SceneObject(
                class_name=class_name,
                bbox=bbox,
                color=color,
                position_cell=position_cell(bbox, width, height),
            )
    return None  # crowded scene: drop the object


# ---------------------------------------------------------------------------
# rendering

_SKY_TOP = np.array([0.36, 0.52, 0.72])
_SKY_HORIZON = np.array([0.62, 0.70, 0.80])
_TUNNEL_CEILING = np.array([0.14, 0.14, 0.16])

_ROAD_COLOR = {
    "urban": np.array([0.32, 0.32, 0.34]),
    "highway": np.array([0.36, 0.36, 0.38]),
    "rural": np.array([0.42, 0.38, 0.30]),
    "tunnel": np.array([0.26, 0.26, 0.28]),
}
_SHOULDER_COLOR = {
    "urban": np.array([0.45, 0.45, 0.47]),
    "highway": np.array([0.34, 0.44, 0.30]),
    "rural": np.array([0.40, 0.48, 0.28]),
    "tunnel": np.array([0.22, 0.22, 0.24]),
}
_LANE_COLOR = np.array([0.85, 0.82, 0.25])


def _horizon_row(view: str, height: int) -> int:
    return round(0.40 * height) if view == "vehicle_side" else round(0.28 * height)


def _background(layout: SceneLayout) -> np.ndarray:
    h, w = layout.height, layout.width
    img = np.zeros((h, w, 3), dtype=np.float64)
    horizon = _horizon_row(layout.view, h)

    rows = np.arange(horizon, dtype=np.float64)[:, None, None] / max(horizon - 1, 1)
    if layout.road_type == "tunnel":
        img[:horizon] = _TUNNEL_CEILING * (1.0 - 0.3 * rows)
    else:
        img[:horizon] = _SKY_TOP * (1.0 - rows) + _SKY_HORIZON * rows

    img[horizon:] = _SHOULDER_COLOR[layout.road_type]

    # road surface: narrow trapezoid for the ego camera, wide for roadside
    top_frac, bot_frac = (0.10, 0.90) if layout.view == "vehicle_side" else (0.55, 1.0)
    road = _ROAD_COLOR[layout.road_type]
    for y in range(horizon, h):
        depth = (y - horizon) / max(h - 1 - horizon, 1)
        half = 0.5 * w * (top_frac + (bot_frac - top_frac) * depth)
        x0 = max(0, int(round(w / 2 - half)))
        x1 = min(w, int(round(w / 2 + half)))
        img[y, x0:x1] = road
        if layout.road_type != "rural" and y % 8 < 4:  # dashed lane markings
            lane_w = max(1, w // 48)
            offsets = (0,) if layout.road_type != "highway" else (-w // 8, w // 8)
            for off in offsets:
                cx = w // 2 + int(off * depth)
                lx0 = max(x0, cx - lane_w // 2)
                lx1 = min(x1, lx0 + lane_w)
                img[y, lx0:lx1] = _LANE_COLOR

    if layout.weather == "rain":
        img = 0.75 * (0.75 * img + 0.25 * np.array([0.45, 0.50, 0.60]))
    elif layout.weather == "fog":
        img = 0.45 * img + 0.55 * np.array([0.58, 0.58, 0.60])
    elif layout.weather == "night":
        img = img * 0.3

    return np.clip(img, BG_MIN, BG_MAX)


def _glyph_mask(class_name: str, w: int, h: int) -> np.ndarray:
    """Boolean glyph footprint for a w x h bbox; all glyphs are solid and
    cover at least half the box."""
    ys = (np.arange(h, dtype=np.float64) + 0.5)[:, None]
    xs = (np.arange(w, dtype=np.float64) + 0.5)[None, :]
    cy, cx = h / 2.0, w / 2.0
    ny = (ys - cy) / (h / 2.0)
    nx = (xs - cx) / (w / 2.0)

    if class_name in ("truck", "box"):
        return np.ones((h, w), dtype=bool)
    if class_name == "car":
        corner = max(1, min(w, h) // 5)
        m = np.ones((h, w), dtype=bool)
        tri = (ys - 0.5 + xs - 0.5) < corner  # cut the four corners
        m &= ~tri
        m &= ~np.flip(tri, axis=1)
        m &= ~np.flip(tri, axis=0)
        m &= ~np.flip(tri, axis=(0, 1))
        return m
    if class_name == "traffic_cone":
        frac = (ys + 0.0) / h
        tri = np.abs(xs - cx) <= frac * cx
        base = ys >= h - max(1, round(0.2 * h))
        return tri | base
    if class_name == "plastic_bag":
        return (np.abs(nx) ** 1.5 + np.abs(ny) ** 1.5) <= 1.0
    # pedestrian, pothole, stone, dog, puddle: inscribed ellipse
    return (nx**2 + ny**2) <= 1.0


def render(layout: SceneLayout) -> np.ndarray:
    """Render a layout to an H x W x 3 float image in [0, 1].

    Pure function of the layout (bit-identical across calls and processes);
    output values sit on the exact 1/255 grid. Each object darkens its bbox
    (x0.8 contact backdrop) and draws its solid glyph in its palette color,
    so with-vs-without-object renders differ on exactly the bbox pixels.
    """
    layout.validate()
    from .images import quantize

    img = quantize(_background(layout))
    for obj in layout.objects:
        x0, y0, x1, y1 = obj.bbox
        img[y0:y1, x0:x1] = quantize(img[y0:y1, x0:x1] * BACKDROP_FACTOR)
        glyph = _glyph_mask(obj.class_name, x1 - x0, y1 - y0)
        img[y0:y1, x0:x1][glyph] = quantize(np.asarray(COLORS[obj.color], dtype=np.float64))
    return img


def strip_object(layout: SceneLayout, index: int) -> SceneLayout:
    """Layout with object ``index`` removed (for pixel-diff oracles)."""
    objects = tuple(o for i, o in enumerate(layout.objects) if i != index)
    return replace(layout, objects=objects)


def glyph_coverage(class_name: str, w: int, h: int) -> float:
    """Fraction of the bbox covered by the glyph footprint."""
    return float(_glyph_mask(class_name, w, h).mean())


def article_for(word: str) -> str:
    return "an" if word[:1].lower() in "aeiou" else "a"


def class_phrase(class_name: str) -> str:
    return class_name.replace("_", " ")


def plural_phrase(class_name: str) -> str:
    phrase = class_phrase(class_name)
    return phrase + ("es" if phrase.endswith("x") else "s")


def _unused():  # pragma: no cover
    math.isnan(0.0)
