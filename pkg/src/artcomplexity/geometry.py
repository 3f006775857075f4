"""Geometric complexity of layered forms built from closed polylines.

Each layer scores the mean of two quantities: how far its polygons deviate
from their convex hull, and the quartile coefficient of dispersion of the
vertex angles along its outlines.  The form's score is the plain mean over
layers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import InvalidParameterError

MIN_QCD_EDGES = 4


@dataclass(frozen=True)
class Polyline:
    """Closed 2-D outline; an explicit repeat of the first vertex is dropped."""

    vertices: np.ndarray  # float64, shape (n, 2), n >= 3

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.float64)
        if v.ndim != 2 or v.shape[1] != 2:
            raise InvalidParameterError(f"polyline needs (n, 2) vertices, got shape {v.shape}")
        if len(v) >= 2 and np.array_equal(v[0], v[-1]):
            v = v[:-1]
        if len(v) < 3:
            raise InvalidParameterError("polyline needs at least 3 distinct vertices")
        if not np.all(np.isfinite(v)):
            raise InvalidParameterError("polyline vertices must be finite")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "vertices", v)

    @property
    def edge_count(self) -> int:
        return len(self.vertices)

    def area(self) -> float:
        """Unsigned shoelace area."""
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return 0.5 * abs(float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)))

    def vertex_angles(self) -> np.ndarray:
        """Unsigned angle (degrees, 0..180) between the edge rays at each
        vertex; vertices with a zero-length edge are skipped."""
        v = self.vertices
        a = np.roll(v, 1, axis=0) - v
        b = np.roll(v, -1, axis=0) - v
        na = np.linalg.norm(a, axis=1)
        nb = np.linalg.norm(b, axis=1)
        ok = (na > 0) & (nb > 0)
        cosines = np.einsum("ij,ij->i", a[ok], b[ok]) / (na[ok] * nb[ok])
        return np.degrees(np.arccos(np.clip(cosines, -1.0, 1.0)))

    @cached_property
    def is_simple(self) -> bool:
        """True when no two non-adjacent edges intersect."""
        v = self.vertices
        n = len(v)
        segs = np.stack([v, np.roll(v, -1, axis=0)], axis=1)
        for i in range(n):
            for j in range(i + 1, n):
                if j == i + 1 or (i == 0 and j == n - 1):
                    continue
                if _segments_intersect(segs[i], segs[j]):
                    return False
        return True


def _segments_intersect(s1: np.ndarray, s2: np.ndarray) -> bool:
    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    p1, p2 = s1
    p3, p4 = s2
    d1 = orient(p3, p4, p1)
    d2 = orient(p3, p4, p2)
    d3 = orient(p1, p2, p3)
    d4 = orient(p1, p2, p4)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)):
        return True

    def on_segment(p, q, r):
        return (
            min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
            and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])
        )

    if d1 == 0 and on_segment(p3, p4, p1):
        return True
    if d2 == 0 and on_segment(p3, p4, p2):
        return True
    if d3 == 0 and on_segment(p1, p2, p3):
        return True
    return d4 == 0 and on_segment(p1, p2, p4)


@dataclass(frozen=True)
class Layer:
    polylines: tuple[Polyline, ...]

    def __post_init__(self):
        if not self.polylines:
            raise InvalidParameterError("layer needs at least one polyline")
        object.__setattr__(self, "polylines", tuple(self.polylines))

    @property
    def edge_count(self) -> int:
        return sum(p.edge_count for p in self.polylines)

    def all_vertices(self) -> np.ndarray:
        return np.vstack([p.vertices for p in self.polylines])


@dataclass(frozen=True)
class LayeredForm:
    layers: tuple[Layer, ...]

    def __post_init__(self):
        if not self.layers:
            raise InvalidParameterError("form needs at least one layer")
        object.__setattr__(self, "layers", tuple(self.layers))


def layer_convexity_deviation(layer: Layer) -> float:
    """1 - (summed polygon area) / (convex hull area of all vertices).

    Degenerate (collinear) layers score 0.
    """
    try:
        hull_area = ConvexHull(layer.all_vertices()).volume
    except QhullError:
        return 0.0
    if hull_area <= 0:
        return 0.0
    covered = sum(p.area() for p in layer.polylines)
    return max(0.0, 1.0 - covered / hull_area)


def qcd(values) -> float | None:
    """Quartile coefficient of dispersion: (Q3 - Q1) / (Q3 + Q1).

    Quartiles use linear-interpolation quantiles.  None when Q1 + Q3 = 0.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        return None
    q1, q3 = np.quantile(values, [0.25, 0.75])
    if q1 + q3 == 0:
        return None
    return float((q3 - q1) / (q3 + q1))


def layer_angle_qcd(layer: Layer) -> float | None:
    """Quartile dispersion of the layer's vertex angles across its outlines."""
    if layer.edge_count < MIN_QCD_EDGES:
        raise InvalidParameterError(
            f"angle dispersion needs >= {MIN_QCD_EDGES} edges, layer has {layer.edge_count}"
        )
    return qcd(np.concatenate([p.vertex_angles() for p in layer.polylines]))


def physical_complexity(form: LayeredForm) -> float:
    """Mean over layers of (convexity deviation + angle dispersion) / 2.

    Layers with an undefined dispersion contribute their deviation alone.
    """
    scores = []
    for layer in form.layers:
        deviation = layer_convexity_deviation(layer)
        qcd = layer_angle_qcd(layer)
        scores.append(deviation if qcd is None else (deviation + qcd) / 2.0)
    return float(np.mean(scores))


def load_form(path: str | Path) -> LayeredForm:
    """Read a layered form from a .json file or the line-based text format.

    Text format: one polyline per line as whitespace-separated x y pairs;
    blank lines separate layers.  JSON format: {"layers": [layer, ...]}
    where a layer is a list of polylines and a polyline a list of [x, y].
    """
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        return form_from_json(text)
    return form_from_text(text)


def form_from_json(text: str) -> LayeredForm:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidParameterError(f"invalid JSON form: {exc}") from exc
    layers_doc = doc.get("layers") if isinstance(doc, dict) else doc
    if not isinstance(layers_doc, list):
        raise InvalidParameterError("JSON form must be a list of layers or {'layers': [...]}")
    layers = [
        Layer(tuple(Polyline(np.asarray(poly, dtype=float)) for poly in layer))
        for layer in layers_doc
    ]
    return LayeredForm(tuple(layers))


def form_from_text(text: str) -> LayeredForm:
    layers: list[Layer] = []
    current: list[Polyline] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            if current:
                layers.append(Layer(tuple(current)))
                current = []
            continue
        parts = line.split()
        if len(parts) % 2 != 0:
            raise InvalidParameterError(f"line {lineno}: odd number of coordinates")
        try:
            coords = [float(p) for p in parts]
        except ValueError as exc:
            raise InvalidParameterError(f"line {lineno}: {exc}") from exc
        current.append(Polyline(np.array(coords, dtype=float).reshape(-1, 2)))
    if current:
        layers.append(Layer(tuple(current)))
    return LayeredForm(tuple(layers))


def rotate(form: LayeredForm, degrees_angle: float) -> LayeredForm:
    """Rigidly rotate a whole form (used by invariance tests and tools)."""
    theta = math.radians(degrees_angle)
    rot = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
    return _transform(form, lambda v: v @ rot.T)


def translate(form: LayeredForm, dx: float, dy: float) -> LayeredForm:
    return _transform(form, lambda v: v + np.array([dx, dy]))


def scale(form: LayeredForm, factor: float) -> LayeredForm:
    if factor <= 0:
        raise InvalidParameterError("scale factor must be positive")
    return _transform(form, lambda v: v * factor)


def _transform(form: LayeredForm, fn) -> LayeredForm:
    return LayeredForm(
        tuple(
            Layer(tuple(Polyline(fn(p.vertices)) for p in layer.polylines))
            for layer in form.layers
        )
    )
