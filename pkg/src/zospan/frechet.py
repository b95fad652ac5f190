"""Partial weak Fréchet similarity through the free-space diagram.

The diagram of curves ``pi`` and ``sigma`` is the rectangle
``[0, |pi|] x [0, |sigma|]`` in arc-length coordinates. Points ``(x, y)`` with
``|pi(x) - sigma(y)| <= d`` form the free space; inside each cell (one segment
of each curve) that set is an ellipse, or a slab for parallel segments,
clipped by the cell rectangle. MinEx is the least length a corner-to-corner
path spends outside the free space, which is a 0/1 weighted shortest path with
the cell free spaces as 0-regions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .engine import StructureB, WeightedPath
from .geom import EllipseRectShape, GeometryError, PolygonShape
from .scene import ZERO, Scene, check_epsilon


class PolyCurve:
    """Polygonal curve parameterized by arc length."""

    def __init__(self, vertices):
        v = np.asarray(vertices, float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 2:
            raise GeometryError("a curve needs at least two 2-D vertices")
        if not np.all(np.isfinite(v)):
            raise GeometryError("non-finite curve vertex")
        seg = np.diff(v, axis=0)
        lens = np.hypot(seg[:, 0], seg[:, 1])
        if np.any(lens <= 0.0):
            raise GeometryError("consecutive curve vertices must be distinct")
        self.vertices = v
        self.lengths = lens
        self.units = seg / lens[:, None]
        self.cum = np.concatenate([[0.0], np.cumsum(lens)])

    @property
    def n_segments(self) -> int:
        return len(self.lengths)

    @property
    def length(self) -> float:
        return float(self.cum[-1])

    def __call__(self, s):
        """Point(s) at arc length ``s`` (clamped to the curve)."""
        s = np.clip(np.asarray(s, float), 0.0, self.length)
        return np.stack([np.interp(s, self.cum, self.vertices[:, 0]),
                         np.interp(s, self.cum, self.vertices[:, 1])], axis=-1)

    def scaled(self, lam: float) -> "PolyCurve":
        return PolyCurve(self.vertices * lam)

    @classmethod
    def load(cls, path) -> "PolyCurve":
        """Read whitespace-separated ``x y`` lines; ``#`` starts a comment."""
        pts = []
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = line.split()
                if len(parts) != 2:
                    raise GeometryError(f"line {lineno}: expected 'x y', got {line!r}")
                try:
                    pts.append((float(parts[0]), float(parts[1])))
                except ValueError:
                    raise GeometryError(f"line {lineno}: not a number in {line!r}") from None
        if len(pts) < 2:
            raise GeometryError(f"{path}: a curve needs at least two points")
        return cls(pts)

    def __repr__(self) -> str:
        return f"PolyCurve(n={len(self.vertices)}, length={self.length:.6g})"


@dataclass
class FreeCell:
    i: int
    j: int
    rect: tuple
    kind: str  # "empty", "degenerate" or "regular"
    shape: object = None  # EllipseRectShape, or PolygonShape for degenerate sets


def _cell_quadratic(pi: PolyCurve, sigma: PolyCurve, i: int, j: int, d: float):
    """``(M, b, c)`` with ``|pi(x) - sigma(y)|^2 - d^2 = z.Mz + 2 b.z + c``."""
    u, v = pi.units[i], sigma.units[j]
    # pi(x) - sigma(y) = w + x u - y v on this cell
    w = (pi.vertices[i] - pi.cum[i] * u) - (sigma.vertices[j] - sigma.cum[j] * v)
    uv = float(u @ v)
    M = np.array([[1.0, -uv], [-uv, 1.0]])
    b = np.array([u @ w, -(v @ w)])
    return M, b, float(w @ w) - d * d


@dataclass
class FreeSpaceDiagram:
    pi: PolyCurve
    sigma: PolyCurve
    d: float
    cells: list = field(repr=False)

    @property
    def width(self) -> float:
        return self.pi.length

    @property
    def height(self) -> float:
        return self.sigma.length

    @property
    def shape(self) -> tuple[int, int]:
        return self.pi.n_segments, self.sigma.n_segments

    def cell(self, i: int, j: int) -> FreeCell:
        return self.cells[i * self.sigma.n_segments + j]

    def nonempty(self) -> list[FreeCell]:
        return [c for c in self.cells if c.kind != "empty"]

    def counts(self) -> dict:
        out = {"cells": len(self.cells), "empty": 0, "degenerate": 0, "regular": 0}
        for c in self.cells:
            out[c.kind] += 1
        return out

    def is_free(self, x, y) -> np.ndarray:
        """Direct distance test at diagram points."""
        diff = self.pi(x) - self.sigma(y)
        return np.hypot(diff[..., 0], diff[..., 1]) <= self.d

    def scene(self, epsilon: float = 0.5) -> Scene:
        regions = [(c.shape, ZERO) for c in self.nonempty()]
        # cells are interior-disjoint by construction
        return Scene(regions, epsilon, validate=False)

    @property
    def corners(self) -> np.ndarray:
        return np.array([[0.0, 0.0], [self.width, 0.0], [self.width, self.height], [0.0, self.height]])


def build_free_space(pi: PolyCurve, sigma: PolyCurve, d: float) -> FreeSpaceDiagram:
    if d < 0 or not math.isfinite(d):
        raise ValueError(f"threshold must be a finite non-negative number, got {d}")
    cells = []
    for i in range(pi.n_segments):
        for j in range(sigma.n_segments):
            rect = (float(pi.cum[i]), float(pi.cum[i + 1]), float(sigma.cum[j]), float(sigma.cum[j + 1]))
            M, b, c = _cell_quadratic(pi, sigma, i, j, d)
            shape = EllipseRectShape(M, b, c, rect)
            kind = shape.classify()
            if kind == "degenerate":
                shape = PolygonShape(shape.degenerate_set(), check=False)
            elif kind == "empty":
                shape = None
            cells.append(FreeCell(i, j, rect, kind, shape))
    return FreeSpaceDiagram(pi, sigma, float(d), cells)


@dataclass
class MinExResult:
    minex_value: float
    path: WeightedPath
    matched_measure: float
    diagram: FreeSpaceDiagram = field(repr=False)
    epsilon: float = 0.5

    def to_dict(self) -> dict:
        return {"minex_value": self.minex_value, "matched_measure": self.matched_measure,
                "epsilon": self.epsilon, "threshold": self.diagram.d,
                "cells": self.diagram.counts(), "path": self.path.to_dict()}


def _as_curve(c) -> PolyCurve:
    return c if isinstance(c, PolyCurve) else PolyCurve(c)


def minex(pi, sigma, d: float, epsilon: float = 0.5, *, seed: int = 0) -> MinExResult:
    """Approximate MinEx value within a factor ``1 + epsilon``.

    ``matched_measure`` is the length of the returned path inside the free
    space; it is informational only.
    """
    pi, sigma = _as_curve(pi), _as_curve(sigma)
    epsilon = check_epsilon(epsilon)
    fsd = build_free_space(pi, sigma, d)
    structure = StructureB(fsd.scene(epsilon), epsilon, seed=seed, bounds=fsd.corners)
    path = structure.query((0.0, 0.0), (fsd.width, fsd.height))
    matched = sum(seg.length for seg in path.segments if seg.medium == "zero")
    return MinExResult(float(path.weight), path, float(matched), fsd, epsilon)


def weak_frechet_decide(pi, sigma, d: float, tol: float | None = None, epsilon: float = 0.5) -> bool:
    """Whether a free-space-only corner-to-corner path exists, up to ``tol``.

    ``tol`` defaults to ``1e-7`` times the diagram half-perimeter.
    """
    res = minex(pi, sigma, d, epsilon)
    if tol is None:
        tol = 1e-7 * (res.diagram.width + res.diagram.height)
    return res.minex_value <= tol
