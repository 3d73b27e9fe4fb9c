"""Seeded random instances: grids, Delaunay triangulations and image-like
grids with contrast-dependent capacities."""

from __future__ import annotations

import math

import numpy as np
from scipy.spatial import Delaunay

from .fileformat import Instance
from .planar_core import PlanarGraph

KINDS = ("grid", "random-triangulation", "vision-grid")


def grid_graph(width: int, height: int) -> PlanarGraph:
    coords = [(x, y) for y in range(height) for x in range(width)]
    edges = []
    for y in range(height):
        for x in range(width):
            v = y * width + x
            if x + 1 < width:
                edges.append((v, v + 1))
            if y + 1 < height:
                edges.append((v, v + width))
    return PlanarGraph.from_coordinates(coords, edges)


def triangulation_graph(rng: np.random.Generator, n: int) -> PlanarGraph:
    pts = rng.random((n, 2))
    tri = Delaunay(pts)
    edges = set()
    for a, b, c in tri.simplices:
        for u, v in ((a, b), (b, c), (c, a)):
            edges.add((min(u, v), max(u, v)))
    edges = sorted((int(u), int(v)) for u, v in edges)
    # orient each edge at random so capacities are not biased
    flip = rng.random(len(edges)) < 0.5
    edges = [(v, u) if f else (u, v) for (u, v), f in zip(edges, flip)]
    return PlanarGraph.from_coordinates([tuple(p) for p in pts.tolist()], edges)


def grid_shape(n: int) -> tuple[int, int]:
    w = max(1, round(math.sqrt(n)))
    return w, max(1, math.ceil(n / w))


def sample_terminals(rng: np.random.Generator, n: int) -> tuple[list[int], list[int]]:
    """Disjoint source and sink sets, each of size in ``[1, max(1, n // 10)]``."""
    if n < 2:
        return [], []
    top = max(1, n // 10)
    ks = int(rng.integers(1, top + 1))
    kt = int(rng.integers(1, top + 1))
    picked = rng.permutation(n)[:ks + kt].tolist()
    if len(picked) < ks + kt:
        kt = len(picked) - ks
    return sorted(picked[:ks]), sorted(picked[ks:ks + kt])


def _vision_capacities(rng, g: PlanarGraph, width: int, height: int,
                       cap_range: tuple[int, int]) -> list[int]:
    """Capacities that are large between similar pixels of a blurred
    random image and small across its edges."""
    img = rng.random((height, width))
    for _ in range(3):
        img = (img + np.roll(img, 1, 0) + np.roll(img, 1, 1)
               + np.roll(img, -1, 0) + np.roll(img, -1, 1)) / 5
    img = (img > np.median(img)).astype(float) * 0.8 + rng.random((height, width)) * 0.2
    lo, hi = cap_range
    flat = img.ravel()
    c = [0] * g.dart_count
    for d in g.darts():
        diff = abs(flat[g.tail(d)] - flat[g.head[d]])
        c[d] = int(round(lo + (hi - lo) * math.exp(-8 * diff * diff)))
    return c


def generate(kind: str, n: int, seed: int,
             cap_range: tuple[int, int] = (0, 100)) -> Instance:
    """Deterministic instance of roughly ``n`` nodes (exactly ``n`` for
    triangulations)."""
    if kind not in KINDS:
        raise ValueError(f"unknown instance kind {kind!r}")
    rng = np.random.default_rng(seed)
    lo, hi = cap_range
    if kind == "random-triangulation":
        g = triangulation_graph(rng, max(n, 3))
    else:
        w, h = grid_shape(n)
        g = grid_graph(w, h)
    if kind == "vision-grid":
        w, h = grid_shape(n)
        c = _vision_capacities(rng, g, w, h, cap_range)
    else:
        c = rng.integers(lo, hi + 1, size=g.dart_count).tolist()
    S, T = sample_terminals(rng, g.node_count)
    return Instance(g, c, S, T)
