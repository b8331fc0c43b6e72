"""Uniform spatial hashing for fixed-radius neighbor queries.

Cell size is chosen by the caller (usually the query radius), so a query
only ever inspects the 3^k neighboring cells.  For inputs with bounded
local counts this makes candidate generation linear in the number of
points.
"""

from __future__ import annotations

import itertools

import numpy as np


class GridIndex:
    """Hash of points into axis-aligned cubic cells of a fixed size."""

    def __init__(self, points: np.ndarray, cell: float):
        if cell <= 0:
            raise ValueError("cell size must be positive")
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        self.points = pts
        self.cell = float(cell)
        self.dim = pts.shape[1]
        self.cells: dict[tuple, np.ndarray] = {}
        if pts.shape[0]:
            keys = np.floor(pts / self.cell).astype(np.int64)
            order = np.lexsort(keys.T[::-1])
            sorted_keys = keys[order]
            change = np.any(np.diff(sorted_keys, axis=0) != 0, axis=1)
            starts = np.concatenate(([0], np.nonzero(change)[0] + 1, [len(order)]))
            for s, e in zip(starts[:-1], starts[1:]):
                self.cells[tuple(sorted_keys[s])] = order[s:e]

    def _candidates(self, key: tuple, reach: int) -> np.ndarray:
        """Indices hashed into cells within ``reach`` of ``key`` (Chebyshev)."""
        chunks = []
        for off in itertools.product(range(-reach, reach + 1), repeat=self.dim):
            hit = self.cells.get(tuple(k + o for k, o in zip(key, off)))
            if hit is not None:
                chunks.append(hit)
        if not chunks:
            return np.empty(0, dtype=np.int64)
        return np.concatenate(chunks)

    def query(self, x: np.ndarray, radius: float, strict: bool = False):
        """Indices and distances of points within ``radius`` of ``x``."""
        x = np.asarray(x, dtype=float)
        reach = max(1, int(np.ceil(radius / self.cell)))
        cand = self._candidates(tuple(np.floor(x / self.cell).astype(np.int64)), reach)
        if cand.size == 0:
            return cand, np.empty(0)
        d = np.sqrt(((self.points[cand] - x) ** 2).sum(axis=1))
        keep = d < radius if strict else d <= radius
        return cand[keep], d[keep]

    def pairs_within(self, other: np.ndarray, radius: float, strict: bool = False):
        """All pairs (i, j, d) with d = |self.points[i] - other[j]| within radius.

        Query points are grouped by cell so the per-group work is one
        vectorized distance block.
        """
        other = np.atleast_2d(np.asarray(other, dtype=float))
        i_out, j_out, d_out = [], [], []
        if other.shape[0] and self.points.shape[0]:
            reach = max(1, int(np.ceil(radius / self.cell)))
            keys = np.floor(other / self.cell).astype(np.int64)
            order = np.lexsort(keys.T[::-1])
            sorted_keys = keys[order]
            change = np.any(np.diff(sorted_keys, axis=0) != 0, axis=1)
            starts = np.concatenate(([0], np.nonzero(change)[0] + 1, [len(order)]))
            for s, e in zip(starts[:-1], starts[1:]):
                group = order[s:e]
                cand = self._candidates(tuple(sorted_keys[s]), reach)
                if cand.size == 0:
                    continue
                diff = self.points[cand][None, :, :] - other[group][:, None, :]
                d = np.sqrt((diff**2).sum(axis=2))
                mask = d < radius if strict else d <= radius
                gi, ci = np.nonzero(mask)
                if gi.size:
                    i_out.append(cand[ci])
                    j_out.append(group[gi])
                    d_out.append(d[gi, ci])
        if not i_out:
            empty = np.empty(0, dtype=np.int64)
            return empty, empty.copy(), np.empty(0)
        return np.concatenate(i_out), np.concatenate(j_out), np.concatenate(d_out)

    def accumulate(self, targets: np.ndarray, radius: float, func) -> np.ndarray:
        """Per-target sum of func(distances) over points within ``radius``.

        ``func`` must map an array of distances in [0, radius) to values;
        used for radial kernel sums on large node sets.
        """
        targets = np.atleast_2d(np.asarray(targets, dtype=float))
        out = np.zeros(targets.shape[0])
        if not (targets.shape[0] and self.points.shape[0]):
            return out
        reach = max(1, int(np.ceil(radius / self.cell)))
        keys = np.floor(targets / self.cell).astype(np.int64)
        order = np.lexsort(keys.T[::-1])
        sorted_keys = keys[order]
        change = np.any(np.diff(sorted_keys, axis=0) != 0, axis=1)
        starts = np.concatenate(([0], np.nonzero(change)[0] + 1, [len(order)]))
        for s, e in zip(starts[:-1], starts[1:]):
            group = order[s:e]
            cand = self._candidates(tuple(sorted_keys[s]), reach)
            if cand.size == 0:
                continue
            diff = self.points[cand][None, :, :] - targets[group][:, None, :]
            d = np.sqrt((diff**2).sum(axis=2))
            vals = np.where(d < radius, func(np.minimum(d, radius)), 0.0)
            out[group] = vals.sum(axis=1)
        return out


def nearest_neighbor_distances(points: np.ndarray, others: np.ndarray) -> np.ndarray:
    """Distance from each row of ``points`` to its nearest row of ``others``.

    Uses a doubling-radius grid search; both arrays must be nonempty.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    others = np.atleast_2d(np.asarray(others, dtype=float))
    span = max(
        1e-9,
        float(np.max(np.concatenate([points, others]).max(axis=0)
                     - np.concatenate([points, others]).min(axis=0), initial=0.0)),
    )
    # initial guess: typical spacing if others were spread evenly
    radius = max(span / max(len(others), 1) ** (1 / points.shape[1]), span * 1e-6)
    out = np.full(points.shape[0], np.inf)
    unresolved = np.arange(points.shape[0])
    while unresolved.size:
        index = GridIndex(others, cell=radius)
        still = []
        for i in unresolved:
            idx, d = index.query(points[i], radius)
            if idx.size:
                out[i] = d.min()
            else:
                still.append(i)
        unresolved = np.asarray(still, dtype=int)
        radius *= 2
        if radius > 4 * span and unresolved.size:
            # brute force the stragglers; cannot happen unless inputs are tiny
            diff = points[unresolved][:, None, :] - others[None, :, :]
            out[unresolved] = np.sqrt((diff**2).sum(axis=2)).min(axis=1)
            break
    return out
