"""Bijection-infimum (bottleneck) distance between windowed configurations.

The distance between two point multisets is the least t such that some
bijection moves no point farther than t.  On windowed data the bijection
of the underlying unbounded sets is emulated with a boundary collar:
points within ``width`` of the window boundary are optional (they may be
left unmatched), points of the shrunk core window are mandatory.  This is
exactly the loss region of a finite observation: a true matching of the
unbounded sets, restricted to the window, strands only points near the
boundary.  A result is ``trusted`` only when the computed value is at most
the collar width, i.e. when the collar provably absorbs all boundary
effects; how close the windowed value is to the unbounded ideal has no
a-priori bound, so the flag is reported instead of assumed.

Feasibility with mandatory vertices on both sides is a unit-lower-bound
circulation question.  It is decided by two plain maximum matchings on
restricted graphs (one saturating each mandatory side) merged with the
Mendelsohn-Dulmage construction, never by "maximum matching, then check
saturation", which can saturate optional vertices instead of mandatory
ones.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from ._grid import GridIndex, nearest_neighbor_distances
from .core import PointConfiguration, shrink_window
from .errors import (
    ApsetsError,
    DimensionMismatchError,
    SizeLimitError,
    ValidationError,
)

MAX_BRUTE_FORCE = 9


@dataclass(frozen=True)
class CollarSpec:
    """Boundary collar: points within ``width`` of the window boundary are
    optional for the matching; points of the shrunk core are mandatory."""

    width: float = 0.0

    def __post_init__(self):
        if not (self.width >= 0 and math.isfinite(self.width)):
            raise ValidationError("collar width must be a nonnegative finite number")


@dataclass(frozen=True)
class MatchingWitness:
    """A partial bijection between two index sets.

    ``pairs`` is a list of (index into A, index into B); unmatched indices
    always refer to optional (collar) points.
    """

    pairs: tuple
    unmatched_a: tuple
    unmatched_b: tuple

    def max_pair_distance(self, a: PointConfiguration, b: PointConfiguration) -> float:
        if not self.pairs:
            return 0.0
        ai = np.fromiter((p[0] for p in self.pairs), dtype=np.intp)
        bi = np.fromiter((p[1] for p in self.pairs), dtype=np.intp)
        # same expression as candidate generation, so values compare exactly
        d = np.sqrt(((a.points[ai] - b.points[bi]) ** 2).sum(axis=1))
        return float(d.max())


@dataclass(frozen=True)
class DistanceResult:
    """Outcome of a windowed bottleneck computation.

    ``value`` is math.inf when no matching covers the mandatory points at
    any threshold; ``diagnostics`` then carries the irreconcilable counts.
    ``trusted`` is True iff value <= collar.width, or the collar is zero
    and the two configurations have equal cardinality.
    """

    value: float
    witness: MatchingWitness | None
    collar: CollarSpec
    trusted: bool
    diagnostics: dict | None = None

    @property
    def infeasible(self) -> bool:
        return math.isinf(self.value)


def brute_force_distance(a: PointConfiguration, b: PointConfiguration) -> float:
    """Exact bottleneck value by enumerating every bijection.

    The independent oracle for the solver: no collar, both sides fully
    mandatory.  Returns math.inf on a cardinality mismatch; sizes above
    MAX_BRUTE_FORCE are rejected outright.
    """
    if a.dim != b.dim:
        raise DimensionMismatchError("configurations have different dimensions")
    n = len(a)
    if n != len(b):
        return math.inf
    if n > MAX_BRUTE_FORCE:
        raise SizeLimitError(f"brute force is limited to {MAX_BRUTE_FORCE} points, got {n}")
    if n == 0:
        return 0.0
    dmat = np.sqrt(((a.points[:, None, :] - b.points[None, :, :]) ** 2).sum(axis=2))
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
    values = dmat[np.arange(n)[None, :], perms].max(axis=1)
    return float(values.min())


# ---------------------------------------------------------------------------
# maximum matching (Hopcroft-Karp, iterative)
# ---------------------------------------------------------------------------

def _max_matching(n_left: int, n_right: int, adj: list[list[int]]):
    """Hopcroft-Karp maximum bipartite matching.

    Returns (match_l, match_r, size); -1 marks unmatched vertices.  The
    augmenting DFS is iterative, so deep paths cannot hit the recursion
    limit.
    """
    inf = n_left + 1
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    dist = [0] * n_left
    size = 0

    def bfs() -> bool:
        queue = deque()
        for u in range(n_left):
            if match_l[u] == -1:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = inf
        reachable = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    reachable = True
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return reachable

    def try_augment(root: int) -> bool:
        stack = [(root, iter(adj[root]))]
        chosen: list[int] = []
        while stack:
            u, it = stack[-1]
            descended = False
            for v in it:
                w = match_r[v]
                if w == -1:
                    # free right vertex: flip the whole alternating path
                    match_r[v] = u
                    match_l[u] = v
                    stack.pop()
                    while stack:
                        u2, _ = stack.pop()
                        v2 = chosen.pop()
                        match_r[v2] = u2
                        match_l[u2] = v2
                    return True
                if dist[w] == dist[u] + 1:
                    chosen.append(v)
                    stack.append((w, iter(adj[w])))
                    descended = True
                    break
            if not descended:
                dist[u] = inf
                stack.pop()
                if chosen and stack:
                    chosen.pop()
        return False

    while bfs():
        for u in range(n_left):
            if match_l[u] == -1 and try_augment(u):
                size += 1
    return match_l, match_r, size


# ---------------------------------------------------------------------------
# feasibility with mandatory vertices on both sides
# ---------------------------------------------------------------------------

def _cover_both_sides(n_a, n_b, edge_a, edge_b, mand_a, mand_b):
    """Partial bijection covering every mandatory vertex of both sides.

    Returns a list of (a, b) pairs or None when infeasible.  Two restricted
    maximum matchings (one per mandatory side) are merged per connected
    component of their symmetric difference; the Mendelsohn-Dulmage
    argument guarantees the merge never has to sacrifice a covered
    mandatory vertex.
    """
    adj_a: list[list[int]] = [[] for _ in range(n_a)]
    for i, j in zip(edge_a, edge_b):
        adj_a[i].append(j)

    mand_a_idx = np.nonzero(mand_a)[0]
    mand_b_idx = np.nonzero(mand_b)[0]

    # matching 1: saturate the mandatory left vertices
    adj1 = [adj_a[i] for i in mand_a_idx]
    l1, _r1, size1 = _max_matching(len(mand_a_idx), n_b, adj1)
    if size1 < len(mand_a_idx):
        return None
    m1 = np.full(n_a, -1, dtype=np.intp)
    m1[mand_a_idx] = l1
    m1r = np.full(n_b, -1, dtype=np.intp)
    m1r[m1[mand_a_idx]] = mand_a_idx

    # matching 2: saturate the mandatory right vertices
    bpos = np.full(n_b, -1, dtype=np.intp)
    bpos[mand_b_idx] = np.arange(len(mand_b_idx))
    adj2 = [[int(bpos[j]) for j in adj_a[i] if bpos[j] >= 0] for i in range(n_a)]
    l2, r2, size2 = _max_matching(n_a, len(mand_b_idx), adj2)
    if size2 < len(mand_b_idx):
        return None
    m2 = np.full(n_a, -1, dtype=np.intp)
    for i, p in enumerate(l2):
        if p != -1:
            m2[i] = mand_b_idx[p]
    m2r = np.full(n_b, -1, dtype=np.intp)
    m2r[mand_b_idx] = r2

    # merge: walk components of the union graph of both matchings
    pairs: list[tuple[int, int]] = []
    seen_a = np.zeros(n_a, dtype=bool)
    seen_b = np.zeros(n_b, dtype=bool)
    for start in range(n_a):
        if seen_a[start] or (m1[start] == -1 and m2[start] == -1):
            continue
        comp_a, comp_b = [], []
        queue = deque([("a", start)])
        seen_a[start] = True
        while queue:
            side, v = queue.popleft()
            if side == "a":
                comp_a.append(v)
                for w in (m1[v], m2[v]):
                    if w != -1 and not seen_b[w]:
                        seen_b[w] = True
                        queue.append(("b", w))
            else:
                comp_b.append(v)
                for w in (m1r[v], m2r[v]):
                    if w != -1 and not seen_a[w]:
                        seen_a[w] = True
                        queue.append(("a", w))
        need1 = any(mand_a[i] and m2[i] == -1 for i in comp_a)
        need2 = any(mand_b[j] and m1r[j] == -1 for j in comp_b)
        if need1 and need2:  # impossible by the merge argument
            raise ApsetsError("internal error: contradictory matching merge")
        if need2:
            use = m2
        elif need1 or any(m1[i] != -1 for i in comp_a):
            use = m1
        else:
            use = m2
        pairs.extend((i, int(use[i])) for i in comp_a if use[i] != -1)

    matched_a = {i for i, _ in pairs}
    matched_b = {j for _, j in pairs}
    if not (all(i in matched_a for i in mand_a_idx)
            and all(j in matched_b for j in mand_b_idx)):
        raise ApsetsError("internal error: matching merge lost a mandatory vertex")
    return pairs


def _witness_from_pairs(pairs, n_a, n_b) -> MatchingWitness:
    pairs = sorted(pairs)
    matched_a = {i for i, _ in pairs}
    matched_b = {j for _, j in pairs}
    return MatchingWitness(
        pairs=tuple(pairs),
        unmatched_a=tuple(i for i in range(n_a) if i not in matched_a),
        unmatched_b=tuple(j for j in range(n_b) if j not in matched_b),
    )


def _validate_pair(a: PointConfiguration, b: PointConfiguration) -> None:
    if a.dim != b.dim:
        raise DimensionMismatchError("configurations have different dimensions")
    if a.window != b.window:
        raise ValidationError("windows must coincide; restrict both configurations first")


def _mandatory_mask(c: PointConfiguration, width: float) -> np.ndarray:
    core = shrink_window(c.window, width)
    if core.is_empty or len(c) == 0:
        return np.zeros(len(c), dtype=bool)
    return core.contains(c.points)


def _candidate_pairs(a: PointConfiguration, b: PointConfiguration,
                     radius: float, strict: bool = False):
    cell = max(radius, 1e-12)
    index = GridIndex(a.points, cell=cell)
    return index.pairs_within(b.points, radius, strict=strict)


def matching_feasible(a: PointConfiguration, b: PointConfiguration, eps: float,
                      collar: CollarSpec = CollarSpec(0.0), strict: bool = False):
    """Decide whether a partial bijection covers all mandatory points of
    both sides with every pair distance <= eps (< eps when ``strict``).

    Returns (feasible, witness); the witness is None when infeasible.
    """
    _validate_pair(a, b)
    if not (eps > 0 and math.isfinite(eps)):
        raise ValidationError("eps must be a positive finite number")
    mand_a = _mandatory_mask(a, collar.width)
    mand_b = _mandatory_mask(b, collar.width)
    if len(a) == 0 or len(b) == 0:
        if mand_a.any() or mand_b.any():
            return False, None
        return True, _witness_from_pairs([], len(a), len(b))
    ai, bi, _d = _candidate_pairs(a, b, eps, strict=strict)
    pairs = _cover_both_sides(len(a), len(b), ai, bi, mand_a, mand_b)
    if pairs is None:
        return False, None
    return True, _witness_from_pairs(pairs, len(a), len(b))


def bottleneck_distance(a: PointConfiguration, b: PointConfiguration,
                        collar: CollarSpec = CollarSpec(0.0)) -> DistanceResult:
    """Minimal threshold at which the collared matching is feasible.

    The optimum is always a realized pairwise distance, so the search is a
    bisection over the sorted candidate distances below an adaptive cap
    (twice the mean nearest-neighbor distance, doubled while infeasible).
    No tolerance parameter is involved; the value is exact.
    """
    _validate_pair(a, b)
    mand_a = _mandatory_mask(a, collar.width)
    mand_b = _mandatory_mask(b, collar.width)
    n_a, n_b = len(a), len(b)

    def result(value, witness, diagnostics=None):
        trusted = (not math.isinf(value)) and (
            value <= collar.width or (collar.width == 0 and n_a == n_b)
        )
        return DistanceResult(value, witness, collar, trusted, diagnostics)

    def infeasible_result():
        return result(
            math.inf, None,
            diagnostics={
                "mandatory_a": int(mand_a.sum()), "mandatory_b": int(mand_b.sum()),
                "card_a": n_a, "card_b": n_b,
            },
        )

    if n_a == 0 or n_b == 0:
        if mand_a.any() or mand_b.any():
            return infeasible_result()
        return result(0.0, _witness_from_pairs([], n_a, n_b))

    nn = np.concatenate([
        nearest_neighbor_distances(a.points, b.points),
        nearest_neighbor_distances(b.points, a.points),
    ])
    max_cap = a.window.diameter + 1e-9
    cap = min(max(2 * float(nn.mean()), float(nn.max()), 1e-9), max_cap)

    while True:
        ai, bi, d = _candidate_pairs(a, b, cap)
        thresholds = np.unique(np.concatenate([[0.0], d]))

        order = np.argsort(d, kind="stable")
        ai_s, bi_s, d_s = ai[order], bi[order], d[order]

        def feasible_at(t: float):
            m = int(np.searchsorted(d_s, t, side="right"))
            return _cover_both_sides(n_a, n_b, ai_s[:m], bi_s[:m], mand_a, mand_b)

        top = feasible_at(thresholds[-1])
        if top is None:
            if cap >= max_cap:
                return infeasible_result()
            cap = min(cap * 2, max_cap)
            continue

        lo, hi = 0, len(thresholds) - 1
        best = top
        while lo < hi:
            mid = (lo + hi) // 2
            pairs = feasible_at(thresholds[mid])
            if pairs is None:
                lo = mid + 1
            else:
                best = pairs
                hi = mid
        witness = _witness_from_pairs(best, n_a, n_b)
        return result(witness.max_pair_distance(a, b), witness)
