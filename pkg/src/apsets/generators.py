"""Deterministic construction of the input families used across the suite.

Four flavors:

* exactly periodic lattices and unions of lattices;
* perturbed lattices a_n = n + sum_j c_j sin(2*pi*<lambda_j, n> + theta_j)
  (the same scalar displacement added to every coordinate), the canonical
  provably-almost-periodic family: integer shifts that bring every
  <lambda_j, tau> close to an integer move all points by little, and such
  shifts are relatively dense;
* one-dimensional cut-and-project sets (strip projections of the square
  lattice), exploratory inputs with no periodicity claim attached;
* seeded Poisson scatter, the negative control.

Identical specs generate identical configurations bit for bit: points are
enumerated deterministically and emitted in lexicographic order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import CUBE, PointConfiguration, Window, as_point
from .errors import ValidationError

LATTICE = "lattice"
LATTICE_UNION = "lattice_union"
PERTURBED_LATTICE = "perturbed_lattice"
CUT_AND_PROJECT_1D = "cut_and_project_1d"
POISSON = "poisson"

_KINDS = (LATTICE, LATTICE_UNION, PERTURBED_LATTICE, CUT_AND_PROJECT_1D, POISSON)


@dataclass(frozen=True)
class LatticeParams:
    """One lattice component: row-vector basis and offset."""

    basis: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        basis = np.atleast_2d(np.asarray(self.basis, dtype=float))
        offset = as_point(self.offset)
        if basis.shape[0] != basis.shape[1] or basis.shape[0] != offset.size:
            raise ValidationError("basis must be square and match the offset dimension")
        if abs(np.linalg.det(basis)) < 1e-12:
            raise ValidationError("lattice basis is singular")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "offset", offset)

    @property
    def dim(self) -> int:
        return self.offset.size

    def min_gap(self) -> float:
        """Shortest nonzero vector over small integer combinations.

        Exact for (near-)reduced bases, which is all the corpus uses; a
        heavily skewed basis could hide a shorter vector.
        """
        rng = range(-2, 3)
        coeffs = np.array(np.meshgrid(*[list(rng)] * self.dim,
                                      indexing="ij")).reshape(self.dim, -1).T
        coeffs = coeffs[np.any(coeffs != 0, axis=1)]
        vecs = coeffs @ self.basis
        return float(np.sqrt((vecs**2).sum(axis=1)).min())


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of one generated configuration.  Fields are used per kind:

    lattice: lattice  |  lattice_union: components
    perturbed_lattice: lattice, amplitudes, frequencies, phases
    cut_and_project_1d: slope, acceptance (None selects the canonical
        strip, the projection of the half-open unit square)
    poisson: intensity, seed (required)
    """

    kind: str
    window: Window
    lattice: LatticeParams | None = None
    components: tuple = ()
    amplitudes: tuple = ()
    frequencies: tuple = ()
    phases: tuple = ()
    slope: float = 0.0
    acceptance: tuple | None = None
    intensity: float = 0.0
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValidationError(f"unknown generator kind {self.kind!r}")
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "amplitudes", tuple(float(c) for c in self.amplitudes))
        object.__setattr__(self, "frequencies",
                           tuple(as_point(f, self.window.dim) for f in self.frequencies))
        object.__setattr__(self, "phases", tuple(float(p) for p in self.phases))
        if self.kind == LATTICE:
            if self.lattice is None or self.lattice.dim != self.window.dim:
                raise ValidationError("lattice kind needs lattice params matching the window")
        elif self.kind == LATTICE_UNION:
            if not self.components:
                raise ValidationError("lattice_union needs a nonempty component list")
            for comp in self.components:
                if comp.dim != self.window.dim:
                    raise ValidationError("component dimension differs from the window")
        elif self.kind == PERTURBED_LATTICE:
            if self.lattice is None or self.lattice.dim != self.window.dim:
                raise ValidationError("perturbed_lattice needs lattice params")
            n = len(self.amplitudes)
            if n == 0 or len(self.frequencies) != n or len(self.phases) != n:
                raise ValidationError(
                    "amplitudes, frequencies, and phases must have equal nonzero length"
                )
            total = sum(abs(c) for c in self.amplitudes)
            gap = self.lattice.min_gap()
            if total >= gap / 2:
                raise ValidationError(
                    f"total perturbation amplitude {total} must stay below half "
                    f"the minimal lattice gap {gap / 2}; the map would fold"
                )
        elif self.kind == CUT_AND_PROJECT_1D:
            if self.window.dim != 1:
                raise ValidationError("cut_and_project_1d needs a 1-D window")
            if not (self.slope > 0 and math.isfinite(self.slope)):
                raise ValidationError("slope must be a positive finite number")
            if self.acceptance is not None:
                lo, hi = self.acceptance
                if not lo < hi:
                    raise ValidationError("acceptance interval must be nonempty")
        elif self.kind == POISSON:
            if not (self.intensity > 0 and math.isfinite(self.intensity)):
                raise ValidationError("poisson intensity must be a positive finite number")
            if self.seed is None:
                raise ValidationError("poisson generation requires a seed")


def _lex_sorted(points: np.ndarray) -> np.ndarray:
    if points.shape[0] == 0:
        return points
    return points[np.lexsort(points.T[::-1])]


def _lattice_points(params: LatticeParams, window: Window) -> np.ndarray:
    """All lattice points inside the window, by enumerating the integer box
    that covers the window's corners in lattice coordinates."""
    lo, hi = window.bounds()
    dim = params.dim
    corners = np.array(np.meshgrid(*[[lo[i], hi[i]] for i in range(dim)],
                                   indexing="ij")).reshape(dim, -1).T
    inv = np.linalg.inv(params.basis)
    coeffs = (corners - params.offset) @ inv
    cmin = np.floor(coeffs.min(axis=0)).astype(int) - 1
    cmax = np.ceil(coeffs.max(axis=0)).astype(int) + 1
    axes = [np.arange(cmin[i], cmax[i] + 1) for i in range(dim)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim)
    pts = grid.astype(float) @ params.basis + params.offset
    return pts[window.contains(pts)]


def _perturb(points: np.ndarray, spec: GeneratorSpec) -> np.ndarray:
    disp = np.zeros(points.shape[0])
    for c, lam, theta in zip(spec.amplitudes, spec.frequencies, spec.phases):
        disp += c * np.sin(2 * math.pi * (points @ lam) + theta)
    return points + disp[:, None]


def generate(spec: GeneratorSpec) -> PointConfiguration:
    """Realize the generator parameters inside their window; deterministic
    including seeds."""
    window = spec.window
    if spec.kind == LATTICE:
        pts = _lattice_points(spec.lattice, window)
    elif spec.kind == LATTICE_UNION:
        pts = np.concatenate([_lattice_points(c, window) for c in spec.components])
    elif spec.kind == PERTURBED_LATTICE:
        # enumerate on a dilated window so perturbed boundary points survive,
        # then restrict back
        margin = sum(abs(c) for c in spec.amplitudes) * math.sqrt(window.dim)
        base = _lattice_points(spec.lattice, window.grow(margin))
        moved = _perturb(base, spec)
        pts = moved[window.contains(moved)]
    elif spec.kind == CUT_AND_PROJECT_1D:
        pts = _cut_and_project(spec)
    else:
        pts = _poisson_points(spec)
    return PointConfiguration(window.dim, window, _lex_sorted(pts))


def _cut_and_project(spec: GeneratorSpec) -> np.ndarray:
    """Project the square-lattice points inside an acceptance strip onto the
    physical line of the given slope."""
    theta = math.atan(spec.slope)
    u = np.array([math.cos(theta), math.sin(theta)])   # physical direction
    v = np.array([-math.sin(theta), math.cos(theta)])  # internal direction
    if spec.acceptance is None:
        # canonical strip: internal projection of the half-open unit square
        vals = [0.0, v[0], v[1], v[0] + v[1]]
        lo, hi = min(vals), max(vals)
    else:
        lo, hi = float(spec.acceptance[0]), float(spec.acceptance[1])
    wlo, whi = spec.window.bounds()
    t_lo, t_hi = float(wlo[0]), float(whi[0])
    # invert (t, w) -> (p, q) at the strip corners to bound the integer search
    corners = []
    for t in (t_lo, t_hi):
        for w in (lo, hi):
            corners.append(t * u + w * v)
    corners = np.array(corners)
    pmin, qmin = np.floor(corners.min(axis=0)).astype(int) - 1
    pmax, qmax = np.ceil(corners.max(axis=0)).astype(int) + 1
    p, q = np.meshgrid(np.arange(pmin, pmax + 1), np.arange(qmin, qmax + 1), indexing="ij")
    pq = np.stack([p, q], axis=-1).reshape(-1, 2).astype(float)
    t = pq @ u
    w = pq @ v
    keep = (w >= lo) & (w < hi)
    pts = t[keep].reshape(-1, 1)
    return pts[spec.window.contains(pts)]


def _poisson_points(spec: GeneratorSpec) -> np.ndarray:
    rng = np.random.default_rng(spec.seed)
    window = spec.window
    n = int(rng.poisson(spec.intensity * window.volume))
    lo, hi = window.bounds()
    if window.kind == CUBE:
        return rng.uniform(lo, hi, size=(n, window.dim))
    pts = []
    while len(pts) < n:
        cand = rng.uniform(lo, hi, size=(max(n, 16), window.dim))
        cand = cand[window.contains(cand)]
        pts.extend(cand.tolist())
    return np.asarray(pts[:n], dtype=float).reshape(n, window.dim)


def converging_family(spec: GeneratorSpec, amplitudes) -> list[PointConfiguration]:
    """Perturbed-lattice family sharing one index set, amplitudes scaled to
    the given non-increasing totals; crossing members never move a shared
    point farther than the difference of their totals.

    The last entry plays the role of the limit when the list ends at the
    smallest amplitude (conventionally 0).
    """
    if spec.kind != PERTURBED_LATTICE:
        raise ValidationError("converging_family needs a perturbed_lattice spec")
    amplitudes = [float(a) for a in amplitudes]
    if not amplitudes:
        raise ValidationError("amplitudes must be nonempty")
    if any(b > a + 1e-12 for a, b in zip(amplitudes, amplitudes[1:])):
        raise ValidationError("amplitudes must be non-increasing")
    total = sum(abs(c) for c in spec.amplitudes)
    if total <= 0:
        raise ValidationError("base spec must carry a nonzero perturbation")
    window = spec.window
    margin = max(amplitudes) * math.sqrt(window.dim)
    base = _lattice_points(spec.lattice, window.grow(margin))
    placed = []
    keep = np.ones(base.shape[0], dtype=bool)
    for amp in amplitudes:
        scale = amp / total
        scaled = GeneratorSpec(
            kind=PERTURBED_LATTICE,
            window=window,
            lattice=spec.lattice,
            amplitudes=tuple(c * scale for c in spec.amplitudes) if amp > 0 else (0.0,),
            frequencies=spec.frequencies if amp > 0 else (np.zeros(window.dim),),
            phases=spec.phases if amp > 0 else (0.0,),
        )
        moved = _perturb(base, scaled)
        placed.append(moved)
        keep &= window.contains(moved)
    # one shared index set: keep a base point only if every member's copy
    # stays inside the window, so crossing members pair up index by index
    order = np.lexsort(base[keep].T[::-1])
    return [
        PointConfiguration(window.dim, window, moved[keep][order])
        for moved in placed
    ]


def with_extra_point(c: PointConfiguration, point) -> PointConfiguration:
    """Fault-injection helper: one added atom."""
    p = as_point(point, c.dim)
    return PointConfiguration(c.dim, c.window, np.vstack([c.points, p[None, :]]))


def with_removed_point(c: PointConfiguration, index: int) -> PointConfiguration:
    """Fault-injection helper: one deleted atom."""
    if not 0 <= index < len(c):
        raise ValidationError("index out of range")
    return PointConfiguration(c.dim, c.window, np.delete(c.points, index, axis=0))


def integer_lattice(dim: int, halfwidth: float) -> GeneratorSpec:
    """Convenience spec: Z^dim on the cube of the given halfwidth."""
    return GeneratorSpec(
        kind=LATTICE,
        window=Window(CUBE, np.zeros(dim), 2 * halfwidth),
        lattice=LatticeParams(np.eye(dim), np.zeros(dim)),
    )


def standard_corpus() -> dict[str, PointConfiguration]:
    """The fixed input families shared by the verification suites."""
    sqrt2 = math.sqrt(2.0)
    corpus = {
        "lattice_z": generate(integer_lattice(1, 50.0)),
        "lattice_z2": generate(integer_lattice(2, 20.0)),
        "union_z_sqrt2": generate(GeneratorSpec(
            kind=LATTICE_UNION,
            window=Window(CUBE, [0.0], 100.0),
            components=(
                LatticeParams([[1.0]], [0.0]),
                LatticeParams([[sqrt2]], [0.0]),
            ),
        )),
        "perturbed_1d": generate(perturbed_line()),
        "fibonacci": generate(GeneratorSpec(
            kind=CUT_AND_PROJECT_1D,
            window=Window(CUBE, [0.0], 100.0),
            slope=2.0 / (1.0 + math.sqrt(5.0)),  # reciprocal golden ratio
        )),
        "poisson_1d": generate(GeneratorSpec(
            kind=POISSON,
            window=Window(CUBE, [0.0], 100.0),
            intensity=1.0,
            seed=20260809,
        )),
    }
    return corpus


def perturbed_line(halfwidth: float = 50.0, amplitude: float = 0.1) -> GeneratorSpec:
    """The canonical 1-D perturbed lattice a_n = n + amplitude*sin(2*pi*sqrt(2)*n)."""
    return GeneratorSpec(
        kind=PERTURBED_LATTICE,
        window=Window(CUBE, [0.0], 2 * halfwidth),
        lattice=LatticeParams([[1.0]], [0.0]),
        amplitudes=(amplitude,),
        frequencies=([math.sqrt(2.0)],),
        phases=(0.0,),
    )
