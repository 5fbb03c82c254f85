"""Geometry of the hexagonal lattice of unit density.

The lattice is spanned by sigma = r*(1,0) and tau = r*(1/2, sqrt(3)/2) with
r = sqrt(2/sqrt(3)), the minimal point distance.  This normalization makes the
Voronoi cell of the origin (the fundamental hexagon) have area exactly 1.

Conventions used throughout the package:

* plane vectors are numpy arrays of shape (2,) (or (n, 2) for batches),
* lattice indices are integer pairs (m, n) for the point m*sigma + n*tau,
* the reciprocal lattice is the set of k with k.x integer for every lattice
  point x; it equals the direct lattice rotated by 90 degrees.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "R_STAR",
    "R_STAR_SQ",
    "SIGMA",
    "TAU",
    "BASIS",
    "SIGMA_HAT",
    "TAU_HAT",
    "DUAL_BASIS",
    "FIRST_SHELL_INDICES",
    "HEX_CIRCUMRADIUS",
    "Shell",
    "embed",
    "embed_many",
    "reciprocal_point",
    "covolume",
    "rot60_index",
    "hexagon_orbit",
    "ROT90",
    "ball_indices",
    "enumerate_ball",
    "reciprocal_ball_points",
    "shells_upto",
    "hexagon_shells_upto",
    "voronoi_reduce",
    "voronoi_reduce_many",
    "in_fundamental_hexagon",
]

R_STAR_SQ = 2.0 / np.sqrt(3.0)
R_STAR = np.sqrt(R_STAR_SQ)

SIGMA = np.array([R_STAR, 0.0])
TAU = np.array([R_STAR / 2.0, R_STAR * np.sqrt(3.0) / 2.0])

# basis matrix with sigma, tau as columns; its inverse rows are the dual basis
BASIS = np.column_stack([SIGMA, TAU])
DUAL_BASIS = np.linalg.inv(BASIS)
SIGMA_HAT = DUAL_BASIS[0].copy()
TAU_HAT = DUAL_BASIS[1].copy()

# circumradius of the fundamental hexagon (distance to its vertices)
HEX_CIRCUMRADIUS = R_STAR / np.sqrt(3.0)

# the six nearest neighbors of the origin, in index coordinates
FIRST_SHELL_INDICES = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))

# the reciprocal lattice is the direct lattice rotated by 90 degrees
ROT90 = np.array([[0.0, -1.0], [1.0, 0.0]])

_TIE_TOL = 1e-12


def embed(idx) -> np.ndarray:
    """Map an index pair (m, n) to the plane point m*sigma + n*tau."""
    m, n = idx
    return m * SIGMA + n * TAU


def embed_many(indices) -> np.ndarray:
    """Vectorized embed: (k, 2) integer array -> (k, 2) float array."""
    idx = np.asarray(indices, dtype=float)
    return idx @ BASIS.T


def reciprocal_point(idx) -> np.ndarray:
    """Map (m, n) to m*sigma_hat + n*tau_hat in the reciprocal lattice.

    The defining duality is sigma_hat.sigma = tau_hat.tau = 1 and
    sigma_hat.tau = tau_hat.sigma = 0, so k.x is an integer for every
    reciprocal point k and lattice point x.
    """
    m, n = idx
    return m * SIGMA_HAT + n * TAU_HAT


def covolume() -> float:
    """Area of the fundamental domain, |det [sigma tau]| (equal to 1)."""
    return float(abs(np.linalg.det(BASIS)))


def rot60_index(idx) -> tuple[int, int]:
    """Rotation by 60 degrees in index coordinates: (m, n) -> (-n, m+n)."""
    m, n = idx
    return (-n, m + n)


def hexagon_orbit(idx) -> list[tuple[int, int]]:
    """The six indices obtained from idx by repeated 60-degree rotation."""
    out = [tuple(int(c) for c in idx)]
    for _ in range(5):
        out.append(rot60_index(out[-1]))
    return out


def _index_box(radius: float) -> int:
    # |m sigma + n tau|^2 = r*^2 (m^2 + mn + n^2) >= (3/4) r*^2 n^2, so the
    # scan box |m|, |n| <= ceil(R / r* * 2/sqrt(3)) + 1 provably covers B_R
    return int(np.ceil(radius / R_STAR * 2.0 / np.sqrt(3.0))) + 1


def ball_indices(radius: float, *, include_origin: bool = True) -> np.ndarray:
    """Integer index pairs of all lattice points with |x| <= radius + 1e-12."""
    if radius < 0:
        return np.zeros((0, 2), dtype=int)
    m = _index_box(radius)
    grid = np.arange(-m, m + 1)
    mm, nn = np.meshgrid(grid, grid, indexing="ij")
    idx = np.stack([mm.ravel(), nn.ravel()], axis=1)
    q = R_STAR_SQ * (idx[:, 0] ** 2 + idx[:, 0] * idx[:, 1] + idx[:, 1] ** 2)
    keep = q <= radius * radius + 1e-12
    if not include_origin:
        keep &= q > 0
    return idx[keep]


def enumerate_ball(radius: float, group_by_radius: bool = False):
    """Lattice points with |x| <= radius + 1e-12.

    Returns a (k, 2) float array, or, when ``group_by_radius`` is set, a list
    of (radius, points) pairs sorted by radius.  Grouping compares squared
    radii with absolute tolerance 1e-9; the squared radii are r*^2 times
    integers (gaps >= r*^2), so this is safe.
    """
    idx = ball_indices(radius)
    pts = embed_many(idx)
    if not group_by_radius:
        return pts
    q = (pts**2).sum(axis=1)
    # exact integer shell labels m^2+mn+n^2 via rounding q / r*^2
    labels = np.rint(q / R_STAR_SQ).astype(int)
    assert np.all(np.abs(q - labels * R_STAR_SQ) < 1e-9)
    out = []
    for lab in sorted(set(labels.tolist())):
        out.append((float(np.sqrt(lab * R_STAR_SQ)), pts[labels == lab]))
    return out


@dataclass(frozen=True)
class Shell:
    """One shell of the lattice: all points at a common distance.

    ``indices`` has shape (k, 2); ``points = indices @ BASIS.T``.  Shells of
    the hexagonal lattice have sizes that are multiples of 6 (one or two
    hexagon orbits, occasionally more for large radii).
    """

    radius: float
    indices: np.ndarray
    points: np.ndarray

    @property
    def size(self) -> int:
        return len(self.indices)


def reciprocal_ball_points(radius: float, *, include_origin: bool = True) -> np.ndarray:
    """Reciprocal lattice points with |k| <= radius + 1e-12.

    Balls must be selected by the reciprocal norm, which differs from the
    direct index form; rotating the direct ball by 90 degrees gives exactly
    the reciprocal ball since the two lattices are rotated copies.
    """
    return embed_many(ball_indices(radius, include_origin=include_origin)) @ ROT90.T


def shells_upto(radius: float) -> list[Shell]:
    """All nonzero shells with radius <= given bound, sorted by radius."""
    idx = ball_indices(radius, include_origin=False)
    q = idx[:, 0] ** 2 + idx[:, 0] * idx[:, 1] + idx[:, 1] ** 2
    out = []
    for lab in sorted(set(q.tolist())):
        sub = idx[q == lab]
        out.append(Shell(float(np.sqrt(lab * R_STAR_SQ)), sub, embed_many(sub)))
    return out


def hexagon_shells_upto(radius: float) -> list[Shell]:
    """Shells decomposed into hexagon orbits (6 points each).

    Shells of size 12 split into two orbits; each orbit is the vertex set of
    a regular hexagon and carries the 2-design property on its own.
    """
    out = []
    for shell in shells_upto(radius):
        remaining = {tuple(int(c) for c in row) for row in shell.indices}
        while remaining:
            orbit = hexagon_orbit(next(iter(sorted(remaining))))
            remaining -= set(orbit)
            idx = np.array(orbit, dtype=int)
            out.append(Shell(shell.radius, idx, embed_many(idx)))
    return out


def _reduce_batch(u: np.ndarray, basis: np.ndarray, dual: np.ndarray) -> np.ndarray:
    coords = u @ dual.T
    base = np.round(coords)
    best = np.full(len(u), np.inf)
    out = np.zeros_like(u)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            red = u - (base + (di, dj)) @ basis.T
            d = (red**2).sum(axis=1)
            mask = d < best - _TIE_TOL
            out[mask] = red[mask]
            best[mask] = d[mask]
    return out


def voronoi_reduce(u, lattice: str = "direct") -> np.ndarray:
    """Reduce u modulo the lattice into the Voronoi cell of the origin.

    Returns u - x for the lattice point x minimizing |u - x|.  Ties on cell
    boundaries are broken toward the lexicographically smallest (x, y) output;
    cell-periodic quantities never depend on the choice.
    """
    basis, dual = _bases(lattice)
    u = np.asarray(u, dtype=float)
    coords = u @ dual.T
    base = np.round(coords)
    cands = []
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            red = u - (base + (di, dj)) @ basis.T
            cands.append((float(red @ red), float(red[0]), float(red[1]), red))
    dmin = min(c[0] for c in cands)
    tied = [c for c in cands if c[0] <= dmin + _TIE_TOL * (1.0 + dmin)]
    tied.sort(key=lambda c: (c[1], c[2]))
    return tied[0][3]


def voronoi_reduce_many(u, lattice: str = "direct") -> np.ndarray:
    """Batch Voronoi reduction of an (n, 2) array (no tie canonicalization)."""
    basis, dual = _bases(lattice)
    return _reduce_batch(np.asarray(u, dtype=float), basis, dual)


def _bases(lattice: str):
    if lattice == "direct":
        return BASIS, DUAL_BASIS
    if lattice == "reciprocal":
        # reciprocal basis as columns; its dual is the direct basis as rows
        return DUAL_BASIS.T, BASIS.T
    raise ValueError(f"unknown lattice {lattice!r} (use 'direct' or 'reciprocal')")


def in_fundamental_hexagon(u, tol: float = 1e-12) -> bool:
    """Membership in the closed Voronoi cell: u.x <= |x|^2/2 for the six
    nearest neighbors x (with tolerance)."""
    u = np.asarray(u, dtype=float)
    for idx in FIRST_SHELL_INDICES:
        if u @ embed(idx) > R_STAR_SQ / 2.0 + tol:
            return False
    return True
