"""Spherical-design properties of hexagon shells and the periodic 2-design
inequality.

A shell of the lattice is a regular hexagon, which is a spherical 2-design
(in fact a 5-design): averages over the six vertices of polynomials up to
degree 5 equal circle averages.  The periodic statement needed for energy
bounds replaces the plain design identity by the inequality

    sum_s sum_x' |s.(p(s+x') - p(x'))|^2
        >= (1/4) r^2 sum_s sum_x' |p(s+x') - p(x')|^2

for every period-N displacement table p, obtained frequency by frequency
from a geometric eigenvalue bound: with weights w_s(k) = 2(1 - cos(2 pi k.s))
the normalized matrix M(k) = sum w_s(k) s s^T / (r^2 sum w_s(k)) has smallest
eigenvalue at least 1/4.  The constant 1/4 is asymptotically sharp: it is
attained exactly on the lines where one of the three weights vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import R_STAR, Shell, hexagon_orbit, embed_many
from .perturbation import PeriodicPerturbation, relative_displacements

__all__ = [
    "ShellWeights",
    "DesignMatrix",
    "first_shell",
    "hexagon_shell",
    "shell_weights",
    "geom_matrix",
    "lambda_min_many",
    "w_inequality_check",
    "w_inequality_trig_gap",
    "TwoDesignCheck",
    "periodic_two_design_check",
    "design_moment_check",
    "circle_average",
    "shell_average",
]

_DEGENERATE_TOL = 1e-15


def hexagon_shell(base_index) -> Shell:
    """The hexagon orbit through the given lattice index."""
    idx = np.array(hexagon_orbit(base_index), dtype=int)
    pts = embed_many(idx)
    return Shell(float(np.sqrt((pts[0] ** 2).sum())), idx, pts)


def first_shell() -> Shell:
    return hexagon_shell((1, 0))


def _independent_vertices(shell: Shell) -> np.ndarray:
    """Three vertices s1, s2, s3 = s2 - s1 representing the hexagon; the
    opposite vertices carry identical weights and projectors."""
    s1 = shell.points[0]
    s2 = shell.points[1]
    return np.stack([s1, s2, s2 - s1])


@dataclass(frozen=True)
class ShellWeights:
    """Frequency weights w_s(k) = 2(1 - cos(2 pi k.s)) at the three
    independent hexagon vertices."""

    k: np.ndarray
    w: np.ndarray

    @property
    def total(self) -> float:
        return float(self.w.sum())


def shell_weights(k, shell: Shell | None = None) -> ShellWeights:
    if shell is None:
        shell = first_shell()
    k = np.asarray(k, dtype=float)
    verts = _independent_vertices(shell)
    w = 2.0 * (1.0 - np.cos(2.0 * math.pi * (verts @ k)))
    return ShellWeights(k, w)


@dataclass(frozen=True)
class DesignMatrix:
    """Weight-averaged projector matrix of a hexagon shell, normalized to
    unit trace, together with its smallest eigenvalue."""

    M: np.ndarray
    lambda_min: float


def geom_matrix(k, shell: Shell | None = None) -> DesignMatrix:
    """M(k) = sum_s w_s(k) s s^T / (r^2 sum_s w_s(k)) over the full shell.

    Opposite vertices double both sums, so the three independent vertices
    suffice.  tr M = 1, and

        det M = (3/4) (w1 w2 + w2 w3 + w1 w3) / (w1 + w2 + w3)^2,
        lambda_min = (1 - sqrt(1 - 4 det M)) / 2 >= 1/4.

    Degenerate weights (k in the reciprocal lattice: all w_s = 0) raise,
    rather than defaulting, so scans cannot silently mask them.
    """
    if shell is None:
        shell = first_shell()
    sw = shell_weights(k, shell)
    total = sw.total
    if total <= _DEGENERATE_TOL:
        raise ValueError("degenerate weights: k pairs integrally with the whole shell")
    verts = _independent_vertices(shell) / shell.radius
    M = np.einsum("j,ja,jb->ab", sw.w, verts, verts) / total
    w1, w2, w3 = sw.w
    det = 0.75 * (w1 * w2 + w2 * w3 + w1 * w3) / total**2
    lam = (1.0 - math.sqrt(max(0.0, 1.0 - 4.0 * det))) / 2.0
    return DesignMatrix(M, lam)


def lambda_min_many(ks, shell: Shell | None = None) -> np.ndarray:
    """Vectorized smallest eigenvalues over an (n, 2) frequency array.

    Degenerate frequencies (total weight below tolerance) yield NaN instead
    of raising, so large scans can mask them explicitly.
    """
    if shell is None:
        shell = first_shell()
    ks = np.asarray(ks, dtype=float)
    verts = _independent_vertices(shell)
    w = 2.0 * (1.0 - np.cos(2.0 * math.pi * (ks @ verts.T)))  # (n, 3)
    total = w.sum(axis=1)
    sym = w[:, 0] * w[:, 1] + w[:, 1] * w[:, 2] + w[:, 0] * w[:, 2]
    with np.errstate(invalid="ignore", divide="ignore"):
        det = 0.75 * sym / total**2
        lam = (1.0 - np.sqrt(np.maximum(0.0, 1.0 - 4.0 * det))) / 2.0
    lam[total <= _DEGENERATE_TOL] = np.nan
    return lam


def w_inequality_check(k, shell: Shell | None = None) -> tuple[float, float]:
    """The weight inequality behind the eigenvalue bound: returns
    (w1 w2 + w2 w3 + w1 w3, (w1 + w2 + w3)^2 / 4); lhs >= rhs always holds
    because s3 = s2 - s1 ties the three phases together."""
    sw = shell_weights(k, shell)
    w1, w2, w3 = sw.w
    return float(w1 * w2 + w2 * w3 + w1 * w3), float(sw.total**2 / 4.0)


def w_inequality_trig_gap(k, shell: Shell | None = None) -> float:
    """Independent trigonometric evaluation of lhs - rhs:
    16 sin^2(t1/2) sin^2(t2/2) sin^2((t1 - t2)/2) with t_j = 2 pi k.s_j."""
    if shell is None:
        shell = first_shell()
    k = np.asarray(k, dtype=float)
    verts = _independent_vertices(shell)
    t1 = 2.0 * math.pi * float(verts[0] @ k)
    t2 = 2.0 * math.pi * float(verts[1] @ k)
    return 16.0 * math.sin(t1 / 2.0) ** 2 * math.sin(t2 / 2.0) ** 2 * math.sin((t1 - t2) / 2.0) ** 2


# ---------------------------------------------------------------------------
# the periodic 2-design inequality


@dataclass(frozen=True)
class TwoDesignCheck:
    """Both sides of the periodic 2-design inequality, evaluated in space
    and re-evaluated through the torus Fourier transform (Plancherel)."""

    lhs: float
    rhs: float
    lhs_spectral: float
    rhs_spectral: float

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs - 1e-12 * (1.0 + abs(self.rhs))


def periodic_two_design_check(p: PeriodicPerturbation, shell: Shell | None = None) -> TwoDesignCheck:
    """Evaluate sum_s sum_x' |s.d|^2 against (r^2/4) sum_s sum_x' |d|^2 with
    d = p(s+x') - p(x'), for one hexagon shell.

    The spectral route applies Plancherel per direction s:
    (1/N^2) sum_x' |d|^2 = sum_k w_s(k) |p_hat(k)|^2 and likewise with the
    projection on s inside, so the inequality reduces to the frequencywise
    eigenvalue bound.
    """
    if shell is None:
        shell = first_shell()
    N2 = p.N**2
    lhs = 0.0
    rhs_sum = 0.0
    for idx, s in zip(shell.indices, shell.points):
        d = relative_displacements(p, (int(idx[0]), int(idx[1]))).reshape(-1, 2)
        lhs += float(((d @ s) ** 2).sum())
        rhs_sum += float((d**2).sum())
    rhs = 0.25 * shell.radius**2 * rhs_sum

    ph = np.fft.fft2(p.table, axes=(0, 1)) / N2
    grid = np.arange(p.N) / p.N
    aa, bb = np.meshgrid(grid, grid, indexing="ij")
    lhs_spec = 0.0
    rhs_spec = 0.0
    for idx, s in zip(shell.indices, shell.points):
        # k.s = a m / N + b n / N for k = (a/N) sigma_hat + (b/N) tau_hat
        ks = aa * idx[0] + bb * idx[1]
        w = 2.0 * (1.0 - np.cos(2.0 * math.pi * ks))
        proj2 = np.abs(ph[..., 0] * s[0] + ph[..., 1] * s[1]) ** 2
        norm2 = (np.abs(ph) ** 2).sum(axis=-1)
        lhs_spec += float((w * proj2).sum()) * N2
        rhs_spec += float((w * norm2).sum()) * N2
    rhs_spec *= 0.25 * shell.radius**2
    return TwoDesignCheck(lhs, rhs, lhs_spec, rhs_spec)


# ---------------------------------------------------------------------------
# plain spherical design checks


def circle_average(coeffs: np.ndarray, radius: float, n_nodes: int = 64) -> float:
    """Average of the polynomial sum c_ij x^i y^j over the circle of the
    given radius, by the exactly-integrating equispaced rule (exact for
    trigonometric degree < n_nodes)."""
    theta = 2.0 * math.pi * np.arange(n_nodes) / n_nodes
    x, y = radius * np.cos(theta), radius * np.sin(theta)
    deg = coeffs.shape[0]
    vals = np.zeros_like(x)
    for i in range(deg):
        for j in range(deg - i):
            if coeffs[i, j] != 0.0:
                vals += coeffs[i, j] * x**i * y**j
    return float(vals.mean())


def shell_average(coeffs: np.ndarray, shell: Shell) -> float:
    x, y = shell.points[:, 0], shell.points[:, 1]
    deg = coeffs.shape[0]
    vals = np.zeros_like(x)
    for i in range(deg):
        for j in range(deg - i):
            if coeffs[i, j] != 0.0:
                vals += coeffs[i, j] * x**i * y**j
    return float(vals.mean())


def design_moment_check(shell: Shell, degree: int, trials: int, seed: int = 0) -> float:
    """Max |shell average - circle average| over random polynomials of total
    degree <= degree.  Hexagon shells are 5-designs, so for degree <= 5 the
    deviation is numerical noise; degree 6 monomials break it (negative
    control)."""
    if not 1 <= degree <= 5:
        raise ValueError("design check covers degrees 1..5")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        coeffs = np.zeros((degree + 1, degree + 1))
        for i in range(degree + 1):
            for j in range(degree + 1 - i):
                coeffs[i, j] = rng.standard_normal()
        dev = abs(shell_average(coeffs, shell) - circle_average(coeffs, shell.radius))
        worst = max(worst, dev)
    return worst
