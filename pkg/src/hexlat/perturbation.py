"""Periodic perturbations of the hexagonal lattice.

A perturbation with period N assigns a displacement vector to every class of
the discrete torus (lattice mod N); the perturbed configuration moves each
lattice point by the displacement of its class.  The sup norm is capped at
r*/20, which keeps the perturbed configuration simple.

This module computes the statistics that control the interaction energy:

* the displacement law Q_x: the empirical distribution of relative
  displacements p(x'+x) - p(x') over one period,
* the autocorrelation R and difference covariance C = 2(R_0 - R_x),
* the atomic matrix-valued spectral measure: the torus Fourier transform
  produces, at each of the N^2 frequencies k in (1/N)*dual mod dual, the
  positive semidefinite rank-<=2 matrix Re(p_hat(k) p_hat(k)^H); summing
  cos(2 pi k.x) times these atoms reconstructs R_x exactly,
* the two coercivity functionals: the first-shell size FS(p) (sum of second
  moments of Q_s over the six nearest-neighbor directions) and the spectral
  second moment SM(p) = tr sum |omega|^2 R_hat(omega), with frequencies
  reduced to the reciprocal Voronoi cell so the zero atom carries no weight.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .geometry import (
    FIRST_SHELL_INDICES,
    R_STAR,
    embed,
    embed_many,
    reciprocal_point,
    voronoi_reduce_many,
)

__all__ = [
    "MAX_SUP_NORM",
    "PeriodicPerturbation",
    "DisplacementLaw",
    "CorrelationMatrices",
    "SpectralMeasure",
    "TraceDecomposition",
    "periodize",
    "displacement_law",
    "relative_displacements",
    "second_moment",
    "fs_size",
    "correlation",
    "spectral_measure",
    "sm_size",
    "random_perturbation",
    "load_perturbation",
    "save_perturbation",
    "perturbation_from_dict",
    "perturbation_to_dict",
]

MAX_SUP_NORM = R_STAR / 20.0

# atoms whose trace is below this fraction of the total trace are treated as
# massless in the trace decomposition (avoids 0/0 normalization)
_TRACE_FLOOR = 1e-15


@dataclass(frozen=True)
class PeriodicPerturbation:
    """Displacement table over the discrete torus (lattice mod N).

    ``table[a, b]`` is the displacement of every lattice point congruent to
    (a, b) mod N; shape (N, N, 2).
    """

    table: np.ndarray

    def __post_init__(self):
        tab = np.asarray(self.table, dtype=float)
        if tab.ndim != 3 or tab.shape[0] != tab.shape[1] or tab.shape[2] != 2:
            raise ValueError("table must have shape (N, N, 2)")
        if tab.shape[0] < 1:
            raise ValueError("period N must be >= 1")
        if not np.all(np.isfinite(tab)):
            raise ValueError("displacements must be finite")
        sup = float(np.sqrt((tab**2).sum(axis=-1)).max())
        if sup > MAX_SUP_NORM * (1.0 + 1e-12):
            raise ValueError(
                f"sup norm {sup:.6g} exceeds the cap r*/20 = {MAX_SUP_NORM:.6g}"
            )
        object.__setattr__(self, "table", tab)
        object.__setattr__(self, "_sup_norm", sup)

    @property
    def N(self) -> int:
        return self.table.shape[0]

    @property
    def sup_norm(self) -> float:
        return self._sup_norm

    def displacement(self, m: int, n: int) -> np.ndarray:
        """Displacement of the lattice point with index (m, n)."""
        N = self.N
        return self.table[m % N, n % N]

    def is_constant(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.table - self.table[0, 0]) <= tol))


def periodize(finite_table, N: int) -> PeriodicPerturbation:
    """Restrict a finite displacement table to one period and tile it.

    ``finite_table`` maps index pairs (m, n) to displacement vectors.  Only
    entries inside the fundamental period 0 <= m, n < N are kept; all other
    classes default to zero.  The sup norm never increases under this
    restriction.
    """
    if N < 1:
        raise ValueError("period N must be >= 1")
    tab = np.zeros((N, N, 2))
    for (m, n), vec in finite_table.items():
        if 0 <= m < N and 0 <= n < N:
            tab[m, n] = np.asarray(vec, dtype=float)
    return PeriodicPerturbation(tab)


def relative_displacements(p: PeriodicPerturbation, x) -> np.ndarray:
    """Array of p(x'+x) - p(x') over all N^2 classes x'; shape (N, N, 2)."""
    m, n = x
    return np.roll(p.table, shift=(-m, -n), axis=(0, 1)) - p.table


@dataclass(frozen=True)
class DisplacementLaw:
    """Empirical law of relative displacements in one lattice direction.

    Atoms are (vector, weight) with weights summing to 1; equal vectors are
    merged.  The law is always centered: shifting the base class x' by x is
    a permutation of the torus, so the relative displacements sum to zero.
    """

    atoms: tuple

    def mean(self) -> np.ndarray:
        return sum(w * v for v, w in self.atoms)

    def second_moment(self) -> float:
        return float(sum(w * (v @ v) for v, w in self.atoms))


def displacement_law(p: PeriodicPerturbation, x) -> DisplacementLaw:
    """The law Q_x of relative displacements in direction x (an index pair)."""
    deltas = relative_displacements(p, x).reshape(-1, 2)
    w = 1.0 / len(deltas)
    merged: dict[tuple, list] = {}
    for v in deltas:
        key = (float(v[0]), float(v[1]))
        if key in merged:
            merged[key][1] += w
        else:
            merged[key] = [np.array(key), w]
    atoms = tuple((v, w) for v, w in merged.values())
    return DisplacementLaw(atoms)


def second_moment(p: PeriodicPerturbation, x) -> float:
    """Second moment of Q_x, computed directly from the table."""
    d = relative_displacements(p, x)
    return float((d**2).sum() / p.N**2)


def fs_size(p: PeriodicPerturbation) -> float:
    """First-shell size: sum of second moments of Q_s over the six nearest
    neighbor directions.  Vanishes iff p is constant."""
    return float(sum(second_moment(p, s) for s in FIRST_SHELL_INDICES))


@dataclass(frozen=True)
class CorrelationMatrices:
    """Autocorrelation R_x and difference covariance C_x on the torus.

    ``R[a, b]`` is the symmetrized second moment (1/N^2) sum_x' of
    sym(p(x + x') p(x')^T) for x = (a, b); C_x = 2 (R_0 - R_x), and
    tr C_x equals the second moment of Q_x.
    """

    R: np.ndarray
    C: np.ndarray


def correlation(p: PeriodicPerturbation) -> CorrelationMatrices:
    N = p.N
    R = np.zeros((N, N, 2, 2))
    for a in range(N):
        for b in range(N):
            shifted = np.roll(p.table, shift=(-a, -b), axis=(0, 1)).reshape(-1, 2)
            base = p.table.reshape(-1, 2)
            M = shifted.T @ base / N**2
            R[a, b] = (M + M.T) / 2.0
    C = 2.0 * (R[0, 0][None, None, :, :] - R)
    return CorrelationMatrices(R, C)


@dataclass(frozen=True)
class SpectralMeasure:
    """Atomic matrix-valued spectral measure of a periodic perturbation.

    ``frequencies`` (M, 2) are the N^2 torus frequencies reduced to the
    reciprocal Voronoi cell; ``matrices`` (M, 2, 2) are the symmetric PSD
    atoms Re(p_hat(k) p_hat(k)^H).  The atoms sum to R_0 and reconstruct
    R_x = sum_k cos(2 pi k.x) M_k for every torus class x.
    """

    frequencies: np.ndarray
    matrices: np.ndarray


@dataclass(frozen=True)
class TraceDecomposition:
    """Per-atom trace mass and unit-trace eigendecomposition.

    For atoms with positive mass, ``eigenvalues[i]`` sums to 1 and
    ``eigenvectors[i]`` holds the orthonormal eigenvector pair as rows.
    Massless atoms (trace below 1e-15 of the total) keep tau_mass 0.
    """

    tau_mass: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _torus_frequencies(N: int) -> np.ndarray:
    """Frequencies (a/N) sigma_hat + (b/N) tau_hat reduced to the reciprocal
    Voronoi cell; shape (N, N, 2) indexed like the FFT output."""
    grid = np.arange(N) / N
    aa, bb = np.meshgrid(grid, grid, indexing="ij")
    raw = aa.reshape(-1, 1) * reciprocal_point((1, 0)) + bb.reshape(-1, 1) * reciprocal_point((0, 1))
    red = voronoi_reduce_many(raw, lattice="reciprocal")
    return red.reshape(N, N, 2)


def spectral_measure(p: PeriodicPerturbation):
    """Explicit spectral measure plus its trace decomposition.

    The torus Fourier transform p_hat(k) = (1/N^2) sum_x' p(x') e^{-2 pi i k.x'}
    is evaluated with the FFT; the atom at the reduced frequency of k is
    Re(p_hat p_hat^H) = Re(p_hat) Re(p_hat)^T + Im(p_hat) Im(p_hat)^T, which is
    symmetric PSD of rank at most 2.
    """
    N = p.N
    ph = np.fft.fft2(p.table, axes=(0, 1)) / N**2  # (N, N, 2) complex
    re, im = ph.real.reshape(-1, 2), ph.imag.reshape(-1, 2)
    mats = np.einsum("ka,kb->kab", re, re) + np.einsum("ka,kb->kab", im, im)
    freqs = _torus_frequencies(N).reshape(-1, 2)
    measure = SpectralMeasure(freqs, mats)

    tr = np.trace(mats, axis1=1, axis2=2)
    total = tr.sum()
    tau = np.where(tr > _TRACE_FLOOR * max(total, _TRACE_FLOOR), tr, 0.0)
    eigvals = np.zeros((len(tr), 2))
    eigvecs = np.zeros((len(tr), 2, 2))
    for i in range(len(tr)):
        if tau[i] == 0.0:
            continue
        a, b, c = mats[i, 0, 0], mats[i, 0, 1], mats[i, 1, 1]
        mean = (a + c) / 2.0
        rad = np.hypot((a - c) / 2.0, b)
        lam1, lam2 = mean + rad, mean - rad
        if rad < 1e-300:
            v1 = np.array([1.0, 0.0])
        elif abs(b) > 1e-300:
            v1 = np.array([b, lam1 - a])
            v1 /= np.linalg.norm(v1)
        else:
            v1 = np.array([1.0, 0.0]) if a >= c else np.array([0.0, 1.0])
        v2 = np.array([-v1[1], v1[0]])
        eigvals[i] = (lam1 / tau[i], lam2 / tau[i])
        eigvecs[i] = np.stack([v1, v2])
    return measure, TraceDecomposition(tau, eigvals, eigvecs)


def sm_size(p: PeriodicPerturbation) -> float:
    """Spectral second moment tr sum_k |omega_k|^2 M_k.

    Frequencies are reduced to the reciprocal Voronoi cell, so the zero
    frequency carries no weight and adding a constant to p changes nothing.
    Boundary ties in the reduction share |omega| and cannot affect the value.
    """
    measure, _ = spectral_measure(p)
    w2 = (measure.frequencies**2).sum(axis=1)
    return float((w2 * np.trace(measure.matrices, axis1=1, axis2=2)).sum())


def random_perturbation(N: int, sup_norm: float, rng) -> PeriodicPerturbation:
    """Independent uniform-on-disk displacement per torus class."""
    if sup_norm > MAX_SUP_NORM:
        raise ValueError("requested sup norm exceeds the cap r*/20")
    theta = rng.uniform(0.0, 2.0 * np.pi, (N, N))
    rad = sup_norm * np.sqrt(rng.uniform(0.0, 1.0, (N, N)))
    return PeriodicPerturbation(np.stack([rad * np.cos(theta), rad * np.sin(theta)], axis=-1))


# ---------------------------------------------------------------------------
# JSON interchange: {"N": int, "displacements": [[a, b, dx, dy], ...]} with
# unlisted classes defaulting to zero.


def perturbation_from_dict(obj) -> PeriodicPerturbation:
    N = int(obj["N"])
    tab = np.zeros((N, N, 2))
    for a, b, dx, dy in obj.get("displacements", []):
        a, b = int(a), int(b)
        if not (0 <= a < N and 0 <= b < N):
            raise ValueError(f"class ({a}, {b}) outside the period 0..{N-1}")
        tab[a, b] = (float(dx), float(dy))
    return PeriodicPerturbation(tab)


def perturbation_to_dict(p: PeriodicPerturbation) -> dict:
    disp = []
    for a in range(p.N):
        for b in range(p.N):
            dx, dy = p.table[a, b]
            if dx != 0.0 or dy != 0.0:
                disp.append([a, b, float(dx), float(dy)])
    return {"N": p.N, "displacements": disp}


def load_perturbation(path) -> PeriodicPerturbation:
    with open(path) as fh:
        return perturbation_from_dict(json.load(fh))


def save_perturbation(p: PeriodicPerturbation, path) -> None:
    with open(path, "w") as fh:
        json.dump(perturbation_to_dict(p), fh)
