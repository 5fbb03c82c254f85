import json
import math

import numpy as np
import pytest

from hexlat import geometry as g
from hexlat import perturbation as P

EPS = 1e-3


def single_class(eps=EPS, N=2):
    tab = np.zeros((N, N, 2))
    tab[0, 0, 0] = eps
    return P.PeriodicPerturbation(tab)


def random_p(N, rng, sup=None):
    return P.random_perturbation(N, sup if sup is not None else g.R_STAR / 20, rng)


def test_construction_guards():
    with pytest.raises(ValueError):
        P.PeriodicPerturbation(np.zeros((2, 3, 2)))
    big = np.zeros((2, 2, 2))
    big[0, 0, 0] = g.R_STAR / 10  # exceeds the r*/20 cap
    with pytest.raises(ValueError):
        P.PeriodicPerturbation(big)
    with pytest.raises(ValueError):
        P.PeriodicPerturbation(np.full((1, 1, 2), np.nan))


def test_periodize():
    c = np.array([0.01, -0.02])
    p = P.periodize({(m, n): c for m in range(3) for n in range(3)}, 3)
    assert p.is_constant()
    assert np.allclose(p.table[0, 0], c)

    p = P.periodize({}, 3)
    assert p.N == 3 and p.sup_norm == 0.0

    p = P.periodize({(0, 0): [EPS, 0.0], (5, 7): [0.05, 0.0]}, 2)
    assert np.count_nonzero((p.table**2).sum(axis=-1)) == 1  # out-of-period entry dropped
    assert p.sup_norm == EPS

    with pytest.raises(ValueError):
        P.periodize({(0, 0): [g.R_STAR, 0.0]}, 2)


def test_displacement_law_examples():
    c = np.array([0.01, 0.005])
    const = P.PeriodicPerturbation(np.tile(c, (3, 3, 1)))
    law = P.displacement_law(const, (2, 1))
    assert len(law.atoms) == 1 and np.allclose(law.atoms[0][0], 0.0)

    p = single_class()
    law0 = P.displacement_law(p, (0, 0))
    assert len(law0.atoms) == 1 and law0.atoms[0][1] == 1.0

    law = P.displacement_law(p, (1, 0))
    atoms = sorted((round(v[0], 9), round(w, 9)) for v, w in law.atoms)
    assert atoms == [(-EPS, 0.25), (0.0, 0.5), (EPS, 0.25)]


def test_laws_are_centered_with_unit_mass():
    rng = np.random.default_rng(0)
    for N in (1, 2, 3, 5):
        p = random_p(N, rng)
        for x in [(1, 0), (0, 1), (2, -1), (3, 3)]:
            law = P.displacement_law(p, x)
            assert abs(sum(w for _, w in law.atoms) - 1.0) < 1e-12
            assert np.linalg.norm(law.mean()) < 1e-12


def test_fs_size():
    assert P.fs_size(P.PeriodicPerturbation(np.tile([0.01, 0.0], (4, 4, 1)))) == 0.0
    p = single_class()
    # brute-force oracle: enumerate the 4 classes for each of the 6 directions
    tot = 0.0
    for s in g.FIRST_SHELL_INDICES:
        for a in range(2):
            for b in range(2):
                d = p.displacement(a + s[0], b + s[1]) - p.displacement(a, b)
                tot += float(d @ d) / 4.0
    assert P.fs_size(p) == pytest.approx(tot, rel=1e-14)
    assert tot == pytest.approx(3 * EPS**2, rel=1e-12)
    # quadratic scaling
    half = P.PeriodicPerturbation(p.table / 2)
    assert P.fs_size(half) == pytest.approx(P.fs_size(p) / 4, rel=1e-12)


def test_correlation_examples():
    zero = P.PeriodicPerturbation(np.zeros((3, 3, 2)))
    corr = P.correlation(zero)
    assert np.all(corr.R == 0.0) and np.all(corr.C == 0.0)

    c = np.array([0.02, -0.01])
    const = P.PeriodicPerturbation(np.tile(c, (2, 2, 1)))
    corr = P.correlation(const)
    assert np.allclose(corr.R, np.outer(c, c))
    assert np.allclose(corr.C, 0.0)

    p = single_class()
    corr = P.correlation(p)
    assert np.allclose(corr.R[0, 0], [[EPS**2 / 4, 0.0], [0.0, 0.0]])


def test_correlation_identities():
    rng = np.random.default_rng(1)
    for N in (2, 4, 5):
        p = random_p(N, rng)
        corr = P.correlation(p)
        for a in range(N):
            for b in range(N):
                assert np.allclose(corr.R[a, b], corr.R[a, b].T, atol=1e-15)
                assert np.allclose(corr.R[a, b], corr.R[(-a) % N, (-b) % N], atol=1e-15)
                assert np.allclose(
                    corr.C[a, b], 2 * (corr.R[0, 0] - corr.R[a, b]), atol=1e-15
                )
                m2 = P.second_moment(p, (a, b))
                assert abs(np.trace(corr.C[a, b]) - m2) < 1e-12


def test_spectral_measure_examples():
    c = np.array([0.02, -0.01])
    const = P.PeriodicPerturbation(np.tile(c, (3, 3, 1)))
    meas, _ = P.spectral_measure(const)
    w2 = (meas.frequencies**2).sum(axis=1)
    traces = np.trace(meas.matrices, axis1=1, axis2=2)
    live = traces > 1e-18
    assert live.sum() == 1 and w2[live][0] < 1e-18
    assert np.allclose(meas.matrices[live][0], np.outer(c, c))

    p = single_class()
    meas, _ = P.spectral_measure(p)
    assert len(meas.frequencies) == 4
    assert np.allclose(meas.matrices, np.array([[EPS**2 / 16, 0.0], [0.0, 0.0]]))


def test_plancherel():
    rng = np.random.default_rng(2)
    for N in (2, 3, 6):
        p = random_p(N, rng)
        ph = np.fft.fft2(p.table, axes=(0, 1)) / N**2
        lhs = (p.table**2).sum() / N**2
        rhs = (np.abs(ph) ** 2).sum()
        assert abs(lhs - rhs) < 1e-12 * (1 + lhs)


def test_spectral_invariants():
    rng = np.random.default_rng(3)
    for N in (1, 2, 3, 5, 6):
        p = random_p(N, rng)
        meas, td = P.spectral_measure(p)
        corr = P.correlation(p)
        # atoms are PSD and sum to R_0
        for M in meas.matrices:
            assert np.linalg.eigvalsh(M).min() >= -1e-12
        assert np.allclose(meas.matrices.sum(axis=0), corr.R[0, 0], atol=1e-10)
        # reconstruction on every torus class
        for a in range(N):
            for b in range(N):
                x = g.embed((a, b))
                rec = (
                    np.cos(2 * np.pi * (meas.frequencies @ x))[:, None, None] * meas.matrices
                ).sum(axis=0)
                assert np.allclose(rec, corr.R[a, b], atol=1e-10)
        # trace decomposition: unit eigenvalue sum, orthonormal frames
        for i in range(len(td.tau_mass)):
            if td.tau_mass[i] > 0:
                assert abs(td.eigenvalues[i].sum() - 1.0) < 1e-12
                assert td.eigenvalues[i].min() >= -1e-12
                V = td.eigenvectors[i]
                assert np.allclose(V @ V.T, np.eye(2), atol=1e-12)


def test_second_moment_and_bounds():
    rng = np.random.default_rng(4)
    for N in (2, 3, 4, 6):
        p = random_p(N, rng)
        corr = P.correlation(p)
        sm = P.sm_size(p)
        fs = P.fs_size(p)
        for a in range(N):
            for b in range(N):
                m2 = P.displacement_law(p, (a, b)).second_moment()
                assert abs(m2 - 2 * np.trace(corr.R[0, 0] - corr.R[a, b])) < 1e-12
                if a == b == 0:
                    continue
                # minimal-norm representative of the class modulo N
                x = min(
                    (g.embed((a + i * N, b + j * N)) for i in (-1, 0, 1) for j in (-1, 0, 1)),
                    key=np.linalg.norm,
                )
                x2 = float(x @ x)
                assert m2 <= 8 * math.pi**2 * x2 * sm + 1e-12
                assert m2 <= x2 / g.R_STAR_SQ * fs + 1e-12


def test_sm_size_shift_invariance():
    rng = np.random.default_rng(6)
    p = random_p(3, rng, sup=g.R_STAR / 50)
    shifted = P.PeriodicPerturbation(p.table + np.array([0.005, -0.003]))
    assert P.sm_size(shifted) == pytest.approx(P.sm_size(p), rel=1e-10, abs=1e-18)
    assert P.sm_size(P.PeriodicPerturbation(np.tile([0.01, 0.02], (4, 4, 1)))) == 0.0


def test_sm_size_hand_value():
    p = single_class()
    # hand DFT: four atoms eps^2/16 e1 e1^T; three nonzero reduced frequencies
    # of squared norm r*^2/4 each
    expect = (EPS**2 / 16) * 3 * (g.R_STAR_SQ / 4)
    assert P.sm_size(p) == pytest.approx(expect, rel=1e-12)


def test_json_interchange(tmp_path):
    p = single_class()
    path = tmp_path / "p.json"
    P.save_perturbation(p, path)
    obj = json.loads(path.read_text())
    assert obj == {"N": 2, "displacements": [[0, 0, EPS, 0.0]]}
    q = P.load_perturbation(path)
    assert np.allclose(q.table, p.table)
    # unlisted classes default to zero
    path2 = tmp_path / "q.json"
    path2.write_text(json.dumps({"N": 3, "displacements": [[2, 1, 0.01, -0.01]]}))
    r = P.load_perturbation(path2)
    assert np.allclose(r.table[2, 1], [0.01, -0.01]) and (r.table**2).sum() == pytest.approx(2e-4)
    path3 = tmp_path / "bad.json"
    path3.write_text(json.dumps({"N": 2, "displacements": [[2, 0, 0.01, 0.0]]}))
    with pytest.raises(ValueError):
        P.load_perturbation(path3)
