import math

import mpmath
import numpy as np
import pytest

from hexlat import energy as E
from hexlat import geometry as g
from hexlat.perturbation import PeriodicPerturbation, random_perturbation
from hexlat.suites import _diff_oracle_gaussian

# frozen from a radius-12 direct sum carried at 30 significant digits
E1_GOLDEN = 0.159595266963928288


def single_class(eps=1e-3, N=2):
    tab = np.zeros((N, N, 2))
    tab[0, 0, 0] = eps
    return PeriodicPerturbation(tab)


def test_potential_guards():
    with pytest.raises(ValueError):
        E.Riesz(2.0)
    with pytest.raises(ValueError):
        E.Gaussian(-1.0)
    with pytest.raises(ValueError):
        E.AtomicMixture(((1.0, -0.5),))
    with pytest.raises(ValueError):
        E.gaussian_lattice_energy(1.0, -1e-3)


def test_gaussian_energy_golden_and_sides():
    ev = E.gaussian_lattice_energy(1.0, 1e-13)
    assert ev.value == pytest.approx(E1_GOLDEN, abs=5e-16)
    d = E.gaussian_lattice_energy(1.0, 1e-13, side="direct")
    f = E.gaussian_lattice_energy(1.0, 1e-13, side="dual")
    assert abs(d.value - f.value) < 1e-12


def test_gaussian_energy_nearest_neighbor_limit():
    ev = E.gaussian_lattice_energy(30.0, 1e-53)
    lead = 6.0 * math.exp(-math.pi * 30.0 * g.R_STAR_SQ)
    assert ev.value / lead == pytest.approx(1.0, abs=1e-6)


def test_certified_bound_covers_refinement():
    for alpha in (0.3, 1.0, 2.5):
        coarse = E.gaussian_lattice_energy(alpha, 1e-8)
        fine = E.gaussian_lattice_energy(alpha, 1e-15)
        assert abs(coarse.value - fine.value) <= coarse.error_bound


def test_poisson_self_consistency_range():
    for alpha in np.linspace(0.2, 5.0, 9):
        d = E.gaussian_lattice_energy(float(alpha), 1e-13, side="direct")
        f = E.gaussian_lattice_energy(float(alpha), 1e-13, side="dual")
        assert abs(d.value - f.value) <= d.error_bound + f.error_bound


def test_perturbed_diff_trivial_cases():
    const = PeriodicPerturbation(np.tile([0.01, -0.02], (3, 3, 1)))
    assert E.perturbed_energy_diff(const, 1.5, 1e-14).value == 0.0
    p = single_class(N=3)
    base = E.perturbed_energy_diff(p, 2.0, 1e-15).value
    # relabeling the torus origin leaves the averaged difference unchanged
    rolled = PeriodicPerturbation(np.roll(p.table, shift=(1, 2), axis=(0, 1)))
    assert E.perturbed_energy_diff(rolled, 2.0, 1e-15).value == pytest.approx(base, rel=1e-12)


def test_perturbed_diff_matches_bruteforce_oracle():
    p = single_class()
    ev = E.perturbed_energy_diff(p, 2.0, 1e-15)
    oracle = _diff_oracle_gaussian(p, 2.0, 8.0)
    assert abs(ev.value - oracle) <= 1e-12


def test_riesz_energy_golden():
    # independent oracle: the hexagonal Epstein zeta factorizes through the
    # quadratic form m^2+mn+n^2 as 6 zeta(s/2) L_{-3}(s/2); at s = 4 the
    # energy is (3/4) * 6 * zeta(2) * L_{-3}(2)
    L = float((mpmath.zeta(2, mpmath.mpf(1) / 3) - mpmath.zeta(2, mpmath.mpf(2) / 3)) / 9)
    golden = 0.75 * 6.0 * float(mpmath.zeta(2)) * L
    ev = E.riesz_energy(4.0, 1e-12)
    assert ev.value == pytest.approx(golden, abs=1e-12)
    # and the spec'd route: direct oracle over |x| <= 40 with its tail bound
    direct = E.riesz_energy_direct(4.0, 40.0)
    assert abs(ev.value - direct.value) <= ev.error_bound + direct.error_bound


@pytest.mark.parametrize("s", [3.0, 4.0, 6.0, 8.0])
def test_riesz_two_method_agreement(s):
    split = E.riesz_energy(s, 1e-12)
    direct = E.riesz_energy_direct(s, 60.0)
    assert abs(split.value - direct.value) <= split.error_bound + direct.error_bound


def test_riesz_nearest_neighbor_limit_and_density():
    ev = E.riesz_energy(60.0, 1e-30)
    assert ev.value / (6.0 * g.R_STAR ** (-60.0)) == pytest.approx(1.0, abs=1e-12)
    assert E.bernstein_density(4.0, 1.0) == pytest.approx(math.pi**2, rel=1e-14)
    with pytest.raises(ValueError):
        E.riesz_energy(2.0, 1e-10)


def test_cmsd_mixture_linearity():
    p = single_class(N=2)
    one = E.cmsd_energy_diff(p, E.AtomicMixture(((2.0, 0.7),)), 1e-13)
    base = E.perturbed_energy_diff(p, 2.0, 1e-13)
    assert one.value == pytest.approx(0.7 * base.value, rel=1e-12)

    mix = E.AtomicMixture(((1.0, 0.25), (2.0, 0.5)))
    both = E.cmsd_energy_diff(p, mix, 1e-13)
    a = E.perturbed_energy_diff(p, 1.0, 1e-13)
    b = E.perturbed_energy_diff(p, 2.0, 1e-13)
    assert both.value == pytest.approx(0.25 * a.value + 0.5 * b.value, abs=1e-15)

    const = PeriodicPerturbation(np.tile([0.01, 0.0], (2, 2, 1)))
    assert E.cmsd_energy_diff(const, E.Riesz(4.0), 1e-9).value == pytest.approx(0.0, abs=1e-9)


def test_cmsd_riesz_matches_direct_sum_oracle():
    p = single_class()
    ev = E.cmsd_energy_diff(p, E.Riesz(4.0), 1e-11)
    # independent oracle: averaged double sum of |x+delta|^-4 - |x|^-4
    idx = g.ball_indices(40.0, include_origin=False)
    pts = g.embed_many(idx)
    total = 0.0
    for (m, n), x in zip(idx, pts):
        from hexlat.perturbation import relative_displacements

        d = relative_displacements(p, (int(m), int(n))).reshape(-1, 2)
        r4 = ((d + x) ** 2).sum(axis=1) ** 2
        total += float((1.0 / r4).mean()) - float((x @ x) ** -2)
    assert abs(ev.value - total) <= 1e-10


def test_finite_window_convergence():
    zero = PeriodicPerturbation(np.zeros((2, 2, 2)))
    ref = E.gaussian_lattice_energy(1.0, 1e-13).value
    # frozen window-sum oracle values (exact enumeration of the disk)
    windows = {10.0: 0.14888163680372188, 20.0: 0.15415011966668715, 40.0: 0.15688336622025006}
    vals = {}
    for r, frozen in windows.items():
        vals[r] = E.finite_window_energy(zero, E.Gaussian(1.0), r)
        assert vals[r] == pytest.approx(frozen, rel=1e-12)
    # monotone approach from below; the r = 40 deficit is 1.70%
    assert vals[10.0] < vals[20.0] < vals[40.0] < ref
    assert (ref - vals[40.0]) / ref == pytest.approx(0.01699, abs=2e-4)

    const = PeriodicPerturbation(np.tile([0.01, -0.03], (2, 2, 1)))
    shifted = E.finite_window_energy(const, E.Gaussian(1.0), 12.0)
    plain = E.finite_window_energy(zero, E.Gaussian(1.0), 12.0)
    # identical pair distances; only the window membership of boundary points
    # can differ, which this radius avoids
    assert shifted == pytest.approx(plain, rel=1e-9)
    with pytest.raises(ValueError):
        E.finite_window_energy(zero, E.Gaussian(1.0), 1.0)


def test_uniformity_ratio_atoms():
    assert E.uniformity_ratio(E.Gaussian(1.0), 0.5, 2.0) == 0.0
    mix = E.AtomicMixture(((0.3, 1.0), (3.0, 2.0)))
    excl = E.uniformity_ratio(mix, 0.2, 4.0)  # both atoms outside the numerator windows
    incl = E.uniformity_ratio(mix, 0.4, 2.0)  # both atoms captured
    assert excl == 0.0 and incl > 0.0
    with pytest.raises(ValueError):
        E.uniformity_ratio(E.Gaussian(1.0), 0.0, 2.0)


def test_uniformity_ratio_monotone_and_crosschecked():
    s = 4.0
    seq = [(0.5, 2.0), (0.25, 5.0), (0.1, 10.0), (0.05, 20.0), (0.01, 50.0)]
    vals = [E.uniformity_ratio(E.Riesz(s), a0, a1) for a0, a1 in seq]
    assert all(x >= y for x, y in zip(vals, vals[1:]))
    closed = E.uniformity_ratio(E.Riesz(s), 0.1, 10.0)
    quad = E.uniformity_ratio_quad(E.Riesz(s), 0.1, 10.0)
    assert abs(closed - quad) < 1e-8


def test_square_lattice_comparison():
    for alpha in (0.5, 1.0, 2.0):
        hexa = E.gaussian_lattice_energy(alpha, 1e-13)
        sq = E.square_lattice_gaussian_energy(alpha, 1e-13)
        assert hexa.value + hexa.error_bound < sq.value - sq.error_bound


def test_probe_scaling_is_quadratic():
    rng = np.random.default_rng(9)
    p = random_perturbation(3, 1e-4, rng)
    half = PeriodicPerturbation(p.table / 2)
    d1 = E.perturbed_energy_diff(p, 2.0, 1e-18).value
    d2 = E.perturbed_energy_diff(half, 2.0, 1e-18).value
    assert d1 / d2 == pytest.approx(4.0, rel=0.1)
