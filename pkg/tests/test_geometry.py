import math

import numpy as np
import pytest

from hexlat import geometry as g

R = g.R_STAR


def brute_ball(radius):
    """Independent enumeration: scan a generous index box and filter."""
    out = []
    for m in range(-8, 9):
        for n in range(-8, 9):
            x = m * g.SIGMA + n * g.TAU
            if x @ x <= radius**2 + 1e-12:
                out.append((m, n))
    return out


def test_embed_examples():
    assert np.allclose(g.embed((1, 0)), [R, 0.0])
    assert abs(R - 1.0746) < 1e-4
    assert np.allclose(g.embed((0, 0)), [0.0, 0.0])
    assert np.allclose(g.embed((0, 1)), [R / 2, R * math.sqrt(3) / 2])


def test_covolume_is_one():
    assert abs(g.covolume() - 1.0) < 1e-14


def test_enumerate_ball_against_brute_force():
    for radius in (0.5, 1.1, 2.0, 2.5):
        pts = g.enumerate_ball(radius)
        assert len(pts) == len(brute_ball(radius))
    assert len(g.enumerate_ball(1.1)) == 7  # origin plus first shell
    assert len(g.enumerate_ball(0.5)) == 1  # r* > 0.5: origin only


def test_shell_grouping():
    groups = g.enumerate_ball(2.0, group_by_radius=True)
    radii = [round(r, 6) for r, _ in groups]
    sizes = [len(p) for _, p in groups]
    # brute force over the index box: within 2.0 only r* and sqrt(3) r* fit
    # (2 r* = 2.149 falls outside)
    assert radii == [0.0, round(R, 6), round(math.sqrt(3) * R, 6)]
    assert sizes == [1, 6, 6]
    groups = g.enumerate_ball(2.2, group_by_radius=True)
    assert [len(p) for _, p in groups] == [1, 6, 6, 6]


def test_shells_rotation_and_negation_invariance():
    rot = np.array(
        [[math.cos(math.pi / 3), -math.sin(math.pi / 3)],
         [math.sin(math.pi / 3), math.cos(math.pi / 3)]]
    )
    for shell in g.shells_upto(4.0 * R):
        assert shell.size % 6 == 0
        pts = {tuple(np.round(p, 9)) for p in shell.points}
        assert {tuple(np.round(rot @ p, 9)) for p in shell.points} == pts
        assert {tuple(np.round(-p, 9)) for p in shell.points} == pts


def test_hexagon_orbits():
    orbit = g.hexagon_orbit((1, 0))
    assert set(orbit) == set(g.FIRST_SHELL_INDICES)
    pts = g.embed_many(g.hexagon_orbit((2, 1)))
    assert np.allclose(np.linalg.norm(pts, axis=1), math.sqrt(7) * R)


def test_voronoi_reduce_examples():
    assert np.allclose(g.voronoi_reduce([0.0, 0.0]), [0.0, 0.0])
    assert np.allclose(g.voronoi_reduce(g.SIGMA), [0.0, 0.0], atol=1e-15)
    # 0.4 r* < r*/2, so 0.4 sigma is already reduced; check against the
    # brute-force nearest lattice point within radius 3 r*
    u = 0.4 * g.SIGMA
    best = min(brute_ball(3 * R), key=lambda idx: float(((u - g.embed(idx)) ** 2).sum()))
    assert np.allclose(g.voronoi_reduce(u), u - g.embed(best))
    assert np.allclose(g.voronoi_reduce(u), u)


def test_voronoi_reduce_properties():
    rng = np.random.default_rng(5)
    for u in rng.uniform(-4, 4, (200, 2)):
        red = g.voronoi_reduce(u)
        assert np.linalg.norm(red) <= np.linalg.norm(u) + 1e-12
        assert np.allclose(g.voronoi_reduce(red), red, atol=1e-12)
        assert g.in_fundamental_hexagon(red, tol=1e-9)
        # the removed part is a lattice vector
        coords = (u - red) @ g.DUAL_BASIS.T
        assert np.allclose(coords, np.round(coords), atol=1e-9)


def test_voronoi_reduce_tie_break():
    # an edge midpoint is equidistant from two lattice points; the output is
    # the lexicographically smallest reduced vector
    mid = 0.5 * g.SIGMA
    red = g.voronoi_reduce(mid)
    assert abs(np.linalg.norm(red) - R / 2) < 1e-12
    assert (red[0], red[1]) <= (-red[0], -red[1])


def test_reciprocal_duality():
    assert np.allclose(g.reciprocal_point((0, 0)), [0.0, 0.0])
    assert abs(g.reciprocal_point((1, 0)) @ g.embed((1, 0)) - 1.0) < 1e-12
    assert abs(np.linalg.norm(g.reciprocal_point((1, 0))) - R) < 1e-12
    for mk in range(-3, 4):
        for nk in range(-3, 4):
            k = g.reciprocal_point((mk, nk))
            for mx in range(-3, 4):
                for nx in range(-3, 4):
                    pairing = k @ g.embed((mx, nx))
                    assert abs(pairing - round(pairing)) < 1e-12


def test_reciprocal_ball_is_rotated_direct_ball():
    pts = g.reciprocal_ball_points(2.5)
    direct = g.enumerate_ball(2.5)
    assert len(pts) == len(direct)
    assert np.allclose(
        np.sort(np.linalg.norm(pts, axis=1)), np.sort(np.linalg.norm(direct, axis=1))
    )
    # every point pairs integrally with the whole direct lattice
    for k in pts[:20]:
        for idx in brute_ball(2.0):
            pairing = k @ g.embed(idx)
            assert abs(pairing - round(pairing)) < 1e-12


def test_hexagon_pairing_true_bounds():
    """The sharp pairing facts for the closed Voronoi cell: u.x <= r*^2/2 for
    the six direct neighbors (the defining inequalities), and the dual-shell
    pairing |u.s| peaks at exactly 2/3, attained at the cell vertices."""
    rng = np.random.default_rng(11)
    us = [g.voronoi_reduce(u) for u in rng.uniform(-2, 2, (400, 2))]
    verts = [
        g.HEX_CIRCUMRADIUS * np.array([math.cos(a), math.sin(a)])
        for a in np.pi / 6 + np.pi / 3 * np.arange(6)
    ]
    # minimal vectors of the reciprocal lattice: the rotated direct shell
    dual_shell = [g.ROT90 @ g.embed(idx) for idx in g.FIRST_SHELL_INDICES]
    assert all(abs(np.linalg.norm(s) - R) < 1e-12 for s in dual_shell)
    sup = 0.0
    for u in us + verts:
        for idx in g.FIRST_SHELL_INDICES:
            assert u @ g.embed(idx) <= g.R_STAR_SQ / 2 + 1e-9
        for s in dual_shell:
            sup = max(sup, abs(u @ s))
    assert sup <= 2.0 / 3.0 + 1e-12
    assert max(abs(v @ s) for v in verts for s in dual_shell) == pytest.approx(2.0 / 3.0, abs=1e-12)
