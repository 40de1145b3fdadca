"""Tests for the projective model, conformal splitting, and Hilbert metric."""

import math

import numpy as np
import pytest

from pqgeo.forms import GeometryError, QuadraticSpace, standard_space
from pqgeo.model import (BoundaryPoint, HPoint, HalfspaceDomain,
                         SignConsistencyError, TimelikeFrame,
                         conformal_split, conformal_unsplit, hilbert_distance,
                         lift_nonpositive, omega_membership, pair_class,
                         pair_class_conformal)


@pytest.fixture
def frame21():
    return TimelikeFrame.standard(2, 1)


def test_hpoint_normalization():
    space = standard_space(2, 2)
    pt = HPoint(space, [0.0, 0.0, 2.0, 0.0], normalize=True)
    assert space.eval(pt.vec) == pytest.approx(-1.0)
    with pytest.raises(GeometryError):
        HPoint(space, [1.0, 0.0, 0.0, 0.0], normalize=True)
    with pytest.raises(GeometryError):
        HPoint(space, [0.0, 0.0, 2.0, 0.0])
    with pytest.raises(GeometryError):
        HPoint(space, [np.nan, 0.0, 1.0, 0.0], normalize=True)


def test_boundary_point_lift_and_flip():
    space = standard_space(1, 1)
    pt = BoundaryPoint(space, [2.0, 2.0])
    assert np.allclose(pt.vec, [math.sqrt(0.5), math.sqrt(0.5)])
    flipped = pt.flip()
    assert np.allclose(flipped.lift, -pt.lift)
    with pytest.raises(GeometryError):
        BoundaryPoint(space, [1.0, 0.0])
    with pytest.raises(GeometryError):
        BoundaryPoint(space, [0.0, 0.0])


def test_conformal_roundtrip_interior(frame21):
    space = frame21.space
    rng = np.random.default_rng(0)
    for _ in range(25):
        vec = rng.normal(size=4)
        vec[2:] *= 3.0
        if space.eval(vec) >= 0:
            continue
        pt = HPoint(space, vec, normalize=True)
        coords = conformal_split(frame21, pt)
        assert coords.u[0] > 0.0
        assert np.linalg.norm(coords.u) == pytest.approx(1.0)
        assert np.linalg.norm(coords.uprime) == pytest.approx(1.0)
        back = conformal_unsplit(frame21, coords)
        assert isinstance(back, HPoint)
        assert np.allclose(back.vec, pt.vec, atol=1e-12)


def test_conformal_boundary_lands_on_equator(frame21):
    pt = BoundaryPoint(frame21.space, [1.0, 0.0, 1.0, 0.0])
    coords = conformal_split(frame21, pt)
    assert coords.u[0] == 0.0
    back = conformal_unsplit(frame21, coords)
    assert isinstance(back, BoundaryPoint)
    assert np.allclose(np.abs(back.vec), np.abs(pt.vec))


def test_conformal_split_rejects_positive(frame21):
    with pytest.raises(GeometryError):
        conformal_split(frame21, np.array([1.0, 0.0, 0.0, 0.0]))


def test_pair_class_trichotomy():
    space = standard_space(2, 2)
    x = HPoint(space, [0.0, 0.0, 1.0, 0.0])
    spacelike = HPoint(space, [np.sinh(1.0), 0.0, np.cosh(1.0), 0.0])
    assert pair_class(x, spacelike) == "spacelike"
    timelike = HPoint(space, [0.0, 0.0, np.cos(0.5), np.sin(0.5)])
    assert pair_class(x, timelike) == "timelike"
    assert pair_class(x, x) == "coincident"
    assert pair_class(x, HPoint(space, [0.0, 0.0, -1.0, 0.0])) == "coincident"


def test_pair_class_lightlike_band():
    space = standard_space(1, 2)
    x = HPoint(space, [0.0, 1.0, 0.0])
    y = HPoint(space, [np.sinh(1e-14), np.cosh(1e-14), 0.0])
    # hyperbolic cosine of a tiny rapidity is 1 to machine precision
    assert pair_class(x, y) in ("lightlike", "coincident")


def test_pair_class_conformal_agrees(frame21):
    space = frame21.space
    rng = np.random.default_rng(42)
    for _ in range(300):
        raw = rng.normal(size=(2, 4))
        raw[:, 2:] *= 2.5
        if np.any(space.eval(raw) >= 0):
            continue
        x, y = raw
        if space.eval(x, y) > 0:
            y = -y
        px = HPoint(space, x, normalize=True)
        py = HPoint(space, y, normalize=True)
        assert pair_class(px, py) == pair_class_conformal(frame21, px, py)


def test_pair_class_conformal_rejects_positive_pairing(frame21):
    space = frame21.space
    x = HPoint(space, [0.0, 0.0, 1.0, 0.0])
    y = HPoint(space, [np.sinh(1.0), 0.0, -np.cosh(1.0), 0.0])
    with pytest.raises(GeometryError):
        pair_class_conformal(frame21, x, y)


def test_lift_nonpositive_fixes_signs():
    space = standard_space(2, 2)
    base = np.array([
        [1.0, 0.0, 1.0, 0.0],
        [-1.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 1.0, 0.0],
    ]) / math.sqrt(2.0)
    flipped = base.copy()
    flipped[1] = -flipped[1]
    lifts, signs = lift_nonpositive(space, flipped)
    pair = lifts @ space.gram @ lifts.T
    off = pair[~np.eye(3, dtype=bool)]
    assert np.max(off) <= 1e-12
    assert signs[1] == -1 or np.allclose(lifts[1], base[1])


def test_lift_nonpositive_inconsistent_witness():
    """An all-positive pairing triangle admits no coherent sign choice.

    Flipping any lift changes the sign of two of the three pairings, so
    the product of the off-diagonal pairings is a sign invariant; when it
    is positive with all three pairings positive, no assignment works.
    """
    space = standard_space(2, 2)
    pts = []
    for k in range(3):
        s = np.array([math.cos(0.1 * k), math.sin(0.1 * k)])
        m = np.array([math.cos(2 * math.pi * k / 3),
                      math.sin(2 * math.pi * k / 3)])
        pts.append(np.concatenate((s, m)) / math.sqrt(2))
    pair = np.array(pts) @ space.gram @ np.array(pts).T
    assert np.all(pair[~np.eye(3, dtype=bool)] > 0.1)
    with pytest.raises(SignConsistencyError) as err:
        lift_nonpositive(space, np.array(pts))
    assert err.value.witness is not None


def test_halfspace_membership():
    space = standard_space(2, 2)
    domain = HalfspaceDomain(space, np.eye(4)[:2])
    inside = np.array([-0.5, -0.5, 1.0, 0.0])
    status, _ = domain.membership(inside)
    assert status == "interior"
    status, worst = domain.membership(np.array([1.0, -0.5, 1.0, 0.0]))
    assert status == "outside"
    assert worst == 0
    status, _ = domain.membership(np.array([0.0, -0.5, 1.0, 0.0]))
    assert status == "boundary"


def test_omega_membership_matches_domain():
    space = standard_space(2, 2)
    lam = np.array([[1.0, 0.0, 1.0, 0.0], [-1.0, 0.0, 1.0, 0.0]])
    domain = HalfspaceDomain(space, lam)
    status, _ = omega_membership(domain, np.array([0.0, 0.0, 1.0, 0.0]))
    assert status == "interior"
    status, _ = omega_membership(domain, np.array([2.0, 0.0, 1.0, 0.0]))
    assert status == "outside"


def test_hilbert_distance_unit_square():
    """Affine unit square: the classical interval cross-ratio value."""
    space = QuadraticSpace(np.eye(3))
    domain = HalfspaceDomain(space, [[-1.0, 1.0, 0.0], [-1.0, -1.0, 0.0],
                                     [-1.0, 0.0, 1.0], [-1.0, 0.0, -1.0]])
    d = hilbert_distance(domain, np.array([1.0, 0.0, 0.0]),
                         np.array([1.0, 0.25, 0.0]))
    assert d == pytest.approx(0.5 * math.log(5.0 / 3.0), abs=1e-12)


def test_hilbert_distance_symmetry_and_triangle():
    space = QuadraticSpace(np.eye(3))
    domain = HalfspaceDomain(space, [[-1.0, 1.0, 0.0], [-1.0, -1.0, 0.0],
                                     [-1.0, 0.0, 1.0], [-1.0, 0.0, -1.0]])
    y = np.array([1.0, 0.2, -0.1])
    z = np.array([1.0, -0.4, 0.55])
    w = np.array([1.0, 0.3, 0.3])
    dyz = hilbert_distance(domain, y, z)
    assert dyz == pytest.approx(hilbert_distance(domain, z, y), abs=1e-12)
    assert dyz <= hilbert_distance(domain, y, w) + \
        hilbert_distance(domain, w, z) + 1e-12
    assert hilbert_distance(domain, y, y) == 0.0


def test_hilbert_distance_requires_interior():
    space = QuadraticSpace(np.eye(3))
    domain = HalfspaceDomain(space, [[-1.0, 1.0, 0.0], [-1.0, -1.0, 0.0]])
    with pytest.raises(GeometryError):
        hilbert_distance(domain, np.array([1.0, 1.5, 0.0]),
                         np.array([1.0, 0.0, 0.0]))


def test_frame_validation():
    space = standard_space(2, 2)
    with pytest.raises(GeometryError):
        TimelikeFrame(space, np.eye(4) * 2.0, 2)
    frame = TimelikeFrame(space, np.eye(4), 2)
    assert frame.q == 1
    vec = np.array([0.3, -0.2, 1.4, 0.5])
    assert np.allclose(frame.from_coords(frame.coords(vec)), vec)
