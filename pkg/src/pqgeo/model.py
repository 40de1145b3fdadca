"""Projective model of pseudo-Riemannian hyperbolic space.

Points live on the quadric b(v, v) = -1 (interior) or the null cone
(boundary) of a form of signature (p, q+1). A choice of timelike frame
splits every point into a pair (u, u') of sphere coordinates, which turns
pair classification into a comparison of two spherical distances. Convex
domains cut out by half-spaces carry the Hilbert metric.
"""

import numpy as np

from .forms import GeometryError, QuadraticSpace, standard_space

VALIDATION_THRESHOLD = 1e-8
BOUNDARY_ATOL = 1e-12

SPACELIKE = "spacelike"
LIGHTLIKE = "lightlike"
TIMELIKE = "timelike"
COINCIDENT = "coincident"

INTERIOR = "interior"
BOUNDARY = "boundary"
OUTSIDE = "outside"


class SignConsistencyError(GeometryError):
    """No global lift-sign assignment exists; ``witness`` is an index cycle."""

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = list(witness)


def sphere_distance(u, v):
    """Angular distance between unit vectors, arccos of the clamped dot."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    dot = float(u @ v)
    if abs(dot) > 1.0 + 1e-9:
        raise GeometryError("sphere_distance got non-unit input")
    return float(np.arccos(np.clip(dot, -1.0, 1.0)))


class HPoint:
    """A point of the interior quadric, stored as a lift with b(v, v) = -1."""

    def __init__(self, space, vec, normalize=False):
        vec = np.array(vec, dtype=float)
        if not np.all(np.isfinite(vec)):
            raise GeometryError("lift has non-finite entries")
        value = space.eval(vec)
        if normalize:
            if not value < 0.0:
                raise GeometryError("vector is not negative; cannot normalize")
            vec = vec / np.sqrt(-value)
        else:
            scale = max(space.spectral_radius, 1.0)
            if abs(value + 1.0) > VALIDATION_THRESHOLD * scale:
                raise GeometryError(
                    "lift is not on the b = -1 quadric (b(v,v) = %g)" % value)
        self.space = space
        self.vec = vec

    def __repr__(self):
        return "HPoint({})".format(np.array2string(self.vec, precision=6))


class BoundaryPoint:
    """A point of the boundary at infinity with a chosen lift orientation."""

    def __init__(self, space, vec, orientation=1):
        vec = np.array(vec, dtype=float)
        if not np.all(np.isfinite(vec)):
            raise GeometryError("lift has non-finite entries")
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            raise GeometryError("zero vector is not a boundary point")
        vec = vec / norm
        value = space.eval(vec)
        if abs(value) > VALIDATION_THRESHOLD * max(space.spectral_radius, 1.0):
            raise GeometryError(
                "lift is not isotropic (b(v,v) = %g after normalization)" % value)
        if orientation not in (1, -1):
            raise GeometryError("orientation flag must be +1 or -1")
        self.space = space
        self.vec = vec
        self.orientation = int(orientation)

    @property
    def lift(self):
        return self.orientation * self.vec

    def flip(self):
        return BoundaryPoint(self.space, self.vec, -self.orientation)

    def __repr__(self):
        return "BoundaryPoint({}, orientation={:+d})".format(
            np.array2string(self.vec, precision=6), self.orientation)


class TimelikeFrame:
    """Orthonormal frame with p spacelike vectors followed by q+1 timelike.

    The negative-definite span of the last q+1 vectors is the timelike
    subspace driving the conformal splitting.
    """

    def __init__(self, space, vectors, p):
        vectors = np.array(vectors, dtype=float)
        d = space.dim
        if vectors.shape != (d, d):
            raise GeometryError("frame needs %d vectors of length %d" % (d, d))
        if not 1 <= p <= d - 1:
            raise GeometryError("spacelike count p out of range")
        expected = np.diag([1.0] * p + [-1.0] * (d - p))
        defect = np.linalg.norm(vectors @ space.gram @ vectors.T - expected)
        if defect > VALIDATION_THRESHOLD * max(space.spectral_radius, 1.0) * d:
            raise GeometryError("frame vectors are not b-orthonormal")
        self.space = space
        self.vectors = vectors
        self.p = p

    @property
    def q(self):
        return self.space.dim - self.p - 1

    @classmethod
    def standard(cls, p, q, tol=None):
        space = standard_space(p, q + 1, tol=tol)
        return cls(space, np.eye(p + q + 1), p)

    def coords(self, vec):
        return np.linalg.solve(self.vectors.T, np.asarray(vec, dtype=float))

    def from_coords(self, coeffs):
        return self.vectors.T @ np.asarray(coeffs, dtype=float)


class ConformalCoords:
    """Splitting data: u on the closed hemisphere, u' on a sphere, weight r."""

    def __init__(self, u, uprime, r):
        self.u = np.asarray(u, dtype=float)
        self.uprime = np.asarray(uprime, dtype=float)
        self.r = float(r)

    def __repr__(self):
        return "ConformalCoords(u={}, uprime={}, r={:.6g})".format(
            np.array2string(self.u, precision=6),
            np.array2string(self.uprime, precision=6), self.r)


def _resolve_lift(space, x):
    """Return (vector, interior_flag) for a point-like input."""
    if isinstance(x, HPoint):
        return x.vec, True
    if isinstance(x, BoundaryPoint):
        return x.lift, False
    vec = np.asarray(x, dtype=float)
    kind = space.classify_vector(vec)
    if kind == "positive":
        raise GeometryError("positive vector has no conformal image")
    if kind == "negative":
        return vec / np.sqrt(-space.eval(vec)), True
    return vec / np.linalg.norm(vec), False


def conformal_split(frame, x):
    """Split a point into hemisphere/sphere coordinates for the frame.

    Interior points land in the open hemisphere (u0 > 0); boundary points
    land exactly on the equator u0 = 0. The radial weight r is the
    Euclidean size of the timelike component of the supplied lift.
    """
    vec, interior = _resolve_lift(frame.space, x)
    c = frame.coords(vec)
    s = c[:frame.p]
    m = c[frame.p:]
    r = float(np.linalg.norm(m))
    if r < 1e-300:
        raise GeometryError("point has no timelike component in this frame")
    head = 1.0 if interior else 0.0
    u = np.concatenate(([head], s)) / r
    uprime = m / r
    return ConformalCoords(u, uprime, r)


def conformal_unsplit(frame, coords):
    """Rebuild the point from conformal coordinates.

    u0 > 0 returns an HPoint on the b = -1 sheet with r = 1/u0;
    u0 = 0 returns a BoundaryPoint. Negative u0 is outside the model.
    """
    u = np.asarray(coords.u, dtype=float)
    uprime = np.asarray(coords.uprime, dtype=float)
    if u.shape != (frame.p + 1,) or uprime.shape != (frame.q + 1,):
        raise GeometryError("conformal coordinate lengths do not match frame")
    for name, vec in (("u", u), ("uprime", uprime)):
        if abs(np.linalg.norm(vec) - 1.0) > VALIDATION_THRESHOLD:
            raise GeometryError("%s is not a unit vector" % name)
    u0 = u[0]
    if u0 < -BOUNDARY_ATOL:
        raise GeometryError("u0 < 0 does not correspond to a model point")
    if u0 <= BOUNDARY_ATOL:
        vec = frame.from_coords(np.concatenate((u[1:], uprime)))
        return BoundaryPoint(frame.space, vec)
    r = 1.0 / u0
    vec = frame.from_coords(r * np.concatenate((u[1:], uprime)))
    return HPoint(frame.space, vec, normalize=True)


def _coincident(v1, v2):
    e1 = v1 / np.linalg.norm(v1)
    e2 = v2 / np.linalg.norm(v2)
    return min(np.linalg.norm(e1 - e2), np.linalg.norm(e1 + e2)) <= 1e-8


def pair_class(x, y):
    """Classify a pair of interior points by the size of |b| of their lifts.

    Spacelike means |b| > 1, lightlike |b| = 1 within tolerance, timelike
    |b| < 1. Projectively equal points are reported as coincident.
    """
    if x.space is not y.space and x.space.dim != y.space.dim:
        raise GeometryError("points live in different spaces")
    space = x.space
    if _coincident(x.vec, y.vec):
        return COINCIDENT
    value = space.eval(x.vec, y.vec)
    band = space.tol * max(space.spectral_radius, 1.0) * max(1.0, abs(value))
    if abs(value) > 1.0 + band:
        return SPACELIKE
    if abs(value) < 1.0 - band:
        return TIMELIKE
    return LIGHTLIKE


def pair_class_conformal(frame, x, y, band=None):
    """Classify a same-sheet pair by comparing the two conformal distances.

    The pair is spacelike exactly when the hemisphere distance between the
    u components exceeds the sphere distance between the u' components.
    Requires lifts pairing non-positively; a positive pairing means the
    lifts sit on opposite sheets and one of them should be flipped first.
    """
    value = frame.space.eval(x.vec, y.vec)
    pos_band = frame.space.tol * max(frame.space.spectral_radius, 1.0)
    if value > pos_band:
        raise GeometryError(
            "lifts pair positively (b = %g); flip one lift onto the "
            "other sheet first" % value)
    if band is None:
        band = max(frame.space.tol, 1e-12)
    c1 = conformal_split(frame, x)
    c2 = conformal_split(frame, y)
    d_dom = sphere_distance(c1.u, c2.u)
    d_img = sphere_distance(c1.uprime, c2.uprime)
    if d_dom <= band and d_img <= band:
        return COINCIDENT
    diff = d_dom - d_img
    if diff > band:
        return SPACELIKE
    if diff < -band:
        return TIMELIKE
    return LIGHTLIKE


def lift_nonpositive(space, points):
    """Choose lift signs making all pairings non-positive.

    Parameters
    ----------
    space : QuadraticSpace
    points : array-like or list of BoundaryPoint
        Isotropic vectors, one per row.

    Returns
    -------
    (lifts, signs)
        Signed lift rows and the chosen sign per input row.

    Raises
    ------
    SignConsistencyError
        When no assignment exists. The witness attribute holds a cycle
        of indices whose pairing signs cannot all be made non-positive.
    """
    if len(points) and isinstance(points[0], BoundaryPoint):
        lifts = np.array([pt.lift for pt in points], dtype=float)
    else:
        lifts = np.array(points, dtype=float)
    k = lifts.shape[0]
    pair = lifts @ space.gram @ lifts.T
    norms = np.linalg.norm(lifts, axis=1)
    scale = space.tol * max(space.spectral_radius, 1.0) * np.outer(norms, norms)
    signs = np.zeros(k, dtype=int)
    parent = [-1] * k
    for root in range(k):
        if signs[root]:
            continue
        signs[root] = 1
        queue = [root]
        while queue:
            i = queue.pop()
            for j in range(k):
                if j == i or abs(pair[i, j]) <= scale[i, j]:
                    continue
                needed = -signs[i] * int(np.sign(pair[i, j]))
                if signs[j] == 0:
                    signs[j] = needed
                    parent[j] = i
                    queue.append(j)
                elif signs[j] != needed:
                    chain_i = [i]
                    while parent[chain_i[-1]] >= 0:
                        chain_i.append(parent[chain_i[-1]])
                    chain_j = [j]
                    while parent[chain_j[-1]] >= 0:
                        chain_j.append(parent[chain_j[-1]])
                    common = set(chain_i) & set(chain_j)
                    cut_i = next(n for n, v in enumerate(chain_i) if v in common)
                    cut_j = next(n for n, v in enumerate(chain_j) if v in common)
                    cycle = chain_i[:cut_i + 1] + chain_j[:cut_j][::-1]
                    raise SignConsistencyError(
                        "no sign assignment can make all pairings "
                        "non-positive", cycle)
    return lifts * signs[:, None], signs


class HalfspaceDomain:
    """Intersection of half-spaces b(v, c_i) < 0 for constraint lifts c_i."""

    def __init__(self, space, constraints):
        constraints = np.atleast_2d(np.asarray(constraints, dtype=float))
        if constraints.shape[1] != space.dim:
            raise GeometryError("constraint vectors have wrong length")
        self.space = space
        self.constraints = constraints

    def membership(self, v):
        """Locate v relative to the domain.

        Returns a (status, worst_index) pair, where the index points at
        the constraint closest to violation (or most violated).
        """
        v = np.asarray(v, dtype=float)
        values = self.constraints @ self.space.gram @ v
        rownorms = np.linalg.norm(self.constraints, axis=1)
        weight = rownorms * max(np.linalg.norm(v), 1e-300)
        scales = self.space.tol * max(self.space.spectral_radius, 1.0) * weight
        worst = int(np.argmax(values / weight))
        if np.all(values < -scales):
            return INTERIOR, worst
        if np.any(values > scales):
            return OUTSIDE, worst
        return BOUNDARY, worst


def omega_membership(domain, v):
    """Membership test for the invisible domain of a constraint set."""
    return domain.membership(v)


def hilbert_distance(domain, y, z):
    """Hilbert distance between interior points of a half-space domain.

    The chord through y and z is intersected with every constraint
    hyperplane; the nearest intersections behind y and beyond z bound the
    cross-ratio. Normalization: collinear parameter values (0, 1, t, inf)
    give cross-ratio t, and the distance is half its logarithm.
    """
    y = y.vec if isinstance(y, HPoint) else np.asarray(y, dtype=float)
    z = z.vec if isinstance(z, HPoint) else np.asarray(z, dtype=float)
    for name, point in (("y", y), ("z", z)):
        status, idx = domain.membership(point)
        if status != INTERIOR:
            raise GeometryError(
                "%s is not interior to the domain (constraint %d)" % (name, idx))
    if _coincident(y, z):
        return 0.0
    gram = domain.space.gram
    by = domain.constraints @ gram @ y
    bz = domain.constraints @ gram @ z
    denom = bz - by
    behind = []
    ahead = []
    for i in range(len(by)):
        if abs(denom[i]) < 1e-300:
            continue
        t = -by[i] / denom[i]
        if t <= 0.0:
            behind.append(t)
        elif t >= 1.0:
            ahead.append(t)
    if not behind or not ahead:
        raise GeometryError(
            "chord escapes the domain; Hilbert distance is unbounded "
            "in this direction")
    t_a = max(behind)
    t_b = min(ahead)
    cross = ((1.0 - t_a) * t_b) / ((-t_a) * (t_b - 1.0))
    return 0.5 * float(np.log(cross))
