"""Spectral diagnostics for matrix subgroups of indefinite orthogonal groups.

Everything here consumes word balls from :mod:`pqgeo.groups` and reports
eigenvalue data: Jordan projections, proximality classes, growth of the
top eigenvalue gap along word spheres, sampled limit sets with a
negativity test, and limit-cone rays.
"""

import math

import numpy as np

from .forms import GeometryError
from .model import BoundaryPoint, SignConsistencyError, lift_nonpositive

CLUSTER_REL = 1e-7
AMBIGUITY_REL = 1e-5
POINT_MERGE_TOL = 1e-6
RAY_ANGLE_TOL = 1e-6
FORM_PRECHECK = 1e-6


def jordan_projection(g, r=None):
    """Sorted log-moduli of the top r eigenvalues.

    Long products of hyperbolic elements legitimately have huge
    modulus spread, so singularity is flagged only when a requested
    modulus vanishes outright, not on the condition number.
    """
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise GeometryError("need a square matrix")
    moduli = np.sort(np.abs(np.linalg.eigvals(g)))[::-1]
    if r is None:
        r = len(moduli)
    if not 1 <= r <= len(moduli):
        raise GeometryError("rank r out of range")
    if not np.all(np.isfinite(moduli)) or moduli[r - 1] <= 0.0:
        raise GeometryError("matrix is singular to working precision")
    return np.log(moduli[:r])


class ProximalityClass:
    """Flags describing how the top eigenvalue modulus is attained."""

    def __init__(self, proximal, semi_proximal, positively_semi_proximal,
                 undecided):
        self.proximal = bool(proximal)
        self.semi_proximal = bool(semi_proximal)
        self.positively_semi_proximal = bool(positively_semi_proximal)
        self.positively_proximal = self.proximal and \
            self.positively_semi_proximal
        self.undecided = bool(undecided)

    def __repr__(self):
        flags = []
        for name in ("proximal", "semi_proximal", "positively_semi_proximal",
                     "positively_proximal", "undecided"):
            if getattr(self, name):
                flags.append(name)
        return "ProximalityClass({})".format(", ".join(flags) or "none")


def proximality_class(g):
    """Classify the top-modulus eigenvalue cluster of g.

    Proximal means the cluster is a single simple real eigenvalue.
    Eigenvalues within relative distance 1e-7 of the top modulus join the
    cluster; anything in the (1e-7, 1e-5) relative band marks the result
    undecided instead of silently picking a side.
    """
    g = np.asarray(g, dtype=float)
    eigenvalues = np.linalg.eigvals(g)
    moduli = np.abs(eigenvalues)
    top = float(np.max(moduli))
    if top <= 0.0:
        raise GeometryError("matrix is singular to working precision")
    in_cluster = moduli >= top * (1.0 - CLUSTER_REL)
    in_band = (~in_cluster) & (moduli > top * (1.0 - AMBIGUITY_REL))
    cluster = eigenvalues[in_cluster]
    real = cluster.imag == 0.0
    proximal = cluster.shape[0] == 1 and bool(real[0])
    semi = bool(np.any(real))
    positively_semi = bool(np.any(real & (cluster.real > 0.0)))
    return ProximalityClass(proximal, semi, positively_semi,
                            bool(np.any(in_band)))


class GapSeries:
    """Per-word-length statistics of the top eigenvalue gap."""

    def __init__(self, lengths, mins, medians, counts):
        self.lengths = list(lengths)
        self.mins = list(mins)
        self.medians = list(medians)
        self.counts = list(counts)

    def rows(self):
        return list(zip(self.lengths, self.mins, self.medians, self.counts))

    def __repr__(self):
        return "GapSeries(lengths=1..{}, mins={})".format(
            self.lengths[-1] if self.lengths else 0,
            ["%.3g" % m for m in self.mins])


def _cyclic_reduce(word, inverse_letter):
    w = tuple(word)
    while len(w) >= 2 and inverse_letter[w[-1]] == w[0]:
        w = w[1:-1]
    return w


def _canonical_rotation(word):
    if not word:
        return word
    return min(word[i:] + word[:i] for i in range(len(word)))


def gap_series(ball, r):
    """Gap statistics per sphere, over cyclic-reduction representatives.

    A word whose cyclic reduction is shorter is a conjugate of an element
    counted on an earlier sphere and is skipped; rotations of the same
    cyclic word are merged. The identity is excluded.
    """
    if r < 2:
        raise GeometryError("gap statistics need r >= 2")
    per_length = {length: [] for length in range(1, ball.L + 1)}
    seen = set()
    for entry in ball:
        length = len(entry.word)
        if length == 0:
            continue
        reduced = _cyclic_reduce(entry.word, ball.inverse_letter)
        if len(reduced) < length:
            continue
        key = _canonical_rotation(reduced)
        if key in seen:
            continue
        seen.add(key)
        lam = jordan_projection(entry.matrix, r)
        per_length[length].append(float(lam[0] - lam[1]))
    lengths = sorted(per_length)
    mins, medians, counts = [], [], []
    for length in lengths:
        gaps = per_length[length]
        counts.append(len(gaps))
        mins.append(min(gaps) if gaps else math.nan)
        medians.append(float(np.median(gaps)) if gaps else math.nan)
    return GapSeries(lengths, mins, medians, counts)


def sample_limit_set(space, ball, gap_threshold):
    """Attracting fixed points of ball elements with a solid eigenvalue gap.

    Only elements whose top two log-moduli differ by at least the
    threshold emit a point, which makes the top eigenvalue simple and
    real; the resulting eigenvector is isotropic because the element
    preserves the form. Projectively duplicate points are merged.
    """
    if gap_threshold <= 0.0:
        raise GeometryError("gap threshold must be positive")
    for entry in ball:
        g = entry.matrix
        residual = space.isometry_residual(g)
        if residual > FORM_PRECHECK * max(1.0, np.linalg.norm(g) ** 2):
            raise GeometryError(
                "ball element %s does not preserve the form (residual %g)"
                % (ball.word_label(entry.word), residual))
    scale = max(space.spectral_radius, 1.0)
    points = []
    kept = []
    for entry in ball:
        if not entry.word:
            continue
        lam = jordan_projection(entry.matrix, 2)
        if lam[0] - lam[1] < gap_threshold:
            continue
        eigenvalues, vectors = np.linalg.eig(entry.matrix)
        idx = int(np.argmax(np.abs(eigenvalues)))
        vec = vectors[:, idx]
        pivot = vec[int(np.argmax(np.abs(vec)))]
        vec = vec / pivot
        if np.max(np.abs(vec.imag)) > 1e-8:
            raise GeometryError("top eigenvector is not real")
        vec = vec.real
        vec = vec / np.linalg.norm(vec)
        if abs(space.eval(vec)) > 1e-8 * scale:
            raise GeometryError(
                "limit point fails isotropy: |b| = %g" % abs(space.eval(vec)))
        duplicate = False
        for old in kept:
            if min(np.linalg.norm(vec - old),
                   np.linalg.norm(vec + old)) <= POINT_MERGE_TOL:
                duplicate = True
                break
        if duplicate:
            continue
        kept.append(vec)
        points.append(BoundaryPoint(space, vec))
    return points


class NegativityReport:
    """Outcome of the pairwise-negativity test on boundary points."""

    def __init__(self, status, margin, witness):
        self.status = status
        self.margin = margin
        self.witness = witness

    def __repr__(self):
        return "NegativityReport({}, margin={})".format(self.status,
                                                        self.margin)


def negativity_test(space, points, tol=None):
    """Check whether boundary points admit pairwise-negative lifts.

    Runs the coherent sign assignment; "negative" needs every pairing of
    unit lifts below the tolerance band, "non-positive-only" admits
    pairings at zero, "inconsistent" means no sign assignment works (the
    witness is the odd cycle found). The margin is the smallest pairing
    magnitude.
    """
    lifts = []
    for pt in points:
        vec = pt.lift if isinstance(pt, BoundaryPoint) else np.asarray(
            pt, dtype=float)
        lifts.append(vec / np.linalg.norm(vec))
    if len(lifts) < 2:
        raise GeometryError("negativity test needs at least two points")
    lifts = np.array(lifts)
    try:
        coherent, _ = lift_nonpositive(space, lifts)
    except SignConsistencyError as err:
        return NegativityReport("inconsistent", 0.0, err.witness)
    pairing = coherent @ space.gram @ coherent.T
    n = pairing.shape[0]
    margin = math.inf
    witness = None
    for i in range(n):
        for j in range(i + 1, n):
            if abs(pairing[i, j]) < margin:
                margin = abs(pairing[i, j])
                witness = (i, j)
    band = (tol if tol is not None else space.tol) * max(
        space.spectral_radius, 1.0)
    status = "negative" if margin > band else "non-positive-only"
    return NegativityReport(status, float(margin), witness)


def limit_cone_sample(ball, r):
    """Normalized Jordan projections of nontrivial ball elements.

    Elements whose projection vanishes (elliptics) are skipped; rays
    closer than 1e-6 radians are merged. Returns an array with one unit
    ray per row.
    """
    rays = []
    for entry in ball:
        if not entry.word:
            continue
        lam = jordan_projection(entry.matrix, r)
        norm = float(np.linalg.norm(lam))
        if norm <= 1e-12:
            continue
        ray = lam / norm
        duplicate = False
        for old in rays:
            angle = math.acos(float(np.clip(np.dot(ray, old), -1.0, 1.0)))
            if angle <= RAY_ANGLE_TOL:
                duplicate = True
                break
        if duplicate:
            continue
        rays.append(ray)
    if not rays:
        return np.zeros((0, r if r is not None else 0))
    return np.array(rays)
