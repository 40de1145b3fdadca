"""Explicit discrete-group constructions in orthogonal groups O(p,q).

Four families of machinery live here:

* Coxeter reflection representations with a deformation parameter on the
  infinite-order edges, plus determinant-root and signature scans of the
  deformed Cartan matrix.
* Bending of amalgam factors and HNN stable letters by exponentials of
  centralizer directions, with a small O(2,2) toy datum.
* Right-angled polygon vertex configurations in R^{2,q} and their unit
  sphere of deformations off a fixed pair of neighbours.
* Word-ball enumeration with projective deduplication, feeding the
  spectral diagnostics module.
"""

import json
import math

import numpy as np
from scipy.linalg import expm

from .forms import GeometryError, QuadraticSpace, standard_space

INFINITE = math.inf

LIE_RESIDUAL = 1e-10
DEDUP_FROBENIUS = 1e-8


def _as_order(value):
    if value in ("inf", "Infinity", INFINITE):
        return INFINITE
    number = float(value)
    if not number.is_integer() or number < 1:
        raise GeometryError("Coxeter orders must be integers >= 1 or inf")
    return int(number)


class CoxeterDiagram:
    """Symmetric order matrix of a Coxeter presentation.

    Diagonal entries are 1 (each generator is an involution); off-diagonal
    entries give the order of the pairwise product, with INFINITE for free
    pairs.
    """

    def __init__(self, orders):
        n = len(orders)
        for row in orders:
            if len(row) != n:
                raise GeometryError("order matrix must be square")
        table = [[_as_order(orders[i][j]) for j in range(n)] for i in range(n)]
        for i in range(n):
            if table[i][i] != 1:
                raise GeometryError("diagonal orders must equal 1")
            for j in range(n):
                if table[i][j] != table[j][i]:
                    raise GeometryError("order matrix must be symmetric")
                if i != j and table[i][j] != INFINITE and table[i][j] < 2:
                    raise GeometryError("off-diagonal orders must be >= 2")
        self.orders = table
        self.n = n

    def order(self, i, j):
        return self.orders[i][j]

    def infinite_pairs(self):
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n)
                if self.orders[i][j] == INFINITE]

    def finite_pairs(self):
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n)
                if self.orders[i][j] != INFINITE]

    @classmethod
    def from_dict(cls, data):
        if "m" not in data:
            raise GeometryError("diagram JSON needs an 'm' matrix")
        diagram = cls(data["m"])
        if "N" in data and int(data["N"]) != diagram.n:
            raise GeometryError("diagram N does not match matrix size")
        return diagram

    @classmethod
    def from_json_file(cls, path):
        with open(path) as handle:
            return cls.from_dict(json.load(handle))

    def to_dict(self):
        rows = [["inf" if v == INFINITE else int(v) for v in row]
                for row in self.orders]
        return {"N": self.n, "m": rows}


def pentagon_with_arms(k, ell, corner_order=3):
    """Seven-generator diagram: a pentagon with one free edge and two arms.

    The pentagon cycle is 0-1-2-3-4 with the edge (3,4) of infinite order
    and the two edges adjacent to it, (2,3) and (4,0), of order
    ``corner_order``. Arms attach node 5 to node 0 with order ``ell`` and
    node 6 to node 2 with order ``k``.
    """
    orders = [[2] * 7 for _ in range(7)]
    for i in range(7):
        orders[i][i] = 1
    edges = [(0, 1, 3), (1, 2, 3), (2, 3, corner_order), (3, 4, "inf"),
             (4, 0, corner_order), (0, 5, ell), (2, 6, k)]
    for i, j, m in edges:
        orders[i][j] = m
        orders[j][i] = m
    return CoxeterDiagram(orders)


def cartan_matrix(diagram, t):
    """Deformed Cartan matrix: -2cos(pi/m) entries, -2-t on free edges."""
    n = diagram.n
    A = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            m = diagram.order(i, j)
            if m == INFINITE:
                A[i, j] = -2.0 - t
            else:
                A[i, j] = -2.0 * math.cos(math.pi / m)
    return A


class ReflectionRep:
    """Reflection representation of a Coxeter diagram at parameter t.

    The generator for node i is the rank-one update v -> v - (A_t v)_i e_i,
    a reflection preserving the bilinear form with Gram A_t.
    """

    def __init__(self, diagram, t):
        if t < 0:
            raise GeometryError("deformation parameter must be nonnegative")
        self.diagram = diagram
        self.t = float(t)
        self.cartan = cartan_matrix(diagram, t)
        n = diagram.n
        self.generators = []
        for i in range(n):
            g = np.eye(n)
            g[i, :] -= self.cartan[i, :]
            self.generators.append(g)
        self.space = QuadraticSpace(self.cartan)

    @property
    def signature(self):
        return self.space.signature

    def form_residual(self):
        A = self.cartan
        return max(np.linalg.norm(g.T @ A @ g - A) for g in self.generators)

    def relation_residual(self):
        worst = 0.0
        eye = np.eye(self.diagram.n)
        for g in self.generators:
            worst = max(worst, np.linalg.norm(g @ g - eye))
        for i, j in self.diagram.finite_pairs():
            m = self.diagram.order(i, j)
            prod = self.generators[i] @ self.generators[j]
            worst = max(worst,
                        np.linalg.norm(np.linalg.matrix_power(prod, m) - eye))
        return worst

    def word(self, indices):
        out = np.eye(self.diagram.n)
        for i in indices:
            out = out @ self.generators[i]
        return out


class DetRoots:
    """Roots of the quadratic t -> det(A_t), with the fit coefficients."""

    def __init__(self, roots, coefficients, residuals):
        self.roots = tuple(float(r) for r in roots)
        self.coefficients = tuple(float(c) for c in coefficients)
        self.residuals = tuple(float(r) for r in residuals)
        self.both_positive = all(r > 0 for r in self.roots)

    def __iter__(self):
        return iter(self.roots)

    def __repr__(self):
        return "DetRoots(roots={}, leading={:.6g})".format(
            self.roots, self.coefficients[0])


def det_roots(diagram):
    """Roots of det(A_t) for a diagram with exactly one free edge.

    det(A_t) is a quadratic in t in that case; it is recovered exactly by
    interpolation at t = 0, 1, 2 and solved with the numerically stable
    quadratic formula.
    """
    free = diagram.infinite_pairs()
    if len(free) != 1:
        raise GeometryError(
            "determinant-root scan needs exactly one infinite edge, got %d"
            % len(free))
    d0, d1, d2 = (np.linalg.det(cartan_matrix(diagram, t)) for t in (0, 1, 2))
    c2 = (d2 - 2.0 * d1 + d0) / 2.0
    c1 = d1 - d0 - c2
    c0 = d0
    if c2 == 0.0:
        raise GeometryError("determinant is not quadratic in t")
    disc = c1 * c1 - 4.0 * c2 * c0
    if disc < 0.0:
        raise GeometryError("determinant has no real roots (discriminant %g)"
                            % disc)
    root = math.sqrt(disc)
    if c1 >= 0.0:
        q = -(c1 + root) / 2.0
    else:
        q = -(c1 - root) / 2.0
    if q == 0.0:
        roots = (0.0, 0.0)
    else:
        roots = tuple(sorted((q / c2, c0 / q)))
    residuals = tuple(
        abs(np.linalg.det(cartan_matrix(diagram, r))) for r in roots)
    return DetRoots(roots, (c2, c1, c0), residuals)


class SignatureRow:
    """One row of a signature scan: parameter, census, det, residual."""

    def __init__(self, t, signature, det, relation_residual):
        self.t = float(t)
        self.signature = signature
        self.det = float(det)
        self.relation_residual = float(relation_residual)

    def __repr__(self):
        return "SignatureRow(t={:.6g}, sig={!r})".format(self.t,
                                                         self.signature)


def signature_scan(diagram, t_values):
    """Signature of A_t along a parameter grid, with relation residuals."""
    rows = []
    for t in np.atleast_1d(np.asarray(t_values, dtype=float)):
        if t < 0:
            raise GeometryError("scan grid must be nonnegative")
        rep = ReflectionRep(diagram, t)
        rows.append(SignatureRow(t, rep.signature,
                                 np.linalg.det(rep.cartan),
                                 rep.relation_residual()))
    return rows


def canonical_X(p, qprime, q):
    """Symmetric elementary matrix pairing axis 0 with axis p+qprime.

    Lives in the Lie algebra of the form diag(1,..,1,-1,..,-1) with p plus
    signs and q+1 minus signs, and commutes with the block of the algebra
    supported on axes 1..p.
    """
    if not 1 <= qprime <= q:
        raise GeometryError("need 1 <= qprime <= q")
    d = p + q + 1
    X = np.zeros((d, d))
    X[0, p + qprime] = 1.0
    X[p + qprime, 0] = 1.0
    return X


def orthogonal_lie_basis(p, q):
    """Basis of the Lie algebra of O(p,q): rotations and boosts."""
    d = p + q
    signs = np.concatenate((np.ones(p), -np.ones(q)))
    basis = []
    for i in range(d):
        for j in range(i + 1, d):
            M = np.zeros((d, d))
            if signs[i] == signs[j]:
                M[i, j] = 1.0
                M[j, i] = -1.0
            else:
                M[i, j] = 1.0
                M[j, i] = 1.0
            basis.append(M)
    return basis


def lie_closure_dim(seeds, tol=1e-9):
    """Dimension of the Lie algebra generated by the seed matrices.

    Alternates bracket generation with SVD re-orthonormalization of the
    vectorized span until the rank stabilizes.
    """
    seeds = [np.asarray(s, dtype=float) for s in seeds]
    if not seeds:
        return 0
    d = seeds[0].shape[0]
    for s in seeds:
        if s.shape != (d, d):
            raise GeometryError("seed matrices must share a square shape")

    def orthonormal_rows(stack):
        if stack.shape[0] == 0:
            return stack
        _, svals, vt = np.linalg.svd(stack, full_matrices=False)
        rank = int(np.sum(svals > tol * max(svals[0], 1.0)))
        return vt[:rank]

    rows = orthonormal_rows(np.array([s.ravel() for s in seeds]))
    for _ in range(d * d + 1):
        mats = [r.reshape(d, d) for r in rows]
        brackets = []
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                brackets.append((mats[i] @ mats[j]
                                 - mats[j] @ mats[i]).ravel())
        stack = np.vstack([rows] + ([np.array(brackets)] if brackets else []))
        new_rows = orthonormal_rows(stack)
        if new_rows.shape[0] == rows.shape[0]:
            return int(rows.shape[0])
        rows = new_rows
    raise GeometryError("bracket closure failed to stabilize")


def _lie_algebra_residual(space, X):
    J = space.gram
    scale = max(1.0, np.linalg.norm(X) * np.linalg.norm(J))
    return np.max(np.abs(X.T @ J + J @ X)) / scale


def _centralizer_residual(X, mats):
    worst = 0.0
    for h in mats:
        scale = max(1.0, np.linalg.norm(X) * np.linalg.norm(h))
        worst = max(worst, np.max(np.abs(X @ h - h @ X)) / scale)
    return worst


class HnnLetter:
    """Stable letter of an HNN edge: matrix, edge index, bend chain."""

    def __init__(self, matrix, edge, chain=()):
        self.matrix = np.asarray(matrix, dtype=float)
        self.edge = int(edge)
        self.chain = tuple(chain)


class BendDatum:
    """Flattened graph-of-groups data for bending deformations.

    factors is a list of generator lists (vertex groups); edge_groups maps
    each edge index to its generator matrices; factor_chains gives, per
    factor, the edge path from the base factor (root first, incident edge
    last, empty for the base factor); edge_positions records where each
    edge generator appears inside the factor lists as (factor, position)
    pairs; edge_bends stores already-applied (X, s) bends keyed by edge.
    """

    def __init__(self, space, factors, edge_groups, factor_chains,
                 edge_positions=None, stable_letters=None, edge_bends=None):
        self.space = space
        self.factors = [[np.asarray(g, dtype=float) for g in gens]
                        for gens in factors]
        self.edge_groups = [[np.asarray(h, dtype=float) for h in gens]
                            for gens in edge_groups]
        self.factor_chains = tuple(tuple(c) for c in factor_chains)
        self.edge_positions = edge_positions or []
        self.stable_letters = list(stable_letters or [])
        self.edge_bends = dict(edge_bends or {})
        for gens in self.factors:
            for g in gens:
                residual = space.isometry_residual(g)
                if residual > 1e-9 * max(1.0, np.linalg.norm(g) ** 2):
                    raise GeometryError(
                        "factor generator breaks the form (residual %g)"
                        % residual)

    def with_edge_bend(self, edge, X, s):
        bends = dict(self.edge_bends)
        bends[edge] = (np.asarray(X, dtype=float), float(s))
        return BendDatum(self.space, self.factors, self.edge_groups,
                         self.factor_chains, self.edge_positions,
                         self.stable_letters, bends)


def _validate_bend_direction(datum, edge, X):
    res = _lie_algebra_residual(datum.space, X)
    if res > LIE_RESIDUAL:
        raise GeometryError(
            "bend direction is not in the Lie algebra (residual %g)" % res)
    res = _centralizer_residual(X, datum.edge_groups[edge])
    if res > LIE_RESIDUAL:
        raise GeometryError(
            "bend direction does not centralize the edge group (residual %g)"
            % res)


def _chain_tail(datum, chain):
    factors = []
    for k in reversed(chain):
        bend = datum.edge_bends.get(k)
        if bend is not None:
            X_k, s_k = bend
            factors.append(expm(s_k * X_k))
    return factors


def bend_amalgam(datum, factor_index, X, s):
    """Conjugate one amalgam factor by exponentials along its bend chain.

    The conjugator is exp(s X) times the stored bends of the chain edges
    above the factor, innermost last. Returns the full new factor list;
    s = 0 with no stored chain bends returns the input generators
    unchanged.
    """
    X = np.asarray(X, dtype=float)
    chain = datum.factor_chains[factor_index]
    if not chain:
        raise GeometryError("the base factor has no incident edge to bend")
    _validate_bend_direction(datum, chain[-1], X)
    pieces = []
    if s != 0.0:
        pieces.append(expm(s * X))
    pieces.extend(_chain_tail(datum, chain[:-1]))
    new_factors = [[g.copy() for g in gens] for gens in datum.factors]
    if not pieces:
        return new_factors
    conj = pieces[0]
    for piece in pieces[1:]:
        conj = conj @ piece
    inv = np.linalg.inv(conj)
    new_factors[factor_index] = [conj @ g @ inv
                                 for g in datum.factors[factor_index]]
    return new_factors


def bend_hnn(datum, letter_index, X, s):
    """Multiply an HNN stable letter per the bend chain formula.

    New letter = (stored chain exponentials) @ letter @ exp(s X); the
    chain factors are the target-side bends, outermost first.
    """
    X = np.asarray(X, dtype=float)
    letter = datum.stable_letters[letter_index]
    _validate_bend_direction(datum, letter.edge, X)
    left = _chain_tail(datum, letter.chain)
    out = letter.matrix.copy()
    for piece in reversed(left):
        out = piece @ out
    if s != 0.0:
        out = out @ expm(s * X)
    return out


def _boost(d, i, j, rapidity):
    M = np.eye(d)
    c, s = math.cosh(rapidity), math.sinh(rapidity)
    M[i, i] = c
    M[j, j] = c
    M[i, j] = s
    M[j, i] = s
    return M


def _rotation(d, i, j, angle):
    M = np.eye(d)
    c, s = math.cos(angle), math.sin(angle)
    M[i, i] = c
    M[j, j] = c
    M[i, j] = -s
    M[j, i] = s
    return M


def toy_bend_datum():
    """Small O(2,2) amalgam/HNN datum for exercising the bend operations.

    Two free factors share the cyclic edge group generated by a boost in
    the (1,2) plane; the bend direction canonical_X(2,1,1) pairs axes 0
    and 3 and so centralizes it. The HNN letter is a boost in that same
    (0,3) plane, hence commutes with the edge generator.
    """
    space = standard_space(2, 2)
    h = _boost(4, 1, 2, 0.8)
    a = _boost(4, 0, 2, 0.7)
    b = _rotation(4, 0, 1, 0.6)
    gamma = _boost(4, 0, 3, 0.4)
    return BendDatum(
        space,
        factors=[[a, h], [b, h]],
        edge_groups=[[h]],
        factor_chains=[(), (0,)],
        edge_positions=[[(0, 1), (1, 1)]],
        stable_letters=[HnnLetter(gamma, edge=0, chain=())],
    )


class Polygon2k:
    """2k vertex vectors in R^{2,q} with unit norms and equal edge pairings."""

    def __init__(self, space, vertices, k, n, alpha):
        vertices = np.asarray(vertices, dtype=float)
        if vertices.shape[0] != 2 * k:
            raise GeometryError("polygon needs 2k vertices")
        target = math.cos(math.pi / n)
        for idx in range(2 * k):
            here = vertices[idx]
            after = vertices[(idx + 1) % (2 * k)]
            if abs(space.eval(here) - 1.0) > 1e-12:
                raise GeometryError("vertex %d is not unit" % idx)
            if abs(space.eval(here, after) - target) > 1e-12:
                raise GeometryError("edge pairing off target at %d" % idx)
            third = vertices[(idx + 2) % (2 * k)]
            rank = np.linalg.matrix_rank(np.vstack((here, after, third)),
                                         tol=1e-9)
            if rank != 3:
                raise GeometryError("consecutive vertices are collinear")
        self.space = space
        self.vertices = vertices
        self.k = int(k)
        self.n = int(n)
        self.alpha = float(alpha)
        self.edge_pairing = target


def gt_polygon(k, n, q=1):
    """Equilateral 2k-gon vertex configuration in R^{2,q}.

    Vertices circle at spacelike radius sqrt(alpha) and sit at timelike
    height sqrt(alpha-1), which forces unit norms and edge pairings
    cos(pi/n); alpha > 1 needs k > n.
    """
    k, n, q = int(k), int(n), int(q)
    if n < 2 or k <= n:
        raise GeometryError("need k > n >= 2")
    if q < 1:
        raise GeometryError("ambient timelike rank must be >= 1")
    alpha = (1.0 - math.cos(math.pi / n)) / (1.0 - math.cos(math.pi / k))
    space = standard_space(2, q)
    vertices = np.zeros((2 * k, 2 + q))
    for j in range(2 * k):
        angle = j * math.pi / k
        vertices[j, 0] = math.sqrt(alpha) * math.cos(angle)
        vertices[j, 1] = math.sqrt(alpha) * math.sin(angle)
        vertices[j, 2] = math.sqrt(alpha - 1.0)
    return Polygon2k(space, vertices, k, n, alpha)


class PolygonDeformation:
    """One-parameter family of middle vertices with fixed neighbours.

    at(s) walks the circle of radius sqrt(beta-1) around the in-plane
    solution, inside the negative-definite complement of the neighbour
    span.
    """

    def __init__(self, space, midpoint, radius, beta, base_dir, new_dir,
                 condition):
        self.space = space
        self.midpoint = midpoint
        self.radius = float(radius)
        self.beta = float(beta)
        self.base_dir = base_dir
        self.new_dir = new_dir
        self.condition = float(condition)

    def at(self, s):
        if self.radius == 0.0:
            return self.midpoint.copy()
        mix = math.cos(s) * self.base_dir + math.sin(s) * self.new_dir
        return self.midpoint + self.radius * mix


def polygon_deform(space, v0, v2, alpha, e, base=None):
    """Family of unit vectors pairing to alpha with both of v0 and v2.

    The in-plane part is the unique solution of a 2x2 linear system; the
    family adds a radius-sqrt(beta-1) circle in the plane spanned by the
    direction toward ``base`` (when given) and the direction ``e``, both
    inside the negative-definite complement of span(v0, v2). Unsolvable
    when the in-plane solution has norm below 1.
    """
    v0 = np.asarray(v0, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    e = np.asarray(e, dtype=float)
    gram = np.array([[space.eval(v0), space.eval(v0, v2)],
                     [space.eval(v0, v2), space.eval(v2)]])
    eigs = np.linalg.eigvalsh(gram)
    if eigs[0] <= 1e-12 * max(abs(eigs[1]), 1.0):
        raise GeometryError("form is not positive definite on span(v0, v2)")
    condition = eigs[1] / eigs[0]
    if abs(space.eval(e) + 1.0) > 1e-9:
        raise GeometryError("deformation direction must be a unit negative vector")
    if max(abs(space.eval(e, v0)), abs(space.eval(e, v2))) > 1e-9:
        raise GeometryError("deformation direction must be orthogonal to v0, v2")
    coeffs = np.linalg.solve(gram, np.array([alpha, alpha]))
    midpoint = coeffs[0] * v0 + coeffs[1] * v2
    beta = float(space.eval(midpoint))
    if beta < 1.0 - 1e-12:
        raise GeometryError(
            "no unit solution: in-plane norm %g falls short by %g"
            % (beta, 1.0 - beta))
    radius = math.sqrt(max(beta - 1.0, 0.0))
    if base is not None:
        base = np.asarray(base, dtype=float)
        if abs(space.eval(base) - 1.0) > 1e-8 or max(
                abs(space.eval(base, v0) - alpha),
                abs(space.eval(base, v2) - alpha)) > 1e-8:
            raise GeometryError("base point does not satisfy the pairings")
        offset = base - midpoint
        norm = math.sqrt(max(-space.eval(offset), 0.0))
        if radius > 1e-12 and abs(norm - radius) > 1e-6 * max(radius, 1.0):
            raise GeometryError("base point is not in the family")
        base_dir = offset / norm if norm > 0 else e
    else:
        base_dir = e
        complement = space.orthogonal_complement(np.vstack((v0, v2, e)))
        picked = None
        for row in complement:
            val = space.eval(row)
            if val < -1e-9:
                picked = row / math.sqrt(-val)
                break
        if picked is None:
            raise GeometryError("no second direction available for the family")
        e = picked
    raw = e + space.eval(e, base_dir) * base_dir
    norm2 = -space.eval(raw)
    if norm2 <= 1e-18:
        raise GeometryError("deformation direction is parallel to the base member")
    new_dir = raw / math.sqrt(norm2)
    return PolygonDeformation(space, midpoint, radius, beta, base_dir,
                              new_dir, condition)


def _projective_normalize(matrix):
    flat = matrix.ravel()
    pivot = flat[np.argmax(np.abs(flat))]
    return matrix / pivot


class WordEntry:
    """A group element with the shortest word that produced it."""

    __slots__ = ("word", "matrix", "normalized")

    def __init__(self, word, matrix, normalized):
        self.word = word
        self.matrix = matrix
        self.normalized = normalized

    def __repr__(self):
        return "WordEntry(word={})".format(self.word)


class WordBall:
    """Deduplicated ball of words in the generators and their inverses.

    Letters are alphabet indices; inverse_letter maps each letter to the
    index of its inverse (itself for involutions). Entries are in BFS
    order, identity first, and each carries the first (hence shortest)
    word that reached it.
    """

    def __init__(self, generators, alphabet, labels, inverse_letter, L,
                 entries):
        self.generators = generators
        self.alphabet = alphabet
        self.labels = labels
        self.inverse_letter = inverse_letter
        self.L = int(L)
        self.entries = entries

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def matrices(self):
        return [entry.matrix for entry in self.entries]

    def sphere(self, length):
        return [entry for entry in self.entries if len(entry.word) == length]

    def word_label(self, word):
        if not word:
            return "1"
        return ".".join(self.labels[letter] for letter in word)


def word_ball(generators, L):
    """Breadth-first ball of radius L with projective deduplication.

    Words avoid immediate backtracking; a product already seen (Frobenius
    distance below 1e-8 after dividing by the largest-magnitude entry) is
    dropped, so each entry keeps its shortest representative.
    """
    gens = [np.asarray(g, dtype=float) for g in generators]
    if not gens:
        raise GeometryError("need at least one generator")
    d = gens[0].shape[0]
    alphabet = []
    labels = []
    inverse_letter = []

    def find_letter(matrix):
        for idx, existing in enumerate(alphabet):
            if np.max(np.abs(existing - matrix)) < 1e-12:
                return idx
        return None

    for i, g in enumerate(gens):
        if g.shape != (d, d):
            raise GeometryError("generators must share a square shape")
        if abs(np.linalg.det(g)) < 1e-12:
            raise GeometryError("generator %d is not invertible" % i)
        inv = np.linalg.inv(g)
        gi = find_letter(g)
        if gi is None:
            alphabet.append(g)
            labels.append("g%d" % i)
            inverse_letter.append(None)
            gi = len(alphabet) - 1
        ii = find_letter(inv)
        if ii is None:
            alphabet.append(inv)
            labels.append("g%d^-1" % i)
            inverse_letter.append(None)
            ii = len(alphabet) - 1
        inverse_letter[gi] = ii
        inverse_letter[ii] = gi

    identity = np.eye(d)
    entries = [WordEntry((), identity, _projective_normalize(identity))]
    seen = np.array([entries[0].normalized.ravel()])
    frontier = [entries[0]]
    for _ in range(L):
        next_frontier = []
        for entry in frontier:
            last = entry.word[-1] if entry.word else None
            for letter in range(len(alphabet)):
                if last is not None and inverse_letter[last] == letter:
                    continue
                matrix = entry.matrix @ alphabet[letter]
                normalized = _projective_normalize(matrix)
                dists = np.linalg.norm(seen - normalized.ravel(), axis=1)
                if np.min(dists) < DEDUP_FROBENIUS:
                    continue
                new_entry = WordEntry(entry.word + (letter,), matrix,
                                      normalized)
                entries.append(new_entry)
                seen = np.vstack((seen, normalized.ravel()))
                next_frontier.append(new_entry)
        frontier = next_frontier
        if not frontier:
            break
    return WordBall(gens, alphabet, labels, inverse_letter, L, entries)
