"""Symmetric bilinear forms on finite-dimensional real vector spaces.

Everything downstream (models, graphs, crowns, group diagnostics) talks to a
form through the :class:`QuadraticSpace` wrapper defined here, so tolerance
conventions live in one place: comparisons are relative to the spectral
radius of the Gram matrix.
"""

import numpy as np

DEFAULT_TOLERANCE = 1e-9

POSITIVE = "positive"
NEGATIVE = "negative"
ISOTROPIC = "isotropic"


class GeometryError(Exception):
    """Raised when geometric preconditions fail or a computation degenerates."""
    pass


class Signature:
    """Eigenvalue sign census (pos, neg | null) of a symmetric form."""

    def __init__(self, pos, neg, null=0):
        self.pos = int(pos)
        self.neg = int(neg)
        self.null = int(null)

    @property
    def dim(self):
        return self.pos + self.neg + self.null

    @property
    def degenerate(self):
        return self.null > 0

    def as_tuple(self):
        return (self.pos, self.neg, self.null)

    def as_dict(self):
        return {"pos": self.pos, "neg": self.neg, "null": self.null}

    def __iter__(self):
        return iter(self.as_tuple())

    def __eq__(self, other):
        if isinstance(other, Signature):
            return self.as_tuple() == other.as_tuple()
        return self.as_tuple() == tuple(other)

    def __hash__(self):
        return hash(self.as_tuple())

    def __repr__(self):
        return "Signature({}, {}|{})".format(self.pos, self.neg, self.null)


class QuadraticSpace:
    """A real vector space with a symmetric bilinear form.

    Parameters
    ----------
    gram : array-like
        Symmetric Gram matrix of the form. Degenerate matrices are
        accepted; the null count simply shows up in the signature.
    tol : float, optional
        Relative tolerance for sign decisions, measured against the
        spectral radius of the Gram matrix. Defaults to
        ``DEFAULT_TOLERANCE``.
    """

    def __init__(self, gram, tol=None):
        gram = np.array(gram, dtype=float)
        if gram.ndim != 2 or gram.shape[0] != gram.shape[1]:
            raise GeometryError("Gram matrix must be square")
        if not np.all(np.isfinite(gram)):
            raise GeometryError("Gram matrix has non-finite entries")
        sym_defect = np.max(np.abs(gram - gram.T)) if gram.size else 0.0
        scale = np.max(np.abs(gram)) if gram.size else 0.0
        if sym_defect > 1e-12 * max(scale, 1.0):
            raise GeometryError("Gram matrix is not symmetric")
        self.gram = (gram + gram.T) / 2.0
        self.tol = DEFAULT_TOLERANCE if tol is None else float(tol)
        self._eigenvalues = None
        self._signature = None

    @property
    def dim(self):
        return self.gram.shape[0]

    @property
    def eigenvalues(self):
        if self._eigenvalues is None:
            self._eigenvalues = np.linalg.eigvalsh(self.gram)
        return self._eigenvalues

    @property
    def spectral_radius(self):
        ev = self.eigenvalues
        return float(np.max(np.abs(ev))) if ev.size else 0.0

    @property
    def signature(self):
        """Signature of the form via eigendecomposition.

        An eigenvalue counts as null when its magnitude is at most
        ``tol`` times the spectral radius, so uniform scaling of the
        Gram matrix never changes the census.
        """
        if self._signature is None:
            ev = self.eigenvalues
            thresh = self.tol * self.spectral_radius
            pos = int(np.sum(ev > thresh))
            neg = int(np.sum(ev < -thresh))
            null = self.dim - pos - neg
            self._signature = Signature(pos, neg, null)
        return self._signature

    @property
    def is_degenerate(self):
        return self.signature.degenerate

    def eval(self, v, w=None):
        """Evaluate the form, b(v, w). With one argument returns b(v, v).

        Inputs broadcast over leading axes; the last axis is the vector
        coordinate axis.
        """
        v = np.asarray(v, dtype=float)
        if w is None:
            w = v
        else:
            w = np.asarray(w, dtype=float)
        if v.shape[-1] != self.dim or w.shape[-1] != self.dim:
            raise GeometryError(
                "vector length does not match form dimension %d" % self.dim)
        out = np.einsum("...i,ij,...j->...", v, self.gram, w)
        if out.ndim == 0:
            return float(out)
        return out

    def classify_vector(self, v):
        """Sign class of a nonzero vector: positive, negative, or isotropic.

        The isotropic band scales with ``tol * |v|^2 * spectral_radius``.
        """
        v = np.asarray(v, dtype=float)
        norm2 = float(v @ v)
        if norm2 == 0.0:
            raise GeometryError("cannot classify the zero vector")
        value = self.eval(v)
        band = self.tol * norm2 * self.spectral_radius
        if value > band:
            return POSITIVE
        if value < -band:
            return NEGATIVE
        return ISOTROPIC

    def restrict(self, basis):
        """Form restricted to the span of independent row vectors.

        Returns a new :class:`QuadraticSpace` of dimension ``len(basis)``.
        """
        basis = np.atleast_2d(np.asarray(basis, dtype=float))
        if basis.shape[1] != self.dim:
            raise GeometryError("basis vectors have wrong length")
        k = basis.shape[0]
        if np.linalg.matrix_rank(basis) < k:
            raise GeometryError("restriction basis is linearly dependent")
        return QuadraticSpace(basis @ self.gram @ basis.T, tol=self.tol)

    def orthogonal_complement(self, vectors):
        """Basis (rows) of the b-orthogonal complement of a span.

        Requires a non-degenerate form; with radical present the
        complement of a subspace is not a complement in the linear
        algebra sense and the call is refused.
        """
        if self.is_degenerate:
            raise GeometryError(
                "orthogonal complement needs a non-degenerate form")
        vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
        if vectors.shape[1] != self.dim:
            raise GeometryError("span vectors have wrong length")
        pairing = vectors @ self.gram
        u, s, vt = np.linalg.svd(pairing)
        if s.size:
            rank = int(np.sum(s > self.tol * s[0])) if s[0] > 0 else 0
        else:
            rank = 0
        return vt[rank:]

    def isometry_residual(self, g):
        """Frobenius residual of the form-preservation identity for g."""
        g = np.asarray(g, dtype=float)
        return float(np.linalg.norm(g.T @ self.gram @ g - self.gram))

    def __repr__(self):
        return "QuadraticSpace(dim={}, signature={!r})".format(
            self.dim, self.signature)


def standard_space(p, q, tol=None):
    """Diagonal form diag(1,...,1,-1,...,-1) with p plus and q minus signs."""
    signs = [1.0] * p + [-1.0] * q
    return QuadraticSpace(np.diag(signs), tol=tol)
