"""Degreewise linear algebra on graded pieces of ideals and modules.

Everything here manipulates coefficient vectors on the monomial bases
cached by AmbientSpace.  Ideal pieces, substitution maps, colon ideals
and minimal generator extraction all reduce to ranks and nullspaces
over F_p, which is what makes the P^5 pipelines desk-scale.
"""

import numpy as np

from . import linalg
from .kernel import GradedFreeModule, PolyMatrix, Polynomial


def span_matrix(space, gens, q):
    """Columns spanning the degree-q piece of the ideal (gens).

    gens: list of homogeneous polynomials.  Columns are m * g over all
    monomials m of complementary degree (not pruned to a basis).
    """
    cols = []
    N = space.dim(q)
    for g in gens:
        d = g.homogeneous_degree()
        if d < 0 or d > q:
            continue
        k = space.dim(q - d)
        block = np.zeros((N, k), dtype=np.int64)
        ar = np.arange(k)
        for mono, c in g.terms.items():
            idx = space.mono_shift(q - d, mono)
            block[idx, ar] += c
        cols.append(block % space.p)
    if not cols:
        return np.zeros((N, 0), dtype=np.int64)
    return np.hstack(cols)


def prune_columns(A, p):
    """An independent subset of columns spanning col(A)."""
    keep = linalg.extend_basis(np.zeros((A.shape[0], 0), dtype=np.int64), A, p)
    return A[:, keep]


def ideal_piece(space, gens, q):
    """Basis (independent columns) of the degree-q piece of (gens)."""
    return prune_columns(span_matrix(space, gens, q), space.p)


def ideal_piece_dim(space, gens, q):
    return linalg.rank(span_matrix(space, gens, q), space.p)


def var_mult_span(space, B, q_from):
    """hstack of x_l * B over all variables, as degree-(q_from+1) vectors."""
    N1 = space.dim(q_from + 1)
    k = B.shape[1]
    shifts = space.var_shifts(q_from)
    out = np.zeros((N1, (space.nvars) * k), dtype=np.int64)
    for l, idx in enumerate(shifts):
        out[idx, l * k : (l + 1) * k] = B
    return out


def vectors_to_polys(space, B, q):
    return [Polynomial.from_vector(space, q, B[:, j]) for j in range(B.shape[1])]


def module_vectors_to_columns(module, B, q):
    """Split degree-q coefficient vectors into per-component polynomials."""
    cols = []
    blocks = module.piece_blocks(q)
    for j in range(B.shape[1]):
        col = []
        for (off, dim), a in zip(blocks, module.twists):
            col.append(Polynomial.from_vector(module.space, q + a, B[off : off + dim, j]))
        cols.append(col)
    return cols


def column_to_vector(module, col, q):
    """Inverse of module_vectors_to_columns for a single column."""
    parts = []
    for poly, a in zip(col, module.twists):
        if poly.is_zero():
            parts.append(np.zeros(module.space.dim(q + a), dtype=np.int64))
        else:
            parts.append(poly.to_vector(q + a))
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def ring_map_matrix(src, images, q, tgt=None):
    """Matrix of the substitution x_i -> images[i] on degree-q pieces.

    All nonzero images must be homogeneous of one degree e in the
    target space; the map sends R_q of `src` to T_{e*q}.  Built
    iteratively, degree by degree, so each column costs one
    image-polynomial multiplication.
    """
    nonzero = [f for f in images if not f.is_zero()]
    if tgt is None:
        tgt = nonzero[0].space
    degs = {f.homogeneous_degree() for f in nonzero}
    if len(degs) != 1:
        raise ValueError("substitution images must share one degree")
    e = degs.pop()
    p = src.p
    prev = np.ones((1, 1), dtype=np.int64)
    for d in range(1, q + 1):
        keys, exps = src.basis(d)
        N = src.dim(d)
        cur = np.zeros((tgt.dim(e * d), N), dtype=np.int64)
        minvar = np.argmax(exps > 0, axis=1)
        for i in range(src.nvars):
            sel = np.nonzero(minvar == i)[0]
            if sel.size == 0:
                continue
            img = images[i]
            if img.is_zero():
                continue
            unit = np.zeros(src.nvars, dtype=np.int64)
            unit[i] = 1
            red_keys = keys[sel] - src.pack(tuple(unit))
            pkeys, _ = src.basis(d - 1)
            pidx = np.searchsorted(pkeys, red_keys)
            block = prev[:, pidx]
            for mono, c in img.terms.items():
                idx = tgt.mono_shift(e * (d - 1), mono)
                cur[np.ix_(idx, sel)] += c * block
        prev = cur % p
    return prev


def ideal_piece_from_quotients(space, quotient_maps, q):
    """Kernel basis of stacked quotient maps: the degree-q piece of an
    intersection of ideals presented by their quotient substitutions."""
    mats = [m(q) for m in quotient_maps]
    stacked = np.vstack(mats)
    return linalg.nullspace(stacked, space.p)


class GradedIdeal:
    """An ideal held as generators plus cached graded-piece bases."""

    def __init__(self, space, gens):
        self.space = space
        self.gens = [g for g in gens if not g.is_zero()]
        for g in self.gens:
            g.homogeneous_degree()
        self._piece = {}

    def gen_degrees(self):
        return sorted(g.homogeneous_degree() for g in self.gens)

    def piece(self, q):
        if q not in self._piece:
            self._piece[q] = ideal_piece(self.space, self.gens, q)
        return self._piece[q]

    def dim(self, q):
        return self.piece(q).shape[1]

    def hilbert_function(self, q):
        """HF of R/I at q."""
        return self.space.dim(q) - self.dim(q)

    def contains(self, f):
        if f.is_zero():
            return True
        q = f.homogeneous_degree()
        B = self.piece(q)
        v = f.to_vector(q)[:, None]
        return linalg.rank(np.hstack([B, v]), self.space.p) == B.shape[1]

    def leftnull(self, q):
        """Rows annihilating the degree-q piece (membership projector)."""
        return linalg.left_nullspace(self.piece(q), self.space.p)

    def saturated_at(self, q):
        """True iff (I : m)_q == I_q."""
        L = self.leftnull(q + 1)
        if L.shape[0] == 0:
            return self.dim(q) == self.space.dim(q)
        conds = []
        for idx in self.space.var_shifts(q):
            conds.append(L[:, idx])
        K = linalg.nullspace(np.vstack(conds), self.space.p)
        return K.shape[1] == self.dim(q)


def extract_generators(space, piece_at, degrees):
    """Minimal generators of an ideal given an exact piece oracle.

    piece_at(q) returns a basis matrix of the degree-q piece.  New
    generators in degree q are piece vectors independent of
    R_1 * (piece at q-1).
    """
    p = space.p
    gens = []
    prev = None
    for q in degrees:
        cur = piece_at(q)
        if prev is None or prev.shape[1] == 0:
            old = np.zeros((space.dim(q), 0), dtype=np.int64)
        else:
            old = var_mult_span(space, prev, q - 1)
        idx = linalg.extend_basis(old, cur, p)
        for j in idx:
            gens.append(Polynomial.from_vector(space, q, cur[:, j]))
        prev = cur
    return gens


def colon_piece(space, target, ideal_gens, q, leftnulls=None):
    """Basis of the degree-q piece of (target : (ideal_gens)).

    target: GradedIdeal (typically a complete intersection).  The
    conditions h * u in target are imposed generator by generator,
    shrinking the solution space incrementally.
    """
    p = space.p
    W = None  # columns spanning current candidate space, None = all of R_q
    for u in sorted(ideal_gens, key=lambda g: g.homogeneous_degree()):
        e = u.homogeneous_degree()
        L = (
            leftnulls[q + e]
            if leftnulls is not None and q + e in leftnulls
            else target.leftnull(q + e)
        )
        if leftnulls is not None:
            leftnulls[q + e] = L
        if L.shape[0] == 0:
            continue
        # rows of L composed with multiplication by u, applied to W
        cond = np.zeros(
            (L.shape[0], space.dim(q) if W is None else W.shape[1]), dtype=np.int64
        )
        if W is None:
            for mono, c in u.terms.items():
                idx = space.mono_shift(q, mono)
                cond += c * L[:, idx]
            cond %= p
        else:
            uW = np.zeros((space.dim(q + e), W.shape[1]), dtype=np.int64)
            for mono, c in u.terms.items():
                idx = space.mono_shift(q, mono)
                uW[idx] += c * W
            cond = linalg.matmul(L, uW % p, p)
        K = linalg.nullspace(cond, p)
        W = K if W is None else linalg.matmul(W, K, p)
        if W.shape[1] == 0:
            return np.zeros((space.dim(q), 0), dtype=np.int64)
    if W is None:
        return np.eye(space.dim(q), dtype=np.int64)
    return W


def colon_ideal_gens(space, target, ideal_gens, max_degree, start_degree=1):
    """Generators of (target : (ideal_gens)) up to max_degree."""
    leftnulls = {}

    def piece_at(q):
        return colon_piece(space, target, ideal_gens, q, leftnulls)

    return extract_generators(space, piece_at, range(start_degree, max_degree + 1))


def certify_generation(space, candidate, piece_at, window):
    """Check the ideal generated by `candidate` matches a piece oracle
    on every degree in `window`; returns the list of mismatch degrees."""
    J = GradedIdeal(space, candidate)
    bad = []
    for q in window:
        if J.dim(q) != piece_at(q).shape[1]:
            bad.append(q)
    return bad
