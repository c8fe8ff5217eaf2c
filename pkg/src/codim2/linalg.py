"""Dense linear algebra over F_p on numpy arrays.

Matrices are int64 arrays with entries in [0, p).  Products run
through float64 BLAS with the inner dimension chunked so every dot
product stays below 2^53 and is therefore exact; elimination is
blocked with BLAS updates on the trailing submatrix.  This keeps the
big graded-piece computations (pieces of P^5 ideals run to dimension
several thousand) at a few seconds each.
"""

import numpy as np


def _as_mod(A, p):
    A = np.asarray(A, dtype=np.int64)
    return A % p


def matmul(A, B, p):
    """Exact A @ B mod p via chunked float64 BLAS."""
    A = _as_mod(A, p)
    B = _as_mod(B, p)
    if A.shape[1] != B.shape[0]:
        raise ValueError("shape mismatch %s @ %s" % (A.shape, B.shape))
    inner = A.shape[1]
    if inner == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    chunk = max(1, (1 << 52) // (p * p))
    Af = A.astype(np.float64)
    Bf = B.astype(np.float64)
    acc = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for s in range(0, inner, chunk):
        e = min(inner, s + chunk)
        acc += np.rint(Af[:, s:e] @ Bf[s:e]).astype(np.int64) % p
        acc %= p
    return acc


class _Eliminator:
    """Blocked forward elimination (PLU-style) over F_p."""

    def __init__(self, A, p, inv_table=None, block=160):
        self.p = p
        self.A = _as_mod(A, p).copy()
        self.block = block
        if inv_table is None:
            self.inv = lambda a: pow(int(a), p - 2, p)
        else:
            self.inv = lambda a: int(inv_table[int(a)])
        self.pivot_cols = []
        self._run()

    def _run(self):
        A, p = self.A, self.p
        m, n = A.shape
        r = 0
        c0 = 0
        while c0 < n and r < m:
            c1 = min(c0 + self.block, n)
            width = c1 - c0
            # panel entries are left unreduced between pivots; with
            # width <= 256 they stay below 256 * p^2 < 2^62, and only the
            # pivot row/column are reduced before being read
            panel = A[r:, c0:c1].copy()
            mloc = panel.shape[0]
            mult = np.zeros((mloc, width), dtype=np.int64)
            perm = np.arange(mloc)
            piv_rel_cols = []
            k = 0
            for j in range(width):
                panel[k:, j] %= p
                col = panel[k:, j]
                nz = np.nonzero(col)[0]
                if nz.size == 0:
                    continue
                i = k + int(nz[0])
                if i != k:
                    panel[[k, i]] = panel[[i, k]]
                    mult[[k, i]] = mult[[i, k]]
                    perm[[k, i]] = perm[[i, k]]
                panel[k, j:] %= p
                inv_piv = self.inv(panel[k, j])
                f = panel[k + 1 :, j] * inv_piv % p
                nzb = np.nonzero(f)[0]
                if nzb.size:
                    mult[k + 1 + nzb, len(piv_rel_cols)] = f[nzb]
                    panel[k + 1 :, j:] -= f[:, None] * panel[k, j:]
                piv_rel_cols.append(j)
                self.pivot_cols.append(c0 + j)
                k += 1
                if r + k >= m:
                    break
            panel %= p
            # write the panel back and replay the transform on the trailing part
            A[r:, c0:c1] = panel
            if c1 < n and k > 0:
                trail = A[r:, c1:]
                if not np.array_equal(perm, np.arange(mloc)):
                    trail = trail[perm]
                L = mult[:, :k]
                # unit lower-triangular solve on the pivot rows
                for t in range(k):
                    nzr = np.nonzero(L[t, :t])[0]
                    if nzr.size:
                        trail[t] = (trail[t] - L[t, nzr] @ trail[nzr]) % p
                if mloc > k:
                    upd = matmul(L[k:], trail[:k], p)
                    sub = trail[k:]
                    np.subtract(sub, upd, out=sub)
                    sub %= p
                A[r:, c1:] = trail
            r += k
            c0 = c1
        self.rank = r


def echelon(A, p, inv_table=None):
    """Forward row echelon; returns (E, pivot_cols).

    Rows 0..rank-1 carry the pivots in order; pivot entries are not
    normalized and entries above pivots are not cleared.
    """
    e = _Eliminator(A, p, inv_table)
    return e.A, e.pivot_cols


def rank(A, p, inv_table=None):
    A = np.asarray(A)
    if min(A.shape) == 0:
        return 0
    return _Eliminator(A, p, inv_table).rank


def rref(A, p, inv_table=None, block=160):
    """Reduced row echelon form; returns (R, pivot_cols)."""
    E, piv = echelon(A, p, inv_table)
    p_ = p
    inv = (lambda a: pow(int(a), p_ - 2, p_)) if inv_table is None else (
        lambda a: int(inv_table[int(a)])
    )
    r = len(piv)
    if r == 0:
        return E, piv
    # normalize pivot rows
    for t in range(r):
        c = E[t, piv[t]]
        if c != 1:
            E[t, piv[t] :] = E[t, piv[t] :] * inv(c) % p
    # blocked backward elimination
    t1 = r
    while t1 > 0:
        t0 = max(0, t1 - block)
        blk = E[t0:t1]
        # clear within the block (small, reverse order)
        for t in range(t1 - t0 - 1, 0, -1):
            col = piv[t0 + t]
            above = blk[:t, col]
            nz = np.nonzero(above)[0]
            if nz.size:
                blk[nz, col:] = (blk[nz, col:] - above[nz, None] * blk[t, col:]) % p
        if t0 > 0:
            cols = [piv[t0 + t] for t in range(t1 - t0)]
            F = E[:t0, cols]
            if np.any(F):
                start = piv[t0]
                upd = matmul(F, blk[:, start:], p)
                E[:t0, start:] = (E[:t0, start:] - upd) % p
        t1 = t0
    return E, piv


def nullspace(A, p, inv_table=None):
    """Basis of the right kernel as columns of an n x k matrix."""
    A = np.asarray(A, dtype=np.int64)
    m, n = A.shape
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if m == 0:
        return np.eye(n, dtype=np.int64)
    E, piv = echelon(A, p, inv_table)
    r = len(piv)
    pivset = set(piv)
    free = np.array([j for j in range(n) if j not in pivset], dtype=np.int64)
    N = np.zeros((n, len(free)), dtype=np.int64)
    if len(free) == 0:
        return N
    N[free, np.arange(len(free))] = 1
    if r == 0:
        return N
    inv = (lambda a: pow(int(a), p - 2, p)) if inv_table is None else (
        lambda a: int(inv_table[int(a)])
    )
    piv_arr = np.array(piv, dtype=np.int64)
    # solve U X = -V blockwise, U = E[:r, piv] upper triangular, V = E[:r, free]
    V = E[:r][:, free] % p
    X = np.zeros((r, len(free)), dtype=np.int64)
    block = 160
    t1 = r
    while t1 > 0:
        t0 = max(0, t1 - block)
        for t in range(t1 - 1, t0 - 1, -1):
            rhs = (p - V[t]) % p
            if t + 1 < t1:
                row = E[t, piv_arr[t + 1 : t1]]
                if np.any(row):
                    rhs = (rhs - row @ X[t + 1 : t1]) % p
            X[t] = rhs * inv(E[t, piv[t]]) % p
        if t0 > 0:
            Ublk = E[:t0, piv_arr[t0:t1]]
            if np.any(Ublk):
                V[:t0] = (V[:t0] + matmul(Ublk, X[t0:t1], p)) % p
        t1 = t0
    N[piv_arr] = X
    return N


def left_nullspace(A, p, inv_table=None):
    """Rows L with L @ A = 0 spanning the left kernel."""
    return nullspace(np.asarray(A).T, p, inv_table).T


def solve(A, B, p, inv_table=None):
    """One solution X of A @ X = B, or None if inconsistent."""
    A = _as_mod(A, p)
    B = _as_mod(B, p)
    if B.ndim == 1:
        B = B[:, None]
    n = A.shape[1]
    R, piv = rref(np.hstack([A, B]), p, inv_table)
    for t, c in enumerate(piv):
        if c >= n:
            return None
    X = np.zeros((n, B.shape[1]), dtype=np.int64)
    for t, c in enumerate(piv):
        X[c] = R[t, n:]
    return X


def extend_basis(S, K, p, inv_table=None):
    """Indices of columns of K that enlarge the column span of S."""
    S = _as_mod(S, p)
    K = _as_mod(K, p)
    if K.shape[1] == 0:
        return []
    stacked = np.hstack([S, K]) if S.shape[1] else K
    _, piv = echelon(stacked, p, inv_table)
    base = S.shape[1]
    return [c - base for c in piv if c >= base]


def column_space_intersection(A, B, p, inv_table=None):
    """Basis columns of col(A) meet col(B)."""
    A = _as_mod(A, p)
    B = _as_mod(B, p)
    if A.shape[1] == 0 or B.shape[1] == 0:
        return np.zeros((A.shape[0], 0), dtype=np.int64)
    N = nullspace(np.hstack([A, (p - B) % p]), p, inv_table)
    combo = matmul(A, N[: A.shape[1]], p)
    # the combination columns can be dependent; prune to a basis
    keep = extend_basis(np.zeros((A.shape[0], 0), dtype=np.int64), combo, p, inv_table)
    return combo[:, keep]
