"""Degeneracy loci of maps between sums of line bundles and syzygy
bundles: Hom spaces, cokernel presentations, ideal extraction.

A bundle is represented by the graded module of a summand list; syzygy
bundles never materialize as sheaves, all computation happens on
presentations read off the backing resolutions.  The ideal of the
degeneracy locus is recovered from the rank-1 embedding
coker(phi) = J_X(m), m = c1 G - c1 F, found as the one-dimensional
kernel of the transposed presentation in the right degree.
"""

import numpy as np

from . import linalg, rng
from .graded import GradedIdeal, module_vectors_to_columns
from .kernel import GradedFreeModule, PolyMatrix, Polynomial
from .modfactory import (
    GenericityError,
    four_lines_module,
    generic_module,
    koszul_complex,
    syzygy_presentation,
)
from .resolutions import (
    minimal_resolution,
    minimalize_presentation,
    resolve_quotient,
    scheme_invariants,
)


class LineBundle:
    def __init__(self, twist):
        self.twist = twist

    def presentation(self, space):
        tgt = GradedFreeModule(space, [self.twist])
        src = GradedFreeModule(space, [])
        return PolyMatrix(src, tgt, [[]], check=False)

    def rank(self):
        return 1

    def c1(self):
        return self.twist

    def __str__(self):
        return "O(%d)" % self.twist if self.twist else "O"


class SyzygyBundle:
    """Syz_i of a backing resolution, twisted; represented by the module
    im(d_{i+1}) presented as coker(d_{i+2})."""

    def __init__(self, resolution, i, twist=0, name="M"):
        if not (1 <= i <= resolution.space.n - 1):
            raise ValueError("syzygy index %d outside 1..n-1" % i)
        self.resolution = resolution
        self.i = i
        self.twist = twist
        self.name = name

    def presentation(self, space):
        return syzygy_presentation(self.resolution, self.i).twist(self.twist)

    def rank(self):
        mods = self.resolution.modules
        return sum(
            (-1) ** (k - self.i - 1) * mods[k].rank for k in range(self.i + 1, len(mods))
        )

    def c1(self):
        mods = self.resolution.modules
        base = sum(
            (-1) ** (k - self.i - 1) * sum(mods[k].twists)
            for k in range(self.i + 1, len(mods))
        )
        return base + self.rank() * self.twist

    def __str__(self):
        t = "(%d)" % self.twist if self.twist else ""
        return "Syz_%d(%s)%s" % (self.i, self.name, t)


class BundleRep:
    """A direct sum of line bundles and syzygy bundles."""

    def __init__(self, space, summands):
        self.space = space
        self.summands = list(summands)

    def rank(self):
        return sum(s.rank() for s in self.summands)

    def c1(self):
        return sum(s.c1() for s in self.summands)

    def presentation(self):
        """Block-diagonal presentation of the representing module."""
        pres = [s.presentation(self.space) for s in self.summands]
        tgt = GradedFreeModule(self.space, [a for p in pres for a in p.target.twists])
        src = GradedFreeModule(self.space, [a for p in pres for a in p.source.twists])
        z = self.space.zero()
        rows = [[z] * src.rank for _ in range(tgt.rank)]
        roff = coff = 0
        for p in pres:
            for i in range(p.target.rank):
                for j in range(p.source.rank):
                    rows[roff + i][coff + j] = p.entries[i][j]
            roff += p.target.rank
            coff += p.source.rank
        return PolyMatrix(src, tgt, rows, check=False)

    def __str__(self):
        return " + ".join(str(s) for s in self.summands)


class BundleMap:
    """A degree-0 map of representing modules, recorded on generators."""

    def __init__(self, source, target, matrix):
        self.source = source
        self.target = target
        self.matrix = matrix  # PolyMatrix: source covers -> target covers

    def twist_m(self):
        return self.target.c1() - self.source.c1()


def hom_space(F, G):
    """Basis of degree-0 homs between the representing modules.

    Returns (dimension, list of BundleMap).  Solves U . rel_F inside
    im(rel_G) on graded pieces and quotients by maps factoring through
    the relations.
    """
    space = F.space
    p = space.p
    presF = F.presentation()
    presG = G.presentation()
    A1, a2 = presF.target, presF
    B1, b2 = presG.target, presG
    alphas = A1.gen_degrees()
    betas = B1.gen_degrees()
    slots = []  # (l, k, entry degree, offset, count)
    off = 0
    for l, beta in enumerate(betas):
        for k, alpha in enumerate(alphas):
            d = alpha - beta
            cnt = space.dim(d) if d >= 0 else 0
            if cnt:
                slots.append((l, k, d, off, cnt))
            off += cnt
    total = off
    if total == 0:
        return 0, []
    cond_blocks = []
    for col in range(a2.ncols):
        e_c = a2.column_degree(col)
        column = a2.column(col)
        L = linalg.left_nullspace(b2.piece(e_c), p) if b2.ncols else None
        if L is not None and L.shape[0] == 0:
            continue
        rows_dim = B1.dim(e_c) if L is None else L.shape[0]
        block = np.zeros((rows_dim, total), dtype=np.int64)
        tblocks = B1.piece_blocks(e_c)
        for (l, k, d, off0, cnt) in slots:
            ck = column[k]
            if ck.is_zero():
                continue
            roff, rdim = tblocks[l]
            sub = np.zeros((B1.dim(e_c), cnt), dtype=np.int64)
            ar = np.arange(cnt)
            for mono, c in ck.terms.items():
                idx = space.mono_shift(d, mono)
                sub[roff + idx, ar] += c
            sub %= p
            if L is None:
                block[:, off0 : off0 + cnt] = (block[:, off0 : off0 + cnt] + sub) % p
            else:
                block[:, off0 : off0 + cnt] = (
                    block[:, off0 : off0 + cnt] + linalg.matmul(L, sub, p)
                ) % p
        cond_blocks.append(block)
    if cond_blocks:
        K = linalg.nullspace(np.vstack(cond_blocks), p)
    else:
        K = np.eye(total, dtype=np.int64)
    # quotient by homs factoring through the relations of G
    factor_cols = []
    for col in range(b2.ncols):
        e_w = b2.column_degree(col)
        column = b2.column(col)
        for k, alpha in enumerate(alphas):
            wdeg = alpha - e_w
            if wdeg < 0:
                continue
            for wi in range(space.dim(wdeg)):
                _, exps = space.basis(wdeg)
                mono = tuple(int(e) for e in exps[wi])
                vec = np.zeros(total, dtype=np.int64)
                for (l, k2, d, off0, cnt) in slots:
                    if k2 != k:
                        continue
                    ent = column[l]
                    if ent.is_zero():
                        continue
                    prod = ent.shift(mono)
                    v = prod.to_vector(d)
                    vec[off0 : off0 + cnt] = v
                factor_cols.append(vec)
    if factor_cols:
        Fm = np.array(factor_cols, dtype=np.int64).T
        keep = linalg.extend_basis(Fm, K, p)
        K = K[:, keep]
    maps = []
    for j in range(K.shape[1]):
        maps.append(BundleMap(F, G, _unflatten(space, A1, B1, slots, K[:, j])))
    return K.shape[1], maps


def _unflatten(space, A1, B1, slots, vec):
    z = space.zero()
    rows = [[z] * A1.rank for _ in range(B1.rank)]
    for (l, k, d, off0, cnt) in slots:
        chunk = vec[off0 : off0 + cnt]
        if np.any(chunk):
            rows[l][k] = Polynomial.from_vector(space, d, chunk)
    return PolyMatrix(A1, B1, rows, check=False)


def random_hom(F, G, seed, name="phi"):
    dim, basis = hom_space(F, G)
    if dim == 0:
        raise GenericityError("Hom(F, G) = 0")
    st = rng.stream(seed, name)
    coeffs = rng.units(st, dim, F.space.p)
    space = F.space
    acc = None
    for c, bm in zip(coeffs, basis):
        scaled = [[e.scale(c) for e in row] for row in bm.matrix.entries]
        if acc is None:
            acc = scaled
        else:
            acc = [
                [acc[i][j] + scaled[i][j] for j in range(len(acc[0]))]
                for i in range(len(acc))
            ]
    return BundleMap(F, G, PolyMatrix(bm.matrix.source, bm.matrix.target, acc, check=False))


class ConstructionError(RuntimeError):
    pass


class Construction:
    """Outcome of a degeneracy-locus construction."""

    def __init__(self, space, ideal_gens, resolution, twist_m, invariants, certificates):
        self.space = space
        self.ideal_gens = ideal_gens
        self.resolution = resolution
        self.twist_m = twist_m
        self.invariants = invariants
        self.certificates = certificates

    def graded_ideal(self):
        return GradedIdeal(self.space, self.ideal_gens)

    def betti(self):
        return self.resolution.betti()


def construct_variety(phi, label="X", expected_codim=2):
    """Ideal and resolution of the degeneracy locus of phi : F -> G.

    rk G = rk F + 1 is required; the cokernel is presented on the
    generators of G, minimized, embedded into R(m) by the unique
    degree-0 map, and certified through its Hilbert polynomial.
    """
    F, G = phi.source, phi.target
    space = F.space
    p = space.p
    if G.rank() != F.rank() + 1:
        raise ConstructionError(
            "rank G = %d must exceed rank F = %d by one" % (G.rank(), F.rank())
        )
    m = phi.twist_m()
    presG = G.presentation()
    coker_pres = presG.stack_columns(phi.matrix)
    coker_pres = minimalize_presentation(coker_pres)
    # rank-1 embedding: w with w . relations = 0, entries of degree gen+m
    gen_degs = coker_pres.target.gen_degrees()
    slots = []
    off = 0
    for gd in gen_degs:
        cnt = space.dim(gd + m)
        slots.append((gd, off, cnt))
        off += cnt
    total = off
    if coker_pres.ncols == 0:
        raise ConstructionError("cokernel has no relations; not an ideal twist")
    # impose the relation conditions one by one; the solution space
    # collapses to a line within a few relations, keeping every
    # elimination small
    W = None
    for col in range(coker_pres.ncols):
        e_c = coker_pres.column_degree(col)
        column = coker_pres.column(col)
        rows_dim = space.dim(e_c + m)
        width = total if W is None else W.shape[1]
        block = np.zeros((rows_dim, width), dtype=np.int64)
        for (gd, off0, cnt), ent in zip(slots, column):
            if ent.is_zero():
                continue
            if W is None:
                ar = np.arange(cnt)
                for mono, c in ent.terms.items():
                    idx = space.mono_shift(gd + m, mono)
                    block[idx, off0 + ar] += c
            else:
                sub = W[off0 : off0 + cnt]
                for mono, c in ent.terms.items():
                    idx = space.mono_shift(gd + m, mono)
                    block[idx] += c * sub
        K0 = linalg.nullspace(block % p, p)
        W = K0 if W is None else linalg.matmul(W, K0, p)
        if W.shape[1] == 0:
            break
    K = W
    if K.shape[1] != 1:
        raise ConstructionError(
            "embedding space has dimension %d (codimension-2 failure)" % K.shape[1]
        )
    w = K[:, 0]
    # normalize: first nonzero coordinate 1 for deterministic output
    first = int(np.nonzero(w)[0][0])
    w = w * pow(int(w[first]), p - 2, p) % p
    gens = []
    for (gd, off0, cnt) in slots:
        chunk = w[off0 : off0 + cnt]
        if np.any(chunk):
            gens.append(Polynomial.from_vector(space, gd + m, chunk))
    ideal = GradedIdeal(space, gens)
    unsat = [
        q
        for q in range(min(ideal.gen_degrees()), max(ideal.gen_degrees()) + 2)
        if not ideal.saturated_at(q)
    ]
    if unsat:
        raise ConstructionError("extracted ideal not saturated at %r" % unsat)
    res = resolve_quotient(space, gens, label=label)
    inv = scheme_invariants(space, res.hilbert_polynomial())
    if inv["dim"] != space.n - 2:
        raise ConstructionError(
            "degeneracy locus has codimension %d, expected %d"
            % (space.n - inv["dim"], expected_codim)
        )
    certs = {
        "twist": m,
        "coker_betti": minimal_resolution(coker_pres).betti(),
        "rank_F": F.rank(),
        "rank_G": G.rank(),
    }
    return Construction(space, gens, res, m, inv, certs)


# ---------------------------------------------------------------------------
# named recipes


def bordiga(space, seed=0):
    """Smooth determinantal surface in P^4 from a general 4x3 linear matrix."""
    if space.n != 4:
        raise ValueError("the Bordiga recipe lives in P^4")
    F = BundleRep(space, [LineBundle(-1)] * 3)
    G = BundleRep(space, [LineBundle(0)] * 4)
    st = rng.stream(seed, "bordiga")
    rows = []
    for i in range(4):
        row = []
        for j in range(3):
            coeffs = rng.scalars(st, space.nvars, space.p)
            row.append(
                Polynomial(
                    space,
                    {
                        tuple(int(t == k) for t in range(space.nvars)): c
                        for k, c in enumerate(coeffs)
                        if c
                    },
                )
            )
        rows.append(row)
    U = PolyMatrix(F.presentation().target, G.presentation().target, rows)
    phi = BundleMap(F, G, U)
    return construct_variety(phi, label="bordiga")


def example_1_6(space, seed=0, attempts=5):
    """Degree-18 3-fold in P^5: F = 24 O(-1), G = Syz_3 of the generic
    (1,6,3) module, phi the syzygy inclusion."""
    if space.n != 5:
        raise ValueError("example 1.6 lives in P^5")
    last = None
    for attempt in range(attempts):
        pres, res = generic_module(space, (1, 6, 3), seed=seed + attempt)
        G = BundleRep(space, [SyzygyBundle(res, 3, twist=4, name="M163")])
        B1 = G.presentation().target
        linear_rows = [i for i, d in enumerate(B1.gen_degrees()) if d == 1]
        F = BundleRep(space, [LineBundle(-1)] * len(linear_rows))
        z = space.zero()
        one = space.one()
        rows = [[z] * len(linear_rows) for _ in range(B1.rank)]
        for j, i in enumerate(linear_rows):
            rows[i][j] = one
        phi = BundleMap(F, G, PolyMatrix(F.presentation().target, B1, rows, check=False))
        try:
            out = construct_variety(phi, label="ex1.6")
        except ConstructionError as exc:
            last = exc
            continue
        if sorted(g.homogeneous_degree() for g in out.ideal_gens) == [6] * 10:
            return out
        last = ConstructionError("unexpected generator degrees")
    raise GenericityError("example_1_6: %s" % last)


def example_4_9(space, seed=0, attempts=5):
    """Degree-11 surface in P^4 cut out by 8 quintics and 4 sextics."""
    if space.n != 4:
        raise ValueError("example 4.9 lives in P^4")
    last = None
    for attempt in range(attempts):
        try:
            mpres, mres, certs = four_lines_module(space, seed=seed + attempt, attempts=1)
        except GenericityError as exc:
            last = exc
            continue
        kos = koszul_complex(space)
        F = BundleRep(space, [LineBundle(-1), LineBundle(-1), SyzygyBundle(kos, 3, twist=3, name="C")])
        G = BundleRep(space, [SyzygyBundle(mres, 1, twist=2, name="M143")])
        try:
            phi = random_hom(F, G, seed + attempt, name="phi4.9")
            out = construct_variety(phi, label="ex4.9")
        except (ConstructionError, GenericityError) as exc:
            last = exc
            continue
        degs = sorted(g.homogeneous_degree() for g in out.ideal_gens)
        if degs == [5] * 8 + [6] * 4:
            out.certificates["four_lines"] = certs
            return out
        last = ConstructionError("generator degrees %r" % degs)
    raise GenericityError("example_4_9: %s" % last)


def example_6_1(space, seed=0, attempts=5):
    """Degree-17 3-fold in P^5: F = O(-1) + 4 Omega^4(4),
    G = 2 Omega^3(3) + 2 O."""
    if space.n != 5:
        raise ValueError("example 6.1 lives in P^5")
    kos = koszul_complex(space)
    F = BundleRep(
        space,
        [LineBundle(-1)] + [SyzygyBundle(kos, 4, twist=4, name="C")] * 4,
    )
    G = BundleRep(
        space,
        [SyzygyBundle(kos, 3, twist=3, name="C")] * 2 + [LineBundle(0)] * 2,
    )
    last = None
    for attempt in range(attempts):
        try:
            phi = random_hom(F, G, seed + attempt, name="phi6.1")
            out = construct_variety(phi, label="ex6.1")
        except (ConstructionError, GenericityError) as exc:
            last = exc
            continue
        degs = sorted(g.homogeneous_degree() for g in out.ideal_gens)
        if degs == [5] * 2 + [6] * 5:
            return out
        last = ConstructionError("generator degrees %r" % degs)
    raise GenericityError("example_6_1: %s" % last)
