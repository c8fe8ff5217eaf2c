"""Builders for finite-length graded modules: Koszul complexes, generic
modules with prescribed Hilbert function, graded duals, and the
four-general-lines module used for the degree-11 surface construction.

"General" choices are seeded draws over F_p with rejection: an output
failing its Hilbert-function or Betti certificate advances the seed.
"""

from itertools import combinations

import numpy as np

from . import linalg, rng
from .graded import module_vectors_to_columns
from .kernel import GradedFreeModule, PolyMatrix, Polynomial
from .resolutions import (
    FreeResolution,
    minimal_resolution,
    minimalize_presentation,
    module_hf_from_presentation,
)


class GenericityError(RuntimeError):
    """Seeded draws exhausted without meeting the declared certificate."""


def koszul_complex(space, twist=0):
    """The Koszul complex on x0..xn twisted by `twist`.

    Resolves the residue field shifted into degree -twist; term i is
    C(n+1, i) copies of R(twist - i).
    """
    nv = space.nvars
    subsets = [list(combinations(range(nv), i)) for i in range(nv + 1)]
    mods = [
        GradedFreeModule(space, [twist - i] * len(subsets[i])) for i in range(nv + 1)
    ]
    diffs = []
    z = space.zero()
    for i in range(1, nv + 1):
        index = {S: k for k, S in enumerate(subsets[i - 1])}
        rows = [[z] * len(subsets[i]) for _ in range(len(subsets[i - 1]))]
        for col, S in enumerate(subsets[i]):
            for pos, v in enumerate(S):
                T = tuple(x for x in S if x != v)
                sign = 1 if pos % 2 == 0 else -1
                rows[index[T]][col] = space.variable(v).scale(sign)
        diffs.append(PolyMatrix(mods[i], mods[i - 1], rows, check=False))
    return FreeResolution(mods, diffs, label="koszul(%d)" % twist)


def koszul_module(space, i, twist=0):
    """The twisted Koszul complex, checked to host the i-th syzygy sheaf."""
    if i < 0 or i > space.nvars:
        raise ValueError("syzygy index %d out of range for P^%d" % (i, space.n))
    return koszul_complex(space, twist)


def syzygy_presentation(res, i):
    """Presentation of the i-th syzygy module Syz_i = im(d_{i+1}).

    Generators are the columns of d_{i+1}; relations are d_{i+2} (empty
    at the tail of the resolution).
    """
    gens = res.diffs[i]  # d_{i+1} : F_{i+1} -> F_i
    if i + 1 < len(res.diffs):
        return res.diffs[i + 1]
    src = GradedFreeModule(res.space, [])
    return PolyMatrix(src, gens.source, [[] for _ in range(gens.source.rank)], check=False)


def normalize_presentation(pres):
    """Twist a presentation so its lowest generator sits in degree 0."""
    degs = pres.target.gen_degrees()
    if not degs:
        return pres, 0
    shift = min(degs)
    return pres.twist(shift), shift


def generic_module(space, hf, seed=0, attempts=5):
    """A module with prescribed finite Hilbert function, generators in
    the minimal possible degrees, relations drawn at random.

    Returns (presentation, resolution).  Raises GenericityError when no
    seed in the window realizes the target, and ValueError when the
    layout cannot reach the target at all.
    """
    hf = list(hf)
    if not hf or hf[0] < 1:
        raise ValueError("hilbert function must start positive")
    top = len(hf) - 1
    for attempt in range(attempts):
        st = rng.stream(seed + attempt, "generic_module")
        target = GradedFreeModule(space, [0] * hf[0])
        rel_cols = []
        rel_degs = []
        ok = True
        for q in range(1, top + 2):
            want = hf[q] if q <= top else 0
            if rel_cols:
                pres = PolyMatrix.from_columns(space, target, rel_cols, rel_degs)
                have = module_hf_from_presentation(pres, q)
            else:
                have = target.dim(q)
            if have < want:
                raise ValueError(
                    "hilbert function %r unreachable: degree %d gives %d < %d"
                    % (hf, q, have, want)
                )
            if have > want:
                extra = have - want
                block = np.array(
                    st.integers(0, space.p, size=(target.dim(q), extra)),
                    dtype=np.int64,
                )
                cols = module_vectors_to_columns(target, block, q)
                rel_cols.extend(cols)
                rel_degs.extend([q] * len(cols))
        pres = PolyMatrix.from_columns(space, target, rel_cols, rel_degs)
        for q in range(0, top + 2):
            want = hf[q] if q <= top else 0
            if module_hf_from_presentation(pres, q) != want:
                ok = False
                break
        if ok:
            res = minimal_resolution(pres, regularity=top, label="generic%r" % (hf,))
            return pres, res
    raise GenericityError("no seed in [%d,%d) realizes HF %r" % (seed, seed + attempts, hf))


def dual_module(pres, regularity=None, resolution=None):
    """Graded dual of a finite-length module, gen degrees normalized to 0.

    The dual of the full resolution is exact for finite-length modules,
    so the transposed last differential presents the dual.  Returns
    (presentation, degree shift applied).
    """
    space = pres.source.space
    if resolution is None:
        if regularity is None:
            regularity = _finite_length_top(pres)
        resolution = minimal_resolution(pres, regularity=regularity)
    if len(resolution.diffs) != space.nvars:
        raise ValueError("module is not finite length: resolution too short")
    last = resolution.diffs[-1]
    dual_pres = last.transpose(-space.nvars)
    dual_pres = minimalize_presentation(dual_pres)
    return normalize_presentation(dual_pres)


def _finite_length_top(pres):
    q = 0
    while module_hf_from_presentation(pres, q) > 0:
        q += 1
        if q > 40:
            raise ValueError("input does not look finite length")
    return max(q - 1, 0)


def module_hf(pres, upto):
    return [module_hf_from_presentation(pres, q) for q in range(upto + 1)]


def lift_poly(small, big, f, pad=None):
    """Reinterpret a polynomial in fewer variables inside a larger ring."""
    extra = big.nvars - small.nvars
    terms = {}
    for m, c in f.terms.items():
        terms[tuple(m) + (0,) * extra] = c
    return Polynomial(big, terms)


def four_lines_module(space, seed=0, attempts=5):
    """The special Hilbert-function (1,4,3) module over P^4.

    Four general lines in the hyperplane V(x4) feed a 3x8 product
    matrix with four linear syzygies; together with a column of three
    general quadrics it presents the dual module.  Dualizing and
    tensoring with the Koszul complex on x4 gives a module presented by
    (x4, seven quadrics) whose first syzygies acquire the extra linear
    column that makes the surface construction possible.

    Returns (presentation over P^4, resolution, certificates dict).
    """
    if space.n != 4:
        raise ValueError("four-lines module lives over P^4")
    small = _P3(space)
    for attempt in range(attempts):
        st = rng.stream(seed + attempt, "four_lines")
        # four general lines: row spans of random full-rank 2x4 matrices
        eps_blocks = []
        degenerate = False
        for _ in range(4):
            A = np.array(st.integers(0, space.p, size=(2, 4)), dtype=np.int64)
            if linalg.rank(A, space.p) < 2:
                degenerate = True
                break
            forms = [
                Polynomial(small, {tuple(int(t == k) for t in range(4)): int(A[r, k]) for k in range(4)})
                for r in range(2)
            ]
            eps_blocks.append(forms)
        if degenerate:
            continue
        delta = np.array(st.integers(0, space.p, size=(3, 4)), dtype=np.int64)
        z = small.zero()
        gamma_rows = [[z] * 9 for _ in range(3)]
        for i in range(3):
            for b in range(4):
                for r in range(2):
                    gamma_rows[i][2 * b + r] = eps_blocks[b][r].scale(int(delta[i, b]))
        _, q_exps = small.basis(2)
        for i in range(3):
            coeffs = st.integers(0, space.p, size=len(q_exps))
            gamma_rows[i][8] = Polynomial(
                small,
                {tuple(int(e) for e in q_exps[k]): int(coeffs[k]) for k in range(len(q_exps))},
            )
        tgt = GradedFreeModule(small, [0, 0, 0])
        src = GradedFreeModule(small, [-1] * 8 + [-2])
        mstar = PolyMatrix(src, tgt, gamma_rows)
        if module_hf(mstar, 3) != [3, 4, 1, 0]:
            continue
        mstar_res = minimal_resolution(mstar, regularity=2, label="M'dual")
        # the product matrix must carry exactly four linear first syzygies
        lin_syz = sum(1 for a in mstar_res.modules[2].twists if a == -2)
        mprime, _ = dual_module(mstar, resolution=mstar_res)
        if module_hf(mprime, 3) != [1, 4, 3, 0]:
            continue
        mprime_res = minimal_resolution(mprime, regularity=2, label="M'")
        betti = mprime_res.betti()
        a_value = betti.rank(3, 4)
        if betti.rank(1, 2) != 7 or a_value != 1:
            continue
        # tensor with the Koszul complex on x4: presentation (x4 | quadrics)
        rel_row = [space.variable(4)]
        degs = [1]
        for j in range(mprime.ncols):
            rel_row.append(lift_poly(small, space, mprime.entries[0][j]))
            degs.append(mprime.column_degree(j))
        pres = PolyMatrix.from_columns(
            space, GradedFreeModule(space, [0]), [[f] for f in rel_row], degs
        )
        if module_hf(pres, 3) != [1, 4, 3, 0]:
            continue
        res = minimal_resolution(pres, regularity=2, label="four_lines")
        certs = {
            "a": a_value,
            "linear_syzygies_of_product": lin_syz,
            "hf": (1, 4, 3),
            "seed_used": seed + attempt,
            "mprime_betti": betti,
        }
        return pres, res, certs
    raise GenericityError("four_lines_module: seeds %d..%d degenerate" % (seed, seed + attempts - 1))


_P3_CACHE = {}


def _P3(space):
    key = space.p
    if key not in _P3_CACHE:
        from .kernel import AmbientSpace

        _P3_CACHE[key] = AmbientSpace(3, space.field)
    return _P3_CACHE[key]
