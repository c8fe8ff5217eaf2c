"""Buchberger engine for homogeneous ideals and submodules of graded
free modules: normal forms, syzygies, ideal quotient, saturation,
Hilbert functions and dimension.

Elements of a rank-r free module are dicts {(mono, pos): coeff}; ring
elements use pos = 0 with rank 1.  The default order compares weighted
total degree, then grevlex on the monomial, then position, which keeps
homogeneous inputs homogeneous and lets S-pairs be processed by
ascending degree (the normal strategy).  A degree cap turns the run
into a truncated basis valid through that degree.
"""

import heapq
from fractions import Fraction
from functools import lru_cache
from math import comb

from .kernel import (
    Polynomial,
    grevlex_key,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)


class GBElement:
    __slots__ = ("terms", "lt", "pure")

    def __init__(self, terms, order):
        self.terms = terms
        self.lt = max(terms, key=order.key) if terms else None
        # single-position elements admit the coprimality (product) criterion
        self.pure = len({pos for (_, pos) in terms}) <= 1


class ModuleOrder:
    """Degree, then grevlex, then position; weights = generator degrees."""

    def __init__(self, weights=(0,), pot_first=0):
        self.weights = tuple(weights)
        self.pot_first = pot_first  # number of leading positions that dominate

    def degree(self, key):
        mono, pos = key
        return sum(mono) + self.weights[pos]

    def key(self, key):
        mono, pos = key
        head = ()
        if self.pot_first:
            head = (1 if pos < self.pot_first else 0,)
        return head + (sum(mono) + self.weights[pos],) + grevlex_key(mono)[1:] + (-pos,)


def _add_into(res, terms, scale, mono, pos_shift, p):
    for (m, pos), c in terms.items():
        k = (mono_mul(m, mono), pos + pos_shift)
        v = (res.get(k, 0) + scale * c) % p
        if v:
            res[k] = v
        elif k in res:
            del res[k]


class GroebnerBasis:
    """A (reduced unless truncated) Groebner basis with query helpers."""

    def __init__(self, space, elements, order, rank=1, degree_cap=None):
        self.space = space
        self.elements = elements
        self.order = order
        self.rank = rank
        self.degree_cap = degree_cap

    def lead_terms(self):
        return [e.lt for e in self.elements]

    def normal_form(self, element):
        return normal_form_terms(self.space, element, self.elements, self.order)

    def contains(self, element):
        return not self.normal_form(element)

    def polys(self):
        """Ring case: unwrap to Polynomial objects."""
        out = []
        for e in self.elements:
            out.append(
                Polynomial(self.space, {m: c for (m, pos), c in e.terms.items()})
            )
        return out

    def __len__(self):
        return len(self.elements)


def to_terms(space, f, pos=0):
    """Wrap a Polynomial as a module element at the given position."""
    return {(m, pos): c for m, c in f.terms.items()}


def vector_to_terms(space, polys):
    out = {}
    for pos, f in enumerate(polys):
        for m, c in f.terms.items():
            out[(m, pos)] = c
    return out


def terms_to_vector(space, terms, rank):
    polys = [dict() for _ in range(rank)]
    for (m, pos), c in terms.items():
        polys[pos][m] = c
    return [Polynomial(space, t) for t in polys]


def normal_form_terms(space, f, basis, order):
    """Full division remainder of f against the basis elements."""
    p = space.p
    inv = space.field.inv
    work = dict(f)
    rem = {}
    while work:
        lt = max(work, key=order.key)
        mono, pos = lt
        hit = None
        for e in basis:
            em, ep = e.lt
            if ep == pos and mono_divides(em, mono):
                hit = e
                break
        if hit is None:
            rem[lt] = work.pop(lt)
            continue
        scale = (p - work[lt] * inv(hit.terms[hit.lt])) % p
        _add_into(work, hit.terms, scale, mono_div(mono, hit.lt[0]), 0, p)
    return rem


def buchberger(space, gens, weights=(0,), degree_cap=None, pot_first=0):
    """Reduced Groebner basis of homogeneous generators.

    gens: list of term dicts (see to_terms / vector_to_terms).
    degree_cap skips S-pairs above the cap, producing a truncated
    basis valid through that degree.
    """
    order = ModuleOrder(weights, pot_first=pot_first)
    p = space.p
    inv = space.field.inv
    basis = []
    for i, g in enumerate(gens):
        g = {k: c % p for k, c in g.items() if c % p}
        if not g:
            continue
        basis.append(GBElement(g, order))

    pairs = []
    counter = 0

    def push_pair(i, j):
        nonlocal counter
        ei, ej = basis[i], basis[j]
        if ei.lt[1] != ej.lt[1]:
            return
        lcm = mono_lcm(ei.lt[0], ej.lt[0])
        deg = sum(lcm) + order.weights[ei.lt[1]]
        if degree_cap is not None and deg > degree_cap:
            return
        # product criterion, valid only for single-position elements
        if ei.pure and ej.pure and mono_mul(ei.lt[0], ej.lt[0]) == lcm:
            return
        counter += 1
        heapq.heappush(pairs, (deg, counter, i, j, lcm))

    for i in range(len(basis)):
        for j in range(i):
            push_pair(j, i)

    def reduce_full(work):
        while work:
            lt = max(work, key=order.key)
            mono, pos = lt
            hit = None
            for e in basis:
                em, ep = e.lt
                if ep == pos and mono_divides(em, mono):
                    hit = e
                    break
            if hit is None:
                break
            scale = (p - work[lt] * inv(hit.terms[hit.lt])) % p
            shift = mono_div(mono, hit.lt[0])
            _add_into(work, hit.terms, scale, shift, 0, p)
        return work

    while pairs:
        deg, _, i, j, lcm = heapq.heappop(pairs)
        ei, ej = basis[i], basis[j]
        # chain criterion: a third element dividing the lcm whose pairs
        # with both ends were already handled lets us drop this pair
        skip = False
        for k, ek in enumerate(basis):
            if k in (i, j) or ek.lt[1] != ei.lt[1]:
                continue
            if mono_divides(ek.lt[0], lcm):
                l1 = mono_lcm(ei.lt[0], ek.lt[0])
                l2 = mono_lcm(ej.lt[0], ek.lt[0])
                if l1 != lcm and l2 != lcm:
                    skip = True
                    break
        if skip:
            continue
        mi = mono_div(lcm, ei.lt[0])
        mj = mono_div(lcm, ej.lt[0])
        ci = inv(ei.terms[ei.lt])
        cj = (p - inv(ej.terms[ej.lt])) % p
        work = {}
        _add_into(work, ei.terms, ci, mi, 0, p)
        _add_into(work, ej.terms, cj, mj, 0, p)
        work = reduce_full(work)
        if work:
            basis.append(GBElement(work, order))
            new = len(basis) - 1
            for t in range(new):
                push_pair(t, new)

    # interreduce: drop redundant leads, tail-reduce, normalize monic
    keep = []
    for i, e in enumerate(basis):
        lt = e.lt
        redundant = False
        for j, other in enumerate(basis):
            if i == j or other.lt[1] != lt[1]:
                continue
            if mono_divides(other.lt[0], lt[0]) and other.lt != lt:
                redundant = True
                break
            if other.lt == lt and j < i:
                redundant = True
                break
        if not redundant:
            keep.append(e)
    reduced = []
    for idx, e in enumerate(keep):
        others = [x for t, x in enumerate(keep) if t != idx]
        rem = normal_form_terms(space, e.terms, others, order) if others else e.terms
        if not rem:
            continue
        scale = inv(rem[max(rem, key=order.key)])
        rem = {k: c * scale % p for k, c in rem.items()}
        reduced.append(GBElement(rem, order))
    rank = max(len(weights), 1)
    return GroebnerBasis(
        space,
        sorted(reduced, key=lambda e: order.key(e.lt)),
        order,
        rank=rank,
        degree_cap=degree_cap,
    )


def ideal_gb(space, polys, degree_cap=None):
    return buchberger(space, [to_terms(space, f) for f in polys], degree_cap=degree_cap)


def normal_form(space, f, gb):
    rem = gb.normal_form(to_terms(space, f))
    return Polynomial(space, {m: c for (m, pos), c in rem.items()})


def syzygy_module(space, polys):
    """Generators of the syzygy module of the given ring elements.

    Classic elimination: run Buchberger on (g_i, e_i) inside R + R^k
    with the leading position dominant; basis elements with vanishing
    first component are syzygies of the inputs.
    """
    degs = [f.homogeneous_degree() for f in polys]
    weights = (0,) + tuple(degs)
    gens = []
    for i, f in enumerate(polys):
        g = to_terms(space, f, pos=0)
        g[((0,) * space.nvars, i + 1)] = 1
        gens.append(g)
    gb = buchberger(space, gens, weights=weights, pot_first=1)
    syz = []
    for e in gb.elements:
        if all(pos != 0 for (m, pos) in e.terms):
            vec = terms_to_vector(
                space, {(m, pos - 1): c for (m, pos), c in e.terms.items()}, len(polys)
            )
            syz.append(vec)
    return syz


def ideal_intersection(space, a_polys, b_polys):
    """Generators of (a) meet (b) via syzygies of the concatenation."""
    syz = syzygy_module(space, list(a_polys) + list(b_polys))
    out = []
    for vec in syz:
        acc = space.zero()
        for f, coeff in zip(a_polys, vec[: len(a_polys)]):
            acc = acc + f * coeff
        if not acc.is_zero():
            out.append(acc)
    return interreduce(space, out)


def ideal_quotient(space, i_polys, j_polys):
    """(I : J) as a reduced basis of generators."""
    result = None
    for f in j_polys:
        if f.is_zero():
            continue
        syz = syzygy_module(space, list(i_polys) + [f])
        gens = [vec[-1] for vec in syz if not vec[-1].is_zero()]
        gens = [g.scale(-1) for g in gens]
        gens = interreduce(space, gens)
        if result is None:
            result = gens
        else:
            result = ideal_intersection(space, result, gens)
    if result is None:
        return list(i_polys)
    return gb_generators(space, result)


def interreduce(space, polys):
    """Prune zero and lead-redundant elements (cheap, not a full GB)."""
    polys = [f for f in polys if not f.is_zero()]
    polys.sort(key=lambda f: grevlex_key(f.lead_monomial()))
    out = []
    for f in polys:
        lm = f.lead_monomial()
        if any(mono_divides(g.lead_monomial(), lm) for g in out):
            continue
        out.append(f)
    return out


def gb_generators(space, polys, degree_cap=None):
    gb = ideal_gb(space, polys, degree_cap=degree_cap)
    return gb.polys()


def substitute_linear(space, f, matrix):
    """Apply the coordinate change x_i -> sum_j matrix[i][j] x_j."""
    images = []
    for i in range(space.nvars):
        terms = {}
        for j in range(space.nvars):
            c = int(matrix[i][j]) % space.p
            if c:
                mono = tuple(int(t == j) for t in range(space.nvars))
                terms[mono] = c
        images.append(Polynomial(space, terms))
    acc = space.zero()
    for mono, c in f.terms.items():
        term = space.one().scale(c)
        for i, e in enumerate(mono):
            for _ in range(e):
                term = term * images[i]
        acc = acc + term
    return acc


def saturate_wrt_last_variable(space, polys):
    """I : x_n^infty from a grevlex basis by dividing out x_n powers."""
    gb = ideal_gb(space, polys)
    out = []
    for f in gb.polys():
        k = min(m[-1] for m in f.terms)
        if k:
            out.append(Polynomial(space, {m[:-1] + (m[-1] - k,): c for m, c in f.terms.items()}))
        else:
            out.append(f)
    return gb_generators(space, out)


def saturate(space, polys, seed=0):
    """Saturation with respect to the irrelevant ideal.

    A seeded general change of coordinates makes the last variable a
    general linear form; I : l^infty equals the saturation when l
    avoids every associated prime except the irrelevant one, which the
    audit (J : x_i) = J certifies, with new draws on failure and a
    variablewise intersection as the final fallback.
    """
    from . import rng as _rng
    import numpy as np
    from . import linalg as _linalg

    polys = [f for f in polys if not f.is_zero()]
    if not polys:
        return []
    for attempt in range(4):
        st = _rng.stream(seed + attempt, "saturate")
        A = np.array(st.integers(0, space.p, size=(space.nvars, space.nvars)), dtype=np.int64)
        np.fill_diagonal(A, (A.diagonal() + 1) % space.p)
        if _linalg.rank(A, space.p) < space.nvars:
            continue
        Ainv = _inverse_matrix(space, A)
        moved = [substitute_linear(space, f, A) for f in polys]
        sat = saturate_wrt_last_variable(space, moved)
        back = [substitute_linear(space, f, Ainv) for f in sat]
        back = gb_generators(space, back)
        if _is_saturated(space, back):
            return back
    # fallback: intersect the saturations with respect to every variable
    result = None
    for i in range(space.nvars):
        perm = list(range(space.nvars))
        perm[i], perm[-1] = perm[-1], perm[i]
        M = [[1 if c == perm[r] else 0 for c in range(space.nvars)] for r in range(space.nvars)]
        moved = [substitute_linear(space, f, M) for f in polys]
        sat = saturate_wrt_last_variable(space, moved)
        back = [substitute_linear(space, f, M) for f in sat]
        result = back if result is None else ideal_intersection(space, result, back)
    return gb_generators(space, result)


def _inverse_matrix(space, A):
    import numpy as np
    from . import linalg as _linalg

    n = A.shape[0]
    X = _linalg.solve(A, np.eye(n, dtype=np.int64), space.p)
    return X


def _is_saturated(space, polys):
    gb = ideal_gb(space, polys)
    for i in range(space.nvars):
        xi = space.variable(i)
        syz = syzygy_module(space, polys + [xi])
        for vec in syz:
            g = vec[-1].scale(-1)
            if not g.is_zero() and gb.normal_form(to_terms(space, g)):
                return False
    return True


# ---------------------------------------------------------------------------
# Hilbert data from leading-term ideals


class HilbertData:
    """Hilbert function window, Hilbert polynomial, dimension, degree."""

    def __init__(self, space, numerator):
        self.space = space
        self.numerator = dict(numerator)
        n1 = space.nvars
        # strip (1-t) factors: dim = n+1 - number removed
        num = dict(self.numerator)
        removed = 0
        while num and sum(num.values()) == 0:
            num = _divide_by_one_minus_t(num)
            removed += 1
        if not num:
            # zero module (unit ideal): empty scheme
            self.krull_dim = 0
            self.reduced_numerator = {}
            self.degree = 0
        else:
            self.krull_dim = n1 - removed
            self.reduced_numerator = num
            self.degree = sum(num.values())
        self.proj_dim = self.krull_dim - 1

    def hf(self, q):
        n = self.space.n
        return sum(
            c * comb(q - i + n, n) for i, c in self.numerator.items() if q - i >= 0
        )

    def hf_window(self, lo, hi):
        return [self.hf(q) for q in range(lo, hi + 1)]

    def hp_coeffs(self):
        """Hilbert polynomial coefficients (exact fractions)."""
        d = self.krull_dim - 1
        if d < 0:
            return [Fraction(0)]
        coeffs = [Fraction(0)] * (d + 1)
        for i, c in self.reduced_numerator.items():
            # c * C(q - i + d, d) as a polynomial in q
            poly = [Fraction(1)]
            for k in range(1, d + 1):
                nxt = [Fraction(0)] * (len(poly) + 1)
                for dd, cc in enumerate(poly):
                    nxt[dd] += cc * (k - i)
                    nxt[dd + 1] += cc
                poly = nxt
            from math import factorial

            for dd, cc in enumerate(poly):
                coeffs[dd] += c * cc / factorial(d)
        return coeffs

    def hp_value(self, q):
        acc = Fraction(0)
        for c in reversed(self.hp_coeffs()):
            acc = acc * q + c
        return int(acc)

    def __str__(self):
        hf = self.hf_window(0, max(max(self.numerator, default=0) + 2, 6))
        hp = self.hp_coeffs()
        terms = []
        for d in range(len(hp) - 1, -1, -1):
            if hp[d]:
                terms.append("%s t^%d" % (hp[d], d))
        return "HF: %s HP: %s dim: %d deg: %d" % (
            hf,
            " + ".join(terms) if terms else "0",
            self.proj_dim,
            self.degree,
        )


def _divide_by_one_minus_t(num):
    """num / (1 - t) for a polynomial with num(1) = 0.

    Quotient coefficients are the partial sums of the numerator.
    """
    out = {}
    acc = 0
    for i in range(0, max(num)):
        acc += num.get(i, 0)
        if acc:
            out[i] = acc
    return out


def lead_term_ideal(gb):
    """Minimal monomial generators of the leading-term ideal (ring case)."""
    monos = [e.lt[0] for e in gb.elements]
    out = []
    for m in sorted(monos, key=sum):
        if not any(mono_divides(g, m) for g in out):
            out.append(m)
    return out


def monomial_numerator(monos, nvars):
    """Hilbert series numerator of R/(monomial ideal), by pivot recursion."""
    monos = tuple(sorted(set(monos)))

    @lru_cache(maxsize=None)
    def rec(gens):
        gens = [g for g in gens]
        # prune non-minimal generators
        gens.sort(key=sum)
        mins = []
        for g in gens:
            if not any(mono_divides(h, g) for h in mins):
                mins.append(g)
        gens = mins
        if not gens:
            return ((0, 1),)
        if any(sum(g) == 0 for g in gens):
            return ()
        # base case: pairwise coprime generators
        support = [tuple(i for i, e in enumerate(g) if e) for g in gens]
        coprime = True
        seen = set()
        for s in support:
            for i in s:
                if i in seen:
                    coprime = False
                    break
                seen.add(i)
            if not coprime:
                break
        if coprime:
            poly = {0: 1}
            for g in gens:
                d = sum(g)
                nxt = {}
                for i, c in poly.items():
                    nxt[i] = nxt.get(i, 0) + c
                    nxt[i + d] = nxt.get(i + d, 0) - c
                poly = {i: c for i, c in nxt.items() if c}
            return tuple(sorted(poly.items()))
        # pivot on the most frequent variable among non-simple generators
        freq = [0] * nvars
        for g, s in zip(gens, support):
            if len(s) > 1:
                for i in s:
                    freq[i] += 1
        v = max(range(nvars), key=lambda i: freq[i])
        unit = tuple(int(i == v) for i in range(nvars))
        plus = tuple(sorted(set(gens + [unit])))
        colon = tuple(sorted({_colon_mono(g, v) for g in gens}))
        a = dict(rec(plus))
        b = dict(rec(colon))
        out = dict(a)
        for i, c in b.items():
            out[i + 1] = out.get(i + 1, 0) + c
        return tuple(sorted((i, c) for i, c in out.items() if c))

    return dict(rec(monos))


def _colon_mono(g, v):
    return tuple(max(e - 1, 0) if i == v else e for i, e in enumerate(g))


def hilbert_data(space, polys=None, gb=None):
    """HilbertData of R/I via the leading-term ideal."""
    if gb is None:
        gb = ideal_gb(space, polys)
    monos = lead_term_ideal(gb)
    num = monomial_numerator(tuple(monos), space.nvars)
    return HilbertData(space, num)


def dim_codim(space, polys=None, gb=None):
    """(projective dimension, codimension) via independent variable sets."""
    if gb is None:
        gb = ideal_gb(space, polys)
    monos = lead_term_ideal(gb)
    if any(sum(m) == 0 for m in monos):
        return -1, space.nvars
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in monos]
    from itertools import combinations

    best = 0
    nv = space.nvars
    for size in range(nv, 0, -1):
        found = False
        for S in combinations(range(nv), size):
            sset = set(S)
            if all(not supp <= sset for supp in supports):
                best = size
                found = True
                break
        if found:
            break
    return best - 1, nv - best
