"""Buchberger engine: bases, normal forms, quotients, saturation, Hilbert."""

import numpy as np
import pytest

from codim2 import linalg
from codim2.graded import GradedIdeal, ideal_piece
from codim2.groebner import (
    dim_codim,
    hilbert_data,
    ideal_gb,
    ideal_intersection,
    ideal_quotient,
    normal_form,
    saturate,
    syzygy_module,
    to_terms,
)
from codim2.kernel import AmbientSpace, grevlex_key, mono_div, mono_divides, mono_lcm, parse_poly
from codim2.modfactory import generic_module

P = 31991


@pytest.fixture(scope="module")
def P2():
    return AmbientSpace(2)


@pytest.fixture(scope="module")
def P3():
    return AmbientSpace(3)


@pytest.fixture(scope="module")
def P5():
    return AmbientSpace(5)


def segre_quadrics(P5):
    return [
        parse_poly(P5, "x0*x4 - x1*x3"),
        parse_poly(P5, "x0*x5 - x2*x3"),
        parse_poly(P5, "x1*x5 - x2*x4"),
    ]


def test_linear_forms_already_gb(P3):
    gens = [P3.variable(i) for i in range(4)]
    gb = ideal_gb(P3, gens)
    assert sorted(str(f) for f in gb.polys()) == sorted(str(g) for g in gens)


def test_principal_ideal_gb(P2):
    f = parse_poly(P2, "5*x0^2 + x1*x2")
    gb = ideal_gb(P2, [f])
    assert len(gb) == 1
    assert gb.polys()[0] == f.monic()


def hand_spair_reduces_to_zero(space, gens):
    """Independent S-pair reducer: plain division, no GB machinery."""
    p = space.p

    def reduce(f):
        f = dict(f.terms)
        while f:
            lm = max(f, key=grevlex_key)
            hit = None
            for g in gens:
                if mono_divides(g.lead_monomial(), lm):
                    hit = g
                    break
            if hit is None:
                return False
            c = f[lm] * pow(hit.lead_coeff(), p - 2, p) % p
            shift = mono_div(lm, hit.lead_monomial())
            for m, gc in hit.terms.items():
                k = tuple(a + b for a, b in zip(m, shift))
                v = (f.get(k, 0) - c * gc) % p
                if v:
                    f[k] = v
                elif k in f:
                    del f[k]
        return True

    for i in range(len(gens)):
        for j in range(i):
            a, b = gens[i], gens[j]
            lcm = mono_lcm(a.lead_monomial(), b.lead_monomial())
            sa = a.shift(mono_div(lcm, a.lead_monomial())).scale(
                pow(a.lead_coeff(), p - 2, p)
            )
            sb = b.shift(mono_div(lcm, b.lead_monomial())).scale(
                pow(b.lead_coeff(), p - 2, p)
            )
            if not reduce(sa - sb):
                return False
    return True


def test_segre_quadrics_are_gb(P5):
    gens = segre_quadrics(P5)
    assert hand_spair_reduces_to_zero(P5, gens)
    gb = ideal_gb(P5, gens)
    assert len(gb) == 3


def test_nf_of_member_is_zero(P5):
    gens = segre_quadrics(P5)
    gb = ideal_gb(P5, gens)
    rng = np.random.default_rng(2)
    for _ in range(5):
        combo = P5.zero()
        for g in gens:
            c = int(rng.integers(0, P))
            l = P5.variable(int(rng.integers(0, 6)))
            combo = combo + g * l.scale(c)
        assert normal_form(P5, combo, gb).is_zero()


def test_nf_power_in_principal(P2):
    gb = ideal_gb(P2, [P2.variable(0)])
    f = P2.variable(0) * P2.variable(0)
    assert normal_form(P2, f, gb).is_zero()


def test_nf_matches_dense_projection(P5):
    # the normal form of a cubic modulo the Segre quadrics agrees with
    # linear-algebra reduction on the degree-3 piece in grevlex order
    gens = segre_quadrics(P5)
    gb = ideal_gb(P5, gens)
    span = ideal_piece(P5, gens, 3)
    # columns ordered grevlex-descending to mimic division priorities
    keys, exps = P5.basis(3)
    order = sorted(range(len(keys)), key=lambda i: grevlex_key(tuple(exps[i])), reverse=True)
    reordered = span[order, :]
    R, piv = linalg.rref(reordered.T, P)
    rng = np.random.default_rng(7)
    f_vec = rng.integers(0, P, size=len(keys))
    _, f_exps = P5.basis(3)
    from codim2.kernel import Polynomial

    f = Polynomial(P5, {tuple(int(e) for e in f_exps[i]): int(f_vec[i]) for i in range(len(keys))})
    got = normal_form(P5, f, gb)
    # oracle: subtract pivot rows of the rref of the ideal piece
    vec = f_vec[order].astype(np.int64) % P
    for t, c in enumerate(piv):
        if vec[c]:
            vec = (vec - vec[c] * R[t]) % P
    expect = {}
    for idx_in_order, i in enumerate(order):
        if vec[idx_in_order]:
            expect[tuple(int(e) for e in f_exps[i])] = int(vec[idx_in_order])
    assert got.terms == expect


def test_ideal_quotient_principal(P2):
    f = parse_poly(P2, "x0^2 + x1*x2")
    g = parse_poly(P2, "x1 + 2*x2")
    got = ideal_quotient(P2, [f * g], [f])
    assert len(got) == 1
    assert got[0].monic() == g.monic()


def test_ideal_quotient_self(P2):
    f = parse_poly(P2, "x0^2 + x1*x2")
    g = parse_poly(P2, "x1^3 - x2^3")
    got = ideal_quotient(P2, [f, g], [f, g])
    assert any(h.homogeneous_degree() == 0 for h in got)


def test_quotient_matrix_kernel_matches_syzygies(P2):
    f = parse_poly(P2, "x0*x1")
    syz = syzygy_module(P2, [P2.variable(0), P2.variable(1)])
    assert len(syz) == 1
    a, b = syz[0]
    # the Koszul syzygy up to scale
    assert (a * P2.variable(0) + b * P2.variable(1)).is_zero()


def test_ideal_intersection(P2):
    a = [P2.variable(0)]
    b = [P2.variable(1)]
    got = ideal_intersection(P2, a, b)
    assert len(got) == 1
    assert got[0].monic() == (P2.variable(0) * P2.variable(1)).monic()


def test_saturate_strips_irrelevant_factor(P2):
    x = [P2.variable(i) for i in range(3)]
    gens = [x[0] * v for v in x]
    got = saturate(P2, gens, seed=0)
    assert len(got) == 1
    assert got[0].monic() == x[0]


def test_saturate_idempotent_on_prime(P5):
    gens = segre_quadrics(P5)
    got = saturate(P5, gens, seed=0)
    gb0 = {str(f) for f in ideal_gb(P5, gens).polys()}
    assert {str(f) for f in got} == gb0


def test_hilbert_polynomial_ring(P3):
    # R itself in P^4 terms: use P3 (4 variables): HF(q) = C(q+3,3)
    hd = hilbert_data(P3, [])
    for q in range(5):
        assert hd.hf(q) == P3.dim(q)
    assert hd.proj_dim == 3


def test_hilbert_of_hf163_module_quotient(P5):
    # quotient ring by the annihilator-style relations is not the module
    # itself; instead check the module Hilbert function via its free cover
    pres, res = generic_module(P5, (1, 6, 3), seed=0)
    hp = res.hilbert_polynomial()
    from codim2.resolutions import eval_poly

    assert [int(eval_poly(hp, q)) for q in range(4)] == [0, 0, 0, 0]
    assert res.euler_hf(0) == 1
    assert res.euler_hf(1) == 6
    assert res.euler_hf(2) == 3
    assert res.euler_hf(3) == 0


def test_hilbert_segre(P5):
    gens = segre_quadrics(P5)
    hd = hilbert_data(P5, gens)
    # coordinate ring of P^1 x P^2: HF(q) = (q+1) C(q+2,2)
    for q in range(6):
        assert hd.hf(q) == (q + 1) * (q + 2) * (q + 1) // 2
    assert hd.proj_dim == 3
    assert hd.degree == 3


def test_dim_codim(P5, P2):
    gens = segre_quadrics(P5)
    assert dim_codim(P5, gens) == (3, 2)
    x = [P2.variable(i) for i in range(3)]
    assert dim_codim(P2, x) == (-1, 3)


def test_dim_codim_ci_quadrics(P5):
    rng = np.random.default_rng(3)
    _, exps = P5.basis(2)
    from codim2.kernel import Polynomial

    quads = []
    for _ in range(2):
        quads.append(
            Polynomial(
                P5,
                {tuple(int(e) for e in exps[i]): int(rng.integers(0, P)) for i in range(len(exps))},
            )
        )
    assert dim_codim(P5, quads) == (3, 2)


def test_hf_additivity_nonzerodivisor(P2):
    # HF(R/(I+f))(q) = HF(R/I)(q) - HF(R/I)(q - deg f) for f a nonzerodivisor
    f = parse_poly(P2, "x0^2 + x1*x2")
    g = parse_poly(P2, "x1^2 + 3*x0*x2")
    hd_i = hilbert_data(P2, [f])
    hd_sum = hilbert_data(P2, [f, g])
    for q in range(8):
        expect = hd_i.hf(q) - (hd_i.hf(q - 2) if q >= 2 else 0)
        assert hd_sum.hf(q) == expect


def test_degree_matches_resolution_route(P5):
    # cross-module check: GB degree equals the alternating-twist degree
    from codim2.resolutions import resolve_quotient, scheme_invariants

    gens = segre_quadrics(P5)
    hd = hilbert_data(P5, gens)
    res = resolve_quotient(P5, gens)
    inv = scheme_invariants(P5, res.hilbert_polynomial())
    assert inv["degree"] == hd.degree == 3
    assert inv["dim"] == hd.proj_dim == 3


def test_buchberger_idempotent(P5):
    gens = segre_quadrics(P5)
    gb1 = ideal_gb(P5, gens)
    gb2 = ideal_gb(P5, gb1.polys())
    assert {str(f) for f in gb1.polys()} == {str(f) for f in gb2.polys()}


def test_truncated_gb_degree_cap(P2):
    f = parse_poly(P2, "x0^2")
    g = parse_poly(P2, "x0*x1 + x2^2")
    gb_full = ideal_gb(P2, [f, g])
    gb_cut = ideal_gb(P2, [f, g], degree_cap=2)
    # the truncation is honest: pieces agree up to the cap
    I_full = GradedIdeal(P2, gb_full.polys())
    I_cut = GradedIdeal(P2, gb_cut.polys())
    for q in range(0, 3):
        assert I_full.dim(q) == I_cut.dim(q)
