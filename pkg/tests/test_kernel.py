"""Kernel arithmetic: field axioms, polynomial ops, matrices, minors."""

import numpy as np
import pytest

from codim2.kernel import (
    AmbientMismatch,
    AmbientSpace,
    DegreeError,
    GradedFreeModule,
    PolyMatrix,
    Polynomial,
    PrimeField,
    parse_poly,
    poly_arith,
)

P = 31991


@pytest.fixture(scope="module")
def P2():
    return AmbientSpace(2)


@pytest.fixture(scope="module")
def P4():
    return AmbientSpace(4)


@pytest.fixture(scope="module")
def P5():
    return AmbientSpace(5)


def test_prime_field_rejects_composite():
    with pytest.raises(ValueError):
        PrimeField(31989)  # 3 * 10663
    PrimeField(2)
    PrimeField(101)


def test_field_axioms_random_triples():
    f = PrimeField()
    rng = np.random.default_rng(0)
    trips = rng.integers(0, P, size=(1000, 3))
    for a, b, c in trips:
        a, b, c = int(a), int(b), int(c)
        assert (a + b) % P == (b + a) % P
        assert ((a + b) + c) % P == (a + (b + c)) % P
        assert (a * (b + c)) % P == (a * b + a * c) % P
        assert ((a * b) * c) % P == (a * (b * c)) % P
        if a:
            assert a * f.inv(a) % P == 1


def test_inv_table():
    f = PrimeField(97)
    t = f.inv_table()
    for a in range(1, 97):
        assert t[a] * a % 97 == 1


def test_add_additive_inverse(P2):
    x0 = P2.variable(0)
    x1 = P2.variable(1)
    got = poly_arith(x0 + x1, x1.scale(P - 1), "add")
    assert got == x0


def test_mul_difference_of_squares(P2):
    x0, x1 = P2.variable(0), P2.variable(1)
    got = poly_arith(x0 + x1, x0 - x1, "mul")
    assert got == x0 * x0 - x1 * x1


def test_generic_quintic_square_matches_convolution(P4):
    # 20-term quintic with seeded coefficients; oracle is a schoolbook
    # double-loop convolution written independently of Polynomial.__mul__
    rng = np.random.default_rng(42)
    _, exps = P4.basis(5)
    picks = rng.choice(len(exps), size=20, replace=False)
    terms = {tuple(int(e) for e in exps[i]): int(rng.integers(1, P)) for i in picks}
    f = Polynomial(P4, terms)
    prod = f * f
    conv = {}
    for m1, c1 in terms.items():
        for m2, c2 in terms.items():
            key = tuple(a + b for a, b in zip(m1, m2))
            conv[key] = (conv.get(key, 0) + c1 * c2) % P
    probe = max(conv)  # a specific degree-10 monomial
    assert prod.coefficient(probe) == conv[probe]
    assert prod.terms == {m: c for m, c in conv.items() if c}


def test_mul_commutative_associative_random(P2):
    rng = np.random.default_rng(1)

    def rand_poly(deg):
        _, exps = P2.basis(deg)
        take = rng.integers(1, len(exps) + 1)
        picks = rng.choice(len(exps), size=take, replace=False)
        return Polynomial(
            P2, {tuple(int(e) for e in exps[i]): int(rng.integers(0, P)) for i in picks}
        )

    for _ in range(25):
        a, b, c = rand_poly(2), rand_poly(3), rand_poly(1)
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c * P2.variable(0) * P2.variable(1)) == a * b + a * (
            c * P2.variable(0) * P2.variable(1)
        )


def test_mixed_ambient_rejected(P2, P4):
    with pytest.raises(AmbientMismatch):
        poly_arith(P2.variable(0), P4.variable(0), "add")


def test_parse_and_print_roundtrip(P4):
    f = parse_poly(P4, "3*x0^2*x3 + x1*x2 - 7*x4^2")
    assert f.coefficient((2, 0, 0, 1, 0)) == 3
    assert f.coefficient((0, 1, 1, 0, 0)) == 1
    assert f.coefficient((0, 0, 0, 0, 2)) == P - 7
    g = parse_poly(P4, str(f))
    assert f == g


def test_homogeneity_flags(P2):
    f = parse_poly(P2, "x0^2 + x1")
    assert not f.is_homogeneous()
    with pytest.raises(DegreeError):
        f.homogeneous_degree()
    g = parse_poly(P2, "x0^2 + x1*x2")
    assert g.homogeneous_degree() == 2


def koszul_p2_matrices(space):
    """The two Koszul differentials on P^2 for (x0, x1, x2)."""
    x = [space.variable(i) for i in range(3)]
    z = space.zero()
    F0 = GradedFreeModule(space, [0])
    F1 = GradedFreeModule(space, [-1, -1, -1])
    F2 = GradedFreeModule(space, [-2, -2, -2])
    d1 = PolyMatrix(F1, F0, [[x[0], x[1], x[2]]])
    d2 = PolyMatrix(
        F2,
        F1,
        [[-x[1], -x[2], z], [x[0], z, -x[2]], [z, x[0], x[1]]],
    )
    return d1, d2


def test_koszul_composition_is_zero(P2):
    d1, d2 = koszul_p2_matrices(P2)
    assert d1.compose(d2).is_zero()


def test_identity_compose(P2):
    d1, _ = koszul_p2_matrices(P2)
    ident = PolyMatrix.identity(d1.target)
    assert ident.compose(d1).entries == d1.entries


def test_compose_matches_naive_product(P4):
    rng = np.random.default_rng(5)

    def rand_form(deg):
        _, exps = P4.basis(deg)
        return Polynomial(
            P4,
            {
                tuple(int(e) for e in exps[i]): int(rng.integers(0, P))
                for i in rng.choice(len(exps), size=min(4, len(exps)), replace=False)
            },
        )

    A = GradedFreeModule(P4, [-3, -2])
    B = GradedFreeModule(P4, [-1, -1, 0])
    C = GradedFreeModule(P4, [0, 1])
    g = PolyMatrix(A, B, [[rand_form(2), rand_form(1)] for _ in range(2)] + [[rand_form(3), rand_form(2)]])
    f = PolyMatrix(B, C, [[rand_form(1), rand_form(1), rand_form(0)], [rand_form(2), rand_form(2), rand_form(1)]])
    h = f.compose(g)
    for i in range(2):
        for j in range(2):
            acc = P4.zero()
            for k in range(3):
                acc = acc + f.entry(i, k) * g.entry(k, j)
            assert h.entry(i, j) == acc
    h.audit_degrees()


def test_compose_twist_mismatch(P2):
    d1, d2 = koszul_p2_matrices(P2)
    with pytest.raises(AmbientMismatch):
        d2.compose(d1)


def test_degree_audit_rejects_bad_entry(P2):
    x0 = P2.variable(0)
    F = GradedFreeModule(P2, [-2])
    G = GradedFreeModule(P2, [0])
    with pytest.raises(DegreeError):
        PolyMatrix(F, G, [[x0]])  # needs a quadric, got a linear form


def test_segre_scroll_minors(P5):
    x = [P5.variable(i) for i in range(6)]
    m = PolyMatrix(
        GradedFreeModule(P5, [-1, -1, -1]),
        GradedFreeModule(P5, [0, 0]),
        [[x[0], x[1], x[2]], [x[3], x[4], x[5]]],
    )
    minors = m.minors(2)
    expect = {
        str(x[0] * x[4] - x[1] * x[3]),
        str(x[0] * x[5] - x[2] * x[3]),
        str(x[1] * x[5] - x[2] * x[4]),
    }
    assert {str(q) for q in minors} == expect


def test_minors_size_one_and_range(P5):
    x = [P5.variable(i) for i in range(6)]
    m = PolyMatrix(
        GradedFreeModule(P5, [-1, -1, -1]),
        GradedFreeModule(P5, [0, 0]),
        [[x[0], x[1], x[2]], [x[3], x[4], x[5]]],
    )
    assert m.minors(1) == [x[0], x[1], x[2], x[3], x[4], x[5]]
    with pytest.raises(DegreeError):
        m.minors(3)


def test_generic_3x4_linear_minors_are_cubics(P4):
    rng = np.random.default_rng(31)
    rows = []
    for i in range(4):
        row = []
        for j in range(3):
            terms = {
                tuple(1 if t == k else 0 for t in range(5)): int(rng.integers(0, P))
                for k in range(5)
            }
            row.append(Polynomial(P4, terms))
        rows.append(row)
    m = PolyMatrix(GradedFreeModule(P4, [-1] * 3), GradedFreeModule(P4, [0] * 4), rows)
    cubics = m.minors(3)
    assert len(cubics) == 4
    assert all(c.homogeneous_degree() == 3 for c in cubics)


def test_minors_repeated_column_vanish(P4):
    rng = np.random.default_rng(8)
    col = []
    for i in range(3):
        terms = {
            tuple(1 if t == k else 0 for t in range(5)): int(rng.integers(0, P))
            for k in range(5)
        }
        col.append(Polynomial(P4, terms))
    rows = [[col[i], col[i], col[i]] for i in range(3)]
    m = PolyMatrix(GradedFreeModule(P4, [-1] * 3), GradedFreeModule(P4, [0] * 3), rows)
    assert all(q.is_zero() for q in m.minors(2))
    assert all(q.is_zero() for q in m.minors(3))


def test_piece_matches_apply(P2):
    d1, d2 = koszul_p2_matrices(P2)
    for q in range(0, 5):
        A = d2.piece(q)
        M = np.eye(d2.source.dim(q), dtype=np.int64)
        B = d2.apply_piece(q, M)
        assert np.array_equal(A, B)


def test_free_module_printing(P5):
    F = GradedFreeModule(P5, [-5, -6, -6, -6, -6, -6])
    assert str(F) == "O(-5) + 5O(-6)"
    assert F.dual(-10).twists == [-5, -4, -4, -4, -4, -4]
    assert F.c1() == -35
    assert F.gen_degrees() == [5, 6, 6, 6, 6, 6]
