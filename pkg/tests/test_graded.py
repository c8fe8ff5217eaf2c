"""Graded-piece machinery: spans, substitutions, colon ideals."""

import numpy as np
import pytest

from codim2 import linalg
from codim2.graded import (
    GradedIdeal,
    colon_ideal_gens,
    extract_generators,
    ideal_piece_from_quotients,
    ring_map_matrix,
    span_matrix,
)
from codim2.kernel import AmbientSpace, parse_poly

P = 31991


@pytest.fixture(scope="module")
def P5():
    return AmbientSpace(5)


@pytest.fixture(scope="module")
def P2():
    return AmbientSpace(2)


def test_ideal_piece_dims_principal(P2):
    f = parse_poly(P2, "x0^2 + x1*x2")
    I = GradedIdeal(P2, [f])
    # (f) in degree q has dim R_{q-2}
    for q in range(2, 7):
        assert I.dim(q) == P2.dim(q - 2)
        assert I.hilbert_function(q) == P2.dim(q) - P2.dim(q - 2)


def test_contains(P2):
    f = parse_poly(P2, "x0^2 + x1*x2")
    g = parse_poly(P2, "x0 - x2")
    I = GradedIdeal(P2, [f])
    assert I.contains(f * g)
    assert not I.contains(g * g)


def test_segre_quotient_map_dims(P5):
    # P^1 x P^2 parametrization: x_{3i+j} -> s_i * u_j in k[s0,s1,u0,u1,u2]
    T = AmbientSpace(4)
    s = [T.variable(0), T.variable(1)]
    u = [T.variable(2), T.variable(3), T.variable(4)]
    images = [s[0] * u[0], s[0] * u[1], s[0] * u[2], s[1] * u[0], s[1] * u[1], s[1] * u[2]]
    # images are degree 2 in T, but the map is still multiplicative;
    # kernel in degree q is the degree-q piece of the scroll ideal
    for q, expect in [(2, 3), (3, 16)]:
        M = ring_map_matrix(P5, images, q, tgt=T)
        ker = linalg.nullspace(M, P)
        # dim I_Y(q) = dim R_q - (q+1) * C(q+2, 2)
        assert ker.shape[1] == P5.dim(q) - (q + 1) * (q + 2) * (q + 1) // 2


def test_plane_quotient_and_intersection(P5):
    # two 3-planes and their ideal intersection via stacked quotients
    T = AmbientSpace(3)
    y = [T.variable(i) for i in range(4)]
    # plane x4 = x5 = 0: parametrize (x0..x3) = (y0..y3)
    img1 = y + [T.zero(), T.zero()]
    # plane x0 = x1 = 0
    img2 = [T.zero(), T.zero()] + y

    def map1(q):
        return ring_map_matrix(P5, img1, q, tgt=T)

    def map2(q):
        return ring_map_matrix(P5, img2, q, tgt=T)

    # single plane: kernel dim = dim R_q - C(q+3,3)
    for q in (1, 2, 3):
        K = linalg.nullspace(map1(q), P)
        assert K.shape[1] == P5.dim(q) - T.dim(q)
    # intersection of the two plane ideals: product plane-pairs ideal
    B = ideal_piece_from_quotients(P5, [map1, map2], 2)
    I1 = GradedIdeal(P5, [P5.variable(4), P5.variable(5)])
    I2 = GradedIdeal(P5, [P5.variable(0), P5.variable(1)])
    # degree-2 piece of (x4,x5) meet (x0,x1) = products x_i x_j, i in {0,1}, j in {4,5}
    assert B.shape[1] == 4
    for j in range(B.shape[1]):
        v = B[:, j]
        assert I1.contains(_poly_from_vec(P5, 2, v))
        assert I2.contains(_poly_from_vec(P5, 2, v))


def _poly_from_vec(space, q, v):
    from codim2.kernel import Polynomial

    return Polynomial.from_vector(space, q, v)


def test_extract_generators_complete_intersection(P2):
    f = parse_poly(P2, "x0^2 + x1^2")
    g = parse_poly(P2, "x1^3 - x2^3")
    I = GradedIdeal(P2, [f, g])
    gens = extract_generators(P2, I.piece, range(1, 6))
    degs = sorted(h.homogeneous_degree() for h in gens)
    assert degs == [2, 3]
    J = GradedIdeal(P2, gens)
    for q in range(1, 8):
        assert J.dim(q) == I.dim(q)


def test_colon_principal(P2):
    # (f*g) : (f) = (g) for coprime forms
    f = parse_poly(P2, "x0^2 + x1*x2")
    g = parse_poly(P2, "x1 + x2")
    I = GradedIdeal(P2, [f * g])
    gens = colon_ideal_gens(P2, I, [f], max_degree=3)
    assert len(gens) == 1
    got = gens[0]
    assert got.homogeneous_degree() == 1
    assert got.monic() == g.monic()


def test_colon_self_is_unit(P2):
    f = parse_poly(P2, "x0^2 + x1*x2")
    g = parse_poly(P2, "x1^2 - x0*x2")
    I = GradedIdeal(P2, [f, g])
    gens = colon_ideal_gens(P2, I, [f, g], max_degree=2, start_degree=0)
    assert any(h.homogeneous_degree() == 0 for h in gens)


def test_saturated_at(P2):
    x0 = P2.variable(0)
    m = [P2.variable(i) for i in range(3)]
    unsat = GradedIdeal(P2, [x0 * v for v in m])
    assert not unsat.saturated_at(1)
    sat = GradedIdeal(P2, [x0])
    for q in range(1, 5):
        assert sat.saturated_at(q)


def test_span_matrix_shapes(P5):
    f = parse_poly(P5, "x0*x4 - x1*x3")
    A = span_matrix(P5, [f], 4)
    assert A.shape == (P5.dim(4), P5.dim(2))
    assert linalg.rank(A, P) == P5.dim(2)
