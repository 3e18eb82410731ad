import random
from math import comb

import pytest
import sympy
from hypothesis import given, strategies as st

from primtower.algebras import abelian, affine_line, heisenberg, restricted_catalog, sl2
from primtower.checks import StabilizationError
from primtower.free import Alphabet, NCPoly, primitive_polys
from primtower.lie import b1_from_lie, corrupt_mu0
from primtower.linalg import Basis, Field, LinearMap, compose
from primtower.tower import (
    B1Object,
    QuotientBialgebra,
    build_L1,
    check_b1_axioms,
    check_b2,
    coequalizer_check,
    epsilon0_on_T,
    eta0,
    eta1,
    filtered_words,
    forget,
    generator_alphabet,
    ideal_span,
    idempotency_check,
    primitive_labels,
    quotient_algebra_check,
    quotient_coproduct_check,
    quotient_primitives,
    s_generators,
    s_span_check,
)

Q, F2 = Field(0), Field(2)


def P(a, text):
    return NCPoly.parse(a, text)


def monomials(d, n):
    """Commutative monomials of degree <= n in d variables."""
    return comb(n + d, d)


def test_eta0_examples():
    a = Alphabet(Q, ("x", "y"), 3)
    e = eta0(a)
    labels = primitive_labels(a)
    assert e.apply({0: Q(1)}) == {labels.index("P1[0]"): 1}
    assert e.apply({1: Q(1)}) == {labels.index("P1[1]"): 1}
    assert e.apply({0: Q(2), 1: Q(1)}) == {labels.index("P1[0]"): 2, labels.index("P1[1]"): 1}


def test_epsilon0_examples():
    a = Alphabet(Q, ("x", "y"), 3)
    W = generator_alphabet(a)
    ev = epsilon0_on_T(a)
    z = W.names.index("P2[0]")
    gx, gy = W.names.index("P1[0]"), W.names.index("P1[1]")
    assert ev(NCPoly(W, {(z,): Q(1)})) == P(a, "1*x.y + -1*y.x")
    assert ev(NCPoly(W, {(gx, gy): Q(1)})) == P(a, "1*x.y")
    assert ev(NCPoly(W, {(z, gx): Q(1)})) == P(a, "1*x.y.x + -1*y.x.x")


def test_check_b1_abelian_and_sl2():
    assert check_b1_axioms(B1Object.abelian(Q, ("x", "y"), 4)).ok
    assert check_b1_axioms(b1_from_lie(sl2(), 4)).ok


def test_check_b1_inconsistent_weight_three():
    obj = B1Object.abelian(Q, ("x", "y"), 4).with_value(2, 0, [1, 0])
    rep = check_b1_axioms(obj)
    assert not rep.ok
    assert rep.per_degree[1] and rep.per_degree[2] and not rep.per_degree[3]
    assert rep.witness.startswith("weight 3")


def test_check_b1_unit_and_cap():
    obj = B1Object.from_values(Q, ("x",), 2, {})
    rep = check_b1_axioms(obj)
    assert not rep.ok and "unit" in rep.witness
    with pytest.raises(ValueError):
        check_b1_axioms(B1Object.abelian(Q, ("x",), 1))


def test_s_generators_examples():
    obj = B1Object.abelian(Q, ("x", "y"), 2)
    a = obj.alphabet
    assert s_generators(obj) == [P(a, "1*x.y + -1*y.x")]
    assert s_generators(obj.with_value(2, 0, [0, 1])) == [P(a, "1*x.y + -1*y.x + -1*y")]
    # z - b(z) for weight-one z vanishes: Id - eta0 mu0 kills V0
    big = LinearMap.identity(Q, primitive_labels(a)) - compose(eta0(a), obj.mu0)
    assert not big.columns[0] and not big.columns[1]


def test_ideal_span_examples():
    a1 = Alphabet(Q, ("x",), 3)
    span = ideal_span([a1.letter(0)], 3, 2)
    assert [span.subspace(n).dim for n in range(4)] == [0, 1, 2, 3]
    a = Alphabet(Q, ("x", "y"), 3)
    span = ideal_span([P(a, "1*x.y + -1*y.x")], 3, 2)
    assert span.subspace(2).dim == 1
    assert span.subspace(3).dim - span.subspace(2).dim == 4
    empty = ideal_span([], 3, 2, alphabet=a)
    assert all(s.dim == 0 for s in empty.pieces())


def test_ideal_span_matches_sympy_rank():
    a = Alphabet(Q, ("x", "y"), 4)
    g = P(a, "1*x.y + -1*y.x")
    span = ideal_span([g], 4, 2)
    words = a.words(4)
    rows = []
    for u in [w for n in range(3) for w in a.words(n)]:
        for v in [w for n in range(3 - len(u)) for w in a.words(n)]:
            h = NCPoly(a, {u: Q(1)}) * g * NCPoly(a, {v: Q(1)})
            if h.top_weight() == 4:
                rows.append([int(h.coefficient(w)) for w in words])
    assert span.subspace(4).dim - span.subspace(3).dim == sympy.Matrix(rows).rank()


def test_build_L1_examples():
    ab = B1Object.abelian(Q, ("x", "y"), 3)
    assert build_L1(ab).dims == (1, 3, 6, 10)
    aff = build_L1(b1_from_lie(affine_line(), 3))
    assert aff.dims == (1, 3, 6, 10)
    one = B1Object.abelian(F2, ("x",), 2)
    q = build_L1(one)
    assert q.dims == (1, 2, 2)
    x = q.source.letter(0)
    assert not q.project(x * x)


def test_build_L1_requires_b1():
    bad = B1Object.abelian(Q, ("x", "y"), 4).with_value(2, 0, [1, 0])
    with pytest.raises(ValueError):
        build_L1(bad)


def test_stabilization_error():
    a = Alphabet(Q, ("x", "y"), 3)
    # x.y - y.x - x*x*x forces consequences above the cap that only show with slack
    gens = [P(a, "1*x.y + -1*y.x + -1*x"), P(a, "1*x.x + -1*y")]
    with pytest.raises(StabilizationError):
        QuotientBialgebra(a, gens, 3, 0)


def test_quotient_coproduct_examples():
    for obj in (B1Object.abelian(Q, ("x", "y"), 3), b1_from_lie(sl2(), 3)):
        assert quotient_coproduct_check(build_L1(obj)).ok
    a = Alphabet(Q, ("x", "y"), 3)
    q = QuotientBialgebra(a, [P(a, "1*x.y")], 3, 1)
    assert not quotient_coproduct_check(q).ok
    q = QuotientBialgebra(a, [P(a, "1*x.x + -1*y")], 3, 1)
    rep = quotient_coproduct_check(q)
    assert not rep.ok and "x|x" in rep.witness


def test_coequalizer_examples():
    obj = B1Object.abelian(Q, ("x", "y"), 3)
    assert coequalizer_check(obj, build_L1(obj)).ok
    aff = b1_from_lie(affine_line(), 3)
    q = build_L1(aff)
    z = primitive_polys(aff.alphabet, 2)[0]
    assert q.project(z) == q.project(aff.mu0_poly(z)) == q.project(aff.alphabet.letter(1))


def test_quotient_primitives_examples():
    qx = build_L1(B1Object.abelian(Q, ("x",), 3))
    assert quotient_primitives(qx, 1).dim == 1
    assert quotient_primitives(qx, 2).dim == 0
    q2 = build_L1(B1Object.abelian(F2, ("x",), 3))
    assert quotient_primitives(q2, 2).dim == 0
    with pytest.raises(ValueError):
        quotient_primitives(qx, 3)


def test_eta1_examples():
    assert eta1(B1Object.abelian(Q, ("x",), 3), build_L1(B1Object.abelian(Q, ("x",), 3))).iso
    f2 = B1Object.abelian(F2, ("x",), 3)
    assert eta1(f2, build_L1(f2)).iso


def test_eta1_detects_excess_primitives():
    # F2 with x^2 left alive: the relation is dropped, so x^2 is a new primitive
    a = Alphabet(F2, ("x",), 3)
    obj = B1Object.abelian(F2, ("x",), 3)
    q = QuotientBialgebra(a, [], 3, 1)
    e = eta1(obj, q)
    assert not e.iso and "x.x" in e.check.witness


def test_check_b2_and_idempotency():
    for obj in (b1_from_lie(sl2(), 4), B1Object.abelian(Q, ("x", "y"), 3)):
        cert = check_b2(obj)
        assert cert.iso and cert.mu1 is not None
        assert compose(cert.mu1, cert.eta1) == LinearMap.identity(obj.field, cert.eta1.domain)
        assert idempotency_check(cert).ok


def test_corrupted_object_is_not_certified():
    obj = B1Object.abelian(Q, ("x", "y"), 4).with_value(2, 0, [1, 0])
    assert not check_b1_axioms(obj).ok
    q = build_L1(obj, check=False)
    cert = check_b2(obj, q=q)
    assert not cert.iso and cert.check.witness
    assert not idempotency_check(cert).ok


def test_degenerate_zero_space():
    obj = B1Object.abelian(Q, (), 3)
    assert check_b1_axioms(obj).ok
    q = build_L1(obj)
    assert q.dims == (1, 1, 1, 1)
    cert = check_b2(obj, q=q)
    assert cert.iso and idempotency_check(cert).ok


def test_forget():
    obj = B1Object.abelian(Q, ("x",), 3)
    cert = check_b2(obj)
    assert forget(cert, 1) is obj
    assert forget(cert, 0) == Basis(("x",))
    with pytest.raises(ValueError):
        forget(obj, 2)


SUITE = {
    "sl2": (sl2(), 3),
    "affine": (affine_line(), 4),
    "heisenberg": (heisenberg(), 3),
    "abelian3": (abelian(3), 3),
    "F2_affine": (restricted_catalog(2)["F2_affine"], 3),
    "F3_plane_nilpotent": (restricted_catalog(3)["F3_plane_nilpotent"], 4),
}


@pytest.mark.parametrize("name", sorted(SUITE))
def test_tower_invariants(name):
    L, D = SUITE[name]
    obj = b1_from_lie(L, D)
    assert s_span_check(obj).ok
    q = build_L1(obj, slack=3)
    assert q.dims_by_slack[2] == q.dims_by_slack[3] == q.dims_by_slack[4]
    assert coequalizer_check(obj, q).ok
    assert quotient_algebra_check(q).ok
    # normal_form(u g v) = 0 for generators g and words u, v within the window
    a = q.source
    for g in s_generators(obj):
        room = D - g.top_weight()
        for u in filtered_words(a, room):
            for v in filtered_words(a, room - len(u)):
                h = NCPoly(a, {u: a.field.one}) * g * NCPoly(a, {v: a.field.one})
                assert not q.project(h)


@given(st.integers(0, 50))
def test_corrupted_mu0_never_passes(seed):
    obj = b1_from_lie(sl2(), 4)
    bad, _ = corrupt_mu0(obj, random.Random(seed))
    assert not check_b1_axioms(bad).ok


@given(st.lists(st.integers(-2, 2), min_size=2, max_size=2))
def test_polynomial_algebra_dims(value):
    # any bracket [x,y] = a x + b y is a Lie algebra: PBW dims for every choice
    obj = B1Object.abelian(Q, ("x", "y"), 3)
    L_obj = b1_from_lie(_two_dim(value), 3)
    assert build_L1(L_obj).dims == tuple(monomials(2, n) for n in range(4)) == build_L1(obj).dims


def _two_dim(value):
    from primtower.lie import LieData

    return LieData.antisymmetric(Q, ("x", "y"), {(0, 1): {0: value[0], 1: value[1]}})
