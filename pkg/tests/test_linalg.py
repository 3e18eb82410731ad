import random
from fractions import Fraction

import pytest
import sympy
from sympy import GF
from sympy.polys.matrices import DomainMatrix
from hypothesis import given, strategies as st

from primtower.linalg import (
    Basis,
    Field,
    FieldMismatchError,
    LinearMap,
    Subspace,
    compose,
    image_basis,
    inverse,
    kernel_basis,
    membership_coords,
    preimage,
    quotient_basis,
    rref,
    to_dense,
)

Q, F2, F3, F7 = Field(0), Field(2), Field(3), Field(7)


def basis(n, stem="e"):
    return Basis(f"{stem}{i}" for i in range(n))


def dense_map(field, rows):
    m, n = len(rows), len(rows[0]) if rows else 0
    return LinearMap.from_dense(field, basis(n), basis(m, "f"), rows)


def as_dense(rows, n, field):
    return [to_dense(r, n, field) for r in rows]


def test_field_validation():
    with pytest.raises(ValueError):
        Field(4)
    with pytest.raises(ValueError):
        Field(-1)


def test_scalar_canonical_forms():
    assert Q.format(Q("6/4")) == "3/2"
    assert Q.format(Q(Fraction(-2, -4))) == "1/2"
    assert Q.format(Q("-3")) == "-3"
    assert Q("2/-4") == Q("-1/2")
    assert F7(-1) == 6
    assert F7("3/2") == 5
    assert F3.format(F3(5)) == "2"


def test_rref_examples():
    rows, piv = rref([[Q(1), Q(2)], [Q(2), Q(4)]], Q, 2)
    assert as_dense(rows, 2, Q) == [[1, 2]] and piv == (0,)
    eye = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    rows, piv = rref([[Q(v) for v in r] for r in eye], Q, 3)
    assert as_dense(rows, 3, Q) == eye and piv == (0, 1, 2)
    rows, piv = rref([[1, 1], [1, 0]], F2, 2)
    assert as_dense(rows, 2, F2) == [[1, 0], [0, 1]]


def test_rref_rejects_mixed_fields():
    with pytest.raises(FieldMismatchError):
        rref([{0: Q(1)}], F2)
    with pytest.raises(FieldMismatchError):
        rref([{0: 5}], F3)


def test_kernel_examples():
    assert kernel_basis(LinearMap.zero(Q, basis(2), basis(1, "f"))).dim == 2
    assert kernel_basis(LinearMap.identity(Q, basis(3))).dim == 0
    k = kernel_basis(dense_map(Q, [[1, 1]]))
    assert k.dense_rows() == [[1, -1]]


def test_image_examples():
    assert image_basis(LinearMap.identity(Q, basis(2))).dim == 2
    assert image_basis(LinearMap.zero(Q, basis(2), basis(2, "f"))).dim == 0
    assert image_basis(dense_map(Q, [[1], [1]])).dense_rows() == [[1, 1]]


def test_membership_examples():
    s = Subspace.span(Q, basis(2), [[Q(1), Q(1)]])
    assert membership_coords([Q(1), Q(1)], s) == [1]
    assert membership_coords([Q(1), Q(0)], s) is None
    t = Subspace.span(Q, basis(2), [[Q(1), Q(-1)]])
    assert membership_coords([Q(2), Q(-2)], t) == [2]
    with pytest.raises(ValueError):
        membership_coords([Q(1)], s)


def test_quotient_examples():
    amb = basis(2)
    reps, proj = quotient_basis(amb, Subspace.zero(Q, amb))
    assert reps == ["e0", "e1"] and proj == LinearMap.identity(Q, amb)
    reps, proj = quotient_basis(amb, Subspace.full(Q, amb))
    assert reps == [] and all(not c for c in proj.columns)
    s = Subspace.span(Q, amb, [[Q(1), Q(-1)]])
    reps, proj = quotient_basis(amb, s)
    assert reps == ["e1"]
    # e0 = e1 modulo e0 - e1
    assert proj.columns == ({0: 1}, {0: 1})


def test_compose_examples():
    f = dense_map(Q, [[Q(2)]])
    g = LinearMap(Q, basis(1), f.domain, ({0: Q(3)},))
    assert compose(f, g).to_dense() == [[6]]
    ident = LinearMap.identity(Q, f.domain)
    assert compose(f, ident) == f
    z = LinearMap.zero(Q, f.codomain, f.codomain)
    assert compose(z, f) == LinearMap.zero(Q, f.domain, f.codomain)
    with pytest.raises(ValueError):
        compose(f, f)


def test_inverse_and_preimage():
    f = dense_map(Q, [[2, 1], [1, 1]])
    inv = inverse(f)
    assert compose(inv, f) == LinearMap.identity(Q, f.domain)
    assert preimage(dense_map(Q, [[1, 1]]), {0: Q(3)}) == {0: 3}
    assert preimage(dense_map(Q, [[1], [1]]), {0: Q(1)}) is None


small = st.integers(-3, 3)


def matrices(max_rows=6, max_cols=8):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


@given(matrices(), st.sampled_from([Q, F2, F3, F7]))
def test_rref_idempotent_and_rank_matches_sympy(rows, field):
    rows = [[field(v) for v in r] for r in rows]
    n = len(rows[0])
    ech, piv = rref(rows, field, n)
    again, piv2 = rref(ech, field, n)
    assert again == ech and piv2 == piv
    assert list(piv) == sorted(set(piv))
    mat = sympy.Matrix([[int(v) for v in r] for r in rows])
    if field.characteristic:
        rank = _rank_mod_p(mat, field.characteristic)
    else:
        rank = mat.rank()
    assert len(piv) == rank


def _rank_mod_p(mat, p):
    return DomainMatrix.from_Matrix(mat).convert_to(GF(p)).rank()


@given(st.integers(1, 40), st.integers(1, 12), st.integers(0, 10_000), st.sampled_from([Q, F3]))
def test_rank_nullity(ncols, nrows, seed, field):
    rng = random.Random(seed)
    cols = []
    for _ in range(ncols):
        col = {i: field(rng.choice([-1, 1, 2])) for i in range(nrows) if rng.random() < 0.2}
        cols.append({i: v for i, v in col.items() if v})
    f = LinearMap(field, basis(ncols), basis(nrows, "f"), tuple(cols))
    ker = kernel_basis(f)
    assert f.rank() + ker.dim == ncols
    for row in ker.rows:
        assert not f.apply(row)


@given(matrices(4, 5), st.lists(small, min_size=4, max_size=4))
def test_membership_agrees_with_direct_solve(rows, coeffs):
    cols = [[Q(v) for v in r] for r in rows]
    n = len(cols[0])
    f = LinearMap.from_dense(Q, basis(len(cols)), basis(n, "f"), [list(c) for c in zip(*cols)])
    target = [sum((Q(c) * col[i] for c, col in zip(coeffs, cols)), Q(0)) for i in range(n)]
    assert membership_coords(target, image_basis(f)) is not None
    probe = [Q(1)] + [Q(0)] * (n - 1)
    direct = preimage(f, {i: v for i, v in enumerate(probe) if v})
    assert (membership_coords(probe, image_basis(f)) is not None) == (direct is not None)
    aug = sympy.Matrix([[int(c[i]) for c in cols] for i in range(n)])
    solvable = aug.rank() == aug.row_join(sympy.Matrix([int(v) for v in probe])).rank()
    assert solvable == (direct is not None)


@given(st.fractions(max_denominator=10**6), st.integers(-10**30, 10**30))
def test_serialization_round_trip(q, big):
    for field in (Q, F2, F3, F7):
        if field.characteristic and Fraction(q).denominator % field.characteristic == 0:
            continue
        a = field(q)
        assert field.parse(field.format(a)) == a
        b = field(big)
        assert field.parse(field.format(b)) == b


def test_basis_labels_distinct():
    with pytest.raises(ValueError):
        Basis(["a", "a"])
