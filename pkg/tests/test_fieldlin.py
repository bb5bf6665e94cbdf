from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from boxpers.errors import NotASubspace, NotInvariant, ValidationError
from boxpers.fieldlin import (
    AmbientSpace,
    FieldSpec,
    LinMap,
    Quotient,
    Subspace,
    cokernel,
    direct_sum,
    image,
    induced_map,
    intersect,
    kernel,
    preimage,
    random_map,
    sum_,
)

fields = st.sampled_from([FieldSpec.gf(2), FieldSpec.gf(3), FieldSpec.gf(7), FieldSpec.rationals()])


def test_field_parse_and_reject_composite():
    assert FieldSpec.parse("fp:5") == FieldSpec.gf(5)
    assert FieldSpec.parse("q").kind == "q"
    with pytest.raises(ValidationError):
        FieldSpec.gf(6)
    with pytest.raises(ValidationError):
        FieldSpec.parse("reals")


def test_rational_arithmetic_is_exact():
    q = FieldSpec.rationals()
    assert q.mul(Fraction(1, 3), q.inv(Fraction(2, 3))) == Fraction(1, 2)


@settings(max_examples=60, deadline=None)
@given(fields, st.integers(0, 7), st.integers(0, 7), st.integers(0, 2**32))
def test_rank_nullity(f, m, n, seed):
    import random

    rng = random.Random(seed)
    A, B = AmbientSpace.new(m), AmbientSpace.new(n)
    M = random_map(f, A, B, rng, 0.5)
    assert kernel(M).dim + image(M).dim == m
    assert M.rank() == M.transpose().rank()
    assert (M @ kernel(M).inclusion()).is_zero()


@settings(max_examples=60, deadline=None)
@given(fields, st.integers(1, 7), st.integers(0, 2**32))
def test_sum_intersection_dimension(f, n, seed):
    import random

    rng = random.Random(seed)
    V = AmbientSpace.new(n)
    U = image(random_map(f, AmbientSpace.new(rng.randint(0, n)), V, rng))
    W = image(random_map(f, AmbientSpace.new(rng.randint(0, n)), V, rng))
    assert sum_(U, W).dim + intersect(U, W).dim == U.dim + W.dim
    assert intersect(U, W) <= U and U <= sum_(U, W)


def test_quotient_projection_and_lifts(field, rng):
    V = AmbientSpace.new(5)
    num = image(random_map(field, AmbientSpace.new(4), V, rng, rank=3))
    den = image(num.inclusion() @ random_map(field, AmbientSpace.new(2), num.space, rng, rank=1))
    q = Quotient(num, den)
    assert q.dim == num.dim - den.dim
    assert q.projection.is_surjective()
    for k, lift in enumerate(q.lifts):
        assert q.project(lift) == field.ops.unit(k)
    for b in den.basis:
        assert field.ops.is_zero(q.project(b))


def test_quotient_requires_nesting():
    f = FieldSpec.gf(2)
    V = AmbientSpace.new(2)
    a = Subspace.span(V, f, [f.ops.unit(0)])
    b = Subspace.span(V, f, [f.ops.unit(1)])
    with pytest.raises(NotASubspace):
        Quotient(a, b)


def test_induced_map_descends_and_detects_leaks():
    f = FieldSpec.rationals()
    V = AmbientSpace.new(3)
    full = Subspace.full(V, f)
    line = Subspace.span(V, f, [f.ops.unit(0)])
    q = Quotient(full, line)
    m = induced_map(None, q, q, "descend")
    assert m.is_iso()
    swap = LinMap.from_rows(f, [[0, 1, 0], [1, 0, 0], [0, 0, 1]], V, V)
    with pytest.raises(NotInvariant):
        induced_map(swap, q, q, "descend")


def test_direct_sum_and_cokernel(field, rng):
    A, B = AmbientSpace.new(2), AmbientSpace.new(3)
    S, inj, proj = direct_sum(field, [A, B])
    assert S.dim == 5
    for i in range(2):
        for j in range(2):
            comp = proj[j] @ inj[i]
            assert comp.is_iso() if i == j else comp.is_zero()
    M = random_map(field, A, B, rng, rank=1)
    assert cokernel(M).dim == 3 - M.rank()


def test_preimage_contains_kernel(field, rng):
    A, B = AmbientSpace.new(4), AmbientSpace.new(3)
    M = random_map(field, A, B, rng, rank=2)
    target = Subspace.zero(B, field)
    assert preimage(M, target) == kernel(M)
