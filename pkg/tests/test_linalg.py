import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bimatch.errors import DimensionMismatch
from bimatch.linalg import (
    Matrix,
    PrimeModulus,
    Subspace,
    apply,
    contains,
    coordinates,
    image,
    intersect,
    is_prime,
    kernel,
    preimage,
    rank,
    restrict,
    rref,
    sum_spaces,
)
from oracles import bf_image, bf_kernel, bf_preimage, bf_sum, span_set

from helpers import random_matrix


def as_set(s: Subspace) -> frozenset:
    return span_set(s.vectors, s.ambient_dim)


@st.composite
def f2_matrices(draw, max_dim=5):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    rows = draw(st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c), min_size=r, max_size=r))
    return Matrix.from_rows(rows, 2, ncols=c)


@st.composite
def f2_subspaces(draw, d, max_gens=4):
    gens = draw(st.lists(st.lists(st.integers(0, 1), min_size=d, max_size=d), max_size=max_gens))
    return Subspace.span(gens, d, 2)


def test_is_prime_small_values():
    primes = [q for q in range(200) if q > 1 and all(q % r for r in range(2, q))]
    assert [q for q in range(200) if is_prime(q)] == primes
    assert is_prime(2_147_483_647)
    assert not is_prime(25_326_001)  # strong pseudoprime to bases 2, 3 and 5
    assert not is_prime(561)


@pytest.mark.parametrize("bad", [0, 1, 4, 9, 2**31 + 11])
def test_modulus_rejects_non_primes(bad):
    with pytest.raises(ValueError):
        PrimeModulus(bad)


def test_modulus_rejects_non_int():
    with pytest.raises(TypeError):
        PrimeModulus(2.0)


def test_inverse_mod_p():
    f = PrimeModulus(7)
    assert all(x * f.inv(x) % 7 == 1 for x in range(1, 7))
    with pytest.raises(ZeroDivisionError):
        f.inv(0)


def test_matrix_shape_checks():
    a = Matrix.from_rows([[1, 0], [0, 1]], 2)
    b = Matrix.from_rows([[1, 1, 1]], 2)
    with pytest.raises(DimensionMismatch):
        a @ b
    with pytest.raises(DimensionMismatch):
        a @ Matrix.identity(2, 3)


def test_entries_reduced_mod_p():
    m = Matrix.from_rows([[4, -1], [7, 3]], 3)
    assert m.tolist() == [[1, 2], [1, 0]]


def test_rref_example_mod_3():
    m = Matrix.from_rows([[2, 1, 0], [1, 2, 0], [0, 0, 1]], 3)
    r, k = rref(m)
    assert k == 2
    assert r.tolist() == [[1, 2, 0], [0, 0, 1], [0, 0, 0]]


@settings(max_examples=200, deadline=None)
@given(f2_matrices())
def test_rank_nullity(m):
    assert rank(m) + kernel(m).dim == m.ncols
    assert image(m).dim == rank(m)


@settings(max_examples=200, deadline=None)
@given(f2_matrices())
def test_kernel_and_image_match_enumeration(m):
    assert as_set(kernel(m)) == bf_kernel(m.rows, m.ncols)
    assert as_set(image(m)) == bf_image(m.rows, m.ncols)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_intersection_and_sum_match_enumeration(data):
    d = data.draw(st.integers(0, 5))
    s1 = data.draw(f2_subspaces(d))
    s2 = data.draw(f2_subspaces(d))
    a, b = as_set(s1), as_set(s2)
    assert as_set(intersect(s1, s2)) == a & b
    assert as_set(sum_spaces(s1, s2)) == bf_sum(a, b)
    assert intersect(s1, s2).dim + sum_spaces(s1, s2).dim == s1.dim + s2.dim


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_preimage_matches_enumeration(data):
    m = data.draw(f2_matrices())
    s = data.draw(f2_subspaces(m.nrows))
    assert as_set(preimage(m, s)) == bf_preimage(m.rows, m.ncols, as_set(s))


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_canonical_form_is_basis_independent(data):
    d = data.draw(st.integers(1, 5))
    s = data.draw(f2_subspaces(d))
    # re-span from a shuffled, redundant generating set
    gens = list(s.vectors) + [tuple((x + y) % 2 for x, y in zip(u, v)) for u, v in itertools.combinations(s.vectors, 2)]
    data.draw(st.randoms()).shuffle(gens)
    t = Subspace.span(gens, d, 2)
    assert t == s
    assert t.basis.rows == s.basis.rows


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_image_of_preimage_inside_and_monotone(data):
    m = data.draw(f2_matrices())
    s = data.draw(f2_subspaces(m.nrows))
    t = data.draw(f2_subspaces(m.nrows))
    assert contains(s, apply(m, preimage(m, s)))
    assert contains(preimage(m, s), kernel(m))
    # growing the target space grows the preimage
    assert contains(preimage(m, sum_spaces(s, t)), preimage(m, s))


def test_coordinates_round_trip():
    rng = random.Random(3)
    for _ in range(200):
        p = rng.choice([2, 3, 5])
        d = rng.randint(1, 5)
        s = Subspace.span([[rng.randrange(p) for _ in range(d)] for _ in range(rng.randint(1, 4))], d, p)
        coeffs = [rng.randrange(p) for _ in range(s.dim)]
        v = [sum(c * b[j] for c, b in zip(coeffs, s.vectors)) % p for j in range(d)]
        assert list(coordinates(s, v)) == coeffs


def test_coordinates_outside_raises():
    s = Subspace.span([[1, 0, 0]], 3, 2)
    with pytest.raises(ValueError):
        coordinates(s, [0, 1, 0])


def test_restrict_commutes_with_inclusions():
    rng = random.Random(5)
    for _ in range(100):
        m = random_matrix(rng, 4, 4)
        src = Subspace.span([[rng.randrange(2) for _ in range(4)] for _ in range(2)], 4, 2)
        tgt = sum_spaces(apply(m, src), Subspace.span([[rng.randrange(2) for _ in range(4)]], 4, 2))
        r = restrict(m, src, tgt)
        for col, v in zip(r.columns(), src.vectors):
            back = [sum(c * b[j] for c, b in zip(col, tgt.vectors)) % 2 for j in range(4)]
            assert tuple(back) == m.apply_vector(v)


def test_mixed_moduli_rejected():
    with pytest.raises(DimensionMismatch):
        intersect(Subspace.full(2, 2), Subspace.full(2, 3))


def test_large_prime_arithmetic():
    p = 2_147_483_647
    # det = (p-1)(p-2) - 6 = 2 - 6 = -4, nonzero mod p
    m = Matrix.from_rows([[p - 1, 2], [3, p - 2]], p)
    assert rank(m) == 2
    singular = Matrix.from_rows([[1, 2], [p - 1, p - 2]], p)
    k = kernel(singular)
    assert k.dim == 1
    assert not any(singular.apply_vector(k.vectors[0]))
