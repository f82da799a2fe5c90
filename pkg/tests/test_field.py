import numpy as np
import pytest
from hypothesis import given, strategies as st

from qci.errors import Inconsistent, NotPrime, ZeroElement
from qci.field import make_field, multiplicative_order, solve_linear

from oracles import brute_kernel, brute_order

PRIMES = [2, 3, 5, 7, 13, 101]


def test_make_field_examples():
    assert make_field(5).p == 5
    assert make_field(101).p == 101
    with pytest.raises(NotPrime):
        make_field(4)
    for bad in (0, 1, 9, 91):
        with pytest.raises(NotPrime):
            make_field(bad)


def test_multiplicative_order_examples():
    F = make_field(5)
    assert multiplicative_order(F(1)) == 1
    assert multiplicative_order(F(4)) == 2
    assert multiplicative_order(F(2)) == 4
    with pytest.raises(ZeroElement):
        multiplicative_order(F(0))


@pytest.mark.parametrize("p", PRIMES)
def test_order_matches_brute_force_and_divides(p):
    F = make_field(p)
    for x in range(1, p):
        n = multiplicative_order(F(x))
        assert n == brute_order(x, p)
        assert (p - 1) % n == 0


@pytest.mark.parametrize("p", [5, 7, 13])
def test_root_of_unity_has_exact_order(p):
    F = make_field(p)
    for n in range(1, p):
        if (p - 1) % n == 0:
            assert multiplicative_order(F.root_of_unity(n)) == n
        else:
            with pytest.raises(ValueError):
                F.root_of_unity(n)


@given(st.sampled_from(PRIMES), st.integers(), st.integers(), st.integers())
def test_field_axioms(p, x, y, z):
    F = make_field(p)
    a, b, c = F(x), F(y), F(z)
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == F.zero and a * F.one == a
    if b != 0:
        assert (a * b) * b.inverse() == a
        assert (a / b) * b == a


def test_scalar_zero_inverse_and_mixing():
    F, G = make_field(5), make_field(7)
    with pytest.raises(ZeroElement):
        F(0).inverse()
    with pytest.raises(ValueError):
        F(1) + G(1)
    assert F(7) == 2 and int(F(-1)) == 4


def test_solve_linear_examples():
    F = make_field(5)
    assert solve_linear([[1, 0], [0, 1]], "rank", field=F) == 2
    assert solve_linear([[0] * 3] * 3, "rank", field=F) == 0
    K = solve_linear([[F(2), F(4)]], "kernel")
    assert len(K) == 1
    (v,) = K
    # a nonzero multiple of (3, 1); brute force finds the same 5-element line
    assert v[1] != 0 and v[0] == 3 * v[1]
    assert len(brute_kernel([[2, 4]], 5)) == 5


def test_solve_linear_solve_and_inconsistent():
    F = make_field(7)
    A = [[1, 2], [3, 4]]
    x = solve_linear(A, "solve", b=[5, 6], field=F)
    for row, rhs in zip(A, [5, 6]):
        assert sum(F(r) * xi for r, xi in zip(row, x)) == rhs
    with pytest.raises(Inconsistent):
        solve_linear([[1, 1], [2, 2]], "solve", b=[1, 3], field=F)


@given(st.sampled_from([2, 3, 5]), st.integers(1, 3), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_rank_nullity_against_enumeration(p, m, n, seed):
    rng = np.random.default_rng(seed)
    A = rng.integers(0, p, size=(m, n)).tolist()
    F = make_field(p)
    r = solve_linear(A, "rank", field=F)
    K = solve_linear(A, "kernel", field=F)
    assert r + len(K) == n
    assert p ** len(K) == len(brute_kernel(A, p))
    for v in K:
        assert all(sum(F(A[i][j]) * v[j] for j in range(n)) == 0 for i in range(m))
