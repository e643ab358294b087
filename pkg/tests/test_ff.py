"""Field arithmetic and mod-p linear algebra."""

import numpy as np
import pytest

from pgcodes import field_make, nullspace
from pgcodes.ff import (MatrixModP, PrimeField, is_irreducible, is_prime,
                        lowest_irreducible, matrix_mod_p)


def test_is_prime():
    assert [n for n in range(2, 30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert not is_prime(1)
    assert not is_prime(0)
    assert is_prime(2 ** 13 - 1)


def test_prime_field_ops():
    f = PrimeField(7)
    assert f.add(5, 4) == 2
    assert f.mul(3, 5) == 1
    assert f.inv(3) == 5
    assert f.neg(2) == 5
    with pytest.raises(ZeroDivisionError):
        f.inv(0)
    with pytest.raises(ValueError):
        PrimeField(9)


def test_field_rejects_bad_parameters():
    with pytest.raises(ValueError):
        field_make(4, 2)
    with pytest.raises(ValueError):
        field_make(5, 0)
    # x^2 + 1 is reducible over F_5 (x = 2 is a root)
    with pytest.raises(ValueError):
        field_make(5, 2, modulus=[1, 0, 1])


def test_default_modulus_is_lowest_lex_irreducible():
    # GF(8): x^3 + x + 1 serialises below x^3 + x^2 + 1
    assert field_make(2, 3).modulus == (1, 1, 0, 1)
    # GF(125): the smallest irreducibles x^3+2, x^3+3, x^3+4 all have roots
    assert field_make(5, 3).modulus == (1, 1, 0, 1)
    assert is_irreducible(list(lowest_irreducible(3, 4)), 3)


def test_gf2_characteristic():
    f = field_make(2, 1)
    assert f.add(1, 1) == 0


def test_gf125_multiplicative_order():
    f = field_make(5, 3)
    for a in (1, 2, 17, 93, 124):
        assert f.pow_(a, 124) == 1


def test_gf32_inverses_exhaustive_with_search_oracle():
    """Compare inv() against an independently searched inverse table."""
    f = field_make(2, 5)
    for a in range(1, 32):
        expected = next(b for b in range(1, 32) if f.mul(a, b) == 1)
        assert f.inv(a) == expected
        assert f.mul(a, f.inv(a)) == 1


@pytest.mark.parametrize("p,h", [(2, 5), (5, 3), (3, 4), (11, 2)])
def test_field_axioms(p, h):
    """Associativity, distributivity, inverses: exhaustive for q <= 128."""
    f = field_make(p, h)
    q = f.q
    if q <= 128:
        a = np.arange(q)[:, None, None]
        b = np.arange(q)[None, :, None]
        c = np.arange(q)[None, None, :]
        assert np.array_equal(f.add_v(f.add_v(a, b), c), f.add_v(a, f.add_v(b, c)))
        assert np.array_equal(f.mul_v(f.mul_v(a, b), c), f.mul_v(a, f.mul_v(b, c)))
        assert np.array_equal(f.mul_v(a, f.add_v(b, c)),
                              f.add_v(f.mul_v(a, b), f.mul_v(a, c)))
        nz = np.arange(1, q)
        assert np.array_equal(f.mul_v(nz, f.inv_v(nz)), np.ones(q - 1, dtype=np.int16))
    else:
        rng = np.random.default_rng(1)
        for _ in range(200):
            a, b, c = (int(x) for x in rng.integers(0, q, size=3))
            assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
            assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
            assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
            if a:
                assert f.mul(a, f.inv(a)) == 1


@pytest.mark.parametrize("p,h", [(2, 5), (5, 3), (3, 4)])
def test_frobenius(p, h):
    f = field_make(p, h)
    rng = np.random.default_rng(2)
    for _ in range(50):
        a, b = (int(x) for x in rng.integers(0, f.q, size=2))
        assert f.pow_(f.add(a, b), p) == f.add(f.pow_(a, p), f.pow_(b, p))


def test_encode_decode_roundtrip():
    f = field_make(5, 3)
    for a in range(f.q):
        assert f.encode(f.decode(a)) == a
    assert f.decode(0) == (0, 0, 0)
    assert f.encode([2, 1]) == 7


def test_scalar_and_vector_ops_agree():
    f = field_make(5, 3)
    rng = np.random.default_rng(3)
    a = rng.integers(0, f.q, size=100)
    b = rng.integers(0, f.q, size=100)
    va = f.add_v(a, b)
    vm = f.mul_v(a, b)
    for i in range(100):
        assert int(va[i]) == f.add(int(a[i]), int(b[i]))
        assert int(vm[i]) == f.mul(int(a[i]), int(b[i]))


# ---------------------------------------------------------------------------
# nullspace
# ---------------------------------------------------------------------------

def test_nullspace_single_equation():
    basis = nullspace(matrix_mod_p(5, [[1, 1]]))
    assert basis == [(4, 1)]


def test_nullspace_no_equations_gives_standard_basis():
    basis = nullspace(matrix_mod_p(7, [], cols=4))
    assert basis == [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]


def test_nullspace_trivial_kernel():
    assert nullspace(matrix_mod_p(3, [[1, 0], [0, 1]])) == []


def _mat_vec(rows, x, p):
    return [sum(r * v for r, v in zip(row, x)) % p for row in rows]


@pytest.mark.parametrize("p,rows", [
    (7, [[1, 2, 3, 4], [2, 4, 1, 0]]),
    (3, [[1, 1, 1, 0, 2], [0, 1, 2, 1, 1], [1, 2, 0, 1, 0]]),
    (2, [[1, 1, 0, 0], [0, 0, 1, 1]]),
])
def test_nullspace_against_exhaustive_kernel(p, rows):
    """Kernel size and membership verified by enumerating all of F_p^cols."""
    import itertools
    m = matrix_mod_p(p, rows)
    basis = nullspace(m)
    for vec in basis:
        assert _mat_vec(rows, vec, p) == [0] * len(rows)
    kernel = [x for x in itertools.product(range(p), repeat=m.cols)
              if _mat_vec(rows, x, p) == [0] * len(rows)]
    assert len(kernel) == p ** len(basis)
    # every kernel vector is a combination of the basis: spot-check by rank
    span = set()
    for coefs in itertools.product(range(p), repeat=len(basis)):
        v = tuple(sum(c * b[i] for c, b in zip(coefs, basis)) % p
                  for i in range(m.cols))
        span.add(v)
    assert span == set(kernel)


def test_matrix_validation():
    pf = PrimeField(5)
    with pytest.raises(ValueError):
        MatrixModP(pf, 2, 2, (1, 2, 3))
    with pytest.raises(ValueError):
        MatrixModP(pf, 1, 2, (1, 7))
