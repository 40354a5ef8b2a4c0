from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gnspheres.algebra import (
    Field,
    HyperComplex,
    MatF,
    as_exact,
    bracket,
    format_entry,
    format_matrix,
    gram_schmidt,
    inner,
    is_psd_exact,
    left_mult_matrix,
    nullspace,
    parse_entry,
    parse_matrix,
    parse_vector,
    realify,
    realify_vector,
    signed_table,
    solve,
    structure_constants,
    sym_eigvals,
)

small = st.fractions(min_value=-8, max_value=8, max_denominator=16)


def octonions():
    return st.lists(small, min_size=8, max_size=8).map(lambda c: HyperComplex(Field.O, c))


def hamilton(p, q):
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return (
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


def qconj(p):
    return (p[0], -p[1], -p[2], -p[3])


def oct_pairs(x, y):
    """Independent octonion product on pairs of quaternions."""
    p, q, r, s = x[:4], x[4:], y[:4], y[4:]
    first = tuple(u - v for u, v in zip(hamilton(p, r), hamilton(qconj(s), q)))
    second = tuple(u + v for u, v in zip(hamilton(s, p), hamilton(q, qconj(r))))
    return first + second


class TestTables:
    def test_quaternion_units(self):
        i, j, k = (HyperComplex.unit(Field.H, m) for m in (1, 2, 3))
        assert i * j == k
        assert j * k == i
        assert k * i == j
        assert i * i == HyperComplex.real(Field.H, -1)

    def test_nested_subalgebras(self):
        s = structure_constants(8)
        for d in (1, 2, 4):
            assert np.array_equal(structure_constants(d), s[:d, :d, :d])
            assert not s[:d, :d, d:].any()

    def test_signed_table_shape(self):
        t = signed_table(8)
        assert t.shape == (8, 8)
        assert np.array_equal(t[0], np.arange(1, 9))
        assert np.array_equal(np.diag(t)[1:], -np.ones(7, dtype=int))
        # each row is a signed permutation
        for row in t:
            assert sorted(abs(row)) == list(range(1, 9))

    def test_table_is_read_only(self):
        with pytest.raises(ValueError):
            structure_constants(8)[0, 0, 0] = 3

    @given(octonions(), octonions())
    @settings(max_examples=60, deadline=None)
    def test_matches_independent_product(self, x, y):
        assert (x * y).coeffs == oct_pairs(x.coeffs, y.coeffs)

    @given(octonions(), octonions())
    @settings(max_examples=60, deadline=None)
    def test_norm_is_multiplicative(self, x, y):
        assert (x * y).norm2() == x.norm2() * y.norm2()

    @given(octonions(), octonions())
    @settings(max_examples=40, deadline=None)
    def test_alternative(self, x, y):
        assert (x * x) * y == x * (x * y)
        assert (y * x) * x == y * (x * x)
        assert (x * y).conj() == y.conj() * x.conj()

    def test_not_associative(self):
        e = [HyperComplex.unit(Field.O, m) for m in range(8)]
        assert (e[1] * e[2]) * e[4] == -(e[1] * (e[2] * e[4]))

    @given(octonions())
    @settings(max_examples=40, deadline=None)
    def test_left_mult_orthogonal_up_to_norm(self, x):
        lm = left_mult_matrix(x).astype(object)
        assert np.array_equal(lm.T @ lm, x.norm2() * np.eye(8, dtype=int).astype(object))


class TestHyperComplex:
    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError):
            HyperComplex(Field.C, [1, 2, 3])

    def test_immutable(self):
        q = HyperComplex.unit(Field.H, 1)
        with pytest.raises(AttributeError):
            q.field = Field.C

    def test_as_exact(self):
        assert as_exact(0.5) == Fraction(1, 2)
        assert as_exact("3/4") == Fraction(3, 4)
        with pytest.raises(TypeError):
            as_exact(object())

    @given(st.lists(small, min_size=4, max_size=4))
    def test_inverse(self, c):
        q = HyperComplex(Field.H, c)
        if q.norm2() == 0:
            return
        assert q * (q.conj() / q.norm2()) == HyperComplex.real(Field.H, 1)

    def test_imaginary(self):
        assert HyperComplex(Field.H, [0, 1, 2, 3]).is_imaginary()
        assert not HyperComplex(Field.C, [1, 1]).is_imaginary()


class TestMatF:
    def test_identity_product(self):
        a = MatF.from_entries(Field.H, [["1+i", "j"], ["k", "2"]])
        assert MatF.identity(Field.H, 2) @ a == a
        assert a @ MatF.identity(Field.H, 2) == a

    def test_adjoint_reverses_products(self, rng):
        a = MatF(Field.H, rng.integers(-3, 4, size=(4, 3, 3)))
        b = MatF(Field.H, rng.integers(-3, 4, size=(4, 3, 3)))
        assert (a @ b).adjoint() == b.adjoint() @ a.adjoint()

    def test_realify_is_homomorphism(self, rng):
        a = MatF(Field.H, rng.integers(-3, 4, size=(4, 3, 3)))
        b = MatF(Field.H, rng.integers(-3, 4, size=(4, 3, 3)))
        assert np.array_equal(realify(a @ b), realify(a) @ realify(b))
        assert np.array_equal(realify(a.adjoint()), realify(a).T)

    def test_realified_frobenius(self, rng):
        a = MatF(Field.C, rng.integers(-3, 4, size=(2, 3, 3)))
        r = realify(a)
        assert Fraction(1, 2) * int((r * r).sum()) == 2 * inner(a, a)

    def test_realify_vector(self):
        v = [HyperComplex(Field.C, [1, 2]), HyperComplex(Field.C, [3, 4])]
        assert list(realify_vector(v)) == [1, 2, 3, 4]

    def test_inner_of_unit(self):
        e = MatF.from_sparse(Field.C, 2, [(0, 1, 0, 1), (1, 0, 0, -1)])
        assert inner(e, e) == 1

    def test_bracket_jacobi(self, rng):
        mats = [MatF(Field.H, rng.integers(-2, 3, size=(4, 2, 2))) for _ in range(3)]
        a, b, c = mats
        total = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b))
        assert total.is_zero()

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            MatF.identity(Field.C, 2) + MatF.identity(Field.C, 3)

    def test_float_and_exact(self):
        a = MatF.from_entries(Field.C, [["1/3", "i"], ["0", "1"]])
        assert a.exact
        assert not a.to_float().exact
        assert a.to_float().equals(a, tol=1e-15)

    def test_skew_hermitian(self):
        a = MatF.from_entries(Field.C, [["i", "1"], ["-1", "2i"]])
        assert a.is_skew_hermitian()
        assert not (a + MatF.identity(Field.C, 2)).is_skew_hermitian()


class TestExactLinearAlgebra:
    def test_nullspace(self):
        rows = [[1, 2, 3], [2, 4, 6]]
        ker = nullspace(rows)
        assert len(ker) == 2
        for v in ker:
            assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)

    def test_solve(self):
        assert solve([[2, 1], [1, 3]], [3, 5]) == [Fraction(4, 5), Fraction(7, 5)]
        with pytest.raises(ValueError):
            solve([[1, 1], [1, 1]], [1, 2])
        with pytest.raises(ValueError):
            solve([[1, 1], [2, 2]], [1, 2])

    def test_gram_schmidt(self):
        out = gram_schmidt([[1, 1, 0], [1, 0, 1], [2, 1, 1]])
        assert len(out) == 2
        assert sum(a * b for a, b in zip(*out)) == 0

    @pytest.mark.parametrize(
        "m, expected",
        [
            ([[1, 0], [0, 0]], True),
            ([[1, 1], [1, 1]], True),
            ([[0, 1], [1, 0]], False),
            ([[2, -1, 0], [-1, 2, -1], [0, -1, 2]], True),
            ([[1, 2], [2, 1]], False),
            ([[0, 0], [0, -1]], False),
        ],
    )
    def test_psd_exact(self, m, expected):
        assert is_psd_exact(m) is expected

    @given(st.lists(st.integers(-5, 5), min_size=9, max_size=9))
    def test_psd_exact_on_gram_matrices(self, c):
        a = np.array(c, dtype=object).reshape(3, 3)
        g = a @ a.T
        assert is_psd_exact(g.tolist())
        assert is_psd_exact((g - g - np.eye(3, dtype=int)).tolist()) is False

    def test_sym_eigvals(self):
        assert np.allclose(sym_eigvals(np.array([[2.0, 1.0], [1.0, 2.0]])), [1.0, 3.0])
        with pytest.raises(ValueError):
            sym_eigvals(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestTextFormat:
    @pytest.mark.parametrize("text", ["1+2i-3j+1/2k", "-i", "0", "3/7", "2k"])
    def test_entry_roundtrip(self, text):
        q = parse_entry(text)
        assert parse_entry(format_entry(q)) == q

    def test_entry_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_entry("1+q")

    def test_matrix_roundtrip(self, rng):
        comps = np.vectorize(lambda k: Fraction(int(k), 3), otypes=[object])(rng.integers(-9, 10, size=(4, 3, 3)))
        m = MatF(Field.H, comps)
        assert parse_matrix(format_matrix(m), Field.H) == m

    def test_vector_forms(self):
        row = parse_vector("1, 2i, 1/2")
        col = parse_vector("1; 2i; 1/2")
        assert row == col
        assert row[1] == HyperComplex(Field.C, [0, 2])

    def test_vector_field_check(self):
        with pytest.raises(ValueError):
            parse_vector("1, j", Field.C)
