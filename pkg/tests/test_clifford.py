import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gnspheres.clifford import (
    Bivector,
    CliffordElement,
    bivector_bracket,
    bivector_from_vectors,
    cl_bracket,
    format_clifford,
    is_simple,
    mask_of,
    pairs,
    parse_clifford,
    reversion,
    simple_square,
    spin9_inner,
    spin_inner,
    spin_to_so,
)


def word_product(a, b):
    """Multiply two index words by bubble sorting, with e_i e_i = -1."""
    word = list(a) + list(b)
    sign = 1
    changed = True
    while changed:
        changed = False
        for k in range(len(word) - 1):
            if word[k] > word[k + 1]:
                word[k], word[k + 1] = word[k + 1], word[k]
                sign = -sign
                changed = True
            elif word[k] == word[k + 1]:
                del word[k : k + 2]
                sign = -sign
                changed = True
                break
    return sign, tuple(word)


def oracle_mul(x, y):
    out = {}
    for ma, ca in x.terms.items():
        for mb, cb in y.terms.items():
            ia = [i + 1 for i in range(x.n) if ma >> i & 1]
            ib = [i + 1 for i in range(x.n) if mb >> i & 1]
            s, w = word_product(ia, ib)
            m = mask_of(w)
            out[m] = out.get(m, 0) + s * ca * cb
    return CliffordElement(x.n, out)


coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def elements(n, max_terms=6):
    return st.dictionaries(st.integers(0, (1 << n) - 1), coeff, max_size=max_terms).map(lambda t: CliffordElement(n, t))


def bivectors(n=9):
    return st.dictionaries(st.sampled_from(pairs(n)), coeff, max_size=6).map(lambda g: Bivector(n, g))


class TestProduct:
    @pytest.mark.parametrize("n", [1, 2, 3, 5, 9])
    def test_generator_relations(self, n):
        one = CliffordElement.scalar(n, 1)
        for i, j in itertools.product(range(1, n + 1), repeat=2):
            ei, ej = CliffordElement.generator(n, i), CliffordElement.generator(n, j)
            expected = -2 * one if i == j else CliffordElement(n)
            assert ei * ej + ej * ei == expected

    @given(elements(5), elements(5))
    @settings(max_examples=80, deadline=None)
    def test_matches_word_oracle(self, x, y):
        assert x * y == oracle_mul(x, y)

    @given(elements(9, 4), elements(9, 4), elements(9, 4))
    @settings(max_examples=40, deadline=None)
    def test_associative(self, x, y, z):
        assert (x * y) * z == x * (y * z)

    def test_large_product_uses_kernel(self):
        # more than 64 term pairs goes through the integer kernel
        x = CliffordElement(9, {m: Fraction(m % 7 - 3, 2) for m in range(0, 512, 5)})
        y = CliffordElement(9, {m: m % 5 - 2 for m in range(1, 512, 7)})
        assert x * y == oracle_mul(x, y)

    def test_huge_coefficients_stay_exact(self):
        big = 1 << 80
        x = CliffordElement(9, {m: big + m for m in range(0, 200, 3)})
        y = CliffordElement(9, {m: big - m for m in range(1, 200, 4)})
        assert x * y == oracle_mul(x, y)

    def test_blade_ordering(self):
        assert CliffordElement.blade(3, 2, 1) == -CliffordElement.blade(3, 1, 2)
        assert CliffordElement.blade(3, 1, 1) == CliffordElement.scalar(3, -1)

    @given(elements(6), elements(6))
    @settings(max_examples=40, deadline=None)
    def test_reversion_is_anti_automorphism(self, x, y):
        assert reversion(x * y) == reversion(y) * reversion(x)

    def test_grades(self):
        x = parse_clifford("1 + e1 + 2*e1e2 - e1e2e3")
        assert x.grades() == {0, 1, 2, 3}
        assert x.grade(2) == parse_clifford("2*e1e2")
        assert x.scalar_part() == 1

    def test_dimension_limit(self):
        with pytest.raises(ValueError):
            CliffordElement(10)

    def test_mixed_dimensions_rejected(self):
        with pytest.raises(ValueError):
            CliffordElement.generator(3, 1) + CliffordElement.generator(4, 1)


class TestBivectors:
    def test_bracket_relation(self):
        for i, j, k in itertools.permutations(range(1, 10), 3):
            eij = CliffordElement.blade(9, i, j)
            eik = CliffordElement.blade(9, i, k)
            assert cl_bracket(eij, eik) == 2 * CliffordElement.blade(9, j, k)

    @given(bivectors(), bivectors())
    @settings(max_examples=40, deadline=None)
    def test_bracket_closes(self, w, v):
        assert cl_bracket(w.element, v.element).grades() <= {2}
        assert bivector_bracket(w, v) == -bivector_bracket(v, w)

    @given(bivectors(6), bivectors(6))
    @settings(max_examples=40, deadline=None)
    def test_spin_to_so_is_lie_map(self, w, v):
        lhs = spin_to_so(bivector_bracket(w, v))
        a, b = spin_to_so(w), spin_to_so(v)
        assert lhs == a @ b - b @ a

    @given(bivectors(6), bivectors(6))
    @settings(max_examples=40, deadline=None)
    def test_spin_inner_matches_so(self, w, v):
        from gnspheres.algebra import inner

        assert spin_inner(w, v) == inner(spin_to_so(w), spin_to_so(v))

    def test_spin9_inner_on_basis(self):
        for p in pairs(9):
            b = Bivector(9, {p: 1})
            assert spin9_inner(b, b) == 8

    @given(
        st.lists(st.integers(-6, 6), min_size=9, max_size=9),
        st.lists(st.integers(-6, 6), min_size=9, max_size=9),
    )
    @settings(max_examples=60, deadline=None)
    def test_wedge_of_orthogonal_vectors_is_simple(self, v, w):
        # remove the v component from w, exactly
        vv = sum(a * a for a in v)
        if vv == 0:
            return
        c = Fraction(sum(a * b for a, b in zip(v, w)), vv)
        w = [b - c * a for a, b in zip(v, w)]
        bv = bivector_from_vectors(v, w)
        assert simple_square(bv) == vv * sum(b * b for b in w)

    def test_non_orthogonal_rejected(self):
        with pytest.raises(ValueError, match="scalar part -\\(v, w\\) = -1"):
            bivector_from_vectors([1, 0, 0], [1, 1, 0])

    def test_is_simple(self):
        assert is_simple(parse_clifford("4*e7e8")) == 4
        assert is_simple(parse_clifford("e1e2 + e3e4")) is None
        c = is_simple(parse_clifford("e1e2 + e1e3"))
        assert isinstance(c, float) and c == pytest.approx(2**0.5)

    def test_coords_roundtrip(self):
        w = Bivector.from_coords(4, [1, 2, 3, 4, 5, 6])
        assert Bivector.from_coords(4, w.coords()) == w
        assert Bivector(4, {(2, 1): 1}) == Bivector(4, {(1, 2): -1})

    def test_invalid_pairs(self):
        with pytest.raises(ValueError):
            Bivector(3, {(1, 1): 1})
        with pytest.raises(ValueError):
            Bivector(3, {(1, 4): 1})


class TestTextFormat:
    @pytest.mark.parametrize(
        "text, expected",
        [
            ("-3*e1e2 + e3e4", {mask_of((1, 2)): -3, mask_of((3, 4)): 1}),
            ("e2e1", {mask_of((1, 2)): -1}),
            ("1/2 - e9", {0: Fraction(1, 2), mask_of((9,)): -1}),
            ("e1e1", {0: -1}),
        ],
    )
    def test_parse(self, text, expected):
        assert parse_clifford(text).terms == expected

    @pytest.mark.parametrize("bad", ["", "e1 e2", "3*", "e0", "2 3", "x"])
    def test_parse_rejects(self, bad):
        with pytest.raises(ValueError):
            parse_clifford(bad)

    @given(elements(9))
    @settings(max_examples=60, deadline=None)
    def test_roundtrip(self, x):
        assert parse_clifford(format_clifford(x)) == x
