from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gnspheres.algebra import MatF, bracket, inner
from gnspheres.clifford import Bivector, bivector_bracket, bivector_from_vectors, pairs, parse_clifford
from gnspheres.killing import constant_length_test
from gnspheres.spin9 import (
    H_SUMMANDS,
    PAIR_X_TEXT,
    PAIR_Y_TEXT,
    X1_TEXT,
    build_embedding,
    certify_spin9,
    cw_field_spin9,
    octonion,
    octonion_table,
    p_preimage,
    tangent,
    theta,
    theta_float,
    theta_inverse,
)

coeff = st.fractions(min_value=-4, max_value=4, max_denominator=8)
bivectors = st.dictionaries(st.sampled_from(pairs(9)), coeff, max_size=8).map(lambda g: Bivector(9, g))
tangents = st.lists(st.integers(-128, 128).map(lambda k: Fraction(k, 32)), min_size=15, max_size=15).map(
    lambda c: [Fraction(0)] + c
)


def minus_id(c2=1):
    return MatF.identity("R", 16) * -c2


class TestEmbedding:
    def test_phi_clifford_relations(self):
        phi = build_embedding().phi
        for a in range(8):
            for b in range(8):
                anti = phi[a] @ phi[b] + phi[b] @ phi[a]
                assert np.array_equal(anti, -2 * np.eye(16, dtype=int) if a == b else np.zeros((16, 16), dtype=int))

    def test_basis_complex_structures(self):
        for b in build_embedding().basis:
            assert np.array_equal(b.T, -b)
            assert np.array_equal(b @ b, -np.eye(16, dtype=int))

    def test_rank_36(self):
        basis = build_embedding().basis.reshape(36, -1).astype(float)
        assert np.linalg.matrix_rank(basis) == 36

    def test_e8e9_squares_to_minus_id(self):
        t = theta(parse_clifford("e8e9"))
        assert t @ t == minus_id()
        assert inner(t, t) == 8

    def test_theta_zero(self):
        assert theta(Bivector(9)).is_zero()

    def test_octonion_table_is_signed_permutation(self):
        t = octonion_table()
        assert t.shape == (8, 8)
        assert all(sorted(abs(r)) == list(range(1, 9)) for r in t)

    def test_rejects_other_dimension(self):
        with pytest.raises(ValueError):
            theta(Bivector(8, {(1, 2): 1}))

    @given(bivectors, bivectors)
    @settings(max_examples=30, deadline=None)
    def test_theta_is_lie_map(self, w, v):
        assert theta(bivector_bracket(w, v)) == bracket(theta(w), theta(v))

    @given(bivectors)
    @settings(max_examples=30, deadline=None)
    def test_inverse_and_float(self, w):
        assert theta_inverse(theta(w)) == w
        assert np.allclose(theta_float(w), theta(w).comps[0].astype(float))

    @given(
        st.lists(st.integers(-5, 5), min_size=9, max_size=9),
        st.lists(st.integers(-5, 5), min_size=9, max_size=9),
    )
    @settings(max_examples=60, deadline=None)
    def test_simple_bivectors_have_constant_length(self, v, w):
        vv = sum(a * a for a in v)
        if vv == 0:
            return
        c = Fraction(sum(a * b for a, b in zip(v, w)), vv)
        w = [b - c * a for a, b in zip(v, w)]
        bv = bivector_from_vectors(v, w)
        t = theta(bv)
        assert t @ t == minus_id(vv * sum(b * b for b in w))

    @pytest.mark.parametrize("text", ["e1e2 + e3e4", "e1e2 + 2*e3e9", "e1e2 - e3e4 + e5e6"])
    def test_non_simple_fails(self, text):
        assert constant_length_test(theta(parse_clifford(text))) is None

    def test_p1_is_clifford_killing_space(self, rng):
        for _ in range(20):
            a = [Fraction(int(k), 7) for k in rng.integers(-9, 10, size=8)]
            w = Bivector(9, {(i + 1, 9): c for i, c in enumerate(a)})
            t = theta(w)
            assert t @ t == minus_id(sum(c * c for c in a))

    def test_projection_on_v_is_isomorphism(self, rng):
        from gnspheres.spin9 import bivector_parts, bivector_project
        from gnspheres.algebra import nullspace

        p2 = bivector_parts()["p2"]
        for _ in range(100):
            v = [Fraction(int(k)) for k in rng.integers(-5, 6, size=8)]
            if not any(v):
                continue
            cols = []
            for b in nullspace([v], 8):
                z = bivector_project(bivector_from_vectors(v + [0], b + [0]), "p2")
                cols.append([float(x) for x in z.coords()])
            assert np.linalg.matrix_rank(np.array(cols)) == 7
            assert len(p2) == 7


class TestConstruction:
    def test_p1_vector_returns_itself(self):
        u = tangent(parse_clifford("e8e9"))
        assert cw_field_spin9(u) == Bivector(9, {(8, 9): 1})

    def test_p2_vector_gives_spin8_element(self):
        u = tangent(parse_clifford(X1_TEXT))
        w = cw_field_spin9(u)
        assert not any(j == 9 for (_, j) in w.gamma)
        cert = certify_spin9(w)
        assert cert is not None and cert.C2 == sum(x * x for x in u)

    def test_zero(self):
        assert cw_field_spin9([0] * 16) == Bivector(9)

    def test_rejects_radial_component(self):
        with pytest.raises(ValueError):
            cw_field_spin9([1] + [0] * 15)

    @given(tangents)
    @settings(max_examples=40, deadline=None)
    def test_random_tangent(self, u):
        w = cw_field_spin9(u)
        assert tangent(w) == u
        cert = certify_spin9(w)
        assert cert is not None
        assert cert.C2 == sum(x * x for x in u)
        assert (cert.equations, cert.block_equations) == (256, 119)

    @given(tangents)
    @settings(max_examples=40, deadline=None)
    def test_closed_form(self, u):
        # W = v (y + e9) with v = -conj(lower octonion), y = upper * v / |v|^2
        top, bottom = octonion(u[:8]), octonion(u[8:])
        v = -bottom.conj()
        if v.norm2() == 0:
            return
        y = (top * v) / v.norm2()
        expected = bivector_from_vectors(list(v.coeffs) + [0], list(y.coeffs) + [1])
        assert cw_field_spin9(u) == expected

    def test_preimage_splits(self, rng):
        u = [Fraction(0)] + [Fraction(int(k), 4) for k in rng.integers(-8, 9, size=15)]
        w1, w2 = p_preimage(u)
        assert all(j == 9 for (_, j) in w1.gamma)
        assert not any(j == 9 for (_, j) in w2.gamma)
        assert [a + b for a, b in zip(tangent(w1), tangent(w2))] == u

    def test_certificate_rejects_non_simple(self):
        assert certify_spin9(parse_clifford("e1e2 + e3e4")) is None


class TestIdentities:
    def test_sum_is_simple(self):
        y = sum((parse_clifford(t) for t in H_SUMMANDS[1:]), parse_clifford(H_SUMMANDS[0]))
        assert parse_clifford(X1_TEXT) + y == parse_clifford("4*e7e8")

    def test_norms(self):
        x1 = theta(parse_clifford(X1_TEXT))
        assert inner(x1, x1) == 32
        z = theta(parse_clifford("-3*e1e2 + e3e4 + e5e6 - e7e8"))
        assert inner(z, z) == 96

    def test_pair_bracket(self):
        from gnspheres.clifford import cl_bracket

        x, y = parse_clifford(PAIR_X_TEXT), parse_clifford(PAIR_Y_TEXT)
        assert cl_bracket(cl_bracket(y, x), x) == parse_clifford("-4*e1e2")

    @pytest.mark.parametrize("text", H_SUMMANDS)
    def test_summands_fix_x0(self, text):
        assert not any(tangent(parse_clifford(text)))

    def test_report(self):
        from gnspheres.spin9 import verify_spin9_identities

        recs = verify_spin9_identities()
        assert len(recs) == 14 and all(r.passed for r in recs)
        core = verify_spin9_identities(core_only=True)
        assert len(core) == 4 and all(r.passed for r in core)
