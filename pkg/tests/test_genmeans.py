import random
from fractions import Fraction as F
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from seqspaces import (
    Mode,
    ModeError,
    ParamError,
    ParamTriple,
    SeqPrefix,
    apply,
    build_triangle,
    d_coeffs,
    forward,
    identity,
    invert_oracle,
    inverse_transform,
    preset,
    product,
    space_norm,
)
from seqspaces.core import partial_sums
from seqspaces.genmeans import all_ones

from oracles import d_by_determinant, direct_forward, params, params_and_seq, rand_params, seqs, small_q


class TestDCoeffs:
    def test_all_ones(self):
        assert d_coeffs(SeqPrefix.of([1] * 6)).values == (1, 1, 0, 0, 0, 0)

    def test_euler_half(self):
        s = preset("euler", 5, alpha="1/2").s
        assert d_coeffs(s).values == (1, F(1, 2), F(1, 8), F(1, 48), F(1, 384))

    def test_hand_expanded(self):
        s = SeqPrefix.of([1, 2, 1, 0])
        assert d_coeffs(s).values == (1, 2, 3, 4)
        assert d_by_determinant(list(s), 2) == 3

    def test_zero_head(self):
        with pytest.raises(ParamError):
            d_coeffs(SeqPrefix.of([0, 1]))

    def test_too_long(self):
        with pytest.raises(ParamError):
            d_coeffs(SeqPrefix.of([1, 1]), 3)

    @given(st.lists(small_q, min_size=5, max_size=5).filter(lambda v: v[0] != 0))
    def test_matches_determinant(self, s):
        D = d_coeffs(SeqPrefix.of(s))
        assert list(D.values) == [d_by_determinant(s, n) for n in range(5)]

    def test_float_mode(self):
        D = d_coeffs(SeqPrefix.of([1, 2, 1, 0], Mode.FLOAT))
        assert D.values == (1.0, 2.0, 3.0, 4.0)


class TestBuild:
    def test_A_all_ones_is_partial_sums(self):
        assert build_triangle(all_ones(3), "A") == partial_sums(3)

    def test_B_all_ones_is_difference(self):
        B = build_triangle(all_ones(3), "B")
        assert B.to_lists() == [[1, 0, 0], [-1, 1, 0], [0, -1, 1]]

    @settings(max_examples=40)
    @given(params(n=8))
    def test_closed_form_inverses(self, p):
        A, B = build_triangle(p, "A"), build_triangle(p, "B")
        T, S = build_triangle(p, "T"), build_triangle(p, "S")
        Delta = build_triangle(p, "Delta")
        assert B == invert_oracle(A)
        assert product(A, B) == identity(8)
        assert T == product(A, Delta)
        assert S == product(invert_oracle(Delta), B)
        assert product(T, S) == identity(8)

    def test_truncated_size(self):
        p = preset("cesaro", 6)
        assert build_triangle(p, "T", 4).size == 4
        with pytest.raises(ParamError):
            build_triangle(p, "A", 7)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            build_triangle(all_ones(2), "Q")


class TestTransforms:
    def test_forward_all_ones(self):
        p = all_ones(4)
        # constant x differences to e_0, and an all-ones s spreads that over every row
        assert list(forward(p, SeqPrefix.of([1, 1, 1, 1]))) == [1, 1, 1, 1]
        assert list(forward(p, SeqPrefix.unit(0, 4))) == [1, 0, 0, 0]

    def test_inverse_all_ones(self):
        assert list(inverse_transform(all_ones(4), SeqPrefix.unit(0, 4))) == [1, 0, 0, 0]

    def test_inverse_of_zero(self):
        p = rand_params(random.Random(1), 5)
        assert list(inverse_transform(p, SeqPrefix.zeros(5))) == [0] * 5

    def test_euler_round_trip(self):
        p = preset("euler", 8, alpha="1/2")
        rng = random.Random(7)
        x = SeqPrefix.of([F(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(8)])
        assert inverse_transform(p, forward(p, x)) == x

    @given(params_and_seq())
    def test_forward_matches_T_and_direct_sum(self, px):
        p, x = px
        assert forward(p, x) == apply(build_triangle(p, "T"), x)
        assert list(forward(p, x)) == direct_forward(p, x)

    @given(params_and_seq())
    def test_inverse_matches_S(self, py):
        p, y = py
        assert inverse_transform(p, y) == apply(build_triangle(p, "S"), y)

    @given(params_and_seq())
    def test_round_trips(self, px):
        p, x = px
        assert inverse_transform(p, forward(p, x)) == x
        assert forward(p, inverse_transform(p, x)) == x

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            forward(all_ones(2), SeqPrefix.of([1, 2, 3]))

    def test_mode_mismatch(self):
        with pytest.raises(ModeError):
            forward(all_ones(2), SeqPrefix.of([1, 2], Mode.FLOAT))


class TestNorm:
    def test_unit(self):
        assert space_norm(all_ones(4), SeqPrefix.unit(0, 4)) == 1

    def test_zero(self):
        assert space_norm(rand_params(random.Random(2), 4), SeqPrefix.zeros(4)) == 0

    @given(params_and_seq())
    def test_norm_preservation(self, py):
        p, y = py
        assert space_norm(p, inverse_transform(p, y)) == y.sup_norm()

    @given(params_and_seq(), small_q)
    def test_homogeneous(self, px, c):
        p, x = px
        assert space_norm(p, x.scale(c)) == abs(c) * space_norm(p, x)

    @given(params(n=6), seqs(6), seqs(6))
    def test_triangle_inequality(self, p, x, y):
        assert space_norm(p, x + y) <= space_norm(p, x) + space_norm(p, y)


class TestPresets:
    def test_cesaro(self):
        p = preset("cesaro", 3)
        assert (list(p.r), list(p.s), list(p.t)) == ([1, 2, 3], [1, 1, 1], [1, 1, 1])

    def test_euler(self):
        p = preset("euler", 3, alpha="1/2")
        assert list(p.r) == [1, 1, F(1, 2)]
        assert list(p.t) == [1, F(1, 2), F(1, 8)]
        assert list(p.s) == [1, F(1, 2), F(1, 8)]

    def test_aydin_basar(self):
        p = preset("aydin_basar", 3, alpha="1/2")
        assert (list(p.r), list(p.t), list(p.s)) == ([1, 2, 3], [2, F(3, 2), F(5, 4)], [1, 1, 1])

    def test_polat_uv(self):
        p = preset("polat_uv", u=[2, 3], v=[5, "1/2"])
        assert (list(p.r), list(p.s), list(p.t)) == ([F(1, 2), F(1, 3)], [1, 1], [5, F(1, 2)])

    @pytest.mark.parametrize("alpha", ["0", "1", "3/2", "-1/2"])
    def test_alpha_range(self, alpha):
        with pytest.raises(ParamError):
            preset("euler", 3, alpha=alpha)

    def test_zero_in_u(self):
        with pytest.raises(ParamError):
            preset("polat_uv", u=[1, 0], v=[1, 1])

    def test_unknown(self):
        with pytest.raises(ParamError):
            preset("nope", 3)

    @pytest.mark.parametrize("alpha", [F(1, 2), F(1, 3), F(3, 4)])
    def test_euler_d_closed_form(self, alpha):
        p = preset("euler", 11, alpha=alpha)
        assert list(d_coeffs(p.s).values) == [(1 - alpha) ** k / factorial(k) for k in range(11)]

    def test_float_mode_presets(self):
        p = preset("euler", 4, alpha="1/2", mode=Mode.FLOAT)
        assert p.mode is Mode.FLOAT and p.t[2] == 0.125


class TestParamTriple:
    def test_zero_r(self):
        with pytest.raises(ParamError):
            ParamTriple.of([1, 0], [1, 1], [1, 1])

    def test_zero_s0(self):
        with pytest.raises(ParamError):
            ParamTriple.of([1, 1], [0, 1], [1, 1])

    def test_length(self):
        with pytest.raises(ParamError):
            ParamTriple.of([1, 1], [1], [1, 1])
