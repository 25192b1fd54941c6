import math
from fractions import Fraction

import pytest

from specapprox import (
    almost_mathieu,
    cantor_approximation,
    contains_set,
    convergents,
    fibonacci_potential,
    fibonacci_word,
    free_potential,
    grid_approximation,
    hausdorff_distance,
    lebesgue,
    stabilizer_contains,
)
from specapprox.intervals import as_intervals


class TestConvergents:
    def test_golden_mean(self):
        got = convergents([0, 1, 1, 1, 1, 1], 5)
        assert got == [Fraction(1, 1), Fraction(1, 2), Fraction(2, 3), Fraction(3, 5), Fraction(5, 8)]

    def test_sqrt2_minus_one(self):
        assert convergents([0, 2, 2, 2], 3) == [Fraction(1, 2), Fraction(2, 5), Fraction(5, 12)]

    def test_integer_part_only(self):
        assert convergents([3], 1) == [Fraction(3, 1)]

    def test_reduced_form(self):
        for f in convergents([0] + [1] * 16, 15):
            assert math.gcd(f.numerator, f.denominator) == 1

    def test_quality_bound(self):
        # |alpha - p_k/q_k| < 1/(q_k * q_{k+1}); alpha evaluated exactly
        terms = [0, 1, 2, 3, 1, 4, 2, 1, 3, 5, 2, 1, 1, 6, 2]
        alpha = Fraction(0)
        for a in reversed(terms[1:]):
            alpha = 1 / (a + alpha)
        alpha += terms[0]
        convs = convergents(terms, 13)
        for f, g in zip(convs, convs[1:]):
            assert abs(alpha - f) < Fraction(1, f.denominator * g.denominator)

    def test_term_validation(self):
        with pytest.raises(ValueError):
            convergents([], 1)
        with pytest.raises(ValueError):
            convergents([0, 0, 1], 2)
        with pytest.raises(ValueError):
            convergents([0, 1], 5)
        with pytest.raises(ValueError):
            convergents([0, 1, 1], 0)


class TestFreePotential:
    def test_one_dimensional(self):
        v = free_potential(1, 4)
        assert v.periods == (4,)
        assert v.cell == (0.0,) * 4

    def test_two_dimensional(self):
        v = free_potential(2, (2, 3))
        assert v.q == 6
        assert v.cell == (0.0,) * 6


class TestAlmostMathieu:
    def test_half_frequency_cell(self):
        v = almost_mathieu(0.5, Fraction(1, 2))
        assert v.periods == (2,)
        assert v.cell[0] == pytest.approx(1.0)
        assert v.cell[1] == pytest.approx(-1.0)

    def test_pair_argument_is_reduced(self):
        v = almost_mathieu(0.5, (2, 4))
        assert v.periods == (2,)

    def test_cell_amplitude_bound(self):
        v = almost_mathieu(0.7, Fraction(3, 7), offset=0.1)
        assert all(abs(x) <= 2 * 0.7 + 1e-12 for x in v.cell)

    def test_declared_period_is_minimal(self):
        v = almost_mathieu(0.5, Fraction(3, 7))
        assert stabilizer_contains(v, (7,))
        for m in range(1, 7):
            assert not stabilizer_contains(v, (m,))

    def test_offset_shifts_cell(self):
        v = almost_mathieu(0.5, Fraction(1, 3), offset=0.25)
        expect = [2 * 0.5 * math.cos(2 * math.pi * (n / 3 + 0.25)) for n in range(3)]
        assert v.cell == pytest.approx(expect)


class TestFibonacci:
    def test_first_words(self):
        assert fibonacci_word(1) == "a"
        assert fibonacci_word(2) == "ab"
        assert fibonacci_word(3) == "aba"
        assert fibonacci_word(4) == "abaab"
        assert fibonacci_word(5) == "abaababa"

    def test_lengths_are_fibonacci(self):
        fib = [1, 1]
        while len(fib) < 14:
            fib.append(fib[-1] + fib[-2])
        for level in range(1, 13):
            assert len(fibonacci_word(level)) == fib[level]

    def test_letter_ratio_approaches_golden_section(self):
        w = fibonacci_word(16)
        ratio = w.count("a") / len(w)
        assert ratio == pytest.approx((math.sqrt(5) - 1) / 2, abs=1e-3)

    def test_potential_cell_values(self):
        v = fibonacci_potential(4, coupling=0.8)
        assert v.periods == (5,)
        assert v.cell == (0.8, 0.0, 0.8, 0.8, 0.0)

    def test_level_validation(self):
        with pytest.raises(ValueError):
            fibonacci_word(0)


class TestCantorApproximation:
    def test_level_zero_is_unit_interval(self):
        rec = cantor_approximation(0)
        assert [(iv.lo, iv.hi) for iv in rec.set] == [(0.0, 1.0)]
        assert (rec.delta, rec.q, rec.r) == (1.0, 1, 1.0)

    def test_level_two_components(self):
        rec = cantor_approximation(2)
        got = [(iv.lo, iv.hi) for iv in rec.set]
        expect = [(0, 1 / 9), (2 / 9, 1 / 3), (2 / 3, 7 / 9), (8 / 9, 1)]
        for (lo, hi), (elo, ehi) in zip(got, expect):
            assert lo == pytest.approx(elo, abs=1e-15)
            assert hi == pytest.approx(ehi, abs=1e-15)

    def test_shape_data(self):
        for level in (1, 5, 9):
            rec = cantor_approximation(level)
            assert rec.q == 2**level
            assert rec.r == pytest.approx(3.0 ** (-level), rel=1e-14)
            assert lebesgue(rec.set) == pytest.approx((2 / 3) ** level, rel=1e-12)

    def test_nesting(self):
        prev = cantor_approximation(1)
        for level in range(2, 9):
            cur = cantor_approximation(level)
            assert contains_set(prev.set, cur.set, tol=1e-12)
            prev = cur

    def test_consecutive_distance(self):
        for level in range(0, 8):
            a = cantor_approximation(level)
            b = cantor_approximation(level + 1)
            d = hausdorff_distance(a.set, b.set)
            # the farthest points of level n from level n+1 sit mid-gap
            assert d == pytest.approx(3.0 ** (-(level + 1)) / 2, rel=1e-12)
            assert d <= 3.0 ** (-(level + 1))

    def test_level_bounds(self):
        with pytest.raises(ValueError):
            cantor_approximation(-1)
        with pytest.raises(ValueError):
            cantor_approximation(41)


class TestGridApproximation:
    def test_plain_grid(self):
        rec = grid_approximation(4)
        assert rec.set.points == (0.0, 0.25, 0.5, 0.75, 1.0)
        assert rec.delta == 0.125
        assert rec.q == 5
        assert rec.r == 0.0

    def test_solid_variant(self):
        rec = grid_approximation(4, solid_to=0.5)
        s = as_intervals(rec.set)
        assert lebesgue(s) == 0.5
        assert rec.q == 3
        assert s.intervals[0].hi == 0.5

    def test_validation(self):
        with pytest.raises(ValueError):
            grid_approximation(0)
        with pytest.raises(ValueError):
            grid_approximation(3, solid_to=1.5)
