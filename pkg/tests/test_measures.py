"""Atomic measures: canonical form, total variation, the duality oracle."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from daugavetlab.circle import GridCircle
from daugavetlab.measures import (
    AtomicMeasure,
    dirac,
    integrate,
    linear_combine,
    norm_oracle,
    point_mass,
    total_variation,
    tv_excluding,
)

positions = st.integers(min_value=0, max_value=15).map(lambda k: Fraction(k, 16))
weights = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)
atom_lists = st.lists(st.tuples(positions, weights), min_size=1, max_size=6)


class TestCanonicalForm:
    def test_atoms_merge_and_sort(self):
        mu = AtomicMeasure.from_atoms([
            (Fraction(1, 2), 1.0), (Fraction(0), 2.0), (Fraction(1, 2), 1j)])
        assert mu.atoms == ((Fraction(0), 2 + 0j), (Fraction(1, 2), 1 + 1j))

    def test_exact_zero_weights_are_dropped(self):
        mu = AtomicMeasure.from_atoms([(Fraction(0), 1.0), (Fraction(0), -1.0)])
        assert mu.atoms == ()
        assert total_variation(mu) == 0.0

    def test_wraparound_merge(self):
        # 1 - 1e-13 and 0 match at float resolution
        mu = AtomicMeasure.from_atoms([(0.0, 1.0), (1.0 - 1e-13, 1.0)])
        assert len(mu.atoms) == 1
        assert mu.atoms[0][1] == 2 + 0j

    def test_dirac(self):
        assert dirac(Fraction(1, 4)).atoms == ((Fraction(1, 4), 1 + 0j),)


class TestTotalVariation:
    def test_three_atom_example(self):
        mu = AtomicMeasure.from_atoms([
            (Fraction(0), 3 + 4j), (Fraction(1, 4), -2.0), (Fraction(1, 2), 1j)])
        assert total_variation(mu) == pytest.approx(8.0, abs=1e-15)  # 5 + 2 + 1

    @given(atom_lists, weights)
    def test_absolute_homogeneity(self, atoms, c):
        mu = AtomicMeasure.from_atoms(atoms)
        scaled = linear_combine([c], [mu])
        assert total_variation(scaled) == pytest.approx(
            abs(c) * total_variation(mu), rel=1e-9, abs=1e-9)

    @given(atom_lists, atom_lists)
    def test_triangle_inequality(self, a, b):
        mu, nu = AtomicMeasure.from_atoms(a), AtomicMeasure.from_atoms(b)
        lhs = total_variation(linear_combine([1.0, 1.0], [mu, nu]))
        assert lhs <= total_variation(mu) + total_variation(nu) + 1e-9

    @given(atom_lists)
    def test_decomposes_at_every_point(self, atoms):
        # |mu| = |mu({p})| + |mu|(S - {p}) for any single point p
        mu = AtomicMeasure.from_atoms(atoms)
        for p, _ in mu.atoms:
            split = abs(point_mass(mu, p)) + tv_excluding(mu, [p])
            assert split == pytest.approx(total_variation(mu), rel=1e-12, abs=1e-12)

    def test_point_mass_off_support_is_zero(self):
        mu = dirac(Fraction(0))
        assert point_mass(mu, Fraction(1, 2)) == 0


class TestDualityOracle:
    def test_oracle_matches_tv_on_example(self):
        g = GridCircle(16)
        mu = AtomicMeasure.from_atoms([
            (Fraction(0), 3 + 4j), (Fraction(1, 4), -2.0), (Fraction(1, 2), 1j)])
        assert norm_oracle(mu, g) == pytest.approx(total_variation(mu), abs=1e-12)

    def test_oracle_rejects_off_grid_atoms(self):
        g = GridCircle(8)
        with pytest.raises(ValueError):
            norm_oracle(dirac(Fraction(1, 3)), g)

    def test_random_phases_never_beat_the_norm(self):
        # 10^4 random unit-modulus test vectors stay below the aligned value
        rng = np.random.default_rng(42)
        g = GridCircle(16)
        mu = AtomicMeasure.from_atoms([
            (Fraction(k, 16), complex(w_re, w_im))
            for k, w_re, w_im in zip(
                rng.choice(16, size=5, replace=False),
                rng.standard_normal(5), rng.standard_normal(5))])
        nrm = norm_oracle(mu, g)
        positions = [p for p, _ in mu.atoms]
        ws = np.array([w for _, w in mu.atoms])
        best = 0.0
        for _ in range(10_000):
            f = np.exp(2j * np.pi * rng.random(len(positions)))
            best = max(best, abs(np.sum(f * ws)))
        assert best <= nrm + 1e-12
        assert best >= 0.95 * nrm  # phases come close after 10^4 draws

    def test_integrate_is_linear(self):
        mu = AtomicMeasure.from_atoms([(Fraction(0), 2.0), (Fraction(1, 2), -1j)])
        f = lambda s: complex(math.cos(2 * math.pi * float(s)), 0.0)
        g = lambda s: 1j
        lhs = integrate(lambda s: f(s) + g(s), mu)
        assert lhs == pytest.approx(integrate(f, mu) + integrate(g, mu), abs=1e-12)


class TestLinearCombine:
    def test_zero_coefficients_are_skipped(self):
        mu = linear_combine([0.0, 2.0], [dirac(Fraction(0)), dirac(Fraction(1, 2))])
        assert mu.atoms == ((Fraction(1, 2), 2 + 0j),)

    def test_mismatched_lengths_rejected(self):
        with pytest.raises(ValueError):
            linear_combine([1.0], [dirac(Fraction(0)), dirac(Fraction(1, 2))])
