"""Disk-algebra searches: Blaschke families, certified bounds, automorphisms."""

import cmath
import math

import numpy as np
import pytest

from daugavetlab.disk import (
    ArcNeighborhood,
    BlaschkeProduct,
    DiskFunction,
    RankOneDiskOperator,
    SearchLadder,
    automorphism_identity_check,
    blaschke_eval,
    certified_counterexample_bound,
    check_c_conditions,
    disk_counterexample_operator,
    disk_norm_lower_bound,
)


class TestBlaschke:
    def test_boundary_modulus_is_one(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            k = rng.integers(1, 5)
            zeros = tuple(0.95 * rng.random() * np.exp(2j * np.pi * rng.random())
                          for _ in range(k))
            B = BlaschkeProduct(zeros=zeros)
            z = np.exp(2j * np.pi * rng.random(64))
            assert np.max(np.abs(np.abs(blaschke_eval(B, z)) - 1.0)) < 1e-12

    def test_vanishes_at_its_zeros(self):
        B = BlaschkeProduct(zeros=(0.5 + 0j, -0.3j))
        assert abs(B(0.5)) < 1e-15
        assert abs(B(-0.3j)) < 1e-15
        assert B.degree == 2

    def test_monomial_is_a_degenerate_product(self):
        B = BlaschkeProduct(zeros=(0j, 0j, 0j))
        z = 0.5 * cmath.exp(0.7j)
        assert B(z) == pytest.approx(z ** 3, abs=1e-15)

    def test_rejects_zero_outside_disk(self):
        with pytest.raises(ValueError):
            BlaschkeProduct(zeros=(1.2 + 0j,))

    def test_rejects_non_unimodular_constant(self):
        with pytest.raises(ValueError):
            BlaschkeProduct(unimodular_constant=0.5, zeros=())

    def test_rejects_evaluation_outside_closed_disk(self):
        B = BlaschkeProduct(zeros=(0.5 + 0j,))
        with pytest.raises(ValueError):
            B(1.5 + 0j)


class TestDiskFunctions:
    def test_polynomial_evaluation(self):
        f = DiskFunction.polynomial([1.0, 0.0, -2.0])
        assert f(0.5) == pytest.approx(1.0 - 0.5, abs=1e-15)

    def test_affine_sup_norm_is_exact(self):
        f = DiskFunction.polynomial([0.3, -0.7j])
        value, exact = f.sup_norm()
        assert exact
        assert value == pytest.approx(1.0, abs=1e-15)

    def test_blaschke_sup_norm_is_exact_one(self):
        f = DiskFunction.blaschke_multiple(BlaschkeProduct(zeros=(0.4 + 0j,)))
        value, exact = f.sup_norm()
        assert exact and value == 1.0

    def test_half_plus_peaks_at_omega(self):
        g = DiskFunction.half_plus(1 + 0j)
        assert g(1.0) == pytest.approx(1.0, abs=1e-15)
        assert g(-1.0) == pytest.approx(0.0, abs=1e-15)
        value, exact = g.sup_norm()
        assert exact and value == pytest.approx(1.0, abs=1e-15)

    def test_scaled_identity(self):
        f = DiskFunction.scaled_identity(0.5)
        assert f(1 + 0j) == pytest.approx(0.5, abs=1e-15)


class TestCConditions:
    def test_three_positive_examples(self):
        one = DiskFunction.constant(1.0)
        cases = [
            (one, DiskFunction.polynomial([0.0, 0.0, 1.0])),          # z^2
            (DiskFunction.constant(2j),
             DiskFunction.blaschke_multiple(BlaschkeProduct(zeros=(0.5 + 0j, 0j)))),
            (one, DiskFunction.blaschke_multiple(
                BlaschkeProduct(zeros=(0.3j, -0.4 + 0j, 0j)))),
        ]
        for u, phi in cases:
            res = check_c_conditions(u, phi)
            assert res.all_hold, res.detail

    def test_nonconstant_weight_fails(self):
        u = DiskFunction.polynomial([0.5, 0.5])
        phi = DiskFunction.polynomial([0.0, 0.0, 1.0])
        res = check_c_conditions(u, phi)
        assert not res.weight_modulus_constant and not res.all_hold

    def test_non_inner_symbol_fails(self):
        res = check_c_conditions(DiskFunction.constant(1.0),
                                 DiskFunction.scaled_identity(0.5))
        assert not res.symbol_inner and not res.all_hold

    def test_constant_symbol_fails(self):
        res = check_c_conditions(DiskFunction.constant(1.0),
                                 DiskFunction.constant(0.3))
        assert not res.symbol_nonconstant and not res.all_hold


class TestLowerBound:
    def test_plain_composition_reaches_its_weight(self):
        # with T = 0 the constant test function f = 1 already attains sup|u|
        one = DiskFunction.constant(1.0)
        res = disk_norm_lower_bound(one, DiskFunction.polynomial([0.0, 0.0, 1.0]))
        assert res.bound == pytest.approx(1.0, abs=1e-12)

    def test_point_eval_perturbation_near_two(self):
        one = DiskFunction.constant(1.0)
        square = DiskFunction.polynomial([0.0, 0.0, 1.0])
        T = RankOneDiskOperator(tau=0.0, g=one, c=-1.0)
        res = disk_norm_lower_bound(one, square, T)
        assert res.bound >= 1.99
        assert res.witness["kind"] == "blaschke"

    def test_family_size_matches_ladder(self):
        ladder = SearchLadder(radii=(0.9,), max_depth=2, max_monomial=4)
        one = DiskFunction.constant(1.0)
        res = disk_norm_lower_bound(one, DiskFunction.polynomial([0.0, 0.0, 1.0]),
                                    ladder=ladder)
        # constant, depth 1: 3 zeros, depth 2: 6 multisets, monomials z^3, z^4
        assert res.family_size == 12

    def test_never_exceeds_triangle_bound(self):
        rng = np.random.default_rng(17)
        one = DiskFunction.constant(1.0)
        ladder = SearchLadder(radii=(0.9,), max_depth=2, max_monomial=4, samples=512)
        for _ in range(10):
            a = 0.8 * rng.random() * np.exp(2j * np.pi * rng.random())
            tau = 0.8 * rng.random() * np.exp(2j * np.pi * rng.random())
            c = complex(rng.standard_normal(), rng.standard_normal())
            phi = DiskFunction.blaschke_multiple(BlaschkeProduct(zeros=(a,)))
            T = RankOneDiskOperator(tau=tau, g=DiskFunction.half_plus(1 + 0j), c=c)
            res = disk_norm_lower_bound(one, phi, T, ladder=ladder)
            assert res.bound <= 1.0 + abs(c) + 1e-6

    def test_rejects_symbol_leaving_the_disk(self):
        with pytest.raises(ValueError):
            disk_norm_lower_bound(DiskFunction.constant(1.0),
                                  DiskFunction.polynomial([0.0, 2.0]))


class TestCertifiedBound:
    def canonical(self, half_angle=0.1):
        one = DiskFunction.constant(1.0)
        half = DiskFunction.scaled_identity(0.5)
        omega = 1 + 0j
        arc = ArcNeighborhood(omega, half_angle)
        return certified_counterexample_bound(one, half, omega, 0.05, arc)

    def test_canonical_numbers(self):
        res = self.canonical()
        # chain: 0.05 / 0.45^2 + 0.05 + 0.5, off-arc: 1 + cos(0.05)
        assert res.on_arc == pytest.approx(0.05 / 0.2025 + 0.55, abs=1e-15)
        assert res.off_arc == pytest.approx(1.0 + math.cos(0.05), abs=1e-15)
        assert res.bound == pytest.approx(1.9987502603949663, abs=1e-15)
        assert res.margin == pytest.approx(1.0 - math.cos(0.05), abs=1e-15)
        assert res.valid
        assert res.margin >= 1e-3

    def test_slightly_wider_arc_breaks_the_increment_check(self):
        # at half-angle 0.1001 the sampled |phi(z) - phi(omega)| tops epsilon
        res = self.canonical(half_angle=0.1001)
        assert not res.valid
        assert res.detail["phi_increment"] > 0.05

    def test_bound_dominates_sampled_norm(self):
        res = self.canonical()
        T = res.operator
        one = DiskFunction.constant(1.0)
        half = DiskFunction.scaled_identity(0.5)
        negated = RankOneDiskOperator(tau=T.tau, g=T.g, c=-T.c)
        sampled = disk_norm_lower_bound(one, half, negated)
        assert sampled.bound <= res.bound + 1e-9

    def test_epsilon_range_is_enforced(self):
        one = DiskFunction.constant(1.0)
        half = DiskFunction.scaled_identity(0.5)
        arc = ArcNeighborhood(1 + 0j, 0.1)
        with pytest.raises(ValueError):
            certified_counterexample_bound(one, half, 1 + 0j, 0.6, arc)  # > 1 - r

    def test_arc_must_sit_at_omega(self):
        one = DiskFunction.constant(1.0)
        half = DiskFunction.scaled_identity(0.5)
        with pytest.raises(ValueError):
            certified_counterexample_bound(one, half, 1 + 0j, 0.05,
                                           ArcNeighborhood(1j, 0.1))

    def test_operator_requires_interior_target(self):
        one = DiskFunction.constant(1.0)
        square = DiskFunction.polynomial([0.0, 0.0, 1.0])
        with pytest.raises(ValueError):
            disk_counterexample_operator(one, square, 1 + 0j)  # phi(1) = 1


class TestAutomorphism:
    def test_identity_attained_for_simple_factor(self):
        phi = BlaschkeProduct(zeros=(0.5 + 0j,))
        T = RankOneDiskOperator(tau=phi(0.0), g=DiskFunction.constant(1.0), c=1.0)
        res = automorphism_identity_check(phi, T)
        assert res.deficit <= 1e-2
        assert res.target == pytest.approx(2.0, abs=1e-12)

    def test_rotation_with_point_eval(self):
        phi = BlaschkeProduct(unimodular_constant=cmath.exp(0.3j), zeros=(0j,))
        T = RankOneDiskOperator(tau=0.3, g=DiskFunction.half_plus(1 + 0j), c=0.7)
        res = automorphism_identity_check(phi, T)
        assert res.target == pytest.approx(1.7, abs=1e-12)
        assert res.deficit <= 1e-2
        assert res.lower <= res.target + 1e-9

    def test_rejects_higher_degree(self):
        phi = BlaschkeProduct(zeros=(0j, 0j))
        T = RankOneDiskOperator(tau=0.0, g=DiskFunction.constant(1.0), c=1.0)
        with pytest.raises(ValueError):
            automorphism_identity_check(phi, T)
