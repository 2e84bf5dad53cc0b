"""Grid circle geometry, scalar fields and symbol maps."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from daugavetlab.circle import (
    Arc,
    GridCircle,
    ScalarField,
    SymbolMap,
    circle_distance,
    frac_mod1,
    image_count_on_arc,
    modulus_constancy,
    points_equal,
    preimage_nowhere_dense_at_resolution,
    sup_norm,
    symbol_max_jump,
)


class TestGeometry:
    def test_distance_is_shorter_way_around(self):
        assert circle_distance(Fraction(0), Fraction(3, 4)) == Fraction(1, 4)
        assert circle_distance(Fraction(1, 8), Fraction(7, 8)) == Fraction(1, 4)
        assert circle_distance(0.0, 0.5) == 0.5

    def test_distance_exact_for_rationals(self):
        d = circle_distance(Fraction(1, 3), Fraction(2, 3))
        assert isinstance(d, Fraction) and d == Fraction(1, 3)

    @given(st.fractions(min_value=0, max_value=1), st.fractions(min_value=0, max_value=1))
    def test_distance_is_a_metric(self, a, b):
        a, b = frac_mod1(a), frac_mod1(b)
        d = circle_distance(a, b)
        assert 0 <= d <= Fraction(1, 2)
        assert d == circle_distance(b, a)
        assert (d == 0) == (a == b)

    @given(st.fractions(min_value=0, max_value=1), st.fractions(min_value=0, max_value=1),
           st.fractions(min_value=0, max_value=1))
    def test_distance_triangle_inequality(self, a, b, c):
        assert (circle_distance(frac_mod1(a), frac_mod1(c))
                <= circle_distance(frac_mod1(a), frac_mod1(b))
                + circle_distance(frac_mod1(b), frac_mod1(c)))

    def test_points_equal_mixes_exact_and_float(self):
        assert points_equal(Fraction(1, 4), Fraction(1, 4))
        assert not points_equal(Fraction(1, 4), Fraction(1, 4) + Fraction(1, 10 ** 12))
        assert points_equal(0.25, float(Fraction(1, 4)) + 1e-12)

    def test_grid_points_are_exact_rationals(self):
        g = GridCircle(8)
        assert g.points() == [Fraction(k, 8) for k in range(8)]
        assert g.index_of(Fraction(3, 8)) == 3
        assert g.contains(Fraction(3, 8))
        assert not g.contains(Fraction(1, 3))

    def test_grid_rejects_tiny_n(self):
        with pytest.raises(ValueError):
            GridCircle(1)

    def test_arc_membership_wraps(self):
        arc = Arc(Fraction(0), Fraction(1, 8))
        assert arc.contains(Fraction(15, 16))
        assert arc.contains(Fraction(1, 16))
        assert not arc.contains(Fraction(1, 4))
        assert arc.length == Fraction(1, 4)

    def test_arc_grid_points(self):
        g = GridCircle(16)
        arc = Arc(Fraction(0), Fraction(1, 8))
        pts = arc.grid_points(g)
        assert set(pts) == {Fraction(14, 16), Fraction(15, 16), Fraction(0),
                            Fraction(1, 16), Fraction(2, 16)}


class TestScalarFields:
    def test_constant(self):
        u = ScalarField.constant(2 - 1j)
        assert u(Fraction(1, 3)) == 2 - 1j

    def test_unimodular_exp_has_modulus_one(self):
        u = ScalarField.unimodular_exp(winding=3)
        g = GridCircle(32)
        rep = modulus_constancy(u, g)
        assert rep.constant and rep.value == pytest.approx(1.0, abs=1e-12)

    def test_cosine_field(self):
        u = ScalarField.cosine(amplitude=0.5, offset=0.5, frequency=1)
        assert u(Fraction(0)) == pytest.approx(1.0)
        assert u(Fraction(1, 2)) == pytest.approx(0.0)

    def test_tent_peaks_at_center_and_flattens(self):
        v = ScalarField.tent(Fraction(0), Fraction(1, 8), peak=1.0, base=0.0)
        assert v(Fraction(0)) == pytest.approx(1.0)
        assert v(Fraction(1, 16)) == pytest.approx(0.5)
        assert v(Fraction(1, 4)) == pytest.approx(0.0)
        assert v(Fraction(3, 4)) == pytest.approx(0.0)

    def test_tent_dip_modulus_spread(self):
        u = ScalarField.tent_dip(Fraction(0), Fraction(1, 4), depth=0.5)
        g = GridCircle(64)
        rep = modulus_constancy(u, g)
        assert not rep.constant
        assert rep.spread == pytest.approx(0.5, abs=1e-12)
        assert u(Fraction(0)) == pytest.approx(0.5)
        assert u(Fraction(1, 2)) == pytest.approx(1.0)

    def test_samples_field_requires_grid_membership(self):
        u = ScalarField.from_samples([1, 2, 3, 4], 4)
        assert u(Fraction(1, 4)) == 2
        with pytest.raises(ValueError):
            u(Fraction(1, 3))

    def test_product_multiplies_pointwise(self):
        u = ScalarField.product(ScalarField.constant(2.0),
                                ScalarField.cosine(amplitude=1.0, offset=0.0, frequency=1))
        assert u(Fraction(0)) == pytest.approx(2.0)

    def test_sup_norm_over_grid(self):
        u = ScalarField.cosine(amplitude=1.0, offset=0.0, frequency=1)
        assert sup_norm(u, GridCircle(64)) == pytest.approx(1.0)


class TestSymbolMaps:
    def test_identity_rotation_doubling(self):
        assert SymbolMap.identity()(Fraction(3, 8)) == Fraction(3, 8)
        assert SymbolMap.rotation(Fraction(1, 8))(Fraction(7, 8)) == Fraction(0)
        assert SymbolMap.doubling()(Fraction(5, 8)) == Fraction(1, 4)

    def test_constant_on_arc_patches_base(self):
        arc = Arc(Fraction(0), Fraction(1, 8))
        phi = SymbolMap.constant_on_arc(Fraction(0), arc)
        assert phi(Fraction(1, 16)) == Fraction(0)
        assert phi(Fraction(1, 2)) == Fraction(1, 2)  # identity off the arc

    def test_table_symbol(self):
        phi = SymbolMap.from_table([0, 0, 1, 2], 4)
        assert phi(Fraction(1, 4)) == Fraction(0)
        assert phi(Fraction(3, 4)) == Fraction(1, 2)
        with pytest.raises(ValueError):
            SymbolMap.from_table([0, 4], 2)  # index out of range

    def test_max_jump_of_doubling(self):
        g = GridCircle(64)
        jump = symbol_max_jump(SymbolMap.doubling(), g)
        assert jump == Fraction(2, 64)


class TestPreimageGeometry:
    def test_doubling_preimages_are_nowhere_dense(self):
        # exhaustive oracle: scan every arc of length delta on the grid and
        # confirm each contains a point mapping away from the target
        g = GridCircle(64)
        phi = SymbolMap.doubling()
        delta = Fraction(1, 8)
        for t in g.points():
            assert preimage_nowhere_dense_at_resolution(phi, t, delta, g)
            run_len = int(g.n * delta)
            hits = [phi(p) == t for p in g.points()]
            for start in range(g.n):
                window = [hits[(start + j) % g.n] for j in range(run_len)]
                assert not all(window)

    def test_constant_on_arc_preimage_fails_nowhere_dense(self):
        g = GridCircle(64)
        arc = Arc(Fraction(0), Fraction(1, 4))
        phi = SymbolMap.constant_on_arc(Fraction(0), arc)
        assert not preimage_nowhere_dense_at_resolution(phi, Fraction(0), Fraction(1, 8), g)

    def test_resolution_too_coarse_is_rejected(self):
        g = GridCircle(8)
        with pytest.raises(ValueError):
            preimage_nowhere_dense_at_resolution(
                SymbolMap.identity(), Fraction(0), Fraction(1, 16), g)

    def test_image_counts_on_arc(self):
        g = GridCircle(16)
        arc = Arc(Fraction(0), Fraction(1, 8))
        assert image_count_on_arc(SymbolMap.identity(), arc, g) == 5
        phi = SymbolMap.constant_on_arc(Fraction(0), arc)
        assert image_count_on_arc(phi, arc, g) == 1
