import math

import pytest

from tubeforge import (
    DomainError,
    MonophaseGenerator,
    RatioList,
    SprayModel,
    count_zeros_rectangle,
    detect_lattice,
    find_complex_dimensions,
    lattice_zeros,
    refine_zero,
    similarity_dimension,
)
from tubeforge.complexdims import dirichlet_poly, zero_free_abscissa

CANTOR_D = math.log(2) / math.log(3)
CANTOR_PERIOD = 2 * math.pi / math.log(3)
GOLDEN_RE = math.log((1 + math.sqrt(5)) / 2) / math.log(4)


class TestDetectLattice:
    def test_cantor(self):
        st = detect_lattice(RatioList([1 / 3, 1 / 3]))
        assert st.is_lattice
        assert st.base == pytest.approx(1 / 3, abs=1e-12)
        assert st.exponents == (1, 1)
        assert st.period == pytest.approx(2 * math.pi / math.log(3), rel=1e-12)

    def test_quarter_sixteenth(self):
        st = detect_lattice(RatioList([0.25, 1 / 16]))
        assert st.is_lattice
        assert st.base == pytest.approx(0.25, abs=1e-12)
        assert st.exponents == (1, 2)
        assert st.period == pytest.approx(2 * math.pi / math.log(4), rel=1e-12)

    def test_half_third_nonlattice(self):
        assert not detect_lattice(RatioList([0.5, 1 / 3])).is_lattice

    def test_exponent_gcd_is_one(self):
        st = detect_lattice(RatioList([0.25, 1 / 16]))
        g = 0
        for k in st.exponents:
            g = math.gcd(g, k)
        assert g == 1


class TestLatticeZeros:
    def test_cantor_window_12(self):
        rl = RatioList([1 / 3, 1 / 3])
        zeros = lattice_zeros(detect_lattice(rl), rl, 12.0)
        assert len(zeros) == 5
        for z, k in zip(zeros, range(-2, 3)):
            assert z.omega == pytest.approx(complex(CANTOR_D, k * CANTOR_PERIOD), abs=1e-10)
            assert z.multiplicity == 1
            assert z.residual < 1e-10

    def test_quarter_sixteenth_two_families(self):
        rl = RatioList([0.25, 1 / 16])
        zeros = lattice_zeros(detect_lattice(rl), rl, 5.0)
        assert len(zeros) == 5
        period = 2 * math.pi / math.log(4)
        family_a = [z for z in zeros if z.omega.real > 0]
        family_b = [z for z in zeros if z.omega.real < 0]
        assert len(family_a) == 3 and len(family_b) == 2
        for z, k in zip(family_a, (-1, 0, 1)):
            assert z.omega == pytest.approx(complex(GOLDEN_RE, k * period), abs=1e-10)
        for z, sign in zip(family_b, (-1, 1)):
            assert z.omega == pytest.approx(
                complex(-GOLDEN_RE, sign * period / 2), abs=1e-10
            )

    def test_triple_half_small_window(self):
        rl = RatioList([0.5, 0.5, 0.5])
        zeros = lattice_zeros(detect_lattice(rl), rl, 1.0)
        assert len(zeros) == 1
        assert zeros[0].omega == pytest.approx(complex(math.log2(3), 0.0), abs=1e-12)

    def test_rejects_nonlattice(self):
        rl = RatioList([0.5, 1 / 3])
        with pytest.raises(DomainError):
            lattice_zeros(detect_lattice(rl), rl, 5.0)


class TestCountZerosRectangle:
    def test_cantor_full_band(self):
        assert count_zeros_rectangle(RatioList([1 / 3, 1 / 3]), (-1, 1, -6, 6)) == 3

    def test_cantor_empty_band(self):
        assert count_zeros_rectangle(RatioList([1 / 3, 1 / 3]), (-1, 1, 1, 5)) == 0

    def test_triple_half(self):
        assert count_zeros_rectangle(RatioList([0.5, 0.5, 0.5]), (1, 2, -1, 1)) == 1


class TestRefineZero:
    def test_real_seed_converges_to_dimension(self):
        z = refine_zero(RatioList([1 / 3, 1 / 3]), 0.6 + 0.1j)
        assert z.omega == pytest.approx(complex(CANTOR_D, 0.0), abs=1e-11)
        assert z.residual < 1e-12

    def test_lattice_family_member(self):
        z = refine_zero(RatioList([1 / 3, 1 / 3]), 0.6 + 5.5j)
        assert z.omega == pytest.approx(complex(CANTOR_D, CANTOR_PERIOD), abs=1e-10)

    def test_triple_half(self):
        z = refine_zero(RatioList([0.5, 0.5, 0.5]), 1.5 + 0.2j)
        assert z.omega == pytest.approx(complex(math.log2(3), 0.0), abs=1e-11)


class TestFindComplexDimensions:
    def test_cantor_matches_lattice_closed_form(self, cantor):
        zeros = find_complex_dimensions(cantor, 12.0)
        assert len(zeros) == 5
        for z, k in zip(zeros, range(-2, 3)):
            assert abs(z.omega - complex(CANTOR_D, k * CANTOR_PERIOD)) < 1e-9

    def test_quarter_sixteenth_model(self):
        model = SprayModel(
            RatioList([0.25, 1 / 16]),
            MonophaseGenerator(1, [2.0], 0.25, 0.5),
        )
        zeros = find_complex_dimensions(model, 5.0)
        assert len(zeros) == 5
        assert sum(1 for z in zeros if z.omega.real < 0) == 2

    def test_half_third_window_20(self, half_third_model):
        zeros = find_complex_dimensions(half_third_model, 20.0)
        ratios = half_third_model.ratios
        total = count_zeros_rectangle(
            ratios,
            (zero_free_abscissa(ratios), similarity_dimension(ratios).value + 0.5,
             -20.0, 20.0),
        )
        assert sum(z.multiplicity for z in zeros) == total
        assert all(z.residual < 1e-10 for z in zeros)
        reals = [z for z in zeros if z.omega.imag == 0.0]
        assert len(reals) == 1
        assert reals[0].omega.real == pytest.approx(0.7878849110258697, abs=1e-10)

    def test_conjugate_symmetry_is_exact(self, half_third_model):
        zeros = find_complex_dimensions(half_third_model, 20.0)
        omegas = {z.omega for z in zeros}
        assert {w.conjugate() for w in omegas} == omegas

    def test_zeros_left_of_dimension(self, half_third_model):
        d = similarity_dimension(half_third_model.ratios).value
        zeros = find_complex_dimensions(half_third_model, 20.0)
        assert all(z.omega.real <= d + 1e-9 for z in zeros)
        assert all(abs(dirichlet_poly(half_third_model.ratios, z.omega)) < 1e-10
                   for z in zeros)

    def test_sorted_by_im_then_re(self, half_third_model):
        zeros = find_complex_dimensions(half_third_model, 20.0)
        keys = [(z.omega.imag, z.omega.real) for z in zeros]
        assert keys == sorted(keys)

    def test_lattice_periodicity(self, cantor):
        zeros = find_complex_dimensions(cantor, 30.0)
        period = detect_lattice(cantor.ratios).period
        omegas = [z.omega for z in zeros]
        for w in omegas:
            if abs(w.imag + period) <= 30.0:
                assert any(abs(w + 1j * period - v) < 1e-9 for v in omegas)

    def test_re_floor_filter(self):
        model = SprayModel(
            RatioList([0.25, 1 / 16]),
            MonophaseGenerator(1, [2.0], 0.25, 0.5),
        )
        zeros = find_complex_dimensions(model, 5.0, re_floor=0.0)
        assert len(zeros) == 3
        assert all(z.omega.real >= 0.0 for z in zeros)

    def test_rejects_nonpositive_window(self, cantor):
        with pytest.raises(DomainError):
            find_complex_dimensions(cantor, 0.0)
