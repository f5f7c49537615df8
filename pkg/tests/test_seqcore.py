import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from cazac.seqcore import (
    PhaseSequence, as_sequence, canonicalize, circular_distance, dft, idft, phases_to_s,
    project_unit_circle, rotate_canonical, s_to_phases, unit_phases,
)
from conftest import direct_dft, direct_idft

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def rand_complex(rng, n):
    return rng.normal(size=n) + 1j * rng.normal(size=n)


class TestUnitPhases:
    def test_zero_phases(self):
        assert np.allclose(unit_phases([0, 0, 0, 0]), 1)

    def test_quarter_turns(self):
        got = unit_phases([0, np.pi / 2, np.pi, 3 * np.pi / 2])
        assert np.allclose(got, [1, 1j, -1, -1j], atol=1e-15)

    def test_s_vector_convention(self):
        th = s_to_phases([0, 0.5], 2)
        assert np.allclose(th.thetas, [0, np.pi / 2])
        assert np.allclose(unit_phases(th), [1, 1j])

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            unit_phases([0, np.nan])

    @given(arrays(float, st.integers(1, 40), elements=finite))
    def test_unit_modulus(self, th):
        assert np.max(np.abs(np.abs(unit_phases(th)) - 1)) < 1e-15


class TestPhaseSequence:
    def test_wrapped_to_period(self):
        p = PhaseSequence([-np.pi / 2, 2 * np.pi, 7.0])
        assert np.all((p.thetas >= 0) & (p.thetas < 2 * np.pi))
        assert np.isclose(p.thetas[0], 1.5 * np.pi)
        assert p.thetas[1] == 0.0

    def test_immutable(self):
        p = PhaseSequence([0.1, 0.2])
        with pytest.raises(ValueError):
            p.thetas[0] = 1.0

    def test_canonical_flag(self):
        assert PhaseSequence([0, 1]).canonical
        assert not PhaseSequence([1, 1]).canonical

    def test_rejects_bad_input(self):
        for bad in ([], [[0, 1]], [0, np.inf]):
            with pytest.raises(ValueError):
                PhaseSequence(bad)

    @given(arrays(float, st.integers(1, 30), elements=st.floats(0, 29.999)))
    def test_s_round_trip(self, s):
        n = s.size
        s = np.mod(s, n)
        back = s_to_phases(s, n).to_s()
        assert np.max(np.abs(np.mod(back - s + n / 2, n) - n / 2)) < 1e-12

    def test_phases_to_s_accepts_raw_array(self):
        assert np.allclose(phases_to_s([0, np.pi]), [0, 1])


class TestDft:
    def test_impulse(self):
        assert np.allclose(dft([1, 0, 0, 0]), 0.5 * np.ones(4))

    def test_constant(self):
        assert np.allclose(dft([1, 1, 1, 1]), [2, 0, 0, 0])

    def test_inverse_of_constant(self):
        assert np.allclose(idft([2, 0, 0, 0]), [1, 1, 1, 1])

    def test_inverse_single_bin(self):
        X = np.array([0, 2, 0, 0], dtype=complex)
        assert np.allclose(idft(X), direct_idft(X), atol=1e-12)
        assert np.allclose(idft(X), [1, 1j, -1, -1j])

    def test_zadoff_chu_spectrum_is_unimodular(self):
        k = np.arange(8)
        x = np.exp(-1j * np.pi * k * k / 8)
        X = direct_dft(x)
        assert np.max(np.abs(np.abs(X) - 1)) < 1e-12
        assert np.max(np.abs(dft(x) - X)) < 1e-12

    @pytest.mark.parametrize("n", [1, 2, 3, 7, 16, 31, 64])
    def test_matches_direct_sum(self, n):
        rng = np.random.default_rng(n)
        x = rand_complex(rng, n)
        assert np.max(np.abs(dft(x) - direct_dft(x))) < 1e-10
        assert np.max(np.abs(idft(x) - direct_idft(x))) < 1e-10

    @settings(max_examples=50)
    @given(st.integers(1, 64), st.integers(0, 2**32 - 1))
    def test_unitary_and_round_trip(self, n, seed):
        x = rand_complex(np.random.default_rng(seed), n)
        assert abs(np.linalg.norm(dft(x)) - np.linalg.norm(x)) < 1e-12 * max(1, np.linalg.norm(x))
        assert np.max(np.abs(idft(dft(x)) - x)) < 1e-12


class TestProjection:
    def test_examples(self):
        assert np.allclose(project_unit_circle([2, -3j]), [1, -1j])
        assert np.array_equal(project_unit_circle([0, 5]), [1, 1])

    def test_ca_input_unchanged(self):
        x = np.exp(1j * np.linspace(0, 6, 9))
        assert np.max(np.abs(project_unit_circle(x) - x)) < 1e-15

    @given(arrays(complex, st.integers(1, 30),
                  elements=st.complex_numbers(max_magnitude=1e6, allow_nan=False,
                                              allow_infinity=False)))
    def test_idempotent(self, x):
        y = project_unit_circle(x)
        assert np.allclose(np.abs(y), 1)
        assert np.max(np.abs(project_unit_circle(y) - y)) < 1e-15


class TestCanonicalize:
    def test_rotation_removed(self):
        x = np.array([1j, 1j, -1j, 1j * np.exp(1j * np.pi / 4)])
        p = canonicalize(x)
        assert p.thetas[0] == 0.0 and p.canonical
        assert np.allclose(unit_phases(p), x * -1j)

    def test_canonical_input_is_identity(self):
        s = [0, 4.346, 1.456, 2.566, 2.912, 6.566, 1.456, 0.346]
        p = s_to_phases(s, 8)
        q = canonicalize(p.to_complex())
        assert np.max(circular_distance(p.thetas, q.thetas)) < 1e-12

    def test_rejects_non_ca(self):
        with pytest.raises(ValueError):
            canonicalize([1, 2, 1])

    @given(st.floats(-10, 10), st.integers(0, 2**32 - 1))
    def test_rotation_invariant(self, phi, seed):
        x = np.exp(1j * np.random.default_rng(seed).uniform(0, 6.3, 8))
        a = canonicalize(x).thetas
        b = canonicalize(x * np.exp(1j * phi)).thetas
        assert np.max(circular_distance(a, b)) < 1e-12

    def test_rotate_canonical(self):
        x = np.exp(1j * np.array([0.3, 1.0, 2.0]))
        assert np.isclose(rotate_canonical(x)[0], 1)


class TestAsSequence:
    def test_rejects(self):
        for bad in ([], [[1, 2]], [1, np.nan]):
            with pytest.raises(ValueError):
                as_sequence(bad)

    def test_complex_dtype(self):
        assert as_sequence([1, 2]).dtype == complex
