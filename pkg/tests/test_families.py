from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cazac import families as fam
from cazac.metrics import circular_autocorr, discrepancy
from cazac.seqcore import circular_distance
from cazac.transforms import Decimation, classify8

E8 = np.exp(1j * np.pi / 8)


def d(x):
    return discrepancy(np.asarray(x)).d


class TestNumberTheory:
    def test_is_prime(self):
        assert [p for p in range(30) if fam.is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]

    def test_legendre_matches_residue_set(self):
        for n in (3, 5, 7, 11, 13, 23):
            residues = {k * k % n for k in range(1, n)}
            for k in range(n):
                expected = 0 if k == 0 else (1 if k in residues else -1)
                assert fam.legendre(k, n) == expected


class TestZadoffChu:
    def test_length_four(self):
        x = fam.zadoff_chu(4, 1, 0).to_complex()
        e = np.exp(-1j * np.pi / 4)
        assert np.allclose(x, [1, e, -1, e], atol=1e-15)
        assert np.allclose(x, fam.cazac4("A", -np.pi / 4))

    @pytest.mark.parametrize("n,u", [(8, 1), (3, 2), (23, 5), (64, 7)])
    def test_exact(self, n, u):
        assert d(fam.zadoff_chu(n, u).to_complex()) < 1e-12

    @pytest.mark.parametrize("args", [(8, 2, 0), (8, 8, 0), (8, 0, 0), (8, 1, 8), (1, 1, 0)])
    def test_rejects(self, args):
        with pytest.raises(ValueError):
            fam.zadoff_chu(*args)


class TestPopovic:
    def test_zero_weights_reduce_to_zc(self):
        a = fam.popovic(8, 2, [0, 0]).thetas
        assert np.array_equal(a, fam.zadoff_chu(8).thetas)

    def test_random_weights(self):
        rng = np.random.default_rng(0)
        for _ in range(3):
            assert d(fam.popovic(8, 2, rng.random(2)).to_complex()) < 1e-12

    def test_generic_set_equivalence(self):
        rng = np.random.default_rng(1)
        for _ in range(4):
            x = fam.popovic(8, 2, [0, rng.random()]).to_complex()
            assert classify8(x).cls == "P"

    def test_rejects(self):
        with pytest.raises(ValueError):
            fam.popovic(8, 3, [0, 0, 0])
        with pytest.raises(ValueError):
            fam.popovic(8, 2, [0])
        with pytest.raises(ValueError):
            fam.popovic(8, 2, [0, 1.5])


class TestPopovic8Rows:
    def test_row_two(self):
        x = fam.popovic8_row(2, np.pi / 8)
        assert np.allclose(x, [1, E8, 1j, -E8, 1, -E8, 1j, E8])

    def test_row_one_at_zero(self):
        assert np.allclose(fam.popovic8_row(1, 0.0), [1, 1, 1, -1j, -1, 1, -1, -1j])

    def test_row_four_is_s21(self):
        assert np.allclose(fam.popovic8_row(4, np.pi / 8), fam.s8_popovic_subsets(21, np.pi / 8))

    @pytest.mark.parametrize("row", [1, 2, 3, 4])
    def test_exact(self, row):
        for th in np.linspace(0, 6, 7):
            assert d(fam.popovic8_row(row, th)) < 1e-12

    def test_bad_row(self):
        with pytest.raises(ValueError):
            fam.popovic8_row(5, 0)


class TestWiener:
    def test_n8_m1(self):
        x = fam.wiener(8, 1).to_complex()
        assert np.allclose(x[:3], [1, E8, 1j])
        assert d(x) < 1e-12

    def test_n3(self):
        x = fam.wiener(3, 1).to_complex()
        w = np.exp(2j * np.pi / 3)
        assert np.allclose(x, [1, w, w])
        assert np.allclose(circular_autocorr(x), [3, 0, 0], atol=1e-12)

    def test_n8_m3(self):
        k = np.arange(8)
        assert np.allclose(fam.wiener(8, 3).to_complex(), np.exp(2j * np.pi * 3 * k * k / 16))

    def test_rejects_gcd(self):
        with pytest.raises(ValueError):
            fam.wiener(8, 2)


class TestP4:
    def test_n8_formula(self):
        x = fam.p4(8).to_complex()
        # the last entry is -e^{i pi/8}; a common listing has -i e^{i pi/8},
        # which is not CAZAC
        expected = [1, -E8, 1j, E8, 1, E8, 1j, -E8]
        assert np.allclose(x, expected, atol=1e-12)
        assert d(x) < 1e-12
        variant = np.array(expected[:7] + [-1j * E8])
        assert abs(discrepancy(variant).d_zac - 2) < 1e-9

    def test_n2(self):
        x = fam.p4(2).to_complex()
        assert np.allclose(x, [1, -1j])
        assert d(x) < 1e-15

    def test_n4(self):
        assert d(fam.p4(4).to_complex()) < 1e-12


class TestBjorck:
    def test_n3(self):
        p = fam.bjorck(3)
        assert np.allclose(p.thetas, [0, 0, 2 * np.pi / 3])
        assert np.allclose(circular_autocorr(p.to_complex()), [3, 0, 0], atol=1e-12)

    def test_n5(self):
        a = np.arccos(1 / (1 + np.sqrt(5)))
        p = fam.bjorck(5)
        assert np.max(circular_distance(p.thetas, a * np.array([0, 1, -1, -1, 1]))) < 1e-15
        assert d(p.to_complex()) < 1e-12

    @pytest.mark.parametrize("n", [7, 11, 13, 17, 23, 29])
    def test_exact(self, n):
        assert d(fam.bjorck(n).to_complex()) < 1e-12

    @pytest.mark.parametrize("n", [2, 4, 9, 15])
    def test_rejects(self, n):
        with pytest.raises(ValueError):
            fam.bjorck(n)


class TestCazac4:
    def test_examples(self):
        x = fam.cazac4("A", 0.0)
        assert np.allclose(x, [1, 1, -1, 1])
        assert np.allclose(circular_autocorr(x), [4, 0, 0, 0], atol=1e-12)
        assert d(fam.cazac4("B", np.pi / 3)) < 1e-12

    @given(st.floats(-10, 10))
    def test_orthogonal_and_exact(self, th):
        a, b = fam.cazac4("A", th), fam.cazac4("B", th)
        assert abs(np.vdot(a, b)) < 1e-12
        assert d(a) < 1e-12 and d(b) < 1e-12

    def test_bad_variant(self):
        with pytest.raises(ValueError):
            fam.cazac4("C", 0)


class TestS8:
    def test_s11(self):
        e = np.exp(0.4j)
        assert np.allclose(fam.s8_popovic_subsets(11, 0.4), [1, e, 1j, -e, 1, -e, 1j, e])

    @given(st.floats(-7, 7))
    def test_s12_is_conjugate_of_s11(self, th):
        assert np.allclose(fam.s8_popovic_subsets(12, th),
                           fam.s8_popovic_subsets(11, -th).conj())

    def test_s34_matches_p4_class(self):
        assert classify8(fam.s8_popovic_subsets(34, np.pi / 8)).cls == "P"
        assert classify8(fam.p4(8).to_complex()).cls == "P"

    @pytest.mark.parametrize("sid", fam.S8_SET_IDS)
    def test_exact_and_decimation_fixed(self, sid):
        rng = np.random.default_rng(sid)
        for th in rng.uniform(0, 6.3, 5):
            x = fam.s8_popovic_subsets(sid, th)
            assert d(x) < 1e-12
            if sid // 10 in (2, 3):
                dd = 3 if sid // 10 == 2 else 5
                assert np.allclose(Decimation(dd)(x), x)

    def test_bad_id(self):
        with pytest.raises(ValueError):
            fam.s8_popovic_subsets(13, 0)


class TestC0a:
    def test_constants(self):
        c = fam.c0a_constants()
        assert abs(c.chi - np.sqrt(-2 + 2 * np.sqrt(2))) < 1e-15
        assert abs(c.chi - 0.910180) < 1e-6

    def test_gamma_matches_representative(self):
        gamma = fam.c0a_constants().gamma
        assert circular_distance(gamma, 2 * np.pi * 5.456 / 8) < 5e-3

    def test_exact_and_fixed_by_d7(self):
        x = fam.c0a_sequence()
        assert d(x) < 1e-9
        assert np.allclose(Decimation(7)(x), x)

    def test_s_form(self, golden8):
        s = np.angle(fam.c0a_sequence()) * 8 / (2 * np.pi)
        rep = golden8["representatives"]["C0a"]
        assert np.max(np.abs(np.mod(s - rep + 4, 8) - 4)) < 1e-3


class TestC0b:
    def test_representative(self):
        x = fam.c0b_sequences()[0]
        s = np.mod(np.angle(x) * 8 / (2 * np.pi), 8)
        expected = [0, 0, 1.567, 0, 5.567, 5.567, 1.567, 5.567]
        assert np.max(np.abs(np.mod(s - expected + 4, 8) - 4)) < 1e-3

    def test_members(self):
        rows = fam.c0b_sequences()
        assert len(rows) == 8
        for x in rows:
            assert d(x) < 1e-9
            assert np.allclose(Decimation(3)(x), x)
        conj0 = rows[0].conj()
        assert any(np.allclose(conj0, r) for r in rows)


class TestC0c:
    def test_first_row(self):
        s = fam.c0c_s_vectors()[0]
        assert np.allclose(s, [0, 0.5, 0.1390, 4.3488, 3.0976, 7.5976, 1.8488, 6.6390], atol=1e-4)

    def test_exact(self):
        for x in fam.c0c_sequences():
            assert d(x) < 1e-6

    def test_conjugate_block(self):
        rows = fam.c0c_sequences()
        upper, lower = rows[:4], rows[4:]
        # every lower-block row is the conjugate of an upper-block row up to a rotation,
        # translation and decimation; its class is the same and its conjugate is upper-class
        for x in lower:
            assert classify8(x).cls == "C0c"
            assert classify8(x.conj()).cls == "C0c"
        assert classify8(upper[3]).cls == "C0c"

    def test_rejects_non_root(self):
        with pytest.raises(ValueError):
            fam.c0c_sequences(fam.C0cTriple(0.2, 0.3, 0.1))


class TestFamilySequence:
    @pytest.mark.parametrize("name,kw", [
        ("zc", dict(n=8, u=3, q=2)), ("popovic", dict(n=8, m=2, w=[0.1, 0.7])),
        ("wiener", dict(n=9, m=2)), ("p4", dict(n=10)), ("bjorck", dict(n=13)),
        ("cazac4", dict(variant="B", theta=1.0)), ("s8", dict(setid=31, theta=0.2)),
        ("s8", dict(setid=13)), ("s8", dict(setid=23, index=5)), ("c0a", {}),
        ("c0b", dict(index=2)), ("c0c", dict(index=7)),
    ])
    def test_dispatch(self, name, kw):
        assert d(fam.family_sequence(name, **kw)) < 1e-6

    @pytest.mark.parametrize("name,kw", [
        ("zc", {}), ("cazac4", dict(n=5)), ("c0b", dict(index=8)), ("nope", dict(n=4)),
        ("s8", {}), ("popovic", dict(n=8)),
    ])
    def test_errors(self, name, kw):
        with pytest.raises(ValueError):
            fam.family_sequence(name, **kw)


@settings(max_examples=60)
@given(st.integers(2, 60), st.integers(0, 2**32 - 1))
def test_zadoff_chu_random_parameters(n, seed):
    rng = np.random.default_rng(seed)
    u = int(rng.choice([u for u in range(1, n) if gcd(u, n) == 1]))
    q = int(rng.integers(0, n))
    assert d(fam.zadoff_chu(n, u, q).to_complex()) < 1e-12


def test_check_cazac():
    fam.check_cazac(fam.c0a_sequence())
    with pytest.raises(ValueError):
        fam.check_cazac([1, 1, 1])
