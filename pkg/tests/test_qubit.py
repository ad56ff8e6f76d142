import numpy as np
import pytest

from markovscope.channels import ChannelMatrix, OperatorBasis, as_matrix_units, compose
from markovscope.decision import Verdict, markovian_check
from markovscope.errors import ComplexLorentzSpectrum, NotQubit
from markovscope.lindblad import evolve
from markovscope.qubit import lorentz_singular_values, td_markovian_check
from markovscope.zoo import (
    dephasing_channel,
    rabi_unitary,
    random_channel,
    random_lindblad,
    transpose_approximation,
)

# non-unital, Hermiticity-preserving, det > 0, but the metric spectrum is
# genuinely complex: the divisibility criterion does not apply to this map
COMPLEX_SPECTRUM_MAP = np.array([
    [1.00, 0.00, 0.00, 0.00],
    [0.27, -0.97, 0.63, 0.83],
    [-0.46, 0.21, 0.46, 0.09],
    [-0.92, 0.87, 0.63, -0.99],
])


def test_identity_values():
    lsv = lorentz_singular_values(ChannelMatrix(np.eye(4), OperatorBasis.matrix_units(2)))
    assert np.abs(np.array(lsv.s) - 1.0).max() < 1e-12
    assert abs(lsv.det_T - 1.0) < 1e-12


def test_unitary_is_td_markovian():
    rep = td_markovian_check(rabi_unitary(0.7))
    assert rep.td_markovian
    assert np.abs(np.array(rep.s.s) - 1.0).max() < 1e-10


def test_dephasing_values():
    lsv = lorentz_singular_values(dephasing_channel(1.0))
    want = np.array([1.0, 1.0, np.exp(-2.0), np.exp(-2.0)])
    assert np.abs(np.array(lsv.s) - want).max() < 1e-12
    assert abs(lsv.det_T - np.exp(-4.0)) < 1e-14
    assert td_markovian_check(dephasing_channel(1.0)).td_markovian


def test_decay_channel_sits_on_the_boundary():
    # the x, y, z contractions of a decay semigroup element hit the
    # divisibility bound with equality and all four values coincide
    g = 0.8
    M = np.array([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, g, 0.0, 0.0],
        [0.0, 0.0, g, 0.0],
        [1.0 - g * g, 0.0, 0.0, g * g],
    ])
    T = ChannelMatrix(M, OperatorBasis.pauli())
    lsv = lorentz_singular_values(T)
    assert np.abs(np.array(lsv.s) - g).max() < 1e-12
    assert abs(lsv.det_T - g ** 4) < 1e-14
    rep = td_markovian_check(T)
    assert rep.td_markovian
    s1, s2, s3, s4 = rep.s.s
    assert abs(s1 * s1 * s4 * s4 - s1 * s2 * s3 * s4) < 1e-12


def test_negative_determinant_short_circuits():
    rep = td_markovian_check(transpose_approximation())
    assert not rep.td_markovian
    assert abs(rep.s.det_T + 1.0 / 27.0) < 1e-14
    s = np.array(rep.s.s)
    assert np.abs(s - np.array([1.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0])).max() < 1e-12


def test_not_qubit_rejected():
    with pytest.raises(NotQubit):
        td_markovian_check(random_channel(3, 1))


def test_complex_metric_spectrum_is_an_error():
    T = ChannelMatrix(COMPLEX_SPECTRUM_MAP, OperatorBasis.pauli())
    with pytest.raises(ComplexLorentzSpectrum):
        lorentz_singular_values(T)


def test_values_invariant_under_unitary_composition():
    rng = np.random.default_rng(31)
    T = random_channel(2, 44)
    s0 = np.array(lorentz_singular_values(T).s)
    for theta in rng.uniform(0, np.pi, size=5):
        U = rabi_unitary(float(theta))
        for conv in (compose(U, T), compose(T, U)):
            s1 = np.array(lorentz_singular_values(conv).s)
            assert np.abs(s1 - s0).max() < 1e-8


def test_semigroup_elements_are_td_markovian():
    # keep t small enough that the determinant stays clear of the
    # strict-positivity cutoff
    rng = np.random.default_rng(12)
    for k in range(12):
        L = random_lindblad(2, int(rng.integers(1 << 30)), scale=1.0)
        for t in (0.05, 0.5, 1.5, 3.0):
            rep = td_markovian_check(evolve(L, t))
            assert rep.td_markovian


def test_markovian_implies_td_markovian_sampled():
    rng = np.random.default_rng(2)
    n_mk = 0
    for seed in rng.integers(0, 1 << 30, size=400):
        T = random_channel(2, int(seed))
        if markovian_check(T).verdict is Verdict.MARKOVIAN:
            n_mk += 1
            assert td_markovian_check(T).td_markovian
    assert n_mk > 0


def test_report_carries_sorted_values():
    rep = td_markovian_check(random_channel(2, 123))
    s = np.array(rep.s.s)
    assert np.all(np.diff(s) <= 1e-15)
    assert np.all(s >= 0.0)
