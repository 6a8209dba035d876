from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rendezvous_k3.algebra import PathVector, apply_symmetry, kron_vec, real_spectrum
from rendezvous_k3.certificate import (
    Schedule,
    a_value,
    certify,
    dense_certificate_matrix,
    first_entry_closed,
    r_vector,
    spectrum_recursive,
    symmetrized,
    t_closed_forms,
    t_direct,
    verify_domination,
    verify_spectrum,
    w_value,
    x_vector,
)
from rendezvous_k3.game import aw_distribution, m_vector, quad_form_m

X3 = [4, 4, 3, 4, 4, 3, 2, 2, 1, 3, 3, 3, 3, 3, 3, 2, 2, 2, 1, 1, 1, 1, 1, 1, 1, 1, 1]


# -- schedule and values ---------------------------------------------------------

def test_a_values():
    assert [a_value(j) for j in range(3, 8)] == [2, Fraction(7, 3), Fraction(8, 3),
                                                Fraction(25, 9), Fraction(26, 9)]
    assert a_value(11) == Fraction(242, 81)
    with pytest.raises(ValueError):
        a_value(2)


def test_schedule_monotone_towards_three():
    vals = Schedule.for_level(30).values
    assert all(2 <= a < 3 for a in vals)
    assert all(a <= b for a, b in zip(vals, vals[1:]))
    assert 3 - vals[-1] < Fraction(1, 10 ** 6)
    assert Schedule.for_level(5)[4] == Fraction(7, 3)


def test_w_values():
    assert [w_value(k) for k in range(6)] == [1, Fraction(5, 3), 2, Fraction(20, 9),
                                              Fraction(7, 3), Fraction(65, 27)]
    assert w_value(15) == Fraction(16400, 6561)
    assert all(abs(w_value(k) - Fraction(5, 2)) < Fraction(1, 10 ** 6) for k in range(29, 40))


@pytest.mark.parametrize("k", range(1, 9))
def test_w_matches_aw(k):
    assert w_value(k) == quad_form_m(k, aw_distribution(k))


# -- certificate vectors ------------------------------------------------------------

def test_x_vector_bases():
    assert x_vector(1).tolist() == [2, 2, 1]
    assert x_vector(2).tolist() == [3, 3, 2, 3, 3, 2, 1, 1, 0]
    assert x_vector(3).tolist() == X3


def test_x_vector_sum_identity():
    for k in range(3, 8):
        lhs = x_vector(k).total()
        assert lhs == 3 ** k + x_vector(k - 1).total() + 3 ** (k - 2) * (3 + a_value(k))
        assert lhs / 3 ** k == w_value(k)


def test_r_vector():
    r = r_vector(2)
    assert r[0] == 15 and r[9] == Fraction(-15, 2)
    for a in (2, Fraction(7, 3), Fraction(26, 9)):
        r = r_vector(a)
        assert apply_symmetry(r) == r
        gadget = PathVector.from_values([a, a, 2, 2, a, 2, 1, 1, 1])
        assert r == real_spectrum(kron_vec([0, 1, 0], gadget))


# -- domination -----------------------------------------------------------------------

def test_domination():
    for k in range(1, 11):
        assert verify_domination(k) == (True, None)
    diff = m_vector(2) - x_vector(2)
    assert diff.tolist() == [0] * 8 + [1]


def test_domination_violation():
    bad = PathVector.from_values([3, 3, 2, 3, 3, 2, 1, 1, 2])
    assert verify_domination(2, bad) == (False, 8)


# -- spectrum --------------------------------------------------------------------------

def test_spectrum_k2():
    rep = verify_spectrum(2)
    assert rep.ok
    assert rep.spectrum.tolist() == [18, Fraction(3, 2), Fraction(3, 2), 3, 0, 0, 3, 0, 0]


@pytest.mark.parametrize("k", range(1, 13))
def test_spectrum_nonnegative(k):
    rep = verify_spectrum(k)
    assert rep.ok and rep.minimum >= 0
    assert rep.cross_checked == (k >= 3)


def test_twice_spectrum_integral():
    for k in range(1, 11):
        assert verify_spectrum(k).twice_integral


def test_spectrum_recursion_first_entry():
    assert spectrum_recursive(3)[0] == 60
    for k in range(3, 10):
        assert spectrum_recursive(k)[0] == first_entry_closed(k)


@pytest.mark.slow
def test_spectrum_recursion_agrees_at_15():
    rec = spectrum_recursive(15)
    assert rec == real_spectrum(x_vector(15))
    assert rec.min() >= 0


def test_spectrum_census_k12():
    rep = verify_spectrum(12)
    n = rep.size
    assert abs(Fraction(rep.zeros, n) - Fraction(5, 9)) < Fraction(2, 100)
    assert abs(Fraction(rep.three_halves, n) - Fraction(2, 9)) < Fraction(2, 100)


def test_spectrum_detects_negative():
    bad = PathVector.from_values([3, 3, 2, 3, 3, 2, 1, 1, 5])
    rep = verify_spectrum(2, bad)
    assert not rep.ok and rep.minimum < 0
    assert rep.first_negative is not None


@pytest.mark.parametrize("k", range(3, 11))
def test_last_third_is_mirror_of_middle(k):
    u = verify_spectrum(k).spectrum.tolist()
    third = 3 ** (k - 1)
    middle = PathVector.from_values(u[third:2 * third])
    assert apply_symmetry(middle).tolist() == u[2 * third:]


@pytest.mark.parametrize("k", range(3, 11))
def test_first_third_dominates_recursion(k):
    u = verify_spectrum(k).spectrum.tolist()
    prev = verify_spectrum(k - 1).spectrum
    floor = (PathVector.unit(k - 1) * 3 ** k + prev).tolist()
    assert all(a >= b for a, b in zip(u[:3 ** (k - 1)], floor))


# -- t-values ----------------------------------------------------------------------------

@pytest.mark.parametrize("k", range(3, 16))
def test_t_values_closed_vs_direct(k):
    t = t_closed_forms(k)
    assert t.agree
    if k >= 4:
        assert t.direct[2] == 0
    if k >= 5:
        assert t.direct[1] >= t.direct[3] >= t.direct[2]


def test_t_value_differences_k5():
    t1, t2, t3, t4 = t_direct(5)
    assert t2 - t4 == Fraction(3, 2)
    assert t4 - t3 == 6


def test_t_direct_requires_k3():
    with pytest.raises(ValueError):
        t_direct(2)


# -- dense matrix ---------------------------------------------------------------------------

def test_dense_h1_equals_m1():
    assert dense_certificate_matrix(1) == [[2, 2, 1], [1, 2, 2], [2, 1, 2]]


def test_dense_h2_first_row_and_bound():
    h = dense_certificate_matrix(2)
    assert h[0] == x_vector(2).tolist()
    with pytest.raises(ValueError):
        dense_certificate_matrix(5)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_symmetrized_eigenvalues_match_spectrum(k):
    sym = symmetrized(dense_certificate_matrix(k)).astype(float)
    eig = np.sort(np.linalg.eigvalsh(sym))
    expect = np.sort([float(v) for v in verify_spectrum(k).spectrum])
    np.testing.assert_allclose(eig, expect, atol=1e-9)


def test_symmetrized_h2_eigenvalues():
    sym = symmetrized(dense_certificate_matrix(2)).astype(float)
    eig = np.sort(np.linalg.eigvalsh(sym))
    np.testing.assert_allclose(eig, [0, 0, 0, 0, 1.5, 1.5, 3, 3, 18], atol=1e-9)


@settings(max_examples=40)
@given(st.lists(st.integers(0, 12), min_size=27, max_size=27).filter(lambda w: sum(w) > 0))
def test_quadratic_bound_on_simplex(weights):
    # p^T M p >= p^T H p >= w_k on the simplex
    p = PathVector.from_values([Fraction(w, sum(weights)) for w in weights])
    h = dense_certificate_matrix(3)
    vals = p.tolist()
    hp = sum(vals[i] * h[i][j] * vals[j] for i in range(27) if vals[i] for j in range(27) if vals[j])
    assert quad_form_m(3, p) >= hp >= w_value(3)


# -- certify ----------------------------------------------------------------------------------

@pytest.mark.parametrize("k", range(1, 13))
def test_certify_passes(k):
    cert = certify(k)
    assert cert.passed
    assert cert.bound == w_value(k) == quad_form_m(k, aw_distribution(k))


@pytest.mark.slow
def test_certify_k15():
    cert = certify(15)
    assert cert.passed and cert.bound == Fraction(16400, 6561)
    assert cert.spectrum.method == "recursive"


@pytest.mark.parametrize("base", [(3, 3, 2, 2, 3, 2, 1, 1, 1), (3, 3, 2, 3, 2, 2, 1, 1, 1)])
def test_alternative_bases(base):
    cert = certify(2, base=base)
    assert cert.passed and cert.bound == 2
    assert certify(6, base=base).spectrum_ok


def test_certify_reports_failure():
    cert = certify(2, base=(3, 3, 2, 3, 3, 2, 1, 1, 2))
    assert not cert.passed
    assert not cert.domination_ok and cert.domination_witness == 8
    assert cert.failures


def test_certify_rejects_k0():
    with pytest.raises(ValueError):
        certify(0)
