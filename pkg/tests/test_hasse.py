import pytest

from charsum import hasse
from charsum.algebra import centered_lift
from charsum.oracle import char_sum_coeffs, primes_in


def legendre_cubic_coeffs(beta, p):
    return (0, beta % p, (-(1 + beta)) % p, 1)


def test_hasse_eval_examples():
    assert hasse.hasse_eval(2, 5) == 3  # H = 1 + 4x + x^2, H(2) = 13
    assert hasse.hasse_eval(2, 7) == 0
    for p in (5, 7, 13, 19):
        assert hasse.hasse_eval(0, p) == pow(-1, (p - 1) // 2, p)


def test_hasse_polynomial_shape():
    H = hasse.HassePolynomial.build(13)
    assert H.m == 6 and len(H.coeffs) == 7
    assert H.coeffs[0] == H.coeffs[6] == pow(-1, 6, 13)
    # palindromic squared binomials
    assert H.coeffs == tuple(reversed(H.coeffs))


def test_hasse_eval_batch_matches_scalar():
    for p in (17, 31, 101):
        vals = hasse.hasse_eval_batch(list(range(p)), p)
        for b in range(p):
            assert int(vals[b]) == hasse.hasse_eval(b, p)


def test_legendre_form_sum_witnesses():
    assert hasse.legendre_form_sum(2, 5).value == 2
    assert hasse.legendre_form_sum(3, 7).value == -4
    assert hasse.legendre_form_sum(2, 7).value == 0
    with pytest.raises(ValueError):
        hasse.legendre_form_sum(1, 11)


def test_sign_law():
    # S(F_beta) = -H(beta) mod p and equals the negated centered lift
    for p in primes_in(17, 400):
        for beta in range(2, p - 1):
            s = char_sum_coeffs(legendre_cubic_coeffs(beta, p), p)
            h = hasse.hasse_eval(beta, p)
            assert (s + h) % p == 0
            assert s == -centered_lift(h, p)


def test_hasse_bound():
    import math

    for p in primes_in(17, 300):
        for beta in range(2, p - 1):
            ap = centered_lift(hasse.hasse_eval(beta, p), p)
            assert abs(ap) <= 2 * math.sqrt(p)


def test_supersingularity_pattern():
    # p = 1 mod 4: no supersingular beta; p = 3 mod 4: exactly 3 h(-p) of them
    for p in primes_in(5, 300):
        count = sum(1 for b in range(2, p) if hasse.is_supersingular(b, p))
        if p % 4 == 1:
            assert count == 0, p
        else:
            assert count == 3 * hasse.class_number(p), p


def test_supersingular_examples():
    assert hasse.is_supersingular(2, 7)
    assert not hasse.is_supersingular(2, 5)
    assert all(not hasse.is_supersingular(b, 13) for b in range(2, 12))


def test_factor_counts_witnesses():
    fc = hasse.factor_counts(7)
    assert (fc.N1, fc.h) == (3, 1) and fc.N1 == 3 * fc.h
    fc = hasse.factor_counts(5)
    assert (fc.N1, fc.N2, fc.h) == (0, 1, 2)
    fc = hasse.factor_counts(13)
    assert fc.N1 == 0


def test_factor_count_formulas():
    for p in primes_in(7, 300):
        fc = hasse.factor_counts(p)
        assert fc.N1 == hasse.expected_linear_count(p, fc.h), p
        assert hasse.quadratic_count_identity(fc), p
        assert fc.N1 + 2 * fc.N2 <= (p - 1) // 2


def test_printed_quadratic_formula_is_erratum():
    # the three-class formula disagrees with the gcd counts from p = 13 on
    fc = hasse.factor_counts(13)
    assert fc.N2 == 3 and hasse.printed_quadratic_count(13, fc.h) == 1


def test_class_numbers():
    assert hasse.class_number(7) == 1
    assert hasse.class_number(23) == 3
    assert hasse.class_number(5) == 2
    assert hasse.class_number_of_discriminant(-20) == 2
    assert hasse.class_number_of_discriminant(-4) == 1
    assert hasse.class_number_of_discriminant(-163) == 1


def test_squarefree():
    for p in primes_in(5, 500):
        assert hasse.squarefree_check(p), p
