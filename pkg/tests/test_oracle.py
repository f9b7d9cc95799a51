import json
import math
import random

import pytest

from charsum.algebra import FpPolynomial, legendre
from charsum.oracle import (
    CaseRecord,
    VerificationReport,
    affine_point_count,
    char_sum_coeffs,
    char_sum_direct,
    jacobsthal_direct,
    primes_in,
    verify_range,
)


def brute_char_sum(coeffs, p):
    """Independent oracle for the oracle: pure-python Euler-criterion sum."""
    total = 0
    for x in range(p):
        v = 0
        for c in reversed(coeffs):
            v = (v * x + c) % p
        if v:
            total += 1 if pow(v, (p - 1) // 2, p) == 1 else -1
    return total


def test_char_sum_examples():
    assert char_sum_coeffs((0, 1, 0, 1), 5) == -2  # x^3 + x
    assert char_sum_coeffs((0, 1, 0, 1), 7) == 0
    assert char_sum_coeffs((1, 3), 11) == 0  # 3x + 1


def test_char_sum_matches_pure_python():
    rng = random.Random(4)
    for p in primes_in(3, 120):
        for _ in range(4):
            deg = rng.randrange(0, 7)
            coeffs = [rng.randrange(p) for _ in range(deg + 1)]
            assert char_sum_coeffs(coeffs, p) == brute_char_sum(coeffs, p)


def test_sum_value_provenance():
    sv = char_sum_direct(FpPolynomial.make(5, [0, 1, 0, 1]))
    assert sv.value == -2 and sv.method == "oracle" and not sv.residue_only


def test_jacobsthal_examples():
    assert jacobsthal_direct("psi", 3, 1, 13).value == -2
    assert jacobsthal_direct("phi", 3, 1, 13).value == -3
    assert jacobsthal_direct("phi", 2, 1, 7).value == 0
    with pytest.raises(ValueError):
        jacobsthal_direct("phi", 2, 0, 7)
    with pytest.raises(ValueError):
        jacobsthal_direct("chi", 2, 1, 7)


def test_jacobsthal_matches_definition():
    for p in (13, 17, 29):
        for k in (2, 3, 4):
            for a in (1, 2):
                phi = sum(
                    legendre(x, p) * legendre(pow(x, k, p) + a, p) for x in range(p)
                )
                psi = sum(legendre(pow(x, k, p) + a, p) for x in range(p))
                assert jacobsthal_direct("phi", k, a, p).value == phi
                assert jacobsthal_direct("psi", k, a, p).value == psi


def test_affine_point_count():
    pc = affine_point_count(FpPolynomial.make(5, [0, 1, 0, 1]))
    assert (pc.affine, pc.projective) == (3, 4)
    pc = affine_point_count(FpPolynomial.make(7, [1, 0, 0, 0, 0, 0, 1]))
    assert (pc.affine, pc.projective) == (14, 15)
    # y^2 = x^2 over F_3: direct enumeration gives 5 points
    pc = affine_point_count(FpPolynomial.make(3, [0, 0, 1]))
    enumerated = sum(
        1 for x in range(3) for y in range(3) if (y * y - x * x) % 3 == 0
    )
    assert pc.affine == enumerated == 5


def test_twist_relation():
    # chi(s) = -1 twists negate the sum; #E + #E' = 2p + 2
    rng = random.Random(5)
    for p in primes_in(3, 300)[::5]:
        nonresidues = [s for s in range(2, p) if legendre(s, p) == -1]
        for _ in range(10):
            coeffs = [rng.randrange(p) for _ in range(3)] + [rng.randrange(1, p)]
            s = rng.choice(nonresidues)
            base = char_sum_coeffs(coeffs, p)
            twisted = char_sum_coeffs([c * s % p for c in coeffs], p)
            assert twisted == -base
            assert (p + 1 + base) + (p + 1 + twisted) == 2 * p + 2


def test_square_substitution_identity():
    # S(f(x^2)) = S(x f(x)) + S(f(x)), all three by direct summation
    rng = random.Random(6)
    for p in primes_in(3, 300)[::4]:
        for _ in range(20):
            deg = rng.randrange(1, 5)
            coeffs = [rng.randrange(p) for _ in range(deg)] + [rng.randrange(1, p)]
            f = FpPolynomial.make(p, coeffs)
            lhs = char_sum_coeffs(f.at_x_squared().coeffs, p)
            rhs = char_sum_coeffs(f.times_x().coeffs, p) + char_sum_coeffs(f.coeffs, p)
            assert lhs == rhs


def test_legendre_cubic_parameter_identities():
    # (ii) as printed; (i) needs the chi(beta) factor; (iii) as printed
    for p in primes_in(5, 120):
        for beta in range(2, p - 1):
            s_b = char_sum_coeffs((0, beta, (-(1 + beta)) % p, 1), p)
            binv = pow(beta, p - 2, p)
            if binv not in (0, 1):
                s_inv = char_sum_coeffs((0, binv, (-(1 + binv)) % p, 1), p)
                assert s_b == legendre(beta, p) * s_inv
            om = (1 - beta) % p
            if om not in (0, 1):
                s_om = char_sum_coeffs((0, om, (-(1 + om)) % p, 1), p)
                assert s_b == legendre(-1, p) * s_om
            b2 = beta * beta % p
            lan = (1 + beta) ** 2 % p * pow(4 * beta, p - 2, p) % p
            if b2 not in (0, 1) and lan not in (0, 1):
                s_b2 = char_sum_coeffs((0, b2, (-(1 + b2)) % p, 1), p)
                s_lan = char_sum_coeffs((0, lan, (-(1 + lan)) % p, 1), p)
                assert s_b2 == legendre(beta, p) * s_lan


def test_weil_sanity_on_squarefree():
    rng = random.Random(7)
    for p in primes_in(3, 2000)[::25]:
        for _ in range(3):
            deg = rng.randrange(3, 7)
            roots = rng.sample(range(p), min(deg, p - 1)) if p > deg else list(range(deg))
            f = FpPolynomial.from_roots(p, roots)
            s = char_sum_coeffs(f.coeffs, p)
            assert abs(s) <= (f.degree - 1) * math.sqrt(p) + 1e-9


def test_verify_range_report_shape():
    from charsum import closedform, families

    rep = verify_range(
        family="f1",
        p_max=60,
        param_grid=[{"a": a} for a in (1, 2)],
        evaluator=lambda prm, p: closedform.eval_cubic_cm(1, prm["a"], p),
        poly_builder=lambda prm, p: families.cubic_poly(1, prm["a"], p),
    )
    assert rep.cases and not rep.unexplained
    # deterministic JSON: records sorted by (p, params)
    keys = [(c.p, c.params) for c in rep.cases]
    assert keys == sorted(keys)
    d = json.loads(rep.to_json())
    assert set(d) == {"family", "p_max", "cases", "conventions", "errata"}
    csv_text = rep.to_csv()
    assert csv_text.count("\n") == len(rep.cases) + 1


def test_verify_range_empty():
    rep = verify_range(
        family="f1",
        p_max=2,
        param_grid=[{"a": 1}],
        evaluator=lambda prm, p: None,
        poly_builder=lambda prm, p: None,
    )
    assert rep.cases == [] and rep.errata == []


def test_report_errata_on_mismatch():
    rep = VerificationReport(family="x", p_max=10)
    rep.add(CaseRecord(p=5, params=(("a", 1),), closed=1, oracle=2, match=False))
    assert len(rep.errata) == 1 and rep.unexplained
