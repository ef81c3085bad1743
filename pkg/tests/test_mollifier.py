"""Arithmetic tables, mollifier coefficients y_k, and the quadratic form S.

Everything here is a finite sum, so oracles are literal re-summations in
plain Python; the frozen constants were produced by those oracles once and
pinned.
"""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rankbound.mollifier import (
    ArithTable,
    MollifierParams,
    SieveLimitError,
    arith,
    g_cap,
    s_sums,
    truncated_zeta_check,
    truncated_zeta_error_scale,
    y_k_bruteforce,
    zeta_vals,
)

ZETA_11 = 10.5844484649508098263864007917
ZETA_PRIME_11 = -99.9281630757707224275721438547

# s_sums at M = 10^5, a = 1/2; finite rational-weight sums, frozen exactly.
S_AT = {
    0.02: (3.782774737173384, 0.30053475448136296, 0.6850898558002992, 2.7971501268917214),
    0.05: (1.5627541007917272, 0.5866530570263391, 0.3911037105917367, 0.5849973331736514),
    0.1: (1.0838303041767696, 0.8237629677499091, 0.15747253035549086, 0.10259480607136943),
}


@pytest.fixture(scope="module")
def table():
    return ArithTable(100000)


@pytest.fixture(scope="module")
def small_table():
    return ArithTable(400)


def _trial_factorize(n):
    out, p = [], 2
    while n > 1:
        if n % p:
            p += 1
            continue
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def _trial_mu(n):
    fac = _trial_factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def test_sieve_against_trial_division(small_table):
    for n in range(1, 201):
        assert small_table.factorize(n) == _trial_factorize(n)
        assert int(small_table.mu[n]) == _trial_mu(n)
        divs = small_table.divisors(n)
        assert sorted(divs) == [d for d in range(1, n + 1) if n % d == 0]


def test_sieve_limits(small_table):
    with pytest.raises(SieveLimitError):
        small_table.factorize(401)
    with pytest.raises(SieveLimitError):
        small_table.check_n(0)
    with pytest.raises(ValueError):
        ArithTable(1)


def test_params_validation():
    MollifierParams(100, 0.5, 0.05)
    for M, a, d in ((9, 0.5, 0.05), (100, 0.0, 0.05), (100, 1.0, 0.05), (100, 0.5, 0.0)):
        with pytest.raises(ValueError):
            MollifierParams(M, a, d)


def test_arith_closed_forms(small_table):
    # n = 6, v = 1/2: two prime factors, squarefree
    omega, nu, eta = arith(small_table, 6, 0.5)
    want_omega = 1.0 / ((1.0 - 2.0**-0.5) * (1.0 - 3.0**-0.5))
    want_nu = (1.0 - 2.0**-2.0) * (1.0 - 3.0**-2.0) / 6.0
    want_eta = sum(
        math.cos(0.5 * (2.0 * math.log(u) - math.log(6.0))) for u in (1, 2, 3, 6)
    )
    assert omega == pytest.approx(want_omega, abs=1e-14)
    assert nu == pytest.approx(want_nu, abs=1e-16)
    assert eta == pytest.approx(want_eta, abs=1e-14)

    # v = 0 blows up omega, kills nothing else; 12 is not squarefree
    omega, nu, eta = arith(small_table, 12, 0.0)
    assert omega == math.inf
    assert nu == 0.0
    assert eta == 6.0  # tau(12)


@given(st.integers(2, 400), st.floats(-2.0, 2.0))
@settings(max_examples=80, deadline=None)
def test_eta_bounded_by_divisor_count(n, v):
    tbl = ArithTable(400)
    _, _, eta = arith(tbl, n, v)
    tau = len(tbl.divisors(n))
    assert abs(eta) <= tau + 1e-12
    _, _, eta0 = arith(tbl, n, 0.0)
    assert eta0 == tau


def test_g_cap_shape():
    M, a = 1000.0, 0.5
    knee = M**a
    assert g_cap(M, a, 0.5) == 1.0
    assert g_cap(M, a, knee) == 1.0
    assert g_cap(M, a, M) == 0.0
    assert g_cap(M, a, 2.0 * M) == 0.0
    mid = g_cap(M, a, math.sqrt(knee * M))
    assert mid == pytest.approx(0.5, abs=1e-12)
    xs = [knee * (M / knee) ** (k / 20.0) for k in range(21)]
    vals = [g_cap(M, a, x) for x in xs]
    assert all(u >= v - 1e-15 for u, v in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        g_cap(M, a, 0.0)
    with pytest.raises(ValueError):
        g_cap(1.0, a, 2.0)


def _y_k_naive(table, k, p):
    # literal triple loop straight from the definition; slow but transparent
    M, a, delta, t = p.M, p.a, p.delta, p.t
    mu = table.mu
    if k > M or mu[k] == 0:
        return 0j
    total = 0j
    for m in range(1, M // k + 1):
        if mu[m] == 0:
            continue
        for n in range(1, M // (k * m) + 1):
            kmn = k * m * n
            if mu[kmn] == 0:
                continue
            eta = sum(
                math.cos(t * (2.0 * math.log(u) - math.log(m)))
                for u in table.divisors(m)
            )
            g = g_cap(float(M), a, float(kmn))
            term = (
                int(mu[m])
                * eta
                * n ** complex(0.0, -t)
                * (m * n) ** complex(-(1.0 + 2.0 * delta), -t)
                * g
            )
            total += term
    return int(mu[k]) * k ** complex(-delta, -t) * total


@pytest.mark.parametrize("k", [1, 2, 6, 9, 15])
def test_y_k_against_naive_sum(small_table, k):
    p = MollifierParams(200, 0.5, 0.07, t=0.5)
    got = y_k_bruteforce(small_table, k, p)
    want = _y_k_naive(small_table, k, p)
    assert cmath.isclose(got, want, abs_tol=1e-12) or got == want == 0j


def test_y_k_support(small_table):
    p = MollifierParams(200, 0.5, 0.07)
    assert y_k_bruteforce(small_table, 4, p) == 0j  # not squarefree
    assert y_k_bruteforce(small_table, 9, p) == 0j
    assert y_k_bruteforce(small_table, 201, p) == 0j  # beyond M
    with pytest.raises(ValueError):
        y_k_bruteforce(small_table, 0, p)


def test_y_k_main_term_trend(table):
    # y_k should track mu(k) omega_{1+2delta}(k) k^-delta / zeta(1+2delta),
    # with the relative gap shrinking for small k and staying moderate for
    # the composite ones at M = 10^5.
    delta = 0.1
    z, _ = zeta_vals(delta)
    om = table.omega_table(1.0 + 2.0 * delta)
    p = MollifierParams(100000, 0.5, delta)
    for k, cap in ((1, 0.01), (2, 0.01), (3, 0.01), (6, 0.08), (10, 0.08), (14, 0.08), (15, 0.08)):
        y = y_k_bruteforce(table, k, p)
        assert y.imag == 0.0  # t = 0
        main = int(table.mu[k]) * float(om[k]) * k ** (-delta) / z
        assert abs(y.real - main) / abs(main) < cap


@pytest.mark.parametrize("delta", sorted(S_AT))
def test_s_sums_frozen(table, delta):
    ss = s_sums(table, MollifierParams(100000, 0.5, delta))
    want = S_AT[delta]
    for got, ref in zip((ss.S, ss.S1, ss.S2, ss.S3), want):
        assert got == pytest.approx(ref, abs=1e-9)
    assert ss.S == pytest.approx(ss.S1 + ss.S2 + ss.S3, abs=1e-12)


def test_s_sums_independent_of_t(table):
    p0 = MollifierParams(100000, 0.5, 0.05, t=0.0)
    p5 = MollifierParams(100000, 0.5, 0.05, t=0.5)
    assert s_sums(table, p0) == s_sums(table, p5)


@pytest.mark.parametrize("delta", [0.05, 0.1])
def test_s_matches_closed_form(table, delta):
    # allowance 10 delta M^(-2 a delta); at delta = 0.02 the closed form's
    # zeta'/zeta factor is still far from its limit at M = 10^5 and the gap
    # genuinely exceeds the allowance, so that point is exercised (and
    # reported) by the acceptance suite instead
    ss = s_sums(table, MollifierParams(100000, 0.5, delta))
    assert abs(ss.S - ss.closedS) <= 10.0 * delta * 100000 ** (-delta)


def test_truncated_zeta_identity(table):
    resid = truncated_zeta_check(table, 5000.5, 0.05)
    assert resid == pytest.approx(0.2814669950242594, abs=1e-9)
    scale = truncated_zeta_error_scale(5000.5, 0.05)
    assert scale == pytest.approx(0.1553552614484171, abs=1e-12)
    assert resid <= 10.0 * scale
    with pytest.raises(ValueError):
        truncated_zeta_check(table, 5000.0, 0.05)  # integer M' excluded


def test_zeta_values():
    z, zp = zeta_vals(0.05)
    assert z == pytest.approx(ZETA_11, abs=1e-12)
    assert zp == pytest.approx(ZETA_PRIME_11, abs=1e-9)
    z2, _ = zeta_vals(0.5)
    assert z2 == pytest.approx(math.pi * math.pi / 6.0, abs=1e-13)
    # derivative consistent with a centered difference of zeta itself;
    # zeta_vals is parametrized by delta with s = 1 + 2 delta, hence the 2
    h = 1e-5
    za, _ = zeta_vals(0.05 + h / 2.0)
    zb, _ = zeta_vals(0.05 - h / 2.0)
    assert zp == pytest.approx((za - zb) / (2.0 * h), abs=1e-4)
    for bad in (0.0, -0.1, 1.5):
        with pytest.raises(ValueError):
            zeta_vals(bad)
