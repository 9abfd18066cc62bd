"""Lattice zeta sums: direct/spectral agreement, continuation calibration
(oracle-first), symmetry cancellations, and the reconstruction identity."""

import cmath
import math

import numpy as np
import pytest

from hlawka.errors import PoleError, ValidationError
from hlawka.lattice import build_spectrum
from hlawka.shapes import Mat2, act, circle, cosine_series, ellipse, odd_shape, square
from hlawka.special import riemann_zeta
from hlawka.zeta import (
    QuadForm2,
    classical_eisenstein,
    disc_tail_correction,
    eisenstein_fq_continued,
    eisenstein_fq_truncated,
    ellipse_form,
    epstein_continued,
    epstein_direct,
    epstein_lambda,
    hlawka_direct,
    hlawka_direct_many,
    hlawka_from_spectrum,
    reconstruct_hlawka,
)

IDENT = QuadForm2.identity()

# classical product for the identity-form sum at s=2, from independently
# computed factors: zeta(2) = pi^2/6 exactly, beta(2) by its alternating
# series with the first-omitted-term bound (error < 2.5e-11)
_K = np.arange(200_000)
_CATALAN = float(np.sum((-1.0) ** _K / (2.0 * _K + 1.0) ** 2))
CIRCLE_S2 = 4.0 * (math.pi**2 / 6.0) * _CATALAN


def brute_circle_sum(s: float, radius: int) -> float:
    """Independent oracle: row-wise accumulation, no shape machinery."""
    total = 0.0
    r2 = radius * radius
    for n in range(-radius, radius + 1):
        m = np.arange(-radius, radius + 1, dtype=np.float64)
        q = m * m + float(n * n)
        mask = (q > 0) & (q <= r2)
        total += float(np.sum(q[mask] ** (-s)))
    return total


# ---------------------------------------------------------------------------
# direct sums
# ---------------------------------------------------------------------------


def test_hlawka_direct_circle_value(unit_circle):
    res = hlawka_direct(unit_circle, 2.0, 600.0)
    # brute force over the same disc: same point set, independent path
    oracle = brute_circle_sum(2.0, 600)
    assert abs(res.value - oracle) < 1e-12
    # against the classical product, within the documented tail
    assert abs(res.value - CIRCLE_S2) <= res.error_estimate
    assert abs(res.value - CIRCLE_S2) < 1e-4


def test_hlawka_direct_rejects_bad_inputs(unit_circle):
    with pytest.raises(ValidationError):
        hlawka_direct(unit_circle, 1.0, 100.0)
    with pytest.raises(ValidationError):
        hlawka_direct(unit_circle, 2.0, 5.0)
    with pytest.raises(ValidationError):
        hlawka_direct(unit_circle, 2.0, 1e9)


def test_hlawka_direct_square_closed_form(square_shape):
    res = hlawka_direct(square_shape, 2.0, 1000.0)
    target = 8.0 * riemann_zeta(3.0)
    assert abs(res.value - target) <= res.error_estimate + 1e-8


def test_hlawka_direct_threads_bit_identical(square_shape):
    r1 = hlawka_direct(square_shape, 2.0 + 0.5j, 300.0, threads=1)
    r4 = hlawka_direct(square_shape, 2.0 + 0.5j, 300.0, threads=4)
    assert r1.value == r4.value


def test_hlawka_many_shares_enumeration(square_shape):
    many = hlawka_direct_many(square_shape, [2.0, 3.0], 300.0)
    assert many[0].value == hlawka_direct(square_shape, 2.0, 300.0).value
    assert many[1].value == hlawka_direct(square_shape, 3.0, 300.0).value


def test_scaling_law_at_equal_truncation():
    # Z_{c r}(s) = c^(2s) Z_r(s), identical disc, relative error <= 1e-12
    c = 1.7
    scale = Mat2.diagonal(c, c)
    for shape in (circle(1.0), ellipse(1.3, 1.0), square(), odd_shape(),
                  cosine_series([1.0, 0, 0, 0, 0.1])):
        scaled = act(scale, shape)
        for s in (2.0, 3.0, 2.0 + 1.0j):
            z = hlawka_direct(shape, s, 150.0).value
            zc = hlawka_direct(scaled, s, 150.0).value
            target = c ** (2.0 * s) * z
            assert abs(zc - target) / abs(target) <= 1e-12


def test_quarter_turn_invariance():
    # Z is invariant under rotating the region by k pi/2 (lattice symmetry)
    for shape in (odd_shape(), cosine_series([1.0, 0.1, 0, 0.05])):
        rotated = act(Mat2.rotation(math.pi / 2.0), shape)
        z1 = hlawka_direct(shape, 2.0, 300.0).value
        z2 = hlawka_direct(rotated, 2.0, 300.0).value
        assert abs(z1 - z2) / abs(z1) <= 1e-10


def test_hlawka_from_spectrum_matches_direct_circle(unit_circle):
    # for the circle t(p) = |p|, so the spectrum to t_max equals the disc
    spec = build_spectrum(unit_circle, 80.0)
    for s in (2.0, 2.5 + 1.0j):
        via_spec = hlawka_from_spectrum(spec, s).value
        direct = hlawka_direct(unit_circle, s, 80.0).value
        assert abs(via_spec - direct) <= 1e-12 * abs(direct)


def test_hlawka_from_spectrum_square_partial_sum(square_shape):
    spec = build_spectrum(square_shape, 50.0)
    got = hlawka_from_spectrum(spec, 2.0).value
    want = sum(8.0 * k / k**4 for k in range(1, 51))
    assert abs(got - want) < 1e-12
    # large s: first entry dominates
    big = hlawka_from_spectrum(spec, 10.0).value
    assert abs(big - 8.0) < 1e-4


def test_odd_and_square_spectra_give_equal_zeta():
    s_sq = build_spectrum(square(), 50.0)
    s_od = build_spectrum(odd_shape(), 50.0)
    for s in (2.0, 3.0, 2.0 + 1.0j):
        z1 = hlawka_from_spectrum(s_sq, s).value
        z2 = hlawka_from_spectrum(s_od, s).value
        assert abs(z1 - z2) <= 1e-14 * abs(z1)


# ---------------------------------------------------------------------------
# Epstein zeta
# ---------------------------------------------------------------------------


def test_epstein_identity_matches_circle(unit_circle):
    a = epstein_direct(IDENT, 2.0, 400.0)
    b = hlawka_direct(unit_circle, 2.0, 400.0)
    assert abs(a.value - b.value) < 1e-13


def test_epstein_homogeneity():
    c = 2.5
    u = QuadForm2(c, 0.0, c)
    a = epstein_direct(u, 2.0 + 1.0j, 200.0).value
    b = epstein_direct(IDENT, 2.0 + 1.0j, 200.0).value
    target = c ** -(2.0 + 1.0j) * b
    assert abs(a - target) <= 1e-13 * abs(target)


def test_epstein_equals_ellipse_hlawka():
    # the ellipse (a, b) has form diag(1/a^2, 1/b^2): same dilation times
    u = ellipse_form(2.0, 1.0)
    assert abs(u.u11 - 0.25) < 1e-15 and abs(u.u22 - 1.0) < 1e-15
    a = epstein_direct(u, 2.0, 500.0).value
    b = hlawka_direct(ellipse(2.0, 1.0), 2.0, 500.0).value
    assert abs(a - b) <= 1e-12 * abs(a)


def test_epstein_continued_calibration_against_direct():
    # oracle-first: the continuation must reproduce tail-corrected direct
    # sums in the convergent region before any use beyond it
    for u in (IDENT, ellipse_form(2.0, 1.0), QuadForm2(2.0, 0.5, 1.0)):
        for s in (2.0, 3.0, 2.5 + 1.5j):
            cont = epstein_continued(u, s).value
            direct = epstein_direct(u, s, 1500.0)
            corrected = direct.value + disc_tail_correction(u, s, 1500.0)
            assert abs(cont - corrected) <= 1e-9 * abs(cont)
            assert abs(cont - direct.value) <= direct.error_estimate * 1.05


def test_epstein_lambda_functional_equation():
    rng = np.random.default_rng(41)
    for _ in range(20):
        # random SPD form with moderate conditioning
        a = rng.uniform(0.5, 2.0)
        d = rng.uniform(0.5, 2.0)
        b = rng.uniform(-0.6, 0.6) * math.sqrt(a * d)
        u = QuadForm2(a, b, d)
        s = complex(rng.uniform(-2.0, 3.0), rng.uniform(0.2, 10.0))
        lhs = epstein_lambda(u, s).value
        rhs = epstein_lambda(u.inverse(), 1.0 - s).value / math.sqrt(u.det)
        assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), abs(rhs))


def test_epstein_residue_at_one():
    # numeric residue with two step sizes and Richardson
    def f(h):
        up = epstein_continued(IDENT, 1.0 + h).value
        dn = epstein_continued(IDENT, 1.0 - h).value
        return 0.5 * (h * up - h * dn)

    res = (4.0 * f(1e-4) - f(2e-4)) / 3.0
    assert abs(res - math.pi) < 1e-2 * math.pi


def test_epstein_pole_signals():
    for s in (0.0, 1.0, 1e-9, 1.0 + 1e-9):
        with pytest.raises(PoleError):
            epstein_continued(IDENT, s)


def test_epstein_rejects_ill_conditioned():
    with pytest.raises(ValidationError):
        epstein_continued(QuadForm2(1e9, 0.0, 1e-9 * 0.999), 2.0)


def test_epstein_trivial_zeros():
    # E = Lambda / (pi^-s Gamma(s)) vanishes at nonpositive integer s
    assert epstein_continued(IDENT, -1.0).value == 0.0


# ---------------------------------------------------------------------------
# twisted components
# ---------------------------------------------------------------------------


def test_fq_truncated_q0_equals_epstein(unit_circle):
    a = eisenstein_fq_truncated(0, 0.0, 2.0, 300.0).value
    b = epstein_direct(IDENT, 2.0, 300.0).value
    assert abs(a - b) < 1e-13


def test_fq_vanishing_components():
    for q in (1, 2, 3, 5, 6, 7, 10):
        res = eisenstein_fq_truncated(q, 0.0, 2.0, 300.0)
        assert abs(res.value) <= 1e-12
        assert res.truncation.get("vanishes_identically") is True


def test_fq_truncated_against_independent_order_oracle():
    # same disc, but summed point-by-point in angular order with cmath
    radius = 60
    q, s = 4, 2.0
    pts = []
    for m in range(-radius, radius + 1):
        for n in range(-radius, radius + 1):
            n2 = m * m + n * n
            if 0 < n2 <= radius * radius:
                pts.append((math.atan2(n, m), n2, m, n))
    pts.sort()
    oracle = 0.0 + 0.0j
    for ang, n2, m, n in pts:
        oracle += cmath.exp(1j * q * ang) / n2**s
    oracle *= (-1j) ** q
    mine = eisenstein_fq_truncated(q, 0.0, s, float(radius)).value
    assert abs(mine - oracle) < 1e-14 * abs(oracle) + 1e-14


def test_fq_rotation_covariance():
    rng = np.random.default_rng(42)
    base = eisenstein_fq_truncated(4, 0.0, 2.0, 300.0).value
    for _ in range(8):
        phi = rng.uniform(0, 2 * math.pi)
        rotated = eisenstein_fq_truncated(4, phi, 2.0, 300.0).value
        assert abs(rotated - cmath.exp(4j * phi) * base) <= 1e-12


def test_fq_continued_oracle_calibration():
    # the continuation must match the disc sum at s = 2, 3, 4 to 1e-9
    for s in (2.0, 3.0, 4.0):
        cont = eisenstein_fq_continued(4, s).value
        trunc = eisenstein_fq_truncated(4, 0.0, s, 1500.0).value
        assert abs(cont - trunc) <= 1e-9 * abs(cont)


def test_fq_continued_entire_at_critical_line():
    val = eisenstein_fq_continued(8, 0.5).value
    assert np.isfinite(val.real) and np.isfinite(val.imag)


def test_fq_continued_rejects_bad_q():
    for q in (2, 3, 6, -4, 0):
        with pytest.raises(ValidationError):
            eisenstein_fq_continued(q, 2.0)


# ---------------------------------------------------------------------------
# classical series
# ---------------------------------------------------------------------------


def test_classical_eisenstein_at_i():
    res = classical_eisenstein(1j, 2.0)
    expected = CIRCLE_S2 / (2.0 * riemann_zeta(4.0).real)
    assert abs(res.value - expected) < 1e-9


def test_classical_eisenstein_circle_identity():
    # Z_circle(s) = 2 c^(2s) zeta(2s) E(i, s): left side by continuation,
    # right side by the direct lattice sum plus its integral tail correction
    c, s = 1.7, 2.0
    lhs = c ** (2 * s) * epstein_continued(IDENT, s).value
    direct = classical_eisenstein(1j, s, method="direct", radius=1000.0)
    rhs = 2.0 * c ** (2 * s) * riemann_zeta(2 * s) * direct.value
    rhs += c ** (2 * s) * disc_tail_correction(IDENT, s, 1000.0)
    assert abs(lhs - rhs) <= 1e-9 * abs(lhs)


def test_classical_eisenstein_periodicity():
    a = classical_eisenstein(1j, 2.0).value
    b = classical_eisenstein(1j + 1.0, 2.0).value
    assert abs(a - b) <= 1e-9 * abs(a)


def test_classical_eisenstein_requires_upper_half_plane():
    with pytest.raises(ValidationError):
        classical_eisenstein(1.0 - 1j, 2.0)


# ---------------------------------------------------------------------------
# reconstruction
# ---------------------------------------------------------------------------


def test_reconstruct_circle_single_term(unit_circle):
    rec = reconstruct_hlawka(unit_circle, 2.0, 8, mode="truncated", radius=500.0)
    direct = hlawka_direct(unit_circle, 2.0, 500.0)
    assert abs(rec.value - direct.value) <= 1e-10 * abs(direct.value)


def test_reconstruct_ellipse_truncated(thin_ellipse):
    rec = reconstruct_hlawka(thin_ellipse, 2.0, 40, mode="truncated", radius=800.0)
    direct = hlawka_direct(thin_ellipse, 2.0, 800.0)
    assert abs(rec.value - direct.value) <= 1e-10 * abs(direct.value)


def test_reconstruct_bump_continued(bump_shape):
    rec = reconstruct_hlawka(bump_shape, 2.0, 40, mode="continued")
    direct = hlawka_direct(bump_shape, 2.0, 1500.0)
    assert abs(rec.value - direct.value) <= direct.error_estimate + 1e-9


def test_reconstruct_warns_on_kinked_shape(square_shape):
    with pytest.warns(UserWarning):
        rec = reconstruct_hlawka(square_shape, 2.0, 16, mode="truncated", radius=300.0)
    assert rec.truncation["slow_coefficient_decay"] is True


def test_eval_result_json_shape(unit_circle):
    res = hlawka_direct(unit_circle, 2.0, 100.0)
    d = res.to_json_dict()
    assert set(d) == {"value", "error_estimate", "truncation"}
    assert set(d["value"]) == {"re", "im"}
