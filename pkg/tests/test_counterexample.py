import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

import zonalab as zl
from zonalab import DomainError, PreconditionError
from zonalab import counterexample as cx

SP2 = zl.make_space("Sphere", 2)
CP4 = zl.make_space("ComplexProjective", 4)

# |u - prefactor*S| / log N, fitted once per family (development run, 1.5x margin)
DECOMP_K = {"Sphere": 1.0, "ComplexProjective": 12.0}


def test_flat_series_construction():
    tab = zl.build_zonal_table(SP2, 16, 160)
    f = zl.build_fN(SP2, tab, 8)
    assert_allclose(f.coeffs * tab.lead_coeffs[:8], np.ones(8))
    one = zl.build_fN(SP2, tab, 1)
    assert_allclose(zl.evaluate(one, tab), np.ones_like(tab.theta), rtol=1e-12)
    with pytest.raises(PreconditionError):
        zl.build_fN(SP2, tab, 32)
    with pytest.raises(PreconditionError):
        zl.build_fN(CP4, tab, 8)


@pytest.mark.parametrize("family,d", [("Sphere", 2), ("ComplexProjective", 4), ("CayleyPlane", 16)])
def test_flat_series_sobolev_growth(family, d):
    """||f_N||_{H^alpha} / N^(alpha+1/2) stays within a flat per-family band."""
    space = zl.make_space(family, d)
    norms = zl.zonal_l2norms(space, 1024)
    c = zl.lead_coeffs(norms)
    for alpha in (0.0, 0.5):
        ratios = []
        for N in (64, 256, 1024):
            f = zl.SphericalSeries(space, cx.flat_series_coeffs(c, N))
            ratios.append(zl.sobolev_norm(f, alpha) / N ** (alpha + 0.5))
        assert max(ratios) / min(ratios) <= 1.5
        assert 0.1 <= min(ratios) and max(ratios) <= 100.0


def test_kappa_values():
    assert zl.kappa(SP2, 0.0) == pytest.approx(-(SP2.sigma_f + 0.5) * math.pi / 2)
    cay = zl.make_space("CayleyPlane", 16)
    assert zl.kappa(cay, math.pi) == pytest.approx(7 * math.pi / 4)
    theta = np.linspace(0.1, 3.0, 7)
    slopes = np.diff(zl.kappa(SP2, theta)) / np.diff(theta)
    assert_allclose(slopes, SP2.ell_f / 2)


def test_oscillatory_sum_small_cases():
    assert cx.oscillatory_sum_S(SP2, 1, 0.7, 0.3) == pytest.approx(
        math.cos(zl.kappa(SP2, 0.3)), rel=1e-12
    )
    # on the 3-sphere kappa(0) = -pi/2, so every cosine vanishes at theta = 0
    sp3 = zl.make_space("Sphere", 3)
    assert abs(cx.oscillatory_sum_S(sp3, 40, 0.0, 0.0)) < 1e-12
    assert abs(cx.oscillatory_sum_S(sp3, 17, 1.3, 0.0)) < 1e-12


def test_gauss_block_prediction_exact_single_block():
    for q, p in [(11, 2), (17, 4)]:
        pred = zl.gauss_block_prediction(SP2, q, q, p, 0.0)
        assert pred == pytest.approx(zl.gauss_sum_direct(q, int(SP2.ell), p), rel=1e-12)


def test_gauss_block_prediction_validation():
    with pytest.raises(DomainError):
        zl.gauss_block_prediction(SP2, 100, 10, 2, 0.0)  # even q
    with pytest.raises(DomainError):
        zl.gauss_block_prediction(SP2, 100, 11, 3, 0.0)  # odd p
    with pytest.raises(DomainError):
        zl.gauss_block_prediction(SP2, 100, 15, 6, 0.0)  # gcd(p, q) = 3
    with pytest.raises(DomainError):
        zl.gauss_block_prediction(SP2, 100, 11, 2, 1.0)  # xi too large


@pytest.mark.parametrize("space", [SP2, CP4], ids=["S2", "CP4"])
def test_gauss_block_prediction_error_budget(space):
    """|direct one-sided sum - prediction| <= 0.5*q across the scan family."""
    for N in (256, 1024):
        cs = zl.build_EN(N, 0.1)
        xi = 3 * math.pi / (32 * N)
        for iv in cs.intervals[::7]:
            theta = 2 * math.pi * iv.p / iv.q + xi
            direct = cx.oscillatory_sum_S_plus(space, N, 2 * math.pi / iv.q, theta)
            pred = zl.gauss_block_prediction(space, N, iv.q, iv.p, xi)
            assert abs(direct - pred) <= 0.5 * iv.q


def test_geometric_factor_lower_bound():
    # |sum_{j<B} e^{i j q xi}| >= cos(pi/16) * B whenever |q xi B| <= pi/8
    rng = np.random.default_rng(0)
    for _ in range(100):
        q = int(rng.integers(3, 100))
        B = int(rng.integers(1, 50))
        xi = float(rng.uniform(0, math.pi / 8 / max(q * B, 1)))
        geom = abs(np.exp(1j * q * xi * np.arange(B)).sum())
        assert geom >= math.cos(math.pi / 16) * B - 1e-9


@pytest.mark.parametrize("space", [SP2, CP4], ids=["S2", "CP4"])
def test_rational_time_sum_grows(space):
    """max over the interval family of |S(2*pi/q, mid)| clears c * N^(3/4)."""
    for N in (256, 1024):
        cs = zl.build_EN(N, 0.1)
        best = 0.0
        for iv in cs.intervals:
            theta = iv.lo + math.pi / (32 * N)
            best = max(best, abs(cx.oscillatory_sum_S(space, N, 2 * math.pi / iv.q, theta)))
        assert best >= 0.4 * N**0.75


def test_cosine_sign_coherence():
    """All geometric-block cosines share one sign with modulus >= cos(3*pi/8)."""
    floor = math.cos(3 * math.pi / 8)
    for space in (
        SP2,
        CP4,
        zl.make_space("QuaternionicProjective", 8),
        zl.make_space("CayleyPlane", 16),
    ):
        N = 512
        cs = zl.build_EN(N, 0.1)
        xi = 3 * math.pi / (32 * N)
        for iv in cs.intervals[::5]:
            j = np.arange(N // iv.q)
            vals = np.cos((space.sigma_f + 0.5) * math.pi / 2 - j * iv.q * xi)
            assert np.all(vals > 0) or np.all(vals < 0)
            assert np.abs(vals).min() >= floor - 1e-12


@pytest.mark.parametrize("space", [SP2, CP4], ids=["S2", "CP4"])
def test_propagated_value_matches_decomposition(space):
    """|u(theta, 2*pi/q)| agrees with prefactor*|S| up to the K*log N envelope."""
    K = DECOMP_K[space.family.value]
    N = 512
    norms = zl.zonal_l2norms(space, N)
    f = zl.SphericalSeries(space, cx.flat_series_coeffs(zl.lead_coeffs(norms), N))
    cs = zl.build_EN(N, 0.1)
    for iv in cs.intervals[::9]:
        theta = iv.lo + math.pi / (32 * N)
        t = 2 * math.pi / iv.q
        u = zl.evaluate_at(zl.propagate(f, zl.schrodinger(), t), [theta], norms)[0]
        s_val = cx.oscillatory_sum_S(space, N, t, theta)
        pref = math.sin(theta / 2) ** (-space.sigma_f - 0.5) * math.cos(theta / 2) ** (
            -space.tau_f - 0.5
        )
        assert abs(u - pref * s_val) <= K * math.log(N)
        assert abs(u) >= pref * abs(s_val) - K * math.log(N)


def test_divergence_scan_rejects_real_projective():
    with pytest.raises(DomainError, match="RealProjective"):
        zl.divergence_scan(zl.make_space("RealProjective", 2), [64, 128])


def test_divergence_scan_report_structure():
    rep = zl.divergence_scan(SP2, [128, 256], samples_per_interval=1)
    assert rep.n_values == (128, 256)
    for b in rep.best:
        assert b["t"] == pytest.approx(2 * math.pi / b["q"])
        assert math.isqrt(b["N"] - 1) + 1 <= b["q"] <= math.isqrt(4 * b["N"])
    assert rep.slope is not None
    assert all(r[4] > 0 for r in rep.rows)


def test_divergence_scan_monotone_in_samples():
    r1 = zl.divergence_scan(SP2, [128, 256], samples_per_interval=1)
    r3 = zl.divergence_scan(SP2, [128, 256], samples_per_interval=3)
    for b1, b3 in zip(r1.best, r3.best):
        assert b3["sup"] >= b1["sup"] - 1e-9


def test_divergence_scan_empty_family_is_a_missing_datum():
    rep = zl.divergence_scan(SP2, [2, 128])
    assert rep.best[0]["sup"] is None
    assert rep.best[1]["sup"] is not None
    assert rep.slope is None  # only one usable point


def test_divergence_report_serialization(tmp_path):
    rep = zl.divergence_scan(SP2, [64, 128])
    rep.to_json(tmp_path / "report.json")
    rep.rows_to_csv(tmp_path / "rows.csv")
    raw = np.loadtxt(tmp_path / "rows.csv", delimiter=",", skiprows=1, ndmin=2)
    assert raw.shape[0] == len(rep.rows)
    assert (tmp_path / "report.json").read_text().startswith("{")
