"""Numeric evaluation routes checked against each other and external anchors.

The independent anchors: the integer factorial lattice (exact integer
products from the recurrence, computed here with math.factorial), classical
closed forms (Gamma(1/2) = sqrt(pi), the Glaisher-Kinkelin value of the
Barnes function at 1/2), the stacked-difference identity that collapses the
whole hierarchy to log(1+1/z), and the Hurwitz-zeta-series oracle, which
shares no code with the product or shifted-formula routes.  Error estimates
are treated as part of the contract: wherever a route is inaccurate by
design, the test asserts the estimate owns up to it.
"""

import math
import warnings
from fractions import Fraction
from functools import lru_cache

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multigamma.constants import Precision, zeta_prime_neg
from multigamma.conventions import ConventionSet
from multigamma.evaluate import (
    CalibrationError,
    EvalConfig,
    LogValue,
    SectorError,
    SingularInputError,
    barnes_zeta_oracle,
    calibrate_conventions,
    euler_partial,
    extrapolate,
    gauss_partial,
    log_g0,
    log_gamma_r,
    log_multigamma,
    log_multigamma_asymptotic,
    multiple_sine,
    multiplication_residual,
)

# Fast config for bulk checks; the default (digits=30, N=2^14) where a test
# needs the extra headroom.
CFG = EvalConfig(precision=Precision(digits=20), truncation_n=2**12)
CFG30 = EvalConfig(precision=Precision(digits=30))


@lru_cache(maxsize=None)
def resolved():
    return calibrate_conventions(CFG)


def cfg_resolved():
    return EvalConfig(precision=Precision(digits=20), truncation_n=2**12,
                      conventions=resolved())


# ---------------------------------------------------------------------------
# Exact anchors: normalization and the integer lattice
# ---------------------------------------------------------------------------


def test_normalization_at_one_is_exact():
    for r in (1, 2, 3):
        got = log_multigamma(r, 1, CFG)
        assert got.value == 0


def test_gauss_partial_at_zero_argument_is_exactly_zero():
    for n in (1, 4, 32):
        assert gauss_partial(1, 0, n, CFG).value == 0
        assert euler_partial(1, 0, n, CFG).value == 0


def superfactorial(n):
    """G_2(n) = prod_{k <= n-2} k! for integer n >= 2, exactly."""
    acc = 1
    for k in range(1, n - 1):
        acc *= math.factorial(k)
    return acc


def g3_integer(n):
    """G_3(n) for integer n >= 2 by the recurrence G_3(m+1) = G_2(m) G_3(m)."""
    acc = 1
    for m in range(2, n):
        acc *= superfactorial(m)
    return acc


def test_superfactorial_lattice():
    with mpmath.workdps(40):
        for n in range(2, 9):
            want = mpmath.log(superfactorial(n))
            got = log_multigamma(2, n, CFG30)
            assert abs(got.value - want) <= 1e-12 * max(1, abs(want))


def test_third_level_integer_lattice():
    assert [g3_integer(n) for n in range(2, 7)] == [1, 1, 1, 2, 24]
    # The third level inherits the base values of the two below it, each
    # entering ~N times, so its floor is ~N^2 x (level-1 base error): about
    # 1e-12 at the default ladder — far inside tolerance, but not 1e-15.
    with mpmath.workdps(40):
        for n in range(2, 7):
            want = mpmath.log(g3_integer(n))
            got = log_multigamma(3, n, CFG30)
            assert abs(got.value - want) <= 2e-11


def test_gamma_at_half_is_sqrt_pi():
    with mpmath.workdps(40):
        want = mpmath.log(mpmath.pi) / 2
        got = log_multigamma(1, mpmath.mpf("0.5"), CFG30)
        assert abs(got.value - want) < 1e-17
        assert abs(got.value - want) <= 10 * got.err_est


def test_barnes_function_at_half_glaisher_form():
    # G_2(1/2) = 2^(1/24) e^(1/8) pi^(-1/4) A^(-3/2), ln A = 1/12 - zeta'(-1)
    with mpmath.workdps(40):
        ln_a = mpmath.mpf(1) / 12 - zeta_prime_neg(1, Precision(digits=30))
        want = (mpmath.log(2) / 24 + mpmath.mpf(1) / 8
                - mpmath.log(mpmath.pi) / 4 - 3 * ln_a / 2)
        got = log_multigamma(2, mpmath.mpf("0.5"), CFG30)
        assert abs(got.value - want) < 1e-15


# ---------------------------------------------------------------------------
# Recurrence and cross-route consistency
# ---------------------------------------------------------------------------


RECURRENCE_GRID = [mpmath.mpf("0.5"), mpmath.mpf("1.5"), mpmath.mpf("2.5"), mpmath.mpc(1, 1)]


def test_recurrence_residual_on_grid():
    with mpmath.workdps(40):
        for r in (1, 2, 3):
            bound = 1e-12 if r <= 2 else 1e-10  # third level: amplified bases
            for z in RECURRENCE_GRID:
                lhs = log_multigamma(r, z + 1, CFG).value
                rhs = log_multigamma(r - 1, z, CFG).value + log_multigamma(r, z, CFG).value
                assert abs(lhs - rhs) < bound, (r, z)


def test_stacked_differences_collapse_to_log_ratio():
    # Applying the forward difference r+1 times to log G_r peels one level
    # per application and lands on log G_0(z+1) - log G_0(z) = log(1 + 1/z).
    with mpmath.workdps(40):
        for r in (1, 2, 3):
            bound = 1e-11 if r <= 2 else 1e-9  # third level: amplified bases
            for z0 in (mpmath.mpf("0.7"), mpmath.mpf("1.3")):
                acc = mpmath.mpf(0)
                for k in range(r + 2):
                    sign = (-1) ** (r + 1 - k)
                    acc += sign * math.comb(r + 1, k) * log_multigamma(r, z0 + k, CFG).value
                assert abs(acc - mpmath.log(1 + 1 / z0)) < bound, (r, z0)


def test_gauss_and_euler_partials_agree_to_rounding():
    # Algebraically identical partial values accumulated in different orders.
    with mpmath.workdps(40):
        for z in (mpmath.mpf("0.5"), mpmath.mpc("1.5", "0.5")):
            for r in (1, 2):
                for n in (16, 128, 1024):
                    g = gauss_partial(r, z, n, CFG).value
                    e = euler_partial(r, z, n, CFG).value
                    assert abs(g - e) <= 1e-22 * max(1, abs(g)), (r, z, n)


def test_three_routes_agree_within_stated_errors():
    with mpmath.workdps(40):
        cfg = EvalConfig(precision=Precision(digits=30), shift_radius=20)
        for r in (1, 2):
            z = mpmath.mpf(20)
            g = extrapolate_route = log_multigamma(r, z + 1, cfg)
            a = log_multigamma_asymptotic(r, z, cfg)
            tol = 10 * max(extrapolate_route.err_est, a.err_est)
            assert abs(g.value - a.value) <= tol, r


@settings(max_examples=12, deadline=None)
@given(
    r=st.integers(min_value=1, max_value=2),
    z=st.floats(min_value=0.2, max_value=3.0, allow_nan=False, allow_infinity=False),
)
def test_recurrence_property(r, z):
    with mpmath.workdps(30):
        zm = mpmath.mpf(z)
        lhs = log_multigamma(r, zm + 1, CFG).value
        rhs = log_multigamma(r - 1, zm, CFG).value + log_multigamma(r, zm, CFG).value
        assert abs(lhs - rhs) < 1e-11


def test_complex_and_real_inputs_agree_on_the_real_axis():
    with mpmath.workdps(30):
        a = log_multigamma(2, mpmath.mpf(2.5), CFG).value
        b = log_multigamma(2, mpmath.mpc(2.5, 0), CFG).value
        assert abs(a - b) < 1e-18


# ---------------------------------------------------------------------------
# Extrapolation helper
# ---------------------------------------------------------------------------


def lv(x, method="gauss"):
    return LogValue(value=mpmath.mpf(x), method=method, err_est=None)


def test_extrapolate_constant_sequence():
    with mpmath.workdps(30):
        out = extrapolate([lv(3)] * 5, order=2)
        assert out.value == 3
        assert out.err_est == 0


def test_extrapolate_kills_pure_1_over_n_term():
    with mpmath.workdps(30):
        seq = [lv(1 + mpmath.mpf(1) / n) for n in (64, 128, 256, 512)]
        out = extrapolate(seq, order=1)
        assert abs(out.value - 1) < mpmath.mpf(10) ** -25


def test_extrapolate_rejects_mixed_tags_and_short_ladders():
    with mpmath.workdps(30):
        with pytest.raises(ValueError, match="mixed method tags"):
            extrapolate([lv(1, "gauss"), lv(1, "euler")], order=0)
        with pytest.raises(ValueError, match="at least order"):
            extrapolate([lv(1)] * 3, order=4)
        with pytest.raises(ValueError, match=">= 0"):
            extrapolate([lv(1)] * 3, order=-1)


# ---------------------------------------------------------------------------
# Shifted-formula route: honesty of the error model
# ---------------------------------------------------------------------------


def test_shifted_route_estimate_covers_actual_error_r1():
    with mpmath.workdps(40):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            a = log_multigamma_asymptotic(1, mpmath.mpf(20), CFG30)
        want = mpmath.loggamma(21)
        assert abs(a.value - want) <= a.err_est
        assert a.err_est < 1e-4


def test_shifted_route_descent_saturation_is_owned_by_the_estimate():
    # For r >= 2 the descent reuses one far anchor per level, so the final
    # absolute error saturates near the level-1 remainder constant (~1/12)
    # no matter the radius.  The value is off; the estimate must say so.
    with mpmath.workdps(40):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            a = log_multigamma_asymptotic(2, mpmath.mpf(1), CFG30)
        assert abs(a.value) > 0.01          # genuinely inaccurate...
        assert abs(a.value) <= a.err_est    # ...and the estimate covers it


def test_front_door_prefers_product_route_at_small_arguments():
    got = log_multigamma(2, 4, EvalConfig(precision=Precision(digits=30), cross_validate=True))
    assert got.method == "gauss"
    assert got.cross_check is not None
    with mpmath.workdps(40):
        assert abs(got.value - mpmath.log(2)) < 1e-15


def test_front_door_switches_to_shifted_route_far_out():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        got = log_multigamma(1, mpmath.mpf(5001), CFG30)
    with mpmath.workdps(40):
        assert got.method == "asymptotic"
        assert abs(got.value - mpmath.loggamma(5001)) <= 10 * got.err_est


def test_radius_cap_warning_mentions_the_limit():
    cfg = EvalConfig(precision=Precision(digits=20), truncation_n=2**12, tolerance=1e-10)
    with pytest.warns(UserWarning, match="capped"):
        log_multigamma_asymptotic(1, mpmath.mpf(50), cfg)


def test_sector_error_when_shift_cannot_reach_the_right_half_plane():
    cfg = EvalConfig(precision=Precision(digits=20), truncation_n=2**12, shift_radius=100)
    with pytest.raises(SectorError):
        log_multigamma_asymptotic(1, mpmath.mpc(-5, 150), cfg)


def test_front_door_survives_sector_error_via_product_route():
    cfg = EvalConfig(precision=Precision(digits=20), truncation_n=2**12, shift_radius=100)
    got = log_multigamma(1, mpmath.mpc(-5, 150), cfg)
    assert got.method in {"gauss", "euler"}


# ---------------------------------------------------------------------------
# Domain errors
# ---------------------------------------------------------------------------


def test_singular_lattice_points_raise():
    for z in (0, -1, -3):
        with pytest.raises(SingularInputError):
            log_multigamma(1, z, CFG)
        with pytest.raises(SingularInputError):
            log_multigamma(2, z, CFG)


def test_near_lattice_within_guard_band_raises():
    with pytest.raises(SingularInputError):
        log_multigamma(1, mpmath.mpf(-3) + mpmath.mpf("1e-9"), CFG)
    # just outside the band is allowed
    log_multigamma(1, mpmath.mpf(-3) + mpmath.mpf("1e-6"), CFG)


def test_level_zero_only_excludes_the_origin():
    with pytest.raises(SingularInputError):
        log_g0(0)
    got = log_g0(mpmath.mpf("-2.5"))
    with mpmath.workdps(30):
        assert abs(mpmath.im(got.value) - mpmath.pi) < 1e-25


def test_negative_r_rejected():
    with pytest.raises(ValueError):
        log_multigamma(-1, 2, CFG)
    with pytest.raises(ValueError):
        gauss_partial(0, 1, 4, CFG)


def test_config_validation():
    with pytest.raises(ValueError):
        EvalConfig(tolerance=0.0)
    with pytest.raises(ValueError):
        EvalConfig(truncation_n=16, extrapolation_order=4)
    with pytest.raises(ValueError):
        EvalConfig(extrapolation_order=9)
    with pytest.raises(ValueError):
        EvalConfig(shift_radius=5)


# ---------------------------------------------------------------------------
# Zeta-series oracle
# ---------------------------------------------------------------------------


def test_oracle_matches_normalized_gamma_on_rationals():
    conv = cfg_resolved()
    with mpmath.workdps(40):
        for r in (1, 2, 3):
            for zq in (Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2)):
                want = barnes_zeta_oracle(r, zq, Precision(digits=20)).value
                got = log_gamma_r(r, mpmath.mpf(zq.numerator) / zq.denominator, conv).value
                assert abs(got - want) < 1e-10, (r, zq)


def test_oracle_level_one_is_loggamma():
    # Gamma_1(z) = Gamma(z)/sqrt(2 pi): the zeta route absorbs the constant.
    with mpmath.workdps(40):
        for z in (Fraction(1, 2), Fraction(2), Fraction(7, 3)):
            got = barnes_zeta_oracle(1, z, Precision(digits=20)).value
            zm = mpmath.mpf(z.numerator) / z.denominator
            want = mpmath.loggamma(zm) - mpmath.log(2 * mpmath.pi) / 2
            assert abs(got - want) < 1e-18


def test_oracle_rejects_nonpositive_arguments():
    with pytest.raises(ValueError):
        barnes_zeta_oracle(1, 0)
    with pytest.raises(ValueError):
        barnes_zeta_oracle(2, Fraction(-1, 2))


# ---------------------------------------------------------------------------
# Normalized gamma, sine, multiplication
# ---------------------------------------------------------------------------


def test_multiple_sine_level_one_closed_form():
    conv = cfg_resolved()
    with mpmath.workdps(30):
        s_half = multiple_sine(1, mpmath.mpf("0.5"), conv)
        assert abs(s_half - mpmath.mpf("0.5")) < 1e-12
        for z in (mpmath.mpf("0.3"), mpmath.mpf("0.7"), mpmath.mpf("1.25")):
            s = multiple_sine(1, z, conv)
            assert abs(s * 2 * mpmath.sin(mpmath.pi * z) - 1) < 1e-10, z


def test_multiple_sine_level_two_fixed_point():
    conv = cfg_resolved()
    with mpmath.workdps(30):
        assert abs(multiple_sine(2, 1, conv) - 1) < 1e-12


def test_gamma_r_requires_resolved_conventions():
    from multigamma.conventions import ConventionError
    with pytest.raises(ConventionError):
        log_gamma_r(1, 2, CFG)
    with pytest.raises(ConventionError):
        multiplication_residual(1, 2, 1, CFG)


def test_multiplication_residuals_vanish_on_and_off_anchor():
    conv = cfg_resolved()
    cases = [(1, 2, "1"), (1, 3, "1.5"), (2, 2, "2.5"), (2, 3, "2")]
    for r, p, z in cases:
        rep = multiplication_residual(r, p, mpmath.mpf(z), conv)
        assert rep.passed, (r, p, z, rep.residual)
        assert rep.residual < 1e-12


def test_multiplication_p_equals_one_is_trivially_exact():
    conv = cfg_resolved()
    rep = multiplication_residual(2, 1, mpmath.mpf("1.5"), conv)
    assert rep.passed


# ---------------------------------------------------------------------------
# Calibration
# ---------------------------------------------------------------------------


def test_calibration_finds_the_documented_unique_survivor():
    conv = resolved()
    assert conv.resolved
    assert (conv.s_phi, conv.sigma_phi, conv.s_R) == (-1, Fraction(-1), -1)
    assert len(conv.evidence) == 9
    for item in conv.evidence:
        assert set(item) == {"anchor", "r", "p", "z", "residual"}
        assert item["residual"] < 1e-8


def test_calibration_is_idempotent():
    assert calibrate_conventions(CFG) == resolved()


def test_calibration_persists_loadable_file(tmp_path):
    path = tmp_path / "conv.json"
    conv = calibrate_conventions(CFG, persist_path=str(path))
    assert ConventionSet.load(str(path)) == conv
    # byte-stable on re-persist
    first = path.read_bytes()
    calibrate_conventions(CFG, persist_path=str(path))
    assert path.read_bytes() == first


def test_calibration_with_unreachable_tolerance_reports_the_table():
    cfg = EvalConfig(precision=Precision(digits=20), truncation_n=2**12, tolerance=1e-300)
    with pytest.raises(CalibrationError) as exc:
        calibrate_conventions(cfg)
    assert "s_phi" in str(exc.value)


# ---------------------------------------------------------------------------
# Report shapes
# ---------------------------------------------------------------------------


def test_log_value_json_shape():
    got = log_multigamma(1, mpmath.mpc(1, 1), CFG)
    obj = got.to_json_obj()
    assert set(obj) == {"re", "im", "method", "err_est"}
    assert isinstance(obj["re"], str) and isinstance(obj["im"], str)
    float(obj["re"]), float(obj["im"])  # parseable


def test_residual_report_json_shape():
    conv = cfg_resolved()
    rep = multiplication_residual(1, 2, mpmath.mpf(1), conv)
    obj = rep.to_json_obj()
    assert set(obj) == {"identity", "params", "residual", "pass"}
    assert obj["pass"] is True
    assert set(obj["params"]) == {"r", "p", "z"}
