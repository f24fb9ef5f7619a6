import cmath
import math

import pytest

from foliate.asymptotics import (
    Sector,
    Verdict,
    borel_ritt_realize,
    constants_csv,
    cos_counterexample,
    cos_derivative_sequence,
    estimate_expansion,
    euler_function,
    euler_function_oracle,
    euler_ode_residual,
    euler_series,
    left_half_plane,
    right_half_plane,
    sample_proper_subsector,
    saddle_node_model,
    verify_asymptotic,
    verify_asymptotic_two_variable,
)
from foliate.errors import EmptySubsector, EvaluationFailure, SectorTooWide, TruncationTooShort
from foliate.fields import APPROX
from foliate.series import TruncatedSeries, series

# 0.1 * int_0^inf exp(-u) / (1 + u/10) du at 30 digits (mpmath quadrature)
EULER_AT_TENTH = 0.0915633339397880818760698157664

ZERO = TruncatedSeries([0], 10, APPROX)


def geometric(z):
    return z / (1 - z)


GEOMETRIC = TruncatedSeries([0] + [1] * 15, 16)


def test_sector_geometry():
    s = Sector(1.0, -0.5, 0.5)
    assert s.contains(0.5) and not s.contains(-0.5) and not s.contains(2.0)
    pts = sample_proper_subsector(s, 3, 5)
    assert len(pts) == 15 and all(s.contains(p) for p in pts)
    with pytest.raises(EmptySubsector):
        sample_proper_subsector(Sector(1.0, 0, 0.1, delta=0.06))


def test_euler_function_value_and_oracle():
    assert euler_function(0.1) == pytest.approx(EULER_AT_TENTH, rel=1e-12)
    for x in (0.05, 0.1 + 0.05j, 0.3 - 0.2j):
        assert euler_function(x) == pytest.approx(euler_function_oracle(x), rel=1e-10)
    assert euler_ode_residual(0.2) < 1e-8


def test_euler_verification_table():
    v = verify_asymptotic(euler_function, euler_series(16), right_half_plane(0.2), 6)
    assert v.verdict == Verdict.BOUNDED
    # C_k approaches k! / ... : the innermost constants stay near (k-1)!
    for k in range(2, 7):
        assert v.per_k_constants[k] == pytest.approx(math.factorial(k - 1), rel=0.1)


def test_zero_expansion_and_first_integral():
    model = saddle_node_model(1, 0)
    v = verify_asymptotic(lambda y: cmath.exp(1 / y), ZERO, left_half_plane(0.05), 8)
    assert v.verdict == Verdict.BOUNDED
    assert model.trajectory_deviation(1.0, -0.1 + 0.05j, 3.0) < 1e-9


def test_general_p_model():
    model = saddle_node_model(2, 0.5)
    v = model.zero_expansion_verdict(model.zero_expansion_sector(0.1), 6)
    assert v.verdict == Verdict.BOUNDED
    samples = [0.1 * cmath.exp(1j * a) for a in (0.3, 1.0, 2.0)]
    assert model.modulus_identity_error(samples) < 1e-12


def test_cos_counterexample():
    v = verify_asymptotic(cos_counterexample, ZERO, Sector(1.0, -math.pi / 6, math.pi / 6), 8)
    assert v.verdict == Verdict.DIVERGING
    d = cos_derivative_sequence()
    assert all(b > a for a, b in zip(d, d[1:])) and d[-1] > 1e6


def test_estimate_expansion_euler():
    s, errs = estimate_expansion(euler_function_oracle, right_half_plane(0.2), 6, return_errors=True)
    assert len(s) >= 4 and len(errs) == len(s)
    for got, want in zip(s.coeffs[:4], (0, 1, -1, 2)):
        assert abs(got - want) < 1e-3


def test_estimate_expansion_geometric_and_flat():
    s = estimate_expansion(geometric, Sector(0.5, -1, 1), 6)
    for got, want in zip(s.coeffs[:3], (0, 1, 1)):
        assert abs(got - want) < 1e-8
    flat = estimate_expansion(lambda z: cmath.exp(1 / z), left_half_plane(0.05), 8)
    assert len(flat) == 9 and all(abs(c) < 1e-6 for c in flat.coeffs)


def test_estimate_expansion_two_rays_agree():
    s = right_half_plane(0.2)
    a, ea = estimate_expansion(euler_function_oracle, s, 4, return_errors=True, angle=0.0)
    b, eb = estimate_expansion(euler_function_oracle, s, 4, return_errors=True, angle=0.6)
    for k in range(min(len(a), len(b))):
        assert abs(a[k] - b[k]) <= 10 * (ea[k] + eb[k]) + 1e-15


def test_full_disc_polynomial():
    poly = series([1, -2, 0, 3], 4)
    s = estimate_expansion(lambda z: poly(z), Sector(0.5, -math.pi, math.pi), 3)
    for got, want in zip(s.coeffs, (1, -2, 0, 3)):
        assert abs(got - want) < 1e-6


def test_linearity_and_products():
    s = right_half_plane(0.2)
    lin = verify_asymptotic(lambda z: 2 * euler_function(z) - 3 * geometric(z),
                            euler_series(16) * 2 - GEOMETRIC * 3, s, 5)
    assert lin.verdict == Verdict.BOUNDED
    prod = verify_asymptotic(lambda z: euler_function(z) * geometric(z), euler_series(16) * GEOMETRIC, s, 5)
    assert prod.verdict == Verdict.BOUNDED


def test_derivative_property():
    def d_euler(z, h=1e-4):
        f = euler_function
        return (-f(z + 2 * h) + 8 * f(z + h) - 8 * f(z - h) + f(z - 2 * h)) / (12 * h)

    inner = Sector(0.2, -math.pi / 3, math.pi / 3)
    v = verify_asymptotic(d_euler, euler_series(16).derivative(), inner, 4, shells=3, per_shell=6)
    assert v.verdict == Verdict.BOUNDED


def test_borel_ritt():
    s = right_half_plane(0.2)
    zero = borel_ritt_realize(TruncatedSeries([0], 8), s)
    assert zero(0.1 + 0.01j) == 0
    phi = borel_ritt_realize(euler_series(16), s)
    assert verify_asymptotic(phi, euler_series(16), s, 6).verdict == Verdict.BOUNDED
    with pytest.raises(SectorTooWide):
        borel_ritt_realize(euler_series(8), Sector(0.2, 0, 2 * math.pi))


def test_two_variable_grid():
    v = verify_asymptotic_two_variable(lambda x, y: x * cmath.exp(1 / y), [lambda x: 0] * 6,
                                       [0.5, 1.0, 1j], left_half_plane(0.05), 6)
    assert v.verdict == Verdict.BOUNDED and v.samples_used == 3 * 4 * 16


def test_errors_and_csv():
    with pytest.raises(EvaluationFailure):
        verify_asymptotic(lambda z: 1 / 0, ZERO, right_half_plane(0.1), 2)
    with pytest.raises(TruncationTooShort):
        verify_asymptotic(geometric, GEOMETRIC.truncate(3), right_half_plane(0.1), 5)
    v = verify_asymptotic(geometric, GEOMETRIC, right_half_plane(0.1), 3)
    rows = constants_csv(v).splitlines()
    assert rows[0] == "k,shell,radius,C" and len(rows) == 1 + 4 * 4
