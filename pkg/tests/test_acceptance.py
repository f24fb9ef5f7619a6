"""Acceptance criteria 1-14; the terminal summary prints one PASS/FAIL line each."""

import cmath
import math
import random
import time
from fractions import Fraction

import pytest

from foliate.asymptotics import (
    Sector,
    Verdict,
    borel_ritt_realize,
    cos_counterexample,
    cos_derivative_sequence,
    euler_function,
    euler_ode_residual,
    euler_series,
    left_half_plane,
    right_half_plane,
    saddle_node_model,
    verify_asymptotic,
)
from foliate.bivariate import BivariateSeries
from foliate.blowup import Verdict as ReductionVerdict, reduce
from foliate.fields import APPROX, EXACT, GaussianRational
from foliate.foliation import SingularityTag, tangent_cone_R
from foliate.index import camacho_sad_index, gradient_form_checks, index_transform_check, verify_index_theorem
from foliate.normal_forms import check_formal_invariance, invariance_order_and_generator, iterate_composition, monomialize
from foliate.series import (
    TruncatedSeries,
    compose,
    compositional_inverse,
    formal_exp,
    formal_log,
    nth_root,
)
from foliate.transport import dulac_adjunction_check, dulac_transport_formal, fit_holonomy
from strategies import form, random_gaussian, random_series

G = GaussianRational
N = 16


def test_criterion_01_exact_series_identities():
    start = time.perf_counter()
    ident = TruncatedSeries.identity(N)
    for seed in range(100):
        rng = random.Random(seed)
        f = random_series(rng, N, valuation=1)
        assert compose(f, compositional_inverse(f)) == ident
        u = random_series(rng, N, constant=1)
        n = 2 + seed % 4
        assert nth_root(u, n) ** n == u
        assert formal_exp(formal_log(u)) == u
    assert time.perf_counter() - start < 10


def test_criterion_02_monomialize_corpus():
    start = time.perf_counter()
    for seed in range(50):
        rng = random.Random(1000 + seed)
        nu = 1 + seed % 5
        root = random_gaussian(rng)
        while root == 0:
            root = random_gaussian(rng)
        tail = random_series(rng, N, constant=root ** nu)
        phi = TruncatedSeries([0] * nu + list(tail.coeffs), N)
        m = monomialize(phi)
        assert m.nu == nu == phi.valuation
        assert compose(phi, m.psi) == TruncatedSeries.monomial(nu, N)
    assert time.perf_counter() - start < 5


def _unit_tail(rng, n0):
    def c():
        return G(Fraction(rng.randint(-4, 4), rng.randint(4, 9)), Fraction(rng.randint(-4, 4), rng.randint(4, 9)))
    return TruncatedSeries([0] * n0 + [1] + [c() for _ in range(N)], N)


@pytest.mark.parametrize("n0", range(1, 9))
def test_criterion_03_invariance_generator(n0):
    phi = _unit_tail(random.Random(77 + n0), n0)
    n, g = invariance_order_and_generator(phi)
    assert n == n0
    if g.field.exact:
        assert check_formal_invariance(phi, g)
        assert iterate_composition(g, n0) == TruncatedSeries.identity(N)
    else:
        composed = compose(phi.to_field(APPROX), g)
        assert max(abs(a - complex(b)) for a, b in zip(composed.coeffs, phi.coeffs)) <= 1e-10
        power = iterate_composition(g, n0)
        assert max(abs(c - (1 if j == 1 else 0)) for j, c in enumerate(power.coeffs)) <= 1e-10
    ident = TruncatedSeries.identity(N, g.field)
    for k in range(1, n0):
        power = iterate_composition(g, k)
        assert max(abs(complex(a) - complex(b)) for a, b in zip(power.coeffs, ident.coeffs)) > 1e-3


def test_criterion_04_camacho_sad_values():
    for l1, l2 in ((G(1), G(2)), (G(2), G(3)), (G(-5), G(1, 7)), (G(3, 1), G(-2, 4))):
        w = form({(0, 1): -l2}, {(1, 0): l1})
        assert camacho_sad_index(w, "y=0").index == l2 / l1
    assert camacho_sad_index(form({(0, 2): -1}, {(1, 0): 1}), "y=0").index == 0


def test_criterion_05_index_theorem_one_blowup():
    rng = random.Random(5)
    for _ in range(10):
        lam = G(Fraction(rng.randint(-9, 9), rng.randint(1, 9)), Fraction(rng.randint(1, 9), rng.randint(1, 9)))
        w = form({(0, 1): -lam}, {(1, 0): 1})
        graph, _ = reduce(w, 1, blow_up_origin=True)
        (check,) = verify_index_theorem(graph)
        assert check.sum_of_indices == -1 and check.match
        for axis in ("y=0", "x=0"):
            r = index_transform_check(w, axis)
            assert r["after"] == r["before"] - 1


def test_criterion_06_gradient_forms():
    rng = random.Random(6)
    for _ in range(50):
        k = rng.randint(1, 4)
        terms = {(i, d - i): random_gaussian(rng) for d in range(k + 1, k + 4) for i in range(d + 1)}
        if all(terms.get((i, k + 1 - i), 0) == 0 for i in range(k + 2)):
            terms[(k + 1, 0)] = G(1)
        F = BivariateSeries(terms, 12, EXACT)
        r = gradient_form_checks(F)
        R, dicritical = tangent_cone_R(r["omega"])
        target = F.homogeneous_part(k + 1) * (k + 1)
        assert all(R[key] == target[key] for key in set(R.coeffs) | set(target.coeffs))
        assert r["claim_holds"] and r["nondicritical"] and not dicritical


def test_criterion_07_cusp_reduction():
    start = time.perf_counter()
    graph, verdict = reduce(form({(2, 0): -3}, {(0, 1): 2}), 5)
    assert verdict == ReductionVerdict.ALL_IRREDUCIBLE
    assert max(r.depth for r in graph.blowup_history) < 5
    assert all(s.classification.tag in (SingularityTag.NON_DEGENERATE, SingularityTag.SADDLE_NODE)
               for s in graph.singularities)
    checks = verify_index_theorem(graph)
    assert checks and all(c.match for c in checks if c.status != "Dicritical")
    assert all(s.exact for s in graph.singularities)
    assert time.perf_counter() - start < 30


def test_criterion_08_dicritical_detection():
    graph, verdict = reduce(form({(0, 1): -1}, {(1, 0): 1}), 4)
    assert verdict == ReductionVerdict.DICRITICAL_DETECTED
    assert graph.blowup_history[0].depth == 0 and graph.blowup_history[0].dicritical
    graph, verdict = reduce(form({(0, 1): -2}, {(1, 0): 1}), 2)
    assert verdict == ReductionVerdict.DICRITICAL_DETECTED


def test_criterion_09_numeric_holonomy():
    ys = [1e-3, 2e-3, 3e-3, 4e-3, 5e-3]
    for lam in (0.3, -0.7, 1 / 3, math.sqrt(2), 0.2 + 0.15j):
        w = form({(0, 1): -lam}, {(1, 0): 1}, 8, APPROX)
        mult = fit_holonomy(w, 0.5, ys).fitted_multiplier
        want = cmath.exp(2j * math.pi * lam)
        assert abs(mult - want) <= 1e-6 * abs(want)
    w = form({(0, 2): 1}, {(1, 0): -1}, 8, APPROX)
    y0 = 1e-3
    image = fit_holonomy(w, 1.0, [y0]).images[0]
    want = y0 / (1 - 2j * math.pi * y0)
    assert abs(image - want) <= 1e-6 * abs(want)


def test_criterion_10_euler_case_study():
    start = time.perf_counter()
    assert 0.0915 < euler_function(0.1).real < 0.0917
    v = verify_asymptotic(euler_function, euler_series(N), right_half_plane(0.2), 6)
    assert v.verdict == Verdict.BOUNDED
    assert euler_ode_residual(0.2) <= 1e-8
    assert time.perf_counter() - start < 10


def test_criterion_11_zero_expansion():
    v = verify_asymptotic(lambda y: cmath.exp(1 / y), TruncatedSeries([0], 9, APPROX), left_half_plane(0.05), 8)
    assert v.verdict == Verdict.BOUNDED
    model = saddle_node_model(1, 0)
    for n in range(10):
        x0 = cmath.exp(0.3j * n)
        y0 = -0.05 - 0.01 * n + 0.02j * (n - 5)
        assert model.trajectory_deviation(x0, y0, 2.0) <= 1e-6


def test_criterion_12_cos_counterexample():
    v = verify_asymptotic(cos_counterexample, TruncatedSeries([0], 9, APPROX),
                          Sector(1.0, -math.pi / 6, math.pi / 6), 8)
    assert v.verdict == Verdict.DIVERGING
    d = cos_derivative_sequence(r=1.0, alpha=math.pi / 6, n_max=200)
    assert all(b > a for a, b in zip(d, d[1:]))
    assert max(d) > 1e6


def test_criterion_13_borel_ritt():
    s = right_half_plane(0.2)
    phi = borel_ritt_realize(euler_series(N), s)
    assert verify_asymptotic(phi, euler_series(N), s, 6).verdict == Verdict.BOUNDED


def _abelian(rng, mu, m, order=N):
    cs = [G(0)] * order
    cs[1] = mu
    for r in range(1, (order - 2) // m + 1):
        cs[1 + r * m] = mu * random_gaussian(rng, den=5, span=3)
    return TruncatedSeries(cs, order)


@pytest.mark.parametrize("m,n,mus", [
    (1, 1, (G(2), G(0, 3))),
    (2, 1, (G(1, 1), G(-3))),
    (1, 2, (G(4), G(Fraction(9, 4)))),
    (3, 2, (G(4), G(Fraction(1, 9)))),
    (2, 3, (G(8), G(Fraction(27, 8)))),
])
def test_criterion_14_dulac_transport(m, n, mus):
    rng = random.Random(m * 10 + n)
    h1, h2 = _abelian(rng, mus[0], m), _abelian(rng, mus[1], m)
    lhs = dulac_transport_formal(compose(h1, h2), m, n)
    rhs = compose(dulac_transport_formal(h1, m, n), dulac_transport_formal(h2, m, n))
    k = min(lhs.order, rhs.order)
    assert lhs.truncate(k) == rhs.truncate(k)
    samples = [0.05, 0.03 + 0.02j, 0.04 - 0.01j, 0.02j]
    for mu in (2, 0.25, 0.7 + 0.2j, 0.5j):
        h = TruncatedSeries([0, mu], N, APPROX)
        assert dulac_adjunction_check(h, m, n, samples) <= 1e-10
