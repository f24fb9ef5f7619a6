from fractions import Fraction

import pytest
from hypothesis import given

from foliate.errors import ZeroForm
from foliate.fields import APPROX, GaussianRational
from foliate.foliation import (
    SingularityTag,
    classify_singularity,
    is_positive_rational,
    multiplicity_and_jets,
    tangent_cone_R,
)
from strategies import bivariate_units, form, gaussian_rationals, higher_terms

G = GaussianRational


def linear_model(lam, extra_a=None, extra_b=None, order=16, field=None):
    """``x dy - lam y dx`` plus optional higher terms."""
    a = {(0, 1): -lam, **(extra_a or {})}
    b = {(1, 0): 1, **(extra_b or {})}
    w = form(a, b, order)
    return w.to_field(field) if field is not None else w


def test_regular_point():
    assert classify_singularity(form({(0, 0): 1}, {})).tag == SingularityTag.REGULAR


def test_non_degenerate_ratio():
    c = classify_singularity(linear_model(G(-3, 0) / 2))
    assert c.tag == SingularityTag.NON_DEGENERATE and c.lam == G(-3, 0) / 2
    c = classify_singularity(linear_model(G(1, 2)))
    assert c.tag == SingularityTag.NON_DEGENERATE and c.lam == G(1, 2)


def test_positive_rational_ratio_needs_blowup():
    for lam in (G(2), G(1), G(1) / 3):
        assert classify_singularity(linear_model(lam)).tag == SingularityTag.RESONANT_REDUCIBLE


def test_irrational_eigenvalues():
    # x dy + 2 y dx ... rotated so that the eigenvalues are +-sqrt(2)
    w = form({(1, 0): -2, (0, 1): 0}, {(0, 1): 1})
    c = classify_singularity(w)
    assert c.tag == SingularityTag.NON_DEGENERATE and c.lam == -1 and c.exact


def test_saddle_node_normal_forms():
    c = classify_singularity(form({(0, 2): -1}, {(1, 0): 1}))
    assert c.tag == SingularityTag.SADDLE_NODE and (c.p, c.lam) == (1, 0)
    # y^3 dx - x (1 + 3 y^2) dy has p = 2, lam = 3
    w = form({(0, 3): 1}, {(1, 0): -1, (1, 2): -3})
    c = classify_singularity(w)
    assert (c.p, c.lam) == (2, 3)
    moved = w.linear_change([[1, 1], [0, 1]])
    c = classify_singularity(moved)
    assert c.tag == SingularityTag.SADDLE_NODE and (c.p, c.lam) == (2, 3)


def test_degenerate():
    cusp = form({(2, 0): -3}, {(0, 1): 2})
    assert classify_singularity(cusp).tag == SingularityTag.DEGENERATE
    nilpotent = form({(2, 0): 1}, {(0, 1): 1})
    c = classify_singularity(nilpotent)
    assert c.tag == SingularityTag.DEGENERATE and "nilpotent" in c.note


def test_approx_mode_is_probable():
    c = classify_singularity(linear_model(G(1) / 3, field=APPROX))
    assert c.tag == SingularityTag.RESONANT_REDUCIBLE and c.probable
    assert is_positive_rational(0.5 + 1e-12, APPROX)
    assert not is_positive_rational(2 ** 0.5, APPROX)


def test_tangent_cone():
    R, dicritical = tangent_cone_R(form({(0, 1): -1}, {(1, 0): 1}))
    assert dicritical and R.is_zero()
    R, dicritical = tangent_cone_R(form({(2, 0): -3}, {(0, 1): 2}))
    assert not dicritical and R[(0, 2)] == 2
    with pytest.raises(ZeroForm):
        multiplicity_and_jets(form({}, {}))


@given(higher_terms(min_degree=3), higher_terms(min_degree=3))
def test_tag_stable_under_higher_terms(extra_a, extra_b):
    for base in (linear_model(G(-2, 1)), form({(0, 2): -1}, {(1, 0): 1})):
        w = form({**base.A.coeffs, **_add(base.A.coeffs, extra_a)}, {**base.B.coeffs, **_add(base.B.coeffs, extra_b)})
        assert classify_singularity(w).tag == classify_singularity(base).tag


def _add(base, extra):
    return {k: base.get(k, 0) + v for k, v in extra.items()}


@given(bivariate_units(), gaussian_rationals())
def test_dicritical_flag_unit_invariant(u, lam):
    for w in (linear_model(G(1)), linear_model(lam), form({(2, 0): -3}, {(0, 1): 2})):
        R, dic = tangent_cone_R(w)
        R2, dic2 = tangent_cone_R(w.scaled(u))
        assert dic == dic2
        c0 = u[(0, 0)]
        assert all(R2[key] == R[key] * c0 for key in set(R.coeffs) | set(R2.coeffs))
