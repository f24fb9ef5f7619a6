"""Monomial normal form, formal invariance groups and the germ trichotomy."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .errors import NonzeroConstantTerm, NotAGerm, UndecidedResonance, ZeroSeries
from .fields import APPROX, ApproxField
from .series import (
    TruncatedSeries,
    compose,
    compositional_inverse,
    nth_root,
)

__all__ = [
    "Monomialization",
    "GermTag",
    "SectorVerdict",
    "GermClass",
    "monomialize",
    "invariance_order_and_generator",
    "iterate_composition",
    "check_formal_invariance",
    "classify_germ",
]

PROBE_BOUND = 64
UNDECIDED_MARGIN = 1e-6


@dataclass(frozen=True)
class Monomialization:
    nu: int
    psi: TruncatedSeries
    root_choice: object


def _check_vanishing_germ(phi: TruncatedSeries) -> int:
    nu = phi.valuation
    if nu == math.inf:
        raise ZeroSeries("series vanishes to the working truncation")
    if nu == 0:
        raise NonzeroConstantTerm("series must vanish at the origin")
    return nu


def _normalized_root_factor(phi: TruncatedSeries, nu: int) -> TruncatedSeries:
    """``z * (1 + mu)^(1/nu)`` where ``phi = a z^nu (1 + mu)``.

    ``phi`` is padded with zeros so that the result has ``phi.order``
    coefficients; the padding never influences ``phi o psi mod z^N``.
    """
    N = phi.order
    padded = phi.padded(N + nu - 1)
    unit = padded.shift_down(nu) / padded[nu]
    root = nth_root(unit, nu)
    return root.shift_up(1)


def monomialize(phi: TruncatedSeries, branch: int | None = None) -> Monomialization:
    """Return ``(nu, psi)`` with ``phi(psi(z)) = z^nu`` modulo the truncation.

    In the exact field the leading coefficient must have an ``nu``-th root
    in Q(i); otherwise :class:`FieldCannotRepresentRoot` is raised and the
    caller should convert ``phi`` to an approximate field.
    """
    nu = _check_vanishing_germ(phi)
    F = phi.field
    b = F.root(phi[nu], nu, branch)
    gamma = _normalized_root_factor(phi, nu) * b
    psi = compositional_inverse(gamma)
    return Monomialization(nu=nu, psi=psi, root_choice=b)


def iterate_composition(g: TruncatedSeries, times: int) -> TruncatedSeries:
    result = TruncatedSeries.identity(g.order, g.field)
    for _ in range(times):
        result = compose(g, result)
    return result


def invariance_order_and_generator(phi: TruncatedSeries, approx_field: ApproxField = APPROX):
    """Order ``n0`` of the formal invariance group of ``phi`` and a generator.

    The generator is ``psi o (zeta z) o psi^{-1}`` with
    ``zeta = exp(2 pi i / n0)``. The scale ``b`` of the monomializing change
    cancels in this conjugation, so the change is built with ``b = 1`` and
    always stays exact; only the rotation may force the approximate field
    (when ``n0`` is not 1, 2 or 4).
    """
    n0 = _check_vanishing_germ(phi)
    gamma = _normalized_root_factor(phi, n0)
    F = phi.field
    if F.exact and n0 not in (1, 2, 4):
        F = approx_field
        gamma = gamma.to_field(F)
    zeta = F.root_of_unity(n0)
    psi = compositional_inverse(gamma)
    generator = compose(psi, gamma * zeta)
    return n0, generator


def check_formal_invariance(phi: TruncatedSeries, f: TruncatedSeries) -> bool:
    """True iff ``phi o f = phi`` modulo the common truncation."""
    if f.order < 2 or not f.field.is_zero(f[0]) or f.field.is_zero(f[1]):
        raise NotAGerm("f must satisfy f(0) = 0 and f'(0) != 0")
    composed = compose(phi, f)
    return composed == phi.truncate(composed.order)


class GermTag(str, Enum):
    HYPERBOLIC = "Hyperbolic"
    ELLIPTIC = "Elliptic"
    PARABOLIC = "Parabolic"


class SectorVerdict(str, Enum):
    EXISTS_CONTRACTING = "ExistsContracting"
    EXISTS_PETAL_PAIR = "ExistsPetalPair"
    NO_PROPER_SECTOR = "NoProperSector"


@dataclass(frozen=True)
class GermClass:
    tag: GermTag
    multiplier: object
    sector_verdict: SectorVerdict
    tangency_order: int | None = None
    petal_bisectrix: float | None = None
    period: int | None = None


def _resonance_period(lam, field, probe_bound: int, margin: float) -> int | None:
    """Smallest ``k <= probe_bound`` with ``lam^k = 1``; ``None`` if there is none.

    Exact: the only roots of unity in Q(i) are 1, -1, i, -i, so the answer is
    decided exactly. Approximate: ``|lam^k - 1| <= tol`` counts as resonant,
    a best distance inside ``(tol, margin]`` is reported as undecided.
    """
    if field.exact:
        power = field.one
        for k in range(1, 5):
            power = power * lam
            if power == field.one:
                return k if k <= probe_bound else None
        return None
    lam = complex(lam)
    best = math.inf
    power = 1 + 0j
    for k in range(1, probe_bound + 1):
        power *= lam
        dist = abs(power - 1)
        if dist <= field.tol:
            return k
        best = min(best, dist)
    if best <= margin:
        raise UndecidedResonance(
            f"multiplier {lam!r} is within {best:.3g} of a root of unity of order <= {probe_bound}")
    return None


def classify_germ(f: TruncatedSeries, probe_bound: int = PROBE_BOUND,
                  margin: float = UNDECIDED_MARGIN) -> GermClass:
    """Hyperbolic / elliptic / parabolic tag and invariant-sector verdict of ``f``."""
    F = f.field
    if f.order < 2 or not F.is_zero(f[0]) or F.is_zero(f[1]):
        raise NotAGerm("a germ needs f(0) = 0 and f'(0) != 0")
    lam = f[1]
    if F.exact:
        unit_modulus = lam.abs2() == 1
    else:
        unit_modulus = abs(abs(lam) - 1) <= F.tol

    if not unit_modulus:
        c = complex(lam)
        real_contracting = (lam.is_real and 0 < lam.re < 1) if F.exact else (
            abs(c.imag) <= F.tol and 0 < c.real < 1)
        verdict = SectorVerdict.EXISTS_CONTRACTING if real_contracting else SectorVerdict.NO_PROPER_SECTOR
        return GermClass(GermTag.HYPERBOLIC, lam, verdict)

    period = _resonance_period(lam, F, probe_bound, margin)
    if period is None:
        return GermClass(GermTag.ELLIPTIC, lam, SectorVerdict.NO_PROPER_SECTOR)

    linear = TruncatedSeries.monomial(1, f.order, F, lam)
    v = (f - linear).valuation
    tangency = None if v == math.inf else v - 1
    if period != 1:
        # f permutes its petals by a nontrivial rotation: no proper sector is fixed
        return GermClass(GermTag.PARABOLIC, lam, SectorVerdict.NO_PROPER_SECTOR, tangency, None, period)
    bisectrix = None
    if tangency == 1:
        a2 = complex(f[2])
        bisectrix = _wrap_angle(math.pi - cmath.phase(a2))
    return GermClass(GermTag.PARABOLIC, lam, SectorVerdict.EXISTS_PETAL_PAIR, tangency, bisectrix, period)


def _wrap_angle(theta: float) -> float:
    """Representative in ``(-pi, pi]``."""
    t = math.remainder(theta, 2 * math.pi)
    return math.pi if t == -math.pi else t
