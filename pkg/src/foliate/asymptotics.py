"""Numerical laboratory for asymptotic expansions on sectors.

The checks are heuristics at desk scale: the constants ``C_k`` of the
defining inequality are estimated shell by shell on a proper subsector and
the raw tables are returned with every verdict so they can be re-judged.
"""

from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Callable, Sequence

import mpmath
import numpy as np
from scipy import integrate

from .errors import (
    BranchCutCrossed,
    EmptySubsector,
    EvaluationFailure,
    ExtrapolationUnstable,
    QuadratureFailure,
    SectorTooWide,
    TruncationTooShort,
)
from .fields import APPROX
from .series import TruncatedSeries

__all__ = [
    "Sector",
    "right_half_plane",
    "left_half_plane",
    "Verdict",
    "AsymptoticVerdict",
    "sample_proper_subsector",
    "verify_asymptotic",
    "verify_asymptotic_two_variable",
    "estimate_expansion",
    "borel_ritt_realize",
    "euler_function",
    "euler_function_oracle",
    "euler_series",
    "euler_ode_residual",
    "SaddleNodeModel",
    "saddle_node_model",
    "cos_counterexample",
    "cos_derivative_sequence",
    "constants_csv",
]

TAU = 4.0


@dataclass(frozen=True)
class Sector:
    """``{0 < |z| < R, alpha1 < arg z < alpha2}`` with a subsector policy.

    The proper subsector used for sampling shrinks the radius by ``rho`` and
    the angles by ``delta`` on each side (default: 5% of the opening).
    """

    R: float
    alpha1: float
    alpha2: float
    rho: float = 0.5
    delta: float | None = None

    def __post_init__(self):
        if self.R <= 0:
            raise ValueError("sector radius must be positive")
        if not self.alpha1 < self.alpha2:
            raise ValueError("need alpha1 < alpha2")
        if not 0 < self.rho < 1:
            raise ValueError("shrink factor rho must lie in (0, 1)")

    @property
    def opening(self) -> float:
        return self.alpha2 - self.alpha1

    @property
    def bisector(self) -> float:
        return 0.5 * (self.alpha1 + self.alpha2)

    @property
    def margin(self) -> float:
        return 0.05 * self.opening if self.delta is None else self.delta

    def contains(self, z: complex) -> bool:
        r = abs(z)
        if not 0 < r < self.R:
            return False
        # argument measured continuously from alpha1
        a = self.alpha1 + (cmath.phase(z) - self.alpha1) % (2 * math.pi)
        return self.alpha1 < a < self.alpha2


def right_half_plane(R: float = 0.2, **kw) -> Sector:
    return Sector(R, -math.pi / 2, math.pi / 2, **kw)


def left_half_plane(R: float = 0.05, **kw) -> Sector:
    return Sector(R, math.pi / 2, 3 * math.pi / 2, **kw)


def _shells(s: Sector, shells: int, per_shell: int) -> list[list[complex]]:
    if shells < 3:
        raise ValueError("at least three radius shells are needed")
    if per_shell < 1:
        raise ValueError("per_shell must be positive")
    lo, hi = s.alpha1 + s.margin, s.alpha2 - s.margin
    if lo >= hi:
        raise EmptySubsector(f"margin {s.margin} leaves no room in opening {s.opening}")
    args = list(np.linspace(lo, hi, per_shell)) if per_shell > 1 else [0.5 * (lo + hi)]
    out = []
    for i in range(shells):
        r = s.R * s.rho ** (i + 1)
        out.append([r * cmath.exp(1j * a) for a in args])
    return out


def sample_proper_subsector(s: Sector, shells: int = 3, per_shell: int = 8) -> list[complex]:
    """Points on radius shells ``R rho^(i+1)`` with arguments in ``[a1+delta, a2-delta]``."""
    return [z for shell in _shells(s, shells, per_shell) for z in shell]


class Verdict(str, Enum):
    BOUNDED = "Bounded"
    DIVERGING = "Diverging"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class AsymptoticVerdict:
    per_k_constants: list
    k_max: int
    verdict: Verdict
    samples_used: int
    table: list = dc_field(default_factory=list)       # table[k][shell] = C_k on that shell
    radii: list = dc_field(default_factory=list)
    note: str = ""


def _partial_sum(coeffs: Sequence[complex], z: complex, k: int) -> complex:
    acc = 0j
    for j in range(k - 1, -1, -1):
        acc = acc * z + coeffs[j]
    return acc


def _judge(table: list[list[float]], tau: float) -> Verdict:
    """Compare the two innermost shells for every ``k``.

    Bounded: ``C_inner <= tau * C_outer`` for all ``k`` (0/0 counts as stable).
    Diverging: for some ``k`` the constants grow by more than ``tau`` at the
    innermost pair and grow monotonically towards the vertex on every pair.
    """
    bounded = True
    diverging = False
    for row in table:
        outer, inner = row[-2], row[-1]
        if not (inner <= tau * outer or (inner == 0 and outer == 0)):
            bounded = False
            if inner > tau * outer and all(row[i + 1] > row[i] for i in range(len(row) - 1)):
                diverging = True
    if bounded:
        return Verdict.BOUNDED
    return Verdict.DIVERGING if diverging else Verdict.INCONCLUSIVE


def _eval(phi, z):
    try:
        v = complex(phi(z))
    except Exception as exc:  # the offending sample travels with the error
        raise EvaluationFailure(z, exc) from exc
    if not (math.isfinite(v.real) and math.isfinite(v.imag)):
        raise EvaluationFailure(z, "non-finite value")
    return v


def verify_asymptotic(phi: Callable[[complex], complex], series: TruncatedSeries, s: Sector,
                      k_max: int, shells: int = 4, per_shell: int = 16,
                      tau: float = TAU) -> AsymptoticVerdict:
    """Estimate ``C_k = max |phi(z) - sum_{j<k} a_j z^j| / |z|^k`` per shell, ``k <= k_max``."""
    if k_max > series.order:
        raise TruncationTooShort(f"series known below z^{series.order}, asked for k={k_max}")
    coeffs = [complex(c) for c in series.coeffs]
    grid = _shells(s, shells, per_shell)
    values = [[_eval(phi, z) for z in shell] for shell in grid]
    table = []
    for k in range(k_max + 1):
        row = []
        for shell, vals in zip(grid, values):
            row.append(max(abs(v - _partial_sum(coeffs, z, k)) / abs(z) ** k
                           for z, v in zip(shell, vals)))
        table.append(row)
    verdict = _judge(table, tau)
    return AsymptoticVerdict([row[-1] for row in table], k_max, verdict,
                             shells * per_shell, table, [abs(sh[0]) for sh in grid])


def verify_asymptotic_two_variable(F: Callable[[complex, complex], complex],
                                   coefficients: Sequence[Callable[[complex], complex]],
                                   x_grid: Sequence[complex], s: Sector, k_max: int,
                                   shells: int = 4, per_shell: int = 16,
                                   tau: float = TAU) -> AsymptoticVerdict:
    """Uniform-in-``x`` version: ``|F(x,y) - sum_{j<k} f_j(x) y^j| <= A_k |y|^k``.

    The compact set of ``x`` values is replaced by the finite ``x_grid``.
    """
    if k_max > len(coefficients):
        raise TruncationTooShort(f"{len(coefficients)} coefficient functions for k={k_max}")
    grid = _shells(s, shells, per_shell)
    table = [[0.0] * shells for _ in range(k_max + 1)]
    for x in x_grid:
        fx = [complex(f(x)) for f in coefficients]
        for si, shell in enumerate(grid):
            for y in shell:
                v = _eval(lambda yy: F(x, yy), y)
                for k in range(k_max + 1):
                    c = abs(v - _partial_sum(fx, y, k)) / abs(y) ** k
                    if c > table[k][si]:
                        table[k][si] = c
    verdict = _judge(table, tau)
    return AsymptoticVerdict([row[-1] for row in table], k_max, verdict,
                             shells * per_shell * len(x_grid), table, [abs(sh[0]) for sh in grid],
                             note=f"x restricted to a grid of {len(x_grid)} points")


def constants_csv(v: AsymptoticVerdict) -> str:
    """Per-shell constants as CSV rows ``k,shell,radius,C``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "shell", "radius", "C"])
    for k, row in enumerate(v.table):
        for i, c in enumerate(row):
            writer.writerow([k, i, repr(v.radii[i]), repr(c)])
    return buf.getvalue()


# -- coefficient extraction ------------------------------------------------

def _neville_at_zero(zs: Sequence[complex], vs: Sequence[complex]):
    """Value at 0 of the interpolating polynomial and its last correction."""
    p = list(vs)
    n = len(zs)
    lower = p[0]
    for level in range(1, n):
        if level == n - 1:
            lower = p[1]
        for i in range(n - level):
            p[i] = (zs[i + level] * p[i] - zs[i] * p[i + 1]) / (zs[i + level] - zs[i])
    return p[0], abs(p[0] - lower)


def _lebesgue_at_zero(zs) -> float:
    total = 0.0
    for i, zi in enumerate(zs):
        term = 1.0
        for j, zj in enumerate(zs):
            if j != i:
                term *= abs(zj / (zj - zi))
        total += term
    return total


def _extrapolate(zs, vs, noise, window_sizes=(3, 4, 5, 6, 8, 10)):
    """Best Neville estimate at ``z = 0`` over sliding windows.

    A candidate's error is its own last correction, widened by the gap to
    neighbouring windows, plus the data noise amplified by the Lebesgue
    constant of extrapolation to the vertex.
    """
    table = {}
    for w in window_sizes:
        for start in range(0, len(zs) - w + 1):
            zw = zs[start:start + w]
            est, err = _neville_at_zero(zw, vs[start:start + w])
            err += _lebesgue_at_zero(zw) * max(noise[start:start + w])
            table[w, start] = (est, err)
    best = (None, math.inf)
    for (w, start), (est, err) in table.items():
        for key in ((w, start + 1), (w - 1, start)):
            if key in table:
                err = max(err, abs(est - table[key][0]))
        if err < best[1]:
            best = (est, err)
    return best


def estimate_expansion(phi: Callable[[complex], complex], s: Sector, k_max: int,
                       points: int = 24, ratio: float = 0.7, stability: float = 1e-3,
                       strict: bool = False, return_errors: bool = False, angle: float | None = None):
    """Coefficients ``a_0 .. a_{k_max}`` as limits along a ray (default: the bisector).

    ``a_k`` is the limit of ``(phi(z) - sum_{j<k} a_j z^j) / z^k``, obtained by
    Neville extrapolation to ``z = 0`` over sliding windows of a geometric
    sample. Errors of earlier coefficients and double-precision roundoff are
    carried into the error of ``a_k``. Extraction stops when the error
    exceeds ``stability * max(1, |a_k|)``; the partial series is returned, or
    :class:`ExtrapolationUnstable` raised if ``strict`` (or if not even
    ``a_0`` is stable).
    """
    theta = s.bisector if angle is None else angle
    direction = cmath.exp(1j * theta)
    zs = [s.R * 0.9 * ratio ** j * direction for j in range(points)]
    vals = [_eval(phi, z) for z in zs]
    eps = 4 * np.finfo(float).eps
    coeffs: list[complex] = []
    errors: list[float] = []
    for k in range(k_max + 1):
        g = [(v - _partial_sum(coeffs, z, k)) / z ** k for z, v in zip(zs, vals)]
        noise = [eps * abs(v) / abs(z) ** k
                 + sum(e * abs(z) ** (j - k) for j, e in enumerate(errors)) for z, v in zip(zs, vals)]
        est, err = _extrapolate(zs, g, noise)
        if est is None or not math.isfinite(err) or err > stability * max(1.0, abs(est)):
            if strict or k == 0:
                raise ExtrapolationUnstable(k - 1)
            break
        coeffs.append(complex(est))
        errors.append(float(err))
    result = TruncatedSeries(coeffs, len(coeffs), APPROX)
    return (result, errors) if return_errors else result


# -- Borel-Ritt ------------------------------------------------------------

def borel_ritt_realize(series: TruncatedSeries, s: Sector, beta=None) -> Callable[[complex], complex]:
    """Holomorphic function on ``s`` with the given asymptotic expansion.

    ``phi(z) = sum_n a_n (1 - exp(-beta_n / w(z))) z^n`` where
    ``w(z) = (z exp(-i theta_c))^kappa`` maps the sector into a sector of
    opening at most ``0.9 pi`` around the positive axis. The default cutoff
    ``beta_n = (1 + |a_n| n!)^(-1/n)`` keeps each correction flat at radii
    reachable in double precision; pass ``beta`` to override.
    """
    if s.opening >= 2 * math.pi:
        raise SectorTooWide(f"opening {s.opening} is not below 2 pi")
    kappa = min(1.0, 0.9 * math.pi / s.opening)
    rot = cmath.exp(-1j * s.bisector)
    coeffs = [complex(c) for c in series.coeffs]
    if beta is None:
        beta = [(1 + abs(a) * math.factorial(n)) ** (-1 / max(n, 1)) for n, a in enumerate(coeffs)]
    elif callable(beta):
        beta = [beta(n, a) for n, a in enumerate(coeffs)]

    def phi(z: complex) -> complex:
        z = complex(z)
        if z == 0:
            return coeffs[0] if coeffs else 0j
        u = z * rot
        w = cmath.exp(kappa * cmath.log(u))
        acc = 0j
        zn = 1 + 0j
        for a, b in zip(coeffs, beta):
            if a:
                t = -b / w
                # 1 - exp(t) without cancellation for small t
                acc += a * (-2 * cmath.exp(t / 2) * cmath.sinh(t / 2)) * zn
            zn *= z
        return acc

    return phi


# -- Euler equation ----------------------------------------------------------

def euler_function(x: complex, epsabs: float = 1e-14) -> complex:
    """``E(x) = x * int_0^inf exp(-u) / (1 + x u) du`` for ``Re x > 0``.

    Equivalent to ``int_0^inf exp(-xi/x) / (1 + xi) dxi`` after ``xi = x u``.
    """
    x = complex(x)
    if x.real <= 0:
        raise ValueError("the Euler integral is used on Re x > 0")

    def part(fn):
        val, err, info = integrate.quad(fn, 0, math.inf, epsabs=epsabs, epsrel=1e-13,
                                        limit=200, full_output=1)[:3]
        if err > 1e-12:
            raise QuadratureFailure(f"quadrature error estimate {err:.3g} at x={x!r}")
        return val

    re = part(lambda u: (math.exp(-u) / (1 + x * u)).real)
    im = part(lambda u: (math.exp(-u) / (1 + x * u)).imag)
    return x * complex(re, im)


def euler_function_oracle(x: complex) -> complex:
    """Closed form ``exp(1/x) E1(1/x)`` through the exponential integral."""
    u = 1 / mpmath.mpc(complex(x))
    return complex(mpmath.exp(u) * mpmath.e1(u))


def euler_series(order: int = 16) -> TruncatedSeries:
    """``sum_n (-1)^n n! x^(n+1)`` truncated below ``x^order`` (exact)."""
    cs = [0] + [(-1) ** n * math.factorial(n) for n in range(order - 1)]
    return TruncatedSeries(cs, order)


def euler_ode_residual(x: float, h: float = 1e-3) -> float:
    """``|x^2 E'(x) + E(x) - x|`` with a five-point derivative of the quadrature."""
    f = euler_function
    d = (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)
    return abs(x * x * d + f(x) - x)


# -- saddle-node model -------------------------------------------------------

def _log_branch(y: complex, center: float) -> complex:
    """Logarithm with the cut on the ray opposite to ``center``."""
    a = cmath.phase(y * cmath.exp(-1j * center)) + center
    return complex(math.log(abs(y)), a)


@dataclass(frozen=True)
class SaddleNodeModel:
    """``omega = y^(p+1) dx - x (1 + lam y^p) dy`` with ``F = x y^(-lam) exp(1/(p y^p))``."""

    p: int
    lam: complex
    branch_center: float = 0.0

    def first_integral(self, x: complex, y: complex) -> complex:
        y = complex(y)
        if y == 0:
            raise ValueError("F is not defined on the weak separatrix y = 0")
        return complex(x) * cmath.exp(-self.lam * _log_branch(y, self.branch_center)
                                      + 1 / (self.p * y ** self.p))

    def vector_field(self, x: complex, y: complex):
        return x * (1 + self.lam * y ** self.p), y ** (self.p + 1)

    def trajectory_deviation(self, x0: complex, y0: complex, t_end: float, rtol: float = 1e-11) -> float:
        """``max |F - F(start)| / |F(start)|`` along the integrated trajectory."""
        def rhs(t, st):
            return list(self.vector_field(st[0], st[1]))

        sol = integrate.solve_ivp(rhs, (0.0, t_end), [complex(x0), complex(y0)], method="DOP853",
                                  rtol=rtol, atol=1e-14, dense_output=False,
                                  t_eval=np.linspace(0, t_end, 200))
        if sol.status != 0:
            raise EvaluationFailure((x0, y0), sol.message)
        if self.lam != 0:
            shifted = np.angle(sol.y[1] * cmath.exp(-1j * self.branch_center))
            if np.any(np.abs(np.diff(shifted)) > math.pi):
                raise BranchCutCrossed("trajectory crosses the cut of y^(-lam)")
        F0 = self.first_integral(x0, y0)
        return max(abs(self.first_integral(x, y) - F0) for x, y in zip(sol.y[0], sol.y[1])) / abs(F0)

    def modulus_identity_error(self, samples: Sequence[complex]) -> float:
        """Max relative gap in ``|exp(1/(p y^p))| = exp(Re(y^p) / (p |y|^(2p)))``."""
        worst = 0.0
        for y in samples:
            y = complex(y)
            lhs = abs(cmath.exp(1 / (self.p * y ** self.p)))
            rhs = math.exp((y ** self.p).real / (self.p * abs(y) ** (2 * self.p)))
            worst = max(worst, abs(lhs - rhs) / rhs)
        return worst

    def zero_expansion_sector(self, R: float = 0.05) -> Sector:
        """Sector where ``Re(y^-p) < 0``: arguments in ``(pi/(2p), 3pi/(2p))``."""
        return Sector(R, math.pi / (2 * self.p), 3 * math.pi / (2 * self.p))

    def zero_expansion_verdict(self, s: Sector | None = None, k_max: int = 8, x: complex = 1.0,
                               **kw) -> AsymptoticVerdict:
        s = s or self.zero_expansion_sector()
        center = s.bisector
        model = SaddleNodeModel(self.p, self.lam, center)
        return verify_asymptotic(lambda y: model.first_integral(x, y),
                                 TruncatedSeries([0], k_max + 1, APPROX), s, k_max, **kw)


def saddle_node_model(p: int, lam: complex = 0) -> SaddleNodeModel:
    if p < 1:
        raise ValueError("saddle-node order p must be at least 1")
    return SaddleNodeModel(p, lam)


# -- cos(2 pi / z) -------------------------------------------------------------

def cos_counterexample(z: complex) -> complex:
    return cmath.cos(2 * math.pi / complex(z))


def cos_derivative_sequence(r: float = 1.0, alpha: float = math.pi / 6, n_max: int = 200) -> list[float]:
    """``|phi'(z_n)|`` along ``z_n = (r/n)(1 + i tan alpha)`` with ``phi' = 2 pi sin(2 pi/z) / z^2``."""
    out = []
    for n in range(1, n_max + 1):
        z = (r / n) * (1 + 1j * math.tan(alpha))
        out.append(abs(2 * math.pi / z ** 2 * cmath.sin(2 * math.pi / z)))
    return out
