"""Field-mediated correlation between two rotating detectors near a mirror.

The field is a massless scalar with a Dirichlet boundary on the z = 0
plane, treated by the image construction: the boundary Wightman function
is the free one minus its image partner. Both detectors switch on with
the same Gaussian window exp(-tau^2/2) in their own proper times, and
couple with unit strength (lambda = 1).

The pair correlation C (the single-excitation coherence of the joint
two-detector state, at leading order in the coupling) is computed on two
independent routes:

* correlation_equal: for detectors sharing one orbit kinematics the
  double time integral collapses to a single integral over the time
  difference; its integrand has simple real poles where the detectors
  are lightlike separated, handled by the principal-value plus
  half-residue split. The direct part gives c_free, the image part
  c_boundary, and C = c_free - c_boundary. The image denominator is the
  direct one with separation L replaced by L + 2 dz.
* correlation_general: definition-level double quadrature in coordinate
  times with the regulator epsilon kept finite, repeated on a geometric
  epsilon ladder and extrapolated to zero. Works for unequal kinematics
  and serves as the oracle for the reduced path.

correlation_s_only evaluates an algebraically rearranged form of the
single-integral reduction and exists purely to cross-check that algebra.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .kinematics import (CircularDetectorSpec, DomainError, SpacetimePoint,
                         trajectory_point)
from .quadrature import (PoleSet, QuadratureResult, epsilon_extrapolate,
                         integrate_adaptive, poles_of_denominator,
                         real_line_pole_integral)

__all__ = [
    "PairConfig",
    "CorrelationResult",
    "OracleEstimate",
    "DEFAULT_EPSILONS",
    "wightman_boundary",
    "wightman_free",
    "correlation_equal",
    "correlation_s_only",
    "correlation_general",
    "correlation_general_result",
]

DEFAULT_EPSILONS = (1e-3, 5e-4, 2.5e-4)

_TWO_PI_SQ = 4.0 * math.pi * math.pi


def wightman_free(p1: SpacetimePoint, p2: SpacetimePoint,
                  epsilon: float) -> complex | np.ndarray:
    """Free massless scalar Wightman function W(p1, p2), regulated by
    epsilon > 0 in the time difference. Fields may be arrays."""
    dt = p1.t - p2.t
    q = (dt - 1j * epsilon) ** 2 - (p1.x - p2.x) ** 2 - (p1.y - p2.y) ** 2
    return -1.0 / (_TWO_PI_SQ * (q - (p1.z - p2.z) ** 2))


def wightman_boundary(p1: SpacetimePoint, p2: SpacetimePoint,
                      epsilon: float) -> complex | np.ndarray:
    """Wightman function with a Dirichlet plane at z = 0: the free part
    minus the image of the second point, regulated by epsilon > 0."""
    dt = p1.t - p2.t
    q = (dt - 1j * epsilon) ** 2 - (p1.x - p2.x) ** 2 - (p1.y - p2.y) ** 2
    direct = 1.0 / (q - (p1.z - p2.z) ** 2)
    image = 1.0 / (q - (p1.z + p2.z) ** 2)
    return -(direct - image) / _TWO_PI_SQ


@dataclass(frozen=True)
class PairConfig:
    """Two detectors, their vertical separation, and the boundary distance.

    Detector A sits at height dz above the mirror, detector B at dz + sep.
    dz = None means free space (no mirror). equal_kinematics is derived:
    True when both detectors share acceleration and radius (hence the
    same orbit frequency and gamma) to 1e-12 relative.
    """

    det_a: CircularDetectorSpec
    det_b: CircularDetectorSpec
    sep: float
    dz: float | None = None
    equal_kinematics: bool = field(init=False)

    def __post_init__(self) -> None:
        if not math.isfinite(self.sep) or self.sep < 0.0:
            raise DomainError(f"sep must be finite and >= 0, got {self.sep}")
        if self.dz is not None and (not math.isfinite(self.dz) or self.dz <= 0.0):
            raise DomainError(f"dz must be positive when present, got {self.dz}")
        same_radius = math.isclose(self.det_a.radius, self.det_b.radius,
                                   rel_tol=1e-12)
        same_accel = math.isclose(self.det_a.accel, self.det_b.accel,
                                  rel_tol=1e-12, abs_tol=1e-300)
        if self.sep == 0.0 and same_radius:
            raise DomainError("coincident detectors (sep = 0, equal radii) "
                              "put both worldlines on top of each other")
        object.__setattr__(self, "equal_kinematics", same_radius and same_accel)


@dataclass(frozen=True)
class CorrelationResult:
    """C split into its direct and image parts.

    c_free is the direct-Wightman contribution (what C would be with no
    mirror), c_boundary the image contribution, and
    c_total = c_free - c_boundary exactly as assembled.
    """

    c_total: complex
    c_free: complex
    c_boundary: complex
    abs_error_estimate: float
    converged: bool


@dataclass(frozen=True)
class OracleEstimate:
    """Epsilon-extrapolated oracle value with its error bookkeeping."""

    value: complex
    error_estimate: float
    samples: tuple[tuple[float, complex], ...]
    monotone: bool


def _reduced_line_integral(num, L_eff: float, radius: float, omega: float,
                           gamma: float, s_env: float,
                           tol: float) -> QuadratureResult:
    """Distributional integral of num(s)/D(s) over the real line with
    D(s) = L_eff^2 + 4 R^2 sin^2(omega s / 2) - s^2.

    D decreases strictly on s > 0 (since 2 R^2 omega sin(omega s) <=
    2 v^2 s < 2 s), so it has exactly one positive zero, mirrored at -s0,
    confined to L_eff <= s0 <= sqrt(L_eff^2 + 4 R^2). The regulator
    pushed the poles such that the half-residue sign is sign(s0).
    """
    if L_eff <= 0.0:
        raise DomainError("effective separation must be positive")

    def D(s):
        return L_eff * L_eff + 4.0 * radius * radius * np.sin(0.5 * omega * s) ** 2 - s * s

    band_hi = math.sqrt(L_eff * L_eff + 4.0 * radius * radius)

    if L_eff > s_env + 2.0:
        # poles sit far outside the switching envelope: integrate the
        # regular restriction and bound the ignored residues
        res = integrate_adaptive(_num_over_d(num, D), -s_env, s_env, tol)
        ignored = (math.pi * gamma * gamma / (2.0 * L_eff)
                   * math.exp(-L_eff * L_eff / (4.0 * gamma * gamma)))
        return QuadratureResult(
            value=res.value,
            abs_error_estimate=res.abs_error_estimate + ignored + tol / 5.0,
            evaluations=res.evaluations,
            converged=res.converged,
        )

    step = 0.5 * min(math.pi / omega if omega > 0.0 else math.inf, 0.1)
    poles = poles_of_denominator(D, -band_hi - 1.0, band_hi + 1.0, step)
    signs = [1 if p > 0 else -1 for p in poles.locations]
    s_max = max(s_env, band_hi + 2.0)
    return real_line_pole_integral(num, D, poles, signs, -s_max, s_max, tol)


def _num_over_d(num, D):
    def g(s):
        return np.asarray(num(s)) / np.asarray(D(s))
    return g


def _require_equal_kinematics(pair: PairConfig, what: str) -> None:
    if not pair.equal_kinematics:
        raise DomainError(f"{what} requires both detectors on the same orbit "
                          "kinematics (equal accel and radius)")


def correlation_equal(pair: PairConfig, tol: float = 1e-8) -> CorrelationResult:
    """C for a pair sharing orbit kinematics, via the single-integral
    reduction with principal-value plus half-residue pole handling.

    tol is an absolute tolerance on C. The direct and image integrals
    differ only by the effective separation (L versus L + 2 dz)."""
    _require_equal_kinematics(pair, "correlation_equal")
    det = pair.det_a
    gamma, omega, radius = det.gamma, det.omega, det.radius
    gap_a, gap_b = det.energy_gap, pair.det_b.energy_gap
    dgap = gap_b - gap_a

    pref = math.exp(-0.25 * dgap * dgap) / (4.0 * math.pi ** 1.5 * gamma)
    k = (gap_a + gap_b) / (2.0 * gamma)
    inv_four_gamma_sq = 1.0 / (4.0 * gamma * gamma)

    def num(s):
        return np.exp(-s * s * inv_four_gamma_sq + 1j * k * s)

    # switching envelope support: beyond s_env the envelope is below tol/10
    s_env = 2.0 * gamma * math.sqrt(max(-math.log(tol / 10.0), 1.0)) + 2.0
    tol_int = tol / max(pref, 1e-300) / 2.0

    free = _reduced_line_integral(num, pair.sep, radius, omega, gamma,
                                  s_env, tol_int)
    c_free = pref * free.value
    err = pref * free.abs_error_estimate
    converged = free.converged
    evals = free.evaluations

    if pair.dz is None:
        c_boundary = 0.0 + 0.0j
    else:
        image = _reduced_line_integral(num, pair.sep + 2.0 * pair.dz, radius,
                                       omega, gamma, s_env, tol_int)
        c_boundary = pref * image.value
        err += pref * image.abs_error_estimate
        converged = converged and image.converged
        evals += image.evaluations

    return CorrelationResult(
        c_total=c_free - c_boundary,
        c_free=complex(c_free),
        c_boundary=complex(c_boundary),
        abs_error_estimate=float(err),
        converged=converged,
    )


def correlation_s_only(pair: PairConfig, tol: float = 1e-8) -> complex:
    """C via the rearranged single-integral form in which the detector
    gammas enter through their quadrature sum.

    Algebraically identical to correlation_equal when the kinematics
    match (the only case where the one-variable reduction is exact); kept
    as a separate code path to cross-check the reduction algebra."""
    _require_equal_kinematics(pair, "correlation_s_only")
    da, db = pair.det_a, pair.det_b
    ga, gb = da.gamma, db.gamma
    gap_a, gap_b = da.energy_gap, db.energy_gap
    dgap = gap_b - gap_a
    gsq = ga * ga + gb * gb

    pref = (math.sqrt(2.0 * math.pi) / math.sqrt(gsq)
            * math.exp(-(gap_a * (ga - gb) + ga * dgap) ** 2 / (2.0 * gsq))
            / _TWO_PI_SQ)
    kk = (gb * dgap + (ga + gb) * gap_a) / gsq

    def num(s):
        return np.exp(-s * s / (2.0 * gsq) + 1j * kk * s)

    gamma = ga
    s_env = math.sqrt(2.0 * gsq * max(-math.log(tol / 10.0), 1.0)) + 2.0
    tol_int = tol / max(pref, 1e-300) / 2.0

    free = _reduced_line_integral(num, pair.sep, da.radius, da.omega, gamma,
                                  s_env, tol_int)
    total = pref * free.value
    if pair.dz is not None:
        image = _reduced_line_integral(num, pair.sep + 2.0 * pair.dz,
                                       da.radius, da.omega, gamma, s_env,
                                       tol_int)
        total = total - pref * image.value
    return complex(total)


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def composite_gauss_legendre(lo: float, hi: float, n_points: int,
                             order: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre grid with about n_points nodes in total."""
    if order not in _GL_CACHE:
        _GL_CACHE[order] = np.polynomial.legendre.leggauss(order)
    nodes, weights = _GL_CACHE[order]
    panels = max(int(math.ceil(n_points / order)), 1)
    edges = np.linspace(lo, hi, panels + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    halfs = 0.5 * (edges[1:] - edges[:-1])
    x = (mids[:, None] + halfs[:, None] * nodes[None, :]).ravel()
    w = (halfs[:, None] * weights[None, :]).ravel()
    return x, w


def _correlation_single_epsilon(pair: PairConfig, eps: float, tol: float,
                                n_u: int) -> QuadratureResult:
    """One finite-epsilon evaluation of the defining double integral.

    Outer adaptive integral over the coordinate-time difference s; inner
    fixed composite Gauss-Legendre grid over the mean coordinate time u.
    The detectors are evaluated on their own worldlines through the
    trajectory map, so no reduction algebra enters here."""
    da, db = pair.det_a, pair.det_b
    ga, gb = da.gamma, db.gamma
    za = pair.dz if pair.dz is not None else 0.0
    zb = za + pair.sep
    wight = wightman_free if pair.dz is None else wightman_boundary
    gap_a, gap_b = da.energy_gap, db.energy_gap

    u_cut = 7.5 * gb + 1.0
    u_nodes, u_weights = composite_gauss_legendre(-u_cut, u_cut, n_u)
    jac = 1.0 / (ga * gb)

    def outer(s_flat):
        s = s_flat[:, None]
        t = u_nodes[None, :]
        tp = t - s
        pb = trajectory_point(db, zb, t / gb)
        pa = trajectory_point(da, za, tp / ga)
        w = wight(pa, pb, eps)
        gauss = np.exp(-t * t / (2.0 * gb * gb) - tp * tp / (2.0 * ga * ga))
        phase = np.exp(1j * (gap_b * t / gb - gap_a * tp / ga))
        return jac * ((gauss * phase * w) @ u_weights)

    s_max = 7.0 * (ga + gb) + 2.0
    # enough starting panels to see the orbit and phase oscillations
    f_s = da.omega + abs(gap_a) / ga + 0.5
    n0 = min(int(2.0 * s_max * f_s) + 32, 4096)
    return integrate_adaptive(outer, -s_max, s_max, tol,
                              initial_panels=n0, max_panels=60000)


def correlation_general_result(pair: PairConfig,
                               epsilon_schedule=DEFAULT_EPSILONS,
                               tol: float = 1e-7) -> OracleEstimate:
    """Definition-level C with full error bookkeeping.

    Evaluates the double integral at each epsilon of the schedule,
    extrapolates the ladder to zero, and reports an error estimate
    combining the extrapolation residual, the worst quadrature error and
    an inner-grid refinement check."""
    if len(epsilon_schedule) < 3:
        raise DomainError("epsilon schedule needs at least three entries")

    da, db = pair.det_a, pair.det_b
    ga, gb = da.gamma, db.gamma
    sigma_u = ga * gb / math.sqrt(ga * ga + gb * gb)
    u_cut = 7.5 * gb + 1.0
    f_u = abs(da.omega - db.omega) + abs(db.energy_gap / gb - da.energy_gap / ga)
    n_u = max(96, int(2.0 * u_cut * (0.7 * f_u + 6.0 / sigma_u)) + 16)
    n_u = min(n_u, 8000)

    eps_hi = max(epsilon_schedule)
    grid_err = math.inf
    coarse = _correlation_single_epsilon(pair, eps_hi, tol, n_u)
    for _ in range(3):
        fine = _correlation_single_epsilon(pair, eps_hi, tol, 2 * n_u)
        grid_err = abs(fine.value - coarse.value)
        if grid_err <= max(10.0 * tol, 1e-9):
            break
        n_u *= 2
        coarse = fine
    else:
        warnings.warn("inner time grid did not stabilize; the integrand "
                      "poles may be under-resolved", RuntimeWarning)

    samples = []
    quad_err = 0.0
    for eps in sorted(epsilon_schedule, reverse=True):
        res = _correlation_single_epsilon(pair, eps, tol, n_u)
        samples.append((eps, complex(res.value)))
        quad_err = max(quad_err, res.abs_error_estimate)

    extrap = epsilon_extrapolate(samples)
    if not extrap.monotone and extrap.residual > 100.0 * max(tol, quad_err):
        raise RuntimeError("epsilon ladder did not converge "
                           f"(residual {extrap.residual:.3g})")
    error = 3.0 * extrap.residual + quad_err + grid_err
    return OracleEstimate(
        value=extrap.value,
        error_estimate=float(error),
        samples=tuple(samples),
        monotone=extrap.monotone,
    )


def correlation_general(pair: PairConfig, epsilon_schedule=DEFAULT_EPSILONS,
                        tol: float = 1e-7) -> complex:
    """Definition-level C (any kinematics): finite-epsilon double
    quadrature extrapolated to epsilon -> 0."""
    return correlation_general_result(pair, epsilon_schedule, tol).value
