"""Quadrature, principal values, pole bookkeeping and extrapolation.

Every integrator here takes vectorized callables: f(x) receives a numpy
array and must return an array of the same shape (real or complex values
are both fine). Results carry an absolute error estimate, the number of
integrand evaluations, and an honest converged flag; non-convergence is
reported through the flag, never silently.

Singular denominators are handled by two independent strategies so the
physics layers can cross check one against the other:

* the production route splits integrals of g(s)/D(s) with simple real
  zeros of D into a principal value (symmetric excision around each
  zero) plus half residues, with the residue sign supplied per pole;
* the oracle route keeps the regulator epsilon finite, integrates the
  smooth regularized integrand on a geometric epsilon ladder, and
  extrapolates the ladder to epsilon -> 0 (epsilon_extrapolate).

Adaptive panels use the Gauss-Kronrod 7/15 pair; panel refinement splits
every panel whose error exceeds an equidistributed share of the budget,
so batches of new panels are evaluated in single vectorized calls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .kinematics import DomainError

__all__ = [
    "QuadratureResult",
    "PoleSet",
    "ExtrapolationResult",
    "TangentialZeroError",
    "integrate_adaptive",
    "integrate_semiinfinite_gaussian",
    "gaussian_truncation_point",
    "principal_value_integral",
    "poles_of_denominator",
    "real_line_pole_integral",
    "epsilon_extrapolate",
    "find_root_bracketed",
]


class TangentialZeroError(RuntimeError):
    """A located zero of a denominator is tangential (|D'| below threshold)."""


@dataclass(frozen=True)
class QuadratureResult:
    """Value of an integral with honest error bookkeeping.

    converged means the accumulated error estimate met the requested
    tolerance; the estimate itself is reported either way.
    """

    value: complex | float
    abs_error_estimate: float
    evaluations: int
    converged: bool


@dataclass(frozen=True)
class PoleSet:
    """Simple real zeros of a denominator, with the derivative at each."""

    locations: tuple[float, ...]
    derivatives: tuple[float, ...]

    def __post_init__(self) -> None:
        if list(self.locations) != sorted(self.locations):
            raise ValueError("pole locations must be sorted ascending")
        if len(self.locations) != len(self.derivatives):
            raise ValueError("locations and derivatives must have equal length")


@dataclass(frozen=True)
class ExtrapolationResult:
    """Limit of a sampled epsilon ladder at epsilon -> 0.

    residual is the change produced by the final extrapolation order and
    serves as the error estimate; monotone records whether successive
    extrapolation orders kept shrinking that change.
    """

    value: complex
    residual: float
    monotone: bool


# Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (the QUADPACK dqk15 pair).
_XGK = np.array([
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0,
])
_WGK = np.array([
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278,
])
_WG = np.array([
    0.1294849661688697, 0.2797053914892767,
    0.3818300505051189, 0.4179591836734694,
])

_NODES = np.concatenate([-_XGK[:7], _XGK[::-1]])          # 15 ascending nodes
_WEIGHTS_K = np.concatenate([_WGK[:7], _WGK[::-1]])
_WEIGHTS_G = np.zeros(15)
_WEIGHTS_G[1:14:2] = np.concatenate([_WG[:3], _WG[::-1]])  # Gauss nodes interleave

_EPS = np.finfo(float).eps


def _gk15_panels(f, lo: np.ndarray, hi: np.ndarray):
    """Evaluate the GK15 pair on a batch of panels [lo_i, hi_i]."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    y = np.asarray(f(x.ravel())).reshape(x.shape)
    vals_k = (y * _WEIGHTS_K).sum(axis=1) * half
    vals_g = (y * _WEIGHTS_G).sum(axis=1) * half
    err = np.abs(vals_k - vals_g)
    # Magnitude of the panel contribution, for roundoff accounting.
    mag = (np.abs(y) * _WEIGHTS_K).sum(axis=1) * np.abs(half)
    return vals_k, err, mag


def integrate_adaptive(f, lo: float, hi: float, tol: float, *,
                       max_panels: int = 20000,
                       initial_panels: int = 8) -> QuadratureResult:
    """Globally adaptive GK15 quadrature of a vectorized integrand.

    f must map a numpy array of abscissae to an equally shaped array of
    values. tol is an absolute tolerance on the integral. The reported
    error estimate includes a roundoff floor, so converged=True implies
    the estimate met tol honestly.
    """
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise DomainError("integration limits must be finite")
    if hi <= lo:
        raise DomainError(f"empty or inverted interval [{lo}, {hi}]")
    if tol <= 0.0:
        raise DomainError("tol must be positive")

    edges = np.linspace(lo, hi, max(int(initial_panels), 1) + 1)
    a = edges[:-1].copy()
    b = edges[1:].copy()
    vals, errs, mags = _gk15_panels(f, a, b)
    evaluations = 15 * a.size

    width_floor = 64.0 * _EPS * max(abs(lo), abs(hi), 1.0)
    for _ in range(200):
        total_err = errs.sum()
        if total_err <= tol or a.size >= max_panels:
            break
        threshold = tol / max(a.size, 8)
        mask = (errs > threshold) & ((b - a) > width_floor)
        if not mask.any():
            worst = int(np.argmax(errs))
            if b[worst] - a[worst] <= width_floor:
                break
            mask[worst] = True
        am, bm = a[mask], b[mask]
        mid = 0.5 * (am + bm)
        new_a = np.concatenate([am, mid])
        new_b = np.concatenate([mid, bm])
        new_vals, new_errs, new_mags = _gk15_panels(f, new_a, new_b)
        evaluations += 15 * new_a.size
        a = np.concatenate([a[~mask], new_a])
        b = np.concatenate([b[~mask], new_b])
        vals = np.concatenate([vals[~mask], new_vals])
        errs = np.concatenate([errs[~mask], new_errs])
        mags = np.concatenate([mags[~mask], new_mags])

    order = np.argsort(a, kind="stable")
    value = vals[order].sum()
    roundoff = 50.0 * _EPS * mags.sum()
    total_err = float(errs.sum() + roundoff)
    if np.iscomplexobj(vals):
        value = complex(value)
    else:
        value = float(value)
    return QuadratureResult(
        value=value,
        abs_error_estimate=total_err,
        evaluations=evaluations,
        converged=total_err <= tol,
    )


def gaussian_truncation_point(alpha: float, tol: float) -> float:
    """Upper cutoff for integrands bounded by a Gaussian exp(-alpha x^2).

    Chosen so the discarded tail is below tol/10, with a fixed margin of
    six Gaussian widths on top.
    """
    if alpha <= 0.0:
        raise DomainError("alpha must be positive")
    tol_trunc = max(tol / 10.0, 1e-300)
    return math.sqrt(max(-math.log(tol_trunc), 1.0) / alpha) + 6.0 / math.sqrt(alpha)


def integrate_semiinfinite_gaussian(f, alpha: float, tol: float, *,
                                    initial_panels: int = 8,
                                    max_panels: int = 20000) -> QuadratureResult:
    """Integral of f over [0, inf) for f bounded by a Gaussian envelope.

    f must decay at least like exp(-alpha x^2) times a slowly varying
    factor. The integral is truncated at gaussian_truncation_point and the
    truncation remainder is folded into the error estimate.
    """
    x_max = gaussian_truncation_point(alpha, tol)
    res = integrate_adaptive(f, 0.0, x_max, tol,
                             initial_panels=initial_panels,
                             max_panels=max_panels)
    # Tail bound: sample the envelope-compensated magnitude near the cutoff.
    xs = np.array([0.90, 0.95, 1.0]) * x_max
    fs = np.abs(np.asarray(f(xs)))
    scale = float(np.max(fs * np.exp(alpha * xs * xs)))
    tail = 0.5 * math.sqrt(math.pi / alpha) * math.erfc(math.sqrt(alpha) * x_max)
    trunc_err = scale * tail
    total_err = res.abs_error_estimate + trunc_err
    return QuadratureResult(
        value=res.value,
        abs_error_estimate=total_err,
        evaluations=res.evaluations + 3,
        converged=total_err <= tol,
    )


def _derivative(D, x: float) -> tuple[float, float]:
    """Central first and second derivative estimates of D at x."""
    h = 1e-6 * max(1.0, abs(x))
    pts = np.array([x - h, x, x + h])
    d = np.asarray(D(pts), dtype=float)
    d1 = (d[2] - d[0]) / (2.0 * h)
    d2 = (d[2] - 2.0 * d[1] + d[0]) / (h * h)
    return float(d1), float(d2)


_GL32_NODES, _GL32_WEIGHTS = np.polynomial.legendre.leggauss(32)


def _pv_band_remainder(num, D, pole: float, coeff, delta: float):
    """Integral over [pole-delta, pole+delta] of num/D minus its odd
    singular part coeff/(x - pole).

    The subtracted part integrates to zero over the symmetric band, so
    this is the full band contribution. The remainder has a removable
    singularity at the pole; Gauss-Legendre nodes never hit the midpoint.
    """
    nodes, weights = _GL32_NODES, _GL32_WEIGHTS
    x = pole + delta * nodes
    h = np.asarray(num(x)) / np.asarray(D(x)) - coeff / (x - pole)
    return (weights * h).sum() * delta, 64


def _excision_width(pole: float, lo: float, hi: float,
                    delta_cap: float = math.inf) -> float:
    span = hi - lo
    delta = min(0.25 * (pole - lo), 0.25 * (hi - pole), 0.05 * span, delta_cap)
    return max(delta, 1e-9 * span)


def _pv_single(num, D, pole: float, lo: float, hi: float, tol: float,
               delta_cap: float = math.inf):
    """PV of num/D over [lo, hi] with one simple zero of D at pole.

    Symmetric excision: integrate outside [pole-delta, pole+delta], add
    the band remainder, and repeat at delta/2 as a consistency check.
    Returns (value, error, evaluations, converged).
    """
    d1, _ = _derivative(D, pole)
    if abs(d1) < 1e-8:
        raise TangentialZeroError(
            f"denominator zero at {pole} is tangential (|D'| = {abs(d1):.3g})")
    coeff = complex(np.asarray(num(np.array([pole])))[0]) / d1

    delta0 = _excision_width(pole, lo, hi, delta_cap)

    results = []
    err_quad = 0.0
    evals = 0
    converged = True

    def g(x):
        return np.asarray(num(x)) / np.asarray(D(x))

    for delta in (delta0, 0.5 * delta0):
        left = integrate_adaptive(g, lo, pole - delta, tol / 6.0)
        right = integrate_adaptive(g, pole + delta, hi, tol / 6.0)
        band, band_evals = _pv_band_remainder(num, D, pole, coeff, delta)
        results.append(left.value + right.value + band)
        err_quad = left.abs_error_estimate + right.abs_error_estimate
        evals += left.evaluations + right.evaluations + band_evals
        converged = converged and left.converged and right.converged

    consistency = abs(results[0] - results[1])
    if consistency > 10.0 * tol:
        converged = False
    value = results[1]
    error = err_quad + consistency
    return value, error, evals, converged


def principal_value_integral(f_regular, D, pole: float, lo: float, hi: float,
                             tol: float) -> QuadratureResult:
    """Cauchy principal value of f_regular(x)/D(x) over [lo, hi].

    D must have exactly one simple zero in (lo, hi), at pole. A scan of D
    verifies the single sign change; failing that is a precondition
    violation and raises. The two-delta excision consistency check failing
    by more than 10*tol is reported through converged=False.
    """
    if not lo < pole < hi:
        raise DomainError(f"pole {pole} not inside ({lo}, {hi})")
    xs = np.linspace(lo, hi, 1025)
    ds = np.asarray(D(xs), dtype=float)
    # drop exact zeros so a scan node landing on the pole still counts as
    # one crossing instead of two zero-sign products
    nz = np.sign(ds)[np.sign(ds) != 0]
    sign_changes = int(np.count_nonzero(nz[:-1] * nz[1:] < 0))
    if sign_changes != 1:
        raise DomainError(
            f"expected exactly one sign change of D in [{lo}, {hi}], found {sign_changes}")

    value, error, evals, converged = _pv_single(f_regular, D, pole, lo, hi, tol)
    if not np.iscomplexobj(np.asarray(f_regular(np.array([0.5 * (lo + hi)])))):
        value = value.real
    return QuadratureResult(
        value=value,
        abs_error_estimate=float(error),
        evaluations=evals + 1025 + 1,
        converged=converged,
    )


def poles_of_denominator(D, lo: float, hi: float, scan_step: float) -> PoleSet:
    """Locate simple real zeros of D in [lo, hi] by sign-change scanning.

    Each bracket found by the scan is refined to 1e-12 absolute accuracy.
    Tangential zeros (|D'| < 1e-8 at a refined root) abort with
    TangentialZeroError rather than guessing a residue.
    """
    if scan_step <= 0.0:
        raise DomainError("scan_step must be positive")
    if hi <= lo:
        raise DomainError(f"empty or inverted interval [{lo}, {hi}]")
    n = int(math.ceil((hi - lo) / scan_step)) + 1
    n = min(max(n, 8), 2_000_000)
    xs = np.linspace(lo, hi, n)
    ds = np.asarray(D(xs), dtype=float)

    roots: list[float] = []
    signs = np.sign(ds)
    for i in np.nonzero(signs[:-1] * signs[1:] < 0)[0]:
        roots.append(find_root_bracketed(D, float(xs[i]), float(xs[i + 1])))
    for i in np.nonzero(ds == 0.0)[0]:
        roots.append(float(xs[i]))

    roots.sort()
    deduped: list[float] = []
    scale = max(abs(lo), abs(hi), 1.0)
    for r in roots:
        if not deduped or r - deduped[-1] > 1e-10 * scale:
            deduped.append(r)

    derivs = []
    for r in deduped:
        d1, _ = _derivative(D, r)
        if abs(d1) < 1e-8:
            raise TangentialZeroError(
                f"zero of denominator at {r} is tangential (|D'| = {abs(d1):.3g})")
        derivs.append(d1)
    return PoleSet(locations=tuple(deduped), derivatives=tuple(derivs))


def real_line_pole_integral(numerator, D, poles: PoleSet, sign_rule,
                            lo: float, hi: float, tol: float) -> QuadratureResult:
    """Integral of numerator(s)/D(s) over [lo, hi] in the distributional
    sense: principal value across each simple zero of D plus the half
    residue sign_rule[k] * i*pi * numerator(s_k) / |D'(s_k)| per pole.

    sign_rule holds +1 or -1 per pole and encodes which side of the real
    axis the regulator pushed each pole to.
    """
    locs = [p for p in poles.locations]
    if any(not lo < p < hi for p in locs):
        raise DomainError("all poles must lie strictly inside [lo, hi]")
    if len(sign_rule) != len(locs):
        raise DomainError("sign_rule must supply one sign per pole")
    if any(s not in (-1, 1) for s in sign_rule):
        raise DomainError("sign_rule entries must be +1 or -1")

    def g(x):
        return np.asarray(numerator(x)) / np.asarray(D(x))

    if not locs:
        return integrate_adaptive(g, lo, hi, tol)

    spacing = min(
        (locs[i + 1] - locs[i] for i in range(len(locs) - 1)),
        default=math.inf,
    )
    boundaries = [lo]
    for i in range(len(locs) - 1):
        boundaries.append(0.5 * (locs[i] + locs[i + 1]))
    boundaries.append(hi)

    value = 0.0 + 0.0j
    error = 0.0
    evals = 0
    converged = True
    piece_tol = tol / (2.0 * len(locs))
    # the excision width shrinks with the pole spacing so neighbouring
    # excision bands can never overlap; only pathological clusters that
    # push delta onto its floor get flagged
    delta_cap = spacing / 256.0 if math.isfinite(spacing) else math.inf
    for k, p in enumerate(locs):
        seg_lo, seg_hi = boundaries[k], boundaries[k + 1]
        v, e, n, ok = _pv_single(numerator, D, p, seg_lo, seg_hi, piece_tol,
                                 delta_cap=delta_cap)
        value += v
        error += e
        evals += n
        converged = converged and ok
        if spacing < 100.0 * _excision_width(p, seg_lo, seg_hi, delta_cap):
            converged = False

        num_p = complex(np.asarray(numerator(np.array([p])))[0])
        value += sign_rule[k] * 1j * math.pi * num_p / abs(poles.derivatives[k])
        evals += 1

    return QuadratureResult(
        value=value,
        abs_error_estimate=float(error),
        evaluations=evals,
        converged=converged,
    )


def epsilon_extrapolate(values) -> ExtrapolationResult:
    """Polynomial extrapolation of (epsilon, value) samples to epsilon = 0.

    values is a sequence of (epsilon, value) pairs, epsilon > 0, at least
    three of them, ordered or not. Neville's tableau gives the limit; the
    residual is the change contributed by the final order. monotone=False
    flags ladders whose successive extrapolation orders stopped improving.
    """
    pairs = sorted(((float(e), complex(v)) for e, v in values),
                   key=lambda p: -p[0])
    if len(pairs) < 3:
        raise DomainError("need at least three epsilon samples")
    if any(e <= 0.0 for e, _ in pairs):
        raise DomainError("epsilon samples must be positive")
    eps = np.array([e for e, _ in pairs])
    t = np.array([v for _, v in pairs], dtype=complex)

    diag = [t[0]]
    work = t.copy()
    n = len(pairs)
    for j in range(1, n):
        work = (eps[j:] * work[:-1] - eps[: n - j] * work[1:]) / (eps[j:] - eps[: n - j])
        diag.append(work[0])

    steps = [abs(diag[j] - diag[j - 1]) for j in range(1, len(diag))]
    monotone = all(steps[j] <= steps[j - 1] + 1e-30 for j in range(1, len(steps)))
    residual = steps[-1] if steps else 0.0
    return ExtrapolationResult(value=complex(diag[-1]), residual=float(residual),
                               monotone=monotone)


def find_root_bracketed(g, lo: float, hi: float) -> float:
    """Root of scalar g in [lo, hi]; g(lo) and g(hi) must straddle zero."""
    glo = float(g(lo))
    ghi = float(g(hi))
    if glo == 0.0:
        return float(lo)
    if ghi == 0.0:
        return float(hi)
    if glo * ghi > 0.0:
        raise DomainError(
            f"no sign change on [{lo}, {hi}]: g(lo) = {glo:.6g}, g(hi) = {ghi:.6g}")
    return float(brentq(g, lo, hi, xtol=1e-13, rtol=4.0 * _EPS))
