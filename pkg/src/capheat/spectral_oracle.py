"""Independent ground truth: Ferrers Legendre functions, Dirichlet spectra on
the suspension, truncated heat traces and small-time coefficient fits.

The Ferrers function is evaluated through its ascending hypergeometric
series in (1 - x)/2.  The series is absolutely convergent for any opening
angle below pi, but its partial sums grow roughly like exp(2 w atanh(sqrt z))
before collapsing to an O(1) value, so the summation runs in arbitrary
precision (mpmath) with the working precision chosen adaptively from the
observed cancellation.  Nothing here shares code with the assembly pipeline
it is used to verify.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from mpmath import mp

from .errors import (
    AssumptionViolation,
    IllConditioned,
    MissedRootSuspicion,
    SlowConvergence,
    TailTooLarge,
    ValidationError,
)
from .heat_coeffs import SphereBase, SuspensionConfig
from .sphere_base import degeneracy, sphere_mu

__all__ = [
    "EigenvalueChannel",
    "HeatTraceSample",
    "FitResult",
    "ferrers_p",
    "dirichlet_roots",
    "spectrum",
    "heat_trace",
    "fit_asymptotics",
]

THETA0_GUARD = 2.2  # beyond this the series ratio (1 - cos)/2 exceeds ~0.9
_MAX_SERIES_TERMS = 2_000_000


@dataclass(frozen=True)
class EigenvalueChannel:
    """All Dirichlet roots of one angular channel (fixed mu)."""

    mu: float
    degeneracy: int
    roots: tuple[float, ...]

    def alpha_squared(self, d: int) -> tuple[float, ...]:
        shift = 0.25 * d * d
        return tuple(w * w - shift for w in self.roots)


@dataclass(frozen=True)
class HeatTraceSample:
    """One certified trace value; tail_bound is the relative truncation
    error estimate."""

    t: float
    value: float
    tail_bound: float


@dataclass(frozen=True)
class FitResult:
    coefficients: tuple[float, ...]
    condition_number: float


def _series_state(prec: int, omega: float, mu: float, z: float):
    """Sum the hypergeometric factor of the Ferrers function at fixed
    working precision.  Returns (sum, max term magnitude, converged flag
    meaning the truncation error sits below the roundoff floor)."""
    with mp.workprec(prec):
        zz = mp.mpf(z)
        four_w2 = 4 * mp.mpf(omega) ** 2
        mmu = mp.mpf(mu)
        term = mp.one
        total = mp.one
        max_abs = mp.one
        stop_below = mp.mpf(2) ** (-(prec - 3))
        turn = abs(omega)
        m = 0
        while True:
            # (m + 1/2)^2 - w^2 written over exact integers
            num = (2 * m + 1) ** 2 - four_w2
            den = (4 * (m + 1)) * (m + 1 + mmu)
            term = term * num * zz / den
            total += term
            m += 1
            a = abs(term)
            if a > max_abs:
                max_abs = a
                stop_below = max_abs * mp.mpf(2) ** (-(prec - 3))
            elif a < stop_below and m > turn:
                return total, max_abs
            if m > _MAX_SERIES_TERMS:
                raise SlowConvergence("Ferrers series exceeded the term budget")


def _ferrers_factor(mu: float, omega: float, z: float, state: dict) -> float:
    """2F1(1/2 - w, 1/2 + w; 1 + mu; z), cancellation-safe.

    ``state`` carries the working-precision hint between calls of the same
    channel; precision is re-raised whenever the observed cancellation says
    the current result cannot carry 53 good bits.
    """
    prec = state.get("prec", 64)
    prev_gap = prev_prec = None
    for _ in range(12):
        total, max_abs = _series_state(prec, omega, mu, z)
        if total == 0:
            return 0.0
        gap = float(mp.log(max_abs / abs(total), 2))
        needed = int(gap) + 70
        if needed <= prec:
            # generous hint: within a channel the cancellation grows with
            # omega, and extra bits are cheaper than re-summation
            state["prec"] = max(64, needed + 32)
            return float(total)
        if prev_gap is not None and gap - prev_gap > 0.9 * (prec - prev_prec):
            # the residual shrinks in lockstep with the working precision:
            # the sum is an analytic zero, not a cancellation shortfall
            return 0.0
        prev_gap, prev_prec = gap, prec
        prec = needed + 32
    raise SlowConvergence("Ferrers series precision escalation failed")


def ferrers_p(mu: float, omega: float, x: float) -> float:
    """Ferrers function of the first kind, order -mu, degree -1/2 + omega.

    Evaluated as ((1-x)/(1+x))^(mu/2) 2F1(1/2-w, 1/2+w; 1+mu; (1-x)/2)
    divided by Gamma(1 + mu); even in omega.
    """
    if mu <= 0:
        raise ValidationError("order parameter mu must be positive")
    if not -1.0 < x < 1.0:
        raise ValidationError("argument must lie in (-1, 1)")
    z = 0.5 * (1.0 - x)
    if z > 0.9:
        raise SlowConvergence("argument too close to -1 (angle too close to pi)")
    factor = _ferrers_factor(mu, omega, z, {})
    with mp.workprec(80):
        pref = mp.e ** (
            0.5 * mp.mpf(mu) * (mp.log1p(-x) - mp.log1p(x))
        ) / mp.gamma(1 + mp.mpf(mu))
        return float(pref * factor)


def dirichlet_roots(
    mu: float,
    theta0: float,
    omega_max: float,
    abs_tol: float = 1e-10,
) -> list[float]:
    """All simple roots in (0, omega_max] of the Dirichlet condition at
    theta0: the Ferrers function of order -mu vanishing at cos(theta0).

    Scans with step pi/(4 theta0) (a quarter of the asymptotic root spacing)
    and bisects each sign change; a gap monitor guards against missed roots.
    """
    if not 0.0 < theta0 <= THETA0_GUARD:
        raise ValidationError(f"theta0 must lie in (0, {THETA0_GUARD}]")
    if omega_max <= 0:
        raise ValidationError("omega_max must be positive")
    z = 0.5 * (1.0 - math.cos(theta0))
    state: dict = {}

    def f(w: float) -> float:
        return _ferrers_factor(mu, w, z, state)

    step = math.pi / (4.0 * theta0)
    grid = [step * j for j in range(1, int(omega_max / step) + 1)]
    if not grid or grid[-1] < omega_max:
        grid.append(omega_max)

    roots: list[float] = []
    prev_w, prev_val = 0.0, f(0.0)
    if prev_val == 0.0:
        raise MissedRootSuspicion("unexpected root at omega = 0")
    for w in grid:
        val = f(w)
        if val == 0.0:
            roots.append(w)
        elif (val > 0) != (prev_val > 0):
            lo, hi = prev_w, w
            flo = prev_val
            while hi - lo > abs_tol:
                mid = 0.5 * (lo + hi)
                fm = f(mid)
                if fm == 0.0:
                    lo = hi = mid
                    break
                if (fm > 0) == (flo > 0):
                    lo, flo = mid, fm
                else:
                    hi = mid
            roots.append(0.5 * (lo + hi))
        prev_w, prev_val = w, val

    # Roots settle to spacing pi/theta0 only once omega clears the turning
    # region; below ~2 mu / sin(theta0) wider gaps are genuine, not misses.
    max_gap = 1.5 * math.pi / theta0
    asymptotic_floor = 2.0 * mu / math.sin(theta0)
    for a, b in zip(roots, roots[1:]):
        if a > asymptotic_floor and b - a > max_gap:
            raise MissedRootSuspicion(
                f"gap {b - a:.3f} between roots exceeds {max_gap:.3f}"
            )
    return roots


def spectrum(d: int, theta0: float, omega_max: float) -> list[EigenvalueChannel]:
    """Channels with all their Dirichlet roots up to omega_max.

    The first root of a channel increases with mu, so the channel scan can
    stop at the first channel with no roots in range.
    """
    if d < 2:
        raise ValidationError("the oracle supports sphere bases only (d >= 2)")
    channels: list[EigenvalueChannel] = []
    k = 0
    while True:
        mu = sphere_mu(k, d)
        roots = dirichlet_roots(mu, theta0, omega_max)
        if not roots:
            break
        channels.append(EigenvalueChannel(mu, degeneracy(k, d), tuple(roots)))
        k += 1
    return channels


def _check_positivity(channels: Sequence[EigenvalueChannel], d: int) -> None:
    shift = 0.25 * d * d
    for ch in channels:
        for w in ch.roots:
            if w * w <= shift:
                raise AssumptionViolation(
                    f"eigenvalue omega={w} at mu={ch.mu} is not above d/2"
                )


def _weyl_tail(big_d: int, density: float, omega_max: float, t: float) -> float:
    """Extrapolated truncation tail: integral of the fitted Weyl density
    against the heat weight above the cutoff, times a safety factor."""
    y = omega_max * omega_max * t
    upper = float(mp.gammainc(0.5 * big_d, y))
    tail = (
        density
        * big_d
        * 0.5
        * t ** (-0.5 * big_d)
        * math.exp(0.25 * (big_d - 1) ** 2 * t)
        * upper
    )
    return 3.0 * tail


def default_omega_max(big_d: int, t_min: float, tolerance: float) -> float:
    """Cutoff heuristic: large enough that the Gaussian tail at t_min falls
    below the tolerance; always certified afterwards by the tail bound."""
    log_target = math.log(1.0 / tolerance) + 0.5 * big_d * math.log(1.0 / t_min) + 12.0
    return max(20.0, math.sqrt(log_target / t_min))


def heat_trace(
    cfg: SuspensionConfig,
    t_values: Sequence[float],
    tolerance: float = 1e-6,
    omega_max: float | None = None,
    channels: Sequence[EigenvalueChannel] | None = None,
) -> list[HeatTraceSample]:
    """Truncated heat trace with a certified relative tail estimate.

    Only sphere bases are supported: those are the only bases with closed
    form degeneracies.  Raises TailTooLarge when a requested time is too
    small for the cutoff.
    """
    if not isinstance(cfg.base, SphereBase):
        raise ValidationError("heat_trace supports sphere bases only")
    if not t_values or any(t <= 0 for t in t_values):
        raise ValidationError("t values must be positive")
    d = cfg.d
    if omega_max is None:
        omega_max = default_omega_max(cfg.D, min(t_values), tolerance)
    if channels is None:
        channels = spectrum(d, cfg.angle.theta0, omega_max)
    if not channels:
        raise TailTooLarge("no eigenvalues below the cutoff")
    _check_positivity(channels, d)

    alpha_sq = np.concatenate(
        [np.asarray(ch.alpha_squared(d)) for ch in channels]
    )
    weights = np.concatenate(
        [np.full(len(ch.roots), float(ch.degeneracy)) for ch in channels]
    )
    weighted_count = float(weights.sum())
    density = weighted_count / omega_max**cfg.D

    samples = []
    for t in t_values:
        value = float(weights @ np.exp(-alpha_sq * t))
        tail = _weyl_tail(cfg.D, density, omega_max, t) / value
        if tail > tolerance:
            raise TailTooLarge(
                f"relative tail {tail:.2e} at t={t} exceeds tolerance {tolerance}"
            )
        samples.append(HeatTraceSample(t, value, tail))
    return samples


def fit_asymptotics(
    samples: Sequence[HeatTraceSample], big_d: int, n_fit: int
) -> FitResult:
    """Least-squares fit of the singular small-time expansion.

    Fits K(t) t^(D/2) against powers of sqrt(t) (which equalizes the term
    magnitudes), on an internally rescaled abscissa for conditioning;
    returns the n_fit + 1 expansion coefficients.
    """
    if n_fit > 4:
        raise ValidationError("n_fit is limited to 4")
    if len(samples) < 3 * n_fit:
        raise ValidationError("need at least 3 * n_fit samples")
    t = np.array([s.t for s in samples], dtype=float)
    if t.max() / t.min() < 9.999:
        raise ValidationError("samples must span at least a decade in t")
    y = np.array([s.value for s in samples], dtype=float) * t ** (0.5 * big_d)
    u = np.sqrt(t)
    u_ref = u.max()
    design = (u / u_ref)[:, None] ** np.arange(n_fit + 1)
    cond = float(np.linalg.cond(design))
    if cond > 1e8:
        raise IllConditioned(f"design condition number {cond:.2e} exceeds 1e8")
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    coefficients = tuple(float(c) / u_ref**k for k, c in enumerate(coef))
    return FitResult(coefficients, cond)
