"""Energy and forcing-norm series along the blow-up ladder.

Volume integrals over the cylinder reduce to 2*pi times radial integrals
(unit height, no vertical dependence). The kinetic part of the energy is

    2 pi * int_0^1 w(r, t)^2 r dr

and the dissipation accumulates int_0^t of 2 pi * int_0^1 [(d_r w)^2 +
(w/r)^2] r dr, the vertical gradient vanishing identically. The forcing
norms are L^1 in space; the time integrability exponent is classified by
fitting the tail growth shape on the last ladder levels and extrapolating.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import fsum, inf, isfinite
from typing import Optional

import numpy as np

from .fields import (SolutionFamily, eval_du_dr, eval_u_over_r, eval_v,
                     eval_vbar, eval_u, _y_times_r)
from .numerics import QuadratureSpec, TimeLadder, integrate
from .profiles import EPS0

__all__ = [
    "NormSeries",
    "Classification",
    "NORM_SPEC",
    "energy",
    "energy_series",
    "spatial_L1",
    "spatial_L1_parts",
    "l1_series",
    "classify_LqtL1x",
    "norm_series_rows",
    "NORM_SERIES_HEADER",
]

NORM_SPEC = QuadratureSpec(abs_tol=1e-12, rel_tol=1e-8, max_subdivisions=2000)

_L1_QUANTITIES = ("f", "Y1", "Y2", "Y3", "Y4", "Y")


@dataclass(frozen=True)
class NormSeries:
    """One scalar quantity sampled along a time ladder.

    ``normalizers`` hold the claimed growth shape at each level, so
    ``values / normalizers`` should stay bounded when the claim holds.
    """

    quantity: str
    ladder: TimeLadder
    values: np.ndarray
    normalizers: np.ndarray

    def __post_init__(self):
        if not (len(self.values) == len(self.normalizers) == len(self.ladder)):
            raise ValueError("series length must match the ladder")

    @property
    def ratios(self) -> np.ndarray:
        return np.asarray(self.values) / np.asarray(self.normalizers)


@dataclass(frozen=True)
class Classification:
    """Outcome of an L^q_t integrability scan.

    ``finite`` is None when the tail fit was inconclusive (non-monotone
    data); that outcome is deliberately distinct from finite/infinite.
    """

    finite: Optional[bool]
    estimate: float
    model: str
    tail_exponent: float = 0.0


def _gradient_density(fam: SolutionFamily, which: str):
    if which == "v":
        alpha = fam.alpha

        def density(r, t):
            du = np.asarray(eval_du_dr(fam, r, t), dtype=float)
            uor = np.asarray(eval_u_over_r(fam, r, t), dtype=float)
            return (np.square(du + alpha) + np.square(uor + alpha)) * r
    elif which == "vbar":
        lam = fam.log_wall

        def density(r, t):
            u = np.asarray(eval_u(fam, r, t), dtype=float)
            du = np.asarray(eval_du_dr(fam, r, t), dtype=float)
            uor = np.asarray(eval_u_over_r(fam, r, t), dtype=float)
            # log1p(u)/r with its axis limit u/r * (log1p(u)/u) -> u/r.
            small = np.abs(u) < 1e-8
            scale = np.where(small, 1.0 - 0.5 * u, np.log1p(u) / np.where(small, 1.0, u))
            eta_over_r = uor * scale
            return (np.square(du / (1.0 + u) - lam)
                    + np.square(eta_over_r - lam)) * r
    else:
        raise ValueError("which must be 'v' or 'vbar'")
    return density


def _radial_breakpoints(fam: SolutionFamily, t: float, lo: float, hi: float,
                        grid=None):
    # Seed panels at the self-similar width so compactly supported or
    # core-concentrated integrands are never missed by the first panel.
    scale = np.sqrt(2.0 * (fam.T - t))
    pts = [f * scale for f in (0.25, 0.5, 1.0, 2.0, 4.0)]
    if grid is not None:
        pts.extend(grid.nodes[1:-1:max(1, len(grid) // 8)].tolist())
    return sorted(p for p in set(pts) if lo < p < hi)


def _kinetic(fam: SolutionFamily, which: str, t: float,
             spec: QuadratureSpec, grid=None) -> float:
    w = eval_v if which == "v" else eval_vbar

    def integrand(r):
        wv = np.asarray(w(fam, r, t), dtype=float)
        return wv * wv * r

    value, _ = integrate(integrand, 0.0, 1.0, spec,
                         breakpoints=_radial_breakpoints(fam, t, 0.0, 1.0, grid))
    return 2.0 * np.pi * value


def _dissipation_rate(fam: SolutionFamily, which: str, s: float,
                      spec: QuadratureSpec, grid=None) -> float:
    density = _gradient_density(fam, which)
    value, _ = integrate(lambda r: density(r, s), 0.0, 1.0, spec,
                         breakpoints=_radial_breakpoints(fam, s, 0.0, 1.0, grid))
    return 2.0 * np.pi * value


def _geometric_subpanels(a: float, b: float, parts: int) -> np.ndarray:
    # Breakpoints refined toward b, where the dissipation rate grows.
    offsets = (b - a) * np.power(2.0, -np.arange(1, parts, dtype=float))
    return np.concatenate(([a], b - offsets, [b]))


def _dissipation_integral(fam: SolutionFamily, which: str, t_lo: float,
                          t_hi: float, spec: QuadratureSpec,
                          sub_points: int = 8, grid=None) -> float:
    if t_hi <= t_lo:
        return 0.0
    pts = _geometric_subpanels(t_lo, t_hi, sub_points)
    pieces = []
    for a, b in zip(pts[:-1], pts[1:]):
        value, _ = integrate(
            lambda s: np.array([_dissipation_rate(fam, which, float(v), spec, grid)
                                for v in np.atleast_1d(s)]),
            float(a), float(b),
            QuadratureSpec(abs_tol=1e-10, rel_tol=1e-6, max_subdivisions=64))
        pieces.append(value)
    return fsum(pieces)


def energy(fam: SolutionFamily, which: str, t: float,
           grid=None, ladder: Optional[TimeLadder] = None,
           spec: QuadratureSpec = NORM_SPEC) -> float:
    """Kinetic energy at time t plus dissipation accumulated over [0, t].

    ``grid`` optionally seeds the radial quadrature panels with its nodes.
    The time integral is split along the ladder levels below ``t`` with a
    geometric sub-refinement toward each segment's upper end, matching the
    growth of the rate as the final time approaches.
    """
    if t >= fam.T:
        raise ValueError("energy is defined for t < T")
    breaks = [0.0]
    if ladder is not None:
        breaks.extend(float(x) for x in ladder.levels if x < t)
    breaks.append(float(t))
    diss = fsum(_dissipation_integral(fam, which, a, b, spec, grid=grid)
                for a, b in zip(breaks[:-1], breaks[1:]))
    return _kinetic(fam, which, float(t), spec, grid) + diss


_ENERGY_NORMALIZER = {
    "energy_v": lambda tm: np.abs(np.log(tm)),
    "energy_vbar": lambda tm: np.ones_like(tm),
}


def energy_series(fam: SolutionFamily, which: str, ladder: TimeLadder,
                  spec: QuadratureSpec = NORM_SPEC) -> NormSeries:
    """Energy at every ladder level, reusing the cumulative dissipation."""
    diss = 0.0
    prev = 0.0
    values = []
    for t in ladder.levels:
        diss += _dissipation_integral(fam, which, prev, float(t), spec)
        values.append(_kinetic(fam, which, float(t), spec) + diss)
        prev = float(t)
    quantity = f"energy_{which}"
    return NormSeries(
        quantity=quantity, ladder=ladder, values=np.asarray(values),
        normalizers=_ENERGY_NORMALIZER[quantity](ladder.T_minus))


def spatial_L1_parts(fam: SolutionFamily, quantity: str, t: float,
                     spec: QuadratureSpec = NORM_SPEC) -> tuple[float, float]:
    """(main, axis) split of the spatial L^1 norm at time t.

    ``main`` integrates over [1e-4, 1]; ``axis`` covers the remaining
    sliver (0, 1e-4], where the integrand runs through the profile's series
    form, and is reported separately so it is never silently dropped.
    """
    if quantity not in _L1_QUANTITIES:
        raise ValueError(f"unknown quantity {quantity!r}")
    if quantity != "f" and fam.part != 2:
        raise ValueError("Y quantities need a part-2 family")
    t = float(t)

    def integrand(r):
        return _y_times_r(fam, quantity, r, t)

    main, _ = integrate(integrand, EPS0, 1.0, spec,
                        breakpoints=_radial_breakpoints(fam, t, EPS0, 1.0))
    axis, _ = integrate(integrand, 0.0, EPS0, spec,
                        breakpoints=_radial_breakpoints(fam, t, 0.0, EPS0))
    return 2.0 * np.pi * main, 2.0 * np.pi * axis


def spatial_L1(fam: SolutionFamily, quantity: str, t: float,
               spec: QuadratureSpec = NORM_SPEC) -> float:
    """Spatial L^1 norm including the axis contribution."""
    main, axis = spatial_L1_parts(fam, quantity, t, spec)
    return main + axis


def _log_recip(tm):
    return np.log(1.0 / tm)


_L1_NORMALIZER = {
    "f": lambda tm: 1.0 / np.sqrt(tm),
    "Y1": lambda tm: np.square(_log_recip(tm)),
    "Y2": _log_recip,
    "Y3": lambda tm: np.ones_like(tm),
    "Y4": _log_recip,
    "Y": lambda tm: np.square(_log_recip(tm)),
}


def l1_series(fam: SolutionFamily, quantity: str, ladder: TimeLadder,
              spec: QuadratureSpec = NORM_SPEC) -> NormSeries:
    values = np.array([spatial_L1(fam, quantity, float(t), spec)
                       for t in ladder.levels])
    return NormSeries(
        quantity=f"L1_{quantity}", ladder=ladder, values=values,
        normalizers=_L1_NORMALIZER[quantity](ladder.T_minus))


# --- L^q_t classification ----------------------------------------------------

_TAIL_MODELS = ("const", "log", "log2", "power")


def _tail_fit(u: np.ndarray, v: np.ndarray):
    """Fit v(u) on the last ladder levels; u = T - t decreasing."""
    best = None
    for model in _TAIL_MODELS:
        if model == "power":
            if np.any(v <= 0.0):
                continue
            coef = np.polyfit(np.log(u), np.log(v), 1)
            p = -float(coef[0])
            fitted = np.exp(np.polyval(coef, np.log(u)))
            params = (float(np.exp(coef[1])), p)
        else:
            shape = {"const": np.ones_like(u), "log": _log_recip(u),
                     "log2": np.square(_log_recip(u))}[model]
            design = np.column_stack([np.ones_like(u), shape])
            coef, *_ = np.linalg.lstsq(design, v, rcond=None)
            fitted = design @ coef
            params = (float(coef[0]), float(coef[1]))
        sse = float(np.sum(np.square(fitted - v)))
        if best is None or sse < best[0]:
            best = (sse, model, params)
    return best[1], best[2]


def _tail_integral(model: str, params, q: float, u_last: float) -> tuple[bool, float]:
    """Integral of |model(u)|^q du over (0, u_last]."""
    if model == "power":
        amp, p = params
        if p * q >= 1.0:
            return False, inf
        return True, (amp ** q) * u_last ** (1.0 - p * q) / (1.0 - p * q)
    a0, a1 = params
    shape = {"const": lambda u: np.ones_like(u), "log": _log_recip,
             "log2": lambda u: np.square(_log_recip(u))}[model]

    def integrand(u):
        return np.abs(a0 + a1 * shape(u)) ** q

    value, _ = integrate(integrand, 0.0, u_last,
                         QuadratureSpec(abs_tol=1e-12, rel_tol=1e-6,
                                        max_subdivisions=400))
    return True, value


def classify_LqtL1x(series: NormSeries, q: float, *, tail_points: int = 8) -> Classification:
    """Decide whether int_0^T ||.||^q dt converges.

    The measured part integrates the series by trapezoid; the unreachable
    tail beyond the last ladder level is extrapolated from the best-fitting
    growth shape among {const, log, log^2, power}. A non-monotone tail is
    reported as inconclusive rather than coerced.
    """
    if q <= 0.0:
        raise ValueError("q must be positive")
    v = np.asarray(series.values, dtype=float)
    t = np.asarray(series.ladder.levels, dtype=float)
    tm = np.asarray(series.ladder.T_minus, dtype=float)
    if np.all(np.abs(v) < 1e-300):
        return Classification(finite=True, estimate=0.0, model="zero")

    m = min(tail_points, v.size)
    v_tail = v[-m:]
    diffs = np.diff(v_tail)
    if not (np.all(diffs >= -1e-12 * np.abs(v_tail[:-1]))
            or np.all(diffs <= 1e-12 * np.abs(v_tail[:-1]))):
        return Classification(finite=None, estimate=float("nan"), model="inconclusive")

    main = float(np.trapezoid(np.abs(v) ** q, t)) + (abs(v[0]) ** q) * float(t[0])
    model, params = _tail_fit(tm[-m:], v_tail)
    tail_ok, tail = _tail_integral(model, params, q, float(tm[-1]))
    exponent = params[1] if model == "power" else 0.0
    if not tail_ok:
        return Classification(finite=False, estimate=inf, model=model,
                              tail_exponent=exponent)
    estimate = main + tail
    return Classification(finite=isfinite(estimate), estimate=estimate,
                          model=model, tail_exponent=exponent)


NORM_SERIES_HEADER = ["j", "t_j", "T_minus_t", "value", "normalizer", "ratio"]


def norm_series_rows(series: NormSeries) -> np.ndarray:
    j = np.arange(1, len(series.ladder) + 1, dtype=float)
    return np.column_stack([
        j, series.ladder.levels, series.ladder.T_minus,
        series.values, series.normalizers, series.ratios,
    ])
