"""Radial swirl profile built from a compactly supported forcing profile.

Given a smooth k supported in [0, 1], the stationary profile in the
self-similar variable solves

    p'' + p'/r - p/r^2 - p - r p' = k(r),    p(0) = 0,

which integrates in closed form through g = r p:

    g(r) = -int_0^r s e^{s^2/2} I(s) ds,    I(s) = int_s^1 e^{-l^2/2} k(l) dl.

The profile, its first two derivatives, the inner integral I and the wall
constant alpha = -g(1) are all served from high-accuracy cached splines (for
bulk field evaluation) with direct adaptive quadrature retained for
verification-grade calls.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from .numerics import DEFAULT_SPEC, QuadratureSpec, integrate

__all__ = [
    "EPS0",
    "ForcingProfile",
    "SwirlProfile",
    "reference_k",
    "zero_forcing",
    "forcing_from_samples",
    "inner_integral",
    "build_profile",
    "ode_residual",
    "profile_table",
]

# Axis cutoff: below this value of the profile variable the closed form is
# 0/0 and evaluation switches to the convergent power series.
EPS0 = 1e-4

# Cache resolution for the I and g splines on [0, 1].
_CACHE_PANELS = 2048


@dataclass(frozen=True)
class ForcingProfile:
    """Smooth forcing profile k(r), identically zero outside [0, 1].

    ``nonpositive``/``nontrivial`` carry the admissibility facts needed by
    the log-transformed solution family (k <= 0 everywhere, k not
    identically zero). ``k_prime0`` is dk/dr at r = 0, used only by the
    axis series (third-order term); zero is a safe default.
    """

    k: Callable[[np.ndarray], np.ndarray]
    nonpositive: bool
    nontrivial: bool
    support: tuple[float, float] = (0.0, 1.0)
    k_prime0: float = 0.0

    def __call__(self, r):
        return self.k(r)


def _bump(r):
    r = np.asarray(r, dtype=float)
    out = np.zeros(r.shape)
    inside = (r > 0.0) & (r < 1.0)
    ri = r[inside]
    out[inside] = -np.exp(-1.0 / (ri * (1.0 - ri)))
    return out


def reference_k() -> ForcingProfile:
    """The standard boundary-flat bump k(r) = -exp(-1/(r(1-r))) on (0, 1).

    Smooth on all of R, supported in [0, 1], nonpositive and nontrivial, so
    it satisfies every hypothesis both solution families need.
    """
    return ForcingProfile(k=_bump, nonpositive=True, nontrivial=True)


def bump_forcing(amplitude: float = 1.0) -> ForcingProfile:
    """The reference bump scaled by ``amplitude`` (> 0).

    The construction is linear in the forcing, so scaling only changes the
    solution amplitude. Larger amplitudes pull the log-saturation scale of
    the transformed family into the observable ladder window, which the
    asymptotic norm checks rely on; the admissibility hypotheses are
    unaffected.
    """
    if amplitude <= 0.0:
        raise ValueError("amplitude must be positive")
    if amplitude == 1.0:
        return reference_k()
    return ForcingProfile(k=lambda r: amplitude * _bump(r),
                          nonpositive=True, nontrivial=True)


def zero_forcing() -> ForcingProfile:
    """k identically zero; the degenerate profile used by trivial checks."""
    return ForcingProfile(k=lambda r: np.zeros(np.asarray(r, dtype=float).shape),
                          nonpositive=True, nontrivial=False)


def forcing_from_samples(r_samples, k_samples, *, endpoint_tol: float = 1e-12) -> ForcingProfile:
    """Cubic interpolant through sampled (r, k) pairs on [0, 1].

    Endpoint values are forced to zero (with a warning when they exceed
    ``endpoint_tol``) so the support constraint holds exactly.
    """
    r = np.asarray(r_samples, dtype=float)
    k = np.asarray(k_samples, dtype=float).copy()
    if r.ndim != 1 or r.size < 4 or r.shape != k.shape:
        raise ValueError("need at least four aligned (r, k) samples")
    if not np.all(np.diff(r) > 0.0):
        raise ValueError("sample radii must be strictly increasing")
    if r[0] != 0.0 or r[-1] != 1.0:
        raise ValueError("samples must span [0, 1] exactly")
    for idx in (0, -1):
        if abs(k[idx]) > endpoint_tol:
            warnings.warn(
                f"forcing table endpoint k({r[idx]:g}) = {k[idx]:.3e} forced to zero",
                stacklevel=2)
        k[idx] = 0.0
    spline = CubicSpline(r, k, bc_type="natural")

    def evaluate(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        inside = (x > 0.0) & (x < 1.0)
        out[inside] = spline(x[inside])
        return out

    probe = np.linspace(0.0, 1.0, 4097)
    vals = evaluate(probe)
    return ForcingProfile(
        k=evaluate,
        nonpositive=bool(np.all(vals <= endpoint_tol)),
        nontrivial=bool(np.any(np.abs(vals) > endpoint_tol)),
        k_prime0=float(spline(0.0, 1)),
    )


def inner_integral(k: ForcingProfile, s: float,
                   spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """I(s) = integral of e^{-l^2/2} k(l) over [s, infinity).

    The support of k truncates the integral exactly at l = 1, so I(s) = 0
    for s >= 1 with no tail approximation.
    """
    s = float(s)
    if s < 0.0:
        raise ValueError("inner integral requires s >= 0")
    if s >= 1.0:
        return 0.0
    value, _ = integrate(lambda l: np.exp(-0.5 * l * l) * k(l), s, 1.0, spec)
    return value


def _gl_panel_value(f, a, b):
    # Single 21-point Gauss panel; used for the cache sweep where each panel
    # is far below rounding error already.
    from .numerics import _W21, _X21  # local import keeps module surface tidy
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return half * float(_W21 @ np.asarray(f(mid + half * _X21), dtype=float))


@dataclass
class SwirlProfile:
    """Profile bundle: I, g = r*phi0, phi0 and two derivatives, alpha.

    Bulk evaluation runs off cubic Hermite caches whose nodal values come
    from panel-by-panel Gauss sweeps and whose nodal slopes are the exact
    closed forms; interpolation error sits near rounding, far below the
    requested quadrature tolerance. Verification-grade variants re-derive
    values by direct adaptive quadrature.
    """

    k: ForcingProfile
    spec: QuadratureSpec
    alpha: float
    I0: float
    g1: float
    _I_spline: CubicHermiteSpline = field(repr=False)
    _g_spline: CubicHermiteSpline = field(repr=False)
    _c1: float = field(repr=False)
    _c2: float = field(repr=False)
    _c3: float = field(repr=False)

    # -- inner integral ----------------------------------------------------
    def I(self, s, exact: bool = False):
        s_arr = np.asarray(s, dtype=float)
        if np.any(s_arr < 0.0):
            raise ValueError("inner integral requires s >= 0")
        if exact:
            flat = np.atleast_1d(s_arr)
            out = np.array([inner_integral(self.k, v, self.spec) for v in flat])
            return out.reshape(s_arr.shape) if s_arr.ndim else float(out[0])
        out = np.zeros(s_arr.shape)
        inside = s_arr < 1.0
        out[inside] = self._I_spline(s_arr[inside])
        return out if s_arr.ndim else float(out)

    # -- g and its closed-form derivatives ---------------------------------
    def g(self, r):
        r_arr = np.asarray(r, dtype=float)
        out = np.empty(r_arr.shape)
        tail = r_arr >= 1.0
        series = r_arr < EPS0
        mid = ~(tail | series)
        out[tail] = self.g1
        rs = r_arr[series]
        out[series] = rs * rs * (self._c1 + rs * (self._c2 + rs * self._c3))
        out[mid] = self._g_spline(r_arr[mid])
        return out if r_arr.ndim else float(out)

    def g_exact(self, r: float, spec: Optional[QuadratureSpec] = None) -> float:
        """g by direct adaptive quadrature, inner integral re-derived per node."""
        spec = spec or self.spec
        r = float(min(r, 1.0))
        if r <= 0.0:
            return 0.0

        def integrand(s):
            s = np.atleast_1d(s)
            iv = np.array([inner_integral(self.k, v, spec) for v in s])
            return -s * np.exp(0.5 * s * s) * iv

        value, _ = integrate(integrand, 0.0, r, spec)
        return value

    def g_prime(self, r):
        r_arr = np.asarray(r, dtype=float)
        out = np.zeros(r_arr.shape)
        inside = r_arr < 1.0
        ri = r_arr[inside]
        out[inside] = -ri * np.exp(0.5 * ri * ri) * self._I_spline(ri)
        return out if r_arr.ndim else float(out)

    def g_second(self, r):
        r_arr = np.asarray(r, dtype=float)
        out = np.zeros(r_arr.shape)
        inside = r_arr < 1.0
        ri = r_arr[inside]
        out[inside] = (-(1.0 + ri * ri) * np.exp(0.5 * ri * ri) * self._I_spline(ri)
                       + ri * np.asarray(self.k(ri), dtype=float))
        return out if r_arr.ndim else float(out)

    # -- phi0 family --------------------------------------------------------
    def phi0(self, r):
        r_arr = np.asarray(r, dtype=float)
        out = np.empty(r_arr.shape)
        tail = r_arr >= 1.0
        series = r_arr < EPS0
        mid = ~(tail | series)
        out[tail] = self.g1 / r_arr[tail]
        rs = r_arr[series]
        out[series] = rs * (self._c1 + rs * (self._c2 + rs * self._c3))
        rm = r_arr[mid]
        out[mid] = self._g_spline(rm) / rm
        return out if r_arr.ndim else float(out)

    def phi0_over_r(self, r):
        """phi0(r)/r with its finite axis limit -I(0)/2."""
        r_arr = np.asarray(r, dtype=float)
        out = np.empty(r_arr.shape)
        tail = r_arr >= 1.0
        series = r_arr < EPS0
        mid = ~(tail | series)
        rt = r_arr[tail]
        out[tail] = self.g1 / (rt * rt)
        rs = r_arr[series]
        out[series] = self._c1 + rs * (self._c2 + rs * self._c3)
        rm = r_arr[mid]
        out[mid] = self._g_spline(rm) / (rm * rm)
        return out if r_arr.ndim else float(out)

    def phi0_prime(self, r):
        r_arr = np.asarray(r, dtype=float)
        out = np.empty(r_arr.shape)
        tail = r_arr >= 1.0
        series = r_arr < EPS0
        mid = ~(tail | series)
        rt = r_arr[tail]
        out[tail] = -self.g1 / (rt * rt)
        rs = r_arr[series]
        out[series] = self._c1 + rs * (2.0 * self._c2 + 3.0 * self._c3 * rs)
        rm = r_arr[mid]
        gm = self._g_spline(rm)
        gpm = -rm * np.exp(0.5 * rm * rm) * self._I_spline(rm)
        out[mid] = gpm / rm - gm / (rm * rm)
        return out if r_arr.ndim else float(out)

    def phi0_second(self, r):
        r_arr = np.asarray(r, dtype=float)
        out = np.empty(r_arr.shape)
        tail = r_arr >= 1.0
        series = r_arr < EPS0
        mid = ~(tail | series)
        rt = r_arr[tail]
        out[tail] = 2.0 * self.g1 / (rt ** 3)
        rs = r_arr[series]
        out[series] = 2.0 * self._c2 + 6.0 * self._c3 * rs
        rm = r_arr[mid]
        em = np.exp(0.5 * rm * rm)
        im = self._I_spline(rm)
        gm = self._g_spline(rm)
        gpm = -rm * em * im
        gsm = -(1.0 + rm * rm) * em * im + rm * np.asarray(self.k(rm), dtype=float)
        out[mid] = gsm / rm - 2.0 * gpm / (rm * rm) + 2.0 * gm / (rm ** 3)
        return out if r_arr.ndim else float(out)

    def phi0_exact(self, r: float, spec: Optional[QuadratureSpec] = None) -> float:
        """phi0 by direct quadrature; the independent path of the two-path check."""
        r = float(r)
        if r <= 0.0:
            return 0.0
        return self.g_exact(r, spec) / r if r < 1.0 else self.g_exact(1.0, spec) / r


def build_profile(k: ForcingProfile, spec: QuadratureSpec = DEFAULT_SPEC,
                  cache_panels: int = _CACHE_PANELS) -> SwirlProfile:
    """Construct the swirl profile for ``k``.

    The caches accumulate panel-by-panel Gauss values (each panel is exact
    to rounding at this resolution); spline slopes are the exact closed
    forms, so cached evaluation is accurate to ~1e-14 absolute, well below
    ``spec`` tolerances.
    """
    nodes = np.linspace(0.0, 1.0, cache_panels + 1)

    def i_kernel(l):
        return np.exp(-0.5 * l * l) * np.asarray(k(l), dtype=float)

    seg = np.array([_gl_panel_value(i_kernel, nodes[i], nodes[i + 1])
                    for i in range(cache_panels)])
    i_nodes = np.concatenate((np.flip(np.cumsum(np.flip(seg))), [0.0]))
    i_slope = -i_kernel(nodes)
    i_spline = CubicHermiteSpline(nodes, i_nodes, i_slope)

    def g_kernel(s):
        return -s * np.exp(0.5 * s * s) * i_spline(s)

    gseg = np.array([_gl_panel_value(g_kernel, nodes[i], nodes[i + 1])
                     for i in range(cache_panels)])
    g_nodes = np.concatenate(([0.0], np.cumsum(gseg)))
    g_slope = -nodes * np.exp(0.5 * nodes * nodes) * i_nodes
    g_spline = CubicHermiteSpline(nodes, g_nodes, g_slope)

    i0 = float(i_nodes[0])
    g1 = float(g_nodes[-1])
    k0 = float(np.asarray(k(np.array([0.0])), dtype=float)[0])
    return SwirlProfile(
        k=k, spec=spec,
        alpha=-g1, I0=i0, g1=g1,
        _I_spline=i_spline, _g_spline=g_spline,
        _c1=-0.5 * i0, _c2=k0 / 3.0, _c3=(k.k_prime0 - i0) / 8.0,
    )


def ode_residual(profile: SwirlProfile, r):
    """Defect of the profile in its defining equation at radius r > 0.

    Assembled from the closed-form derivative chain (never finite
    differences), so quadrature and interpolation are the only error
    sources.
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr <= 0.0):
        raise ValueError("ode_residual requires r > 0")
    p = profile.phi0(r_arr)
    pp = profile.phi0_prime(r_arr)
    ps = profile.phi0_second(r_arr)
    kv = np.where(r_arr < 1.0, np.asarray(profile.k(r_arr), dtype=float), 0.0)
    out = ps + pp / r_arr - p / (r_arr * r_arr) - p - r_arr * pp - kv
    return out if r_arr.ndim else float(out)


def profile_table(profile: SwirlProfile, radii) -> np.ndarray:
    """Columns r, phi0, phi0_prime, phi0_second, ode_residual."""
    r = np.asarray(radii, dtype=float)
    return np.column_stack([
        r,
        profile.phi0(r),
        profile.phi0_prime(r),
        profile.phi0_second(r),
        ode_residual(profile, r),
    ])
