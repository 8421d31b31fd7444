"""Space-time evaluation of the blow-up swirl family and its log transform.

All fields are axisymmetric and swirl-only: the radial and vertical velocity
components vanish and nothing depends on the vertical coordinate, so the
data model carries (r, t) only and volume integrals over the cylinder reduce
to 2*pi times radial integrals.

The primary family is

    u(r, t) = phi0(sigma) / sqrt(2 (T - t)),   sigma = r / sqrt(2 (T - t)),
    v       = u + alpha * r,

which is singular at t = T, and the log-transformed family

    eta  = log(1 + u),          vbar = eta - log(1 - alpha) * r,

defined when the forcing profile is nonpositive (u >= 0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BlowupTimeError, DomainError, InvariantViolation
from .numerics import DEFAULT_SPEC, QuadratureSpec, integrate
from .profiles import EPS0, SwirlProfile

__all__ = [
    "SolutionFamily",
    "FieldSample",
    "VectorFieldValue",
    "eval_u",
    "eval_v",
    "eval_eta",
    "eval_vbar",
    "eval_du_dr",
    "eval_pressure",
    "eval_h",
    "eval_Y",
    "sample",
    "velocity",
    "field_slice_rows",
    "FIELD_SLICE_HEADER",
]


@dataclass(frozen=True)
class SolutionFamily:
    """A finite-cylinder solution family with final time T in (0, 1/2].

    ``part`` selects the plain swirl solution (1) or its log transform (2).
    Part 2 requires a nonpositive forcing profile so that u >= 0; a trivial
    (identically zero) profile is accepted and simply yields zero fields,
    although the blow-up statements are then empty.
    """

    profile: SwirlProfile
    T: float = 0.5
    part: int = 1

    def __post_init__(self):
        if not (0.0 < self.T <= 0.5):
            raise ValueError("final time T must lie in (0, 1/2]")
        if self.part not in (1, 2):
            raise ValueError("part must be 1 or 2")
        if self.part == 2 and not self.profile.k.nonpositive:
            raise ValueError("part 2 requires a nonpositive forcing profile")

    @property
    def alpha(self) -> float:
        return self.profile.alpha

    @property
    def log_wall(self) -> float:
        """log(1 - alpha), the wall value of eta."""
        return float(np.log1p(-self.profile.alpha))


@dataclass(frozen=True)
class FieldSample:
    """All fields of the family evaluated at one (r, t) point."""

    r: float
    t: float
    sigma: float
    values: dict


@dataclass(frozen=True)
class VectorFieldValue:
    """Cylindrical velocity components; swirl-only fields by construction."""

    v_theta: float
    v_r: float = 0.0
    v_3: float = 0.0


def _validate(fam: SolutionFamily, r, t):
    r = np.asarray(r, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(r < 0.0) or np.any(r > 1.0):
        raise DomainError("radius outside the cylinder [0, 1]")
    if np.any(t >= fam.T):
        raise BlowupTimeError(f"time at or beyond the final time T = {fam.T}")
    if np.any(t < 0.0):
        raise DomainError("negative time")
    return r, t


def _tau(fam: SolutionFamily, t):
    return 2.0 * (fam.T - np.asarray(t, dtype=float))


def _shaped(value, r, t):
    if np.ndim(r) == 0 and np.ndim(t) == 0:
        return float(value)
    return value


def eval_u(fam: SolutionFamily, r, t):
    """Swirl component of the self-similar solution."""
    r, t = _validate(fam, r, t)
    tau = _tau(fam, t)
    sigma = r / np.sqrt(tau)
    out = fam.profile.phi0(sigma) / np.sqrt(tau)
    return _shaped(out, r, t)


def eval_u_over_r(fam: SolutionFamily, r, t):
    """u/r with its finite axis limit; used by gradient-type integrands."""
    r, t = _validate(fam, r, t)
    tau = _tau(fam, t)
    sigma = r / np.sqrt(tau)
    return _shaped(fam.profile.phi0_over_r(sigma) / tau, r, t)


def eval_du_dr(fam: SolutionFamily, r, t):
    """Radial derivative of u from the analytic profile chain."""
    r, t = _validate(fam, r, t)
    tau = _tau(fam, t)
    sigma = r / np.sqrt(tau)
    return _shaped(fam.profile.phi0_prime(sigma) / tau, r, t)


def eval_v(fam: SolutionFamily, r, t):
    """Swirl component with the wall-cancelling linear correction."""
    r, t = _validate(fam, r, t)
    tau = _tau(fam, t)
    sigma = r / np.sqrt(tau)
    out = fam.profile.phi0(sigma) / np.sqrt(tau) + fam.alpha * r
    return _shaped(out, r, t)


def eval_eta(fam: SolutionFamily, r, t):
    """log(1 + u); requires the part-2 admissible family."""
    if fam.part != 2:
        raise ValueError("eta is defined for part-2 families")
    r, t = _validate(fam, r, t)
    tau = _tau(fam, t)
    sigma = r / np.sqrt(tau)
    phi = fam.profile.phi0(sigma) / np.sqrt(tau)
    if np.any(phi <= -1.0):
        raise InvariantViolation("1 + u must stay positive for admissible forcing")
    return _shaped(np.log1p(phi), r, t)


def eval_vbar(fam: SolutionFamily, r, t):
    """eta minus its wall value times r; vanishes at both r = 0 and r = 1."""
    if fam.part != 2:
        raise ValueError("vbar is defined for part-2 families")
    r, t = _validate(fam, r, t)
    tau = _tau(fam, t)
    sigma = r / np.sqrt(tau)
    phi = fam.profile.phi0(sigma) / np.sqrt(tau)
    if np.any(phi <= -1.0):
        raise InvariantViolation("1 + u must stay positive for admissible forcing")
    out = np.log1p(phi) - fam.log_wall * r
    return _shaped(out, r, t)


def eval_h(fam: SolutionFamily, r, t):
    """Forcing swirl component of the plain family.

    Supported where sigma < 1, i.e. r < sqrt(2 (T - t)); zero outside.
    """
    r, t = _validate(fam, r, t)
    tau = _tau(fam, t)
    sigma = r / np.sqrt(tau)
    kv = np.where(sigma < 1.0, np.asarray(fam.profile.k(sigma), dtype=float), 0.0)
    return _shaped(kv / np.power(tau, 1.5), r, t)


def eval_pressure(fam: SolutionFamily, which: str, r: float, t: float,
                  spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Pressure normalized to P(0, t) = 0: the integral of w^2/l over (0, r].

    ``which`` selects the swirl field w (``"v"`` or ``"vbar"``). The
    integrand extends continuously by zero at the axis since w = O(l).
    """
    if which not in ("v", "vbar"):
        raise ValueError("which must be 'v' or 'vbar'")
    r = float(r)
    t = float(t)
    _validate(fam, r, t)
    if r == 0.0:
        return 0.0
    w = eval_v if which == "v" else eval_vbar

    def integrand(l):
        wl = np.asarray(w(fam, l, t), dtype=float)
        return wl * wl / l

    value, _ = integrate(integrand, 0.0, r, spec)
    return value


def eval_Y(fam: SolutionFamily, r, t):
    """The four forcing components of the log-transformed equation.

    Returns (Y1, Y2, Y3, Y4, Y) with

        Y1 = -eta / r^2,            Y2 = u / (r^2 (1 + u)),
        Y3 = h / (1 + u),           Y4 = -(du/dr / (1 + u))^2,

    and Y their sum. The first two are 0/0 at the axis; evaluation is
    restricted to r >= 1e-4 and the norm integrals handle the remaining
    sliver through the series form.
    """
    if fam.part != 2:
        raise ValueError("Y is defined for part-2 families")
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < EPS0):
        raise DomainError(f"Y components are served for r >= {EPS0:g}")
    return _y_terms(fam, r, t)


def _y_terms(fam: SolutionFamily, r, t):
    """Y components without the axis cutoff; integrands use this directly."""
    r, t = _validate(fam, r, t)
    tau = _tau(fam, t)
    sigma = r / np.sqrt(tau)
    prof = fam.profile
    phi = prof.phi0(sigma) / np.sqrt(tau)
    one_plus = 1.0 + phi
    if np.any(one_plus <= 0.0):
        raise InvariantViolation("1 + u must stay positive for admissible forcing")
    dphi = prof.phi0_prime(sigma) / tau
    kv = np.where(sigma < 1.0, np.asarray(prof.k(sigma), dtype=float), 0.0)
    h = kv / np.power(tau, 1.5)
    r2 = r * r
    y1 = -np.log1p(phi) / r2
    y2 = phi / (r2 * one_plus)
    y3 = h / one_plus
    y4 = -np.square(dphi / one_plus)
    y = y1 + y2 + y3 + y4
    if np.ndim(r) == 0 and np.ndim(t) == 0:
        return tuple(float(v) for v in (y1, y2, y3, y4, y))
    return y1, y2, y3, y4, y


def _y_times_r(fam: SolutionFamily, quantity: str, r, t):
    """|quantity| * r against the radial measure; finite down to r = 0."""
    r = np.asarray(r, dtype=float)
    if quantity == "f":
        return np.abs(eval_h(fam, r, t)) * r
    y1, y2, y3, y4, y = _y_terms(fam, r, t)
    q = {"Y1": y1, "Y2": y2, "Y3": y3, "Y4": y4, "Y": y}[quantity]
    return np.abs(q) * r


def sample(fam: SolutionFamily, r: float, t: float) -> FieldSample:
    """Every field of the family at one point, for export and inspection."""
    r = float(r)
    t = float(t)
    _validate(fam, r, t)
    tau = 2.0 * (fam.T - t)
    sigma = r / np.sqrt(tau)
    values = {
        "u": eval_u(fam, r, t),
        "v": eval_v(fam, r, t),
        "h": eval_h(fam, r, t),
        "P": eval_pressure(fam, "v", r, t),
    }
    if fam.part == 2:
        values["eta"] = eval_eta(fam, r, t)
        values["vbar"] = eval_vbar(fam, r, t)
        if r >= EPS0:
            y1, y2, y3, y4, y = eval_Y(fam, r, t)
            values.update(Y1=y1, Y2=y2, Y3=y3, Y4=y4, Y=y)
    return FieldSample(r=r, t=t, sigma=float(sigma), values=values)


def velocity(fam: SolutionFamily, which: str, r: float, t: float) -> VectorFieldValue:
    """Full cylindrical velocity vector; radial and vertical parts are zero."""
    w = {"u": eval_u, "v": eval_v, "vbar": eval_vbar}[which]
    return VectorFieldValue(v_theta=float(w(fam, r, t)))


FIELD_SLICE_HEADER = ["r", "t", "sigma", "u", "v", "eta", "vbar", "P", "h",
                      "Y1", "Y2", "Y3", "Y4"]


def field_slice_rows(fam: SolutionFamily, radii, times) -> np.ndarray:
    """Tensor-product field slice; part-1 families report NaN for log fields."""
    rows = []
    for t in np.asarray(times, dtype=float):
        for r in np.asarray(radii, dtype=float):
            s = sample(fam, float(r), float(t))
            v = s.values
            rows.append([
                s.r, s.t, s.sigma, v["u"], v["v"],
                v.get("eta", np.nan), v.get("vbar", np.nan),
                v["P"], v["h"],
                v.get("Y1", np.nan), v.get("Y2", np.nan),
                v.get("Y3", np.nan), v.get("Y4", np.nan),
            ])
    return np.asarray(rows, dtype=float)
