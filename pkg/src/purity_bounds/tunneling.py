"""Semiclassical (WKB) barrier transparency with an effective Planck constant.

The transmission probability through a single potential barrier is taken as
the pure exponent

    D = exp(-(2 / hbar_eff) * integral sqrt(2 m (V(x) - E)) dx)

over the classically forbidden region {x : V(x) > E}, with pre-exponential
factor 1.  Replacing hbar by the purity/correlation-dependent hbar_eff is
the whole mechanism studied here: hbar_eff enters only through the exponent
denominator, so ln D * hbar_eff = -2 * action identically.

Rectangular and parabolic barriers use closed-form actions and turning
points; sampled barriers are interpolated with monotone cubics (PCHIP),
turning points located by bisection, and the action integrated with an
adaptive quadrature that substitutes u^2 = x - x_turn near each turning
point to remove the square-root endpoint singularity.  Only single-hump
barriers are supported: if a sampled potential dips below E between the
turning points, the integrand is clamped at zero (resonant structures are
out of scope).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator

from .bounds import phi_eval
from .errors import ResolutionError
from .records import SweepRecord
from .thermal import ThermalModel, thermal_purity

ACTION_ABS_TOL = 1e-10
TURNING_POINT_TOL = 1e-12
# Fraction of the forbidden-region width handled by the square-root
# substitution on each side.
_EDGE_FRACTION = 0.1
# A sampled barrier must put at least this many grid nodes strictly above
# the energy, otherwise the grid cannot resolve the hump.
_MIN_NODES_ABOVE = 3


@dataclass(frozen=True)
class RectangularBarrier:
    v0: float
    width: float
    mass: float = 1.0
    shape = "rectangular"

    def __post_init__(self):
        if self.v0 <= 0 or self.width <= 0 or self.mass <= 0:
            raise ValueError("v0, width and mass must be positive")


@dataclass(frozen=True)
class ParabolicBarrier:
    """Inverted parabola V(x) = v0 - curvature x^2 / 2."""

    v0: float
    curvature: float
    mass: float = 1.0
    shape = "parabolic"

    def __post_init__(self):
        if self.v0 <= 0 or self.curvature <= 0 or self.mass <= 0:
            raise ValueError("v0, curvature and mass must be positive")


@dataclass(frozen=True)
class SampledBarrier:
    """Potential given on a strictly increasing grid; zero outside the grid."""

    x: np.ndarray
    v: np.ndarray
    mass: float = 1.0
    shape = "sampled"

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        v = np.asarray(self.v, dtype=float)
        if x.ndim != 1 or v.ndim != 1 or len(x) != len(v):
            raise ValueError("x and v must be equal-length 1-d grids")
        if len(x) < 8:
            raise ValueError("sampled barrier needs at least 8 grid points")
        if np.any(np.diff(x) <= 0):
            raise ValueError("x grid must be strictly increasing")
        if self.mass <= 0:
            raise ValueError("mass must be positive")
        x.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "v", v)


BarrierSpec = RectangularBarrier | ParabolicBarrier | SampledBarrier


@dataclass(frozen=True)
class TransparencyResult:
    D: float
    ln_D: float
    action_integral: float
    turning_points: tuple[float, float] | None
    hbar_eff_used: float


def barrier_max(barrier: BarrierSpec) -> float:
    if isinstance(barrier, (RectangularBarrier, ParabolicBarrier)):
        return barrier.v0
    return float(np.max(barrier.v))


def action_integral(v, energy: float, mass: float, x1: float, x2: float,
                    tol: float = ACTION_ABS_TOL) -> float:
    """Integrate sqrt(2 m (V - E)) over [x1, x2] with endpoint substitutions.

    ``v`` is a callable potential.  The integrand vanishes like a square
    root at each turning point; substituting u^2 = x - x1 (and mirrored on
    the right) over the outer 10% of the interval makes both edge pieces
    smooth, and the interior is handled by plain adaptive quadrature.
    """
    width = x2 - x1
    if width <= 0:
        return 0.0

    def f(x):
        return math.sqrt(2.0 * mass * max(float(v(x)) - energy, 0.0))

    cut = _EDGE_FRACTION * width
    piece_tol = tol / 3.0

    left, _ = quad(lambda u: 2.0 * u * f(x1 + u * u), 0.0, math.sqrt(cut),
                   epsabs=piece_tol, epsrel=1e-12, limit=200)
    right, _ = quad(lambda u: 2.0 * u * f(x2 - u * u), 0.0, math.sqrt(cut),
                    epsabs=piece_tol, epsrel=1e-12, limit=200)
    interior, _ = quad(f, x1 + cut, x2 - cut,
                       epsabs=piece_tol, epsrel=1e-12, limit=200)
    return left + interior + right


def _bisect_crossing(v, energy: float, lo: float, hi: float) -> float:
    """Root of V(x) - E on [lo, hi] where the sign differs at the ends."""
    flo = float(v(lo)) - energy
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = float(v(mid)) - energy
        if hi - lo <= TURNING_POINT_TOL:
            break
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _sampled_forbidden_region(barrier: SampledBarrier, energy: float):
    """Turning points of the hump containing the grid maximum, or None."""
    x, v = barrier.x, barrier.v
    if float(np.max(v)) <= energy:
        return None
    above = v > energy
    if int(np.count_nonzero(above)) < _MIN_NODES_ABOVE:
        raise ResolutionError(
            f"only {int(np.count_nonzero(above))} grid nodes lie above E = {energy}; "
            "the grid is too coarse to resolve the barrier"
        )
    interp = PchipInterpolator(x, v)
    peak = int(np.argmax(v))

    below_left = np.flatnonzero(~above[: peak + 1])
    if len(below_left) == 0:
        x1 = float(x[0])  # potential is zero outside the grid, so the
        # forbidden region starts right at the grid edge
    else:
        j = int(below_left[-1])
        x1 = _bisect_crossing(interp, energy, float(x[j]), float(x[j + 1]))

    below_right = np.flatnonzero(~above[peak:])
    if len(below_right) == 0:
        x2 = float(x[-1])
    else:
        j = peak + int(below_right[0])
        x2 = _bisect_crossing(interp, energy, float(x[j - 1]), float(x[j]))
    return interp, x1, x2


def transparency(barrier: BarrierSpec, energy: float, hbar_eff: float) -> TransparencyResult:
    """WKB transparency of the barrier at the given energy and hbar_eff.

    Energy at or above the barrier top gives D = 1 with an empty forbidden
    region (no turning points).
    """
    if energy <= 0:
        raise ValueError(f"energy {energy!r} must be positive")
    if hbar_eff <= 0:
        raise ValueError(f"hbar_eff {hbar_eff!r} must be positive")

    if energy >= barrier_max(barrier):
        return TransparencyResult(D=1.0, ln_D=0.0, action_integral=0.0,
                                  turning_points=None, hbar_eff_used=hbar_eff)

    if isinstance(barrier, RectangularBarrier):
        points = (0.0, barrier.width)
        action = barrier.width * math.sqrt(2.0 * barrier.mass * (barrier.v0 - energy))
    elif isinstance(barrier, ParabolicBarrier):
        x_t = math.sqrt(2.0 * (barrier.v0 - energy) / barrier.curvature)
        points = (-x_t, x_t)
        action = math.pi * (barrier.v0 - energy) * math.sqrt(barrier.mass / barrier.curvature)
    else:
        region = _sampled_forbidden_region(barrier, energy)
        if region is None:
            return TransparencyResult(D=1.0, ln_D=0.0, action_integral=0.0,
                                      turning_points=None, hbar_eff_used=hbar_eff)
        interp, x1, x2 = region
        points = (x1, x2)
        action = action_integral(interp, energy, barrier.mass, x1, x2)

    ln_d = -2.0 * action / hbar_eff
    return TransparencyResult(D=math.exp(ln_d), ln_D=ln_d, action_integral=action,
                              turning_points=points, hbar_eff_used=hbar_eff)


def transparency_vs_purity(
    barrier: BarrierSpec,
    energy: float,
    hbar: float,
    r: float,
    mu_grid,
    phi_mode: str = "exact",
) -> list[SweepRecord]:
    """Transparency along a purity grid; records carry mu^-1 ln D."""
    if abs(r) >= 1.0:
        raise ValueError(f"|r| = {abs(r)!r} must be < 1")
    base = transparency(barrier, energy, hbar)
    action = base.action_integral
    records = []
    for mu in np.asarray(mu_grid, dtype=float):
        mu = float(mu)
        pv = phi_eval(mu, phi_mode)
        hbar_eff = hbar * pv.value / math.sqrt(1.0 - r * r)
        ln_d = -2.0 * action / hbar_eff
        records.append(
            SweepRecord(
                param_name="mu",
                param_value=mu,
                mu=mu,
                phi=pv.value,
                phi_piece=pv.piece,
                hbar_eff=hbar_eff,
                r=r,
                action=action,
                ln_D=ln_d,
                D=math.exp(ln_d),
                invariant_product=ln_d / mu,
            )
        )
    return records


def transparency_vs_temperature(
    barrier: BarrierSpec,
    energy: float,
    hbar: float,
    model: ThermalModel,
    t_grid,
    r: float = 0.0,
    phi_mode: str = "exact",
) -> list[SweepRecord]:
    """Transparency along a temperature grid; records carry T ln D.

    In "asymptote" mode the full high-temperature chain is used: the purity
    itself is replaced by its asymptote hbar omega / (2T) before Phi is
    evaluated, which makes T ln D exactly constant.  The other modes use the
    exact thermal purity.
    """
    if abs(r) >= 1.0:
        raise ValueError(f"|r| = {abs(r)!r} must be < 1")
    base = transparency(barrier, energy, hbar)
    action = base.action_integral
    records = []
    for T in np.asarray(t_grid, dtype=float):
        T = float(T)
        mu_asym = model.hbar * model.omega / (2.0 * T)
        mu = mu_asym if phi_mode == "asymptote" else thermal_purity(model, T)
        pv = phi_eval(mu, phi_mode)
        hbar_eff = hbar * pv.value / math.sqrt(1.0 - r * r)
        ln_d = -2.0 * action / hbar_eff
        records.append(
            SweepRecord(
                param_name="T",
                param_value=T,
                mu=mu,
                phi=pv.value,
                phi_piece=pv.piece,
                hbar_eff=hbar_eff,
                mu_asymptote=mu_asym,
                r=r,
                action=action,
                ln_D=ln_d,
                D=math.exp(ln_d),
                invariant_product=T * ln_d,
            )
        )
    return records
