"""Uncertainty bounds for the position-momentum variance product.

Three nested bounds are evaluated for a state with variances sigma_qq,
sigma_pp, covariance sigma_qp, correlation r and purity mu (hbar explicit):

    Heisenberg             sigma_qq sigma_pp             >= hbar^2 / 4
    Schrodinger-Robertson  sigma_qq sigma_pp - sigma_qp^2 >= hbar^2 / 4
                           (equivalently  sigma_qq sigma_pp >= hbar^2 / (4 (1 - r^2)))
    purity-dependent       sigma_qq sigma_pp >= hbar^2 Phi^2(mu) / (4 (1 - r^2))

Phi(mu) >= 1 is the purity-dependent multiplier of the quantum limit; the
whole chain can be read as the Heisenberg relation with an effective Planck
constant hbar_eff = hbar Phi(mu) / sqrt(1 - r^2).

Phi is piecewise.  The second analytic piece is implemented as
3 - sqrt(8 (mu - 1/3)) on [7/18, 5/9]: the variant sometimes quoted with
the constant 2/3 inside the root has a negative radicand over that whole
interval, while the 1/3 form is real, continuous with the first piece at
mu = 5/9, and reproduced independently by the constrained minimizer in the
``oracle`` module (see VERIFICATION.md).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCorrelationError
from .moments import SecondMoments

# Domain edges of the analytic pieces of Phi.
PHI_PIECE1_MIN = 5.0 / 9.0
PHI_PIECE2_MIN = 7.0 / 18.0

PHI_MODES = ("exact", "interpolation", "asymptote")

# Below 7/18 no exact piece is implemented, so purity-bound pass flags are
# advisory: a violation within this relative slack still counts as a pass.
ADVISORY_RELATIVE_SLACK = 0.02

_MU_DOMAIN_TOL = 1e-12


@dataclass(frozen=True)
class PhiValue:
    """Resolved Phi evaluation: value, the piece that produced it, fallback flag."""

    value: float
    piece: str  # exact-piece-1 | exact-piece-2 | interpolation | asymptote
    fallback: bool


def _check_mu(mu: float) -> float:
    if not mu > 0.0 or mu > 1.0 + _MU_DOMAIN_TOL:
        raise ValueError(f"purity {mu!r} outside (0, 1]")
    return min(float(mu), 1.0)


def phi_eval(mu: float, mode: str = "exact") -> PhiValue:
    """Evaluate Phi(mu) in the requested mode.

    Modes:
      exact          analytic pieces on [7/18, 1]; below 7/18 falls back to
                     the interpolation with ``fallback=True``
      interpolation  Phi_app(mu) = (4 + sqrt(16 + 9 mu^2)) / (9 mu)
      asymptote      8 / (9 mu), valid only for mu << 1
    """
    mu = _check_mu(mu)
    if mode == "exact":
        if mu >= PHI_PIECE1_MIN:
            return PhiValue(2.0 - math.sqrt(2.0 * mu - 1.0), "exact-piece-1", False)
        if mu >= PHI_PIECE2_MIN:
            return PhiValue(3.0 - math.sqrt(8.0 * (mu - 1.0 / 3.0)), "exact-piece-2", False)
        return PhiValue(_phi_app(mu), "interpolation", True)
    if mode == "interpolation":
        return PhiValue(_phi_app(mu), "interpolation", False)
    if mode == "asymptote":
        return PhiValue(8.0 / (9.0 * mu), "asymptote", False)
    raise ValueError(f"unknown phi mode {mode!r}; expected one of {PHI_MODES}")


def _phi_app(mu: float) -> float:
    return (4.0 + math.sqrt(16.0 + 9.0 * mu * mu)) / (9.0 * mu)


def phi(mu: float, mode: str = "exact") -> float:
    """Purity-dependent bound multiplier Phi(mu) >= 1 (scalar value only)."""
    return phi_eval(mu, mode).value


def effective_hbar(hbar: float, r: float, mu: float, phi_mode: str = "exact") -> float:
    """Effective Planck constant hbar Phi(mu) / sqrt(1 - r^2).

    Reduces to hbar / sqrt(1 - r^2) for pure states and to plain hbar for
    uncorrelated pure states.
    """
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    if abs(r) >= 1.0:
        raise DegenerateCorrelationError(f"|r| = {abs(r)!r} must be < 1")
    return hbar * phi(mu, phi_mode) / math.sqrt(1.0 - r * r)


@dataclass(frozen=True)
class MomentMatrixA:
    """Hermitian 2x2 matrix [[sigma_qq, sigma_qp + i hbar/2], [c.c., sigma_pp]].

    The state is physical iff both eigenvalues are nonnegative, which is the
    matrix form of the Schrodinger-Robertson relation.
    """

    matrix: np.ndarray
    eigenvalues: tuple[float, float]

    def is_physical(self, tol: float = 1e-10) -> bool:
        return self.eigenvalues[0] >= -tol


def moment_matrix(m: SecondMoments, hbar: float) -> MomentMatrixA:
    """Build the moment matrix of the nonnegativity quadratic form."""
    a = np.array(
        [
            [m.sigma_qq, m.sigma_qp + 0.5j * hbar],
            [m.sigma_qp - 0.5j * hbar, m.sigma_pp],
        ],
        dtype=complex,
    )
    half_tr = 0.5 * (m.sigma_qq + m.sigma_pp)
    # Closed form for a 2x2 Hermitian matrix.
    radius = math.sqrt((0.5 * (m.sigma_qq - m.sigma_pp)) ** 2 + m.sigma_qp**2 + 0.25 * hbar**2)
    return MomentMatrixA(matrix=a, eigenvalues=(half_tr - radius, half_tr + radius))


@dataclass(frozen=True)
class BoundReport:
    """All three bounds, their slacks and pass flags for one set of moments."""

    heisenberg_bound: float
    sr_bound: float
    purity_bound: float
    product: float
    sr_lhs: float
    hbar_eff: float
    phi_value: float
    phi_piece: str
    phi_fallback: bool
    heisenberg_slack: float
    sr_slack: float
    purity_slack: float
    heisenberg_pass: bool
    sr_pass: bool
    purity_pass: bool


def evaluate_bounds(m: SecondMoments, hbar: float, phi_mode: str = "exact") -> BoundReport:
    """Evaluate the Heisenberg, Schrodinger-Robertson and purity bounds.

    Slacks are reported as lhs - rhs of each inequality.  The purity-bound
    pass flag is strict for mu >= 7/18 (where an exact Phi piece exists) and
    advisory below: there a deficit within ``ADVISORY_RELATIVE_SLACK`` of the
    bound still passes, because the interpolating Phi carries no error bound.
    """
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    if abs(m.r) >= 1.0:
        raise DegenerateCorrelationError(f"|r| = {abs(m.r)!r} must be < 1")
    pv = phi_eval(m.mu, phi_mode)
    product = m.sigma_qq * m.sigma_pp
    sr_lhs = product - m.sigma_qp**2
    quarter = hbar**2 / 4.0
    one_minus_r2 = 1.0 - m.r * m.r

    heis_bound = quarter
    sr_bound = quarter / one_minus_r2
    purity_bound = quarter * pv.value**2 / one_minus_r2

    strict = m.mu >= PHI_PIECE2_MIN - 1e-15
    purity_floor = purity_bound if strict else purity_bound * (1.0 - ADVISORY_RELATIVE_SLACK)

    return BoundReport(
        heisenberg_bound=heis_bound,
        sr_bound=sr_bound,
        purity_bound=purity_bound,
        product=product,
        sr_lhs=sr_lhs,
        hbar_eff=hbar * pv.value / math.sqrt(one_minus_r2),
        phi_value=pv.value,
        phi_piece=pv.piece,
        phi_fallback=pv.fallback,
        heisenberg_slack=product - heis_bound,
        sr_slack=sr_lhs - quarter,
        purity_slack=product - purity_bound,
        heisenberg_pass=product >= heis_bound,
        sr_pass=sr_lhs >= quarter,
        purity_pass=product >= purity_floor,
    )
