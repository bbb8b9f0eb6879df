"""Row type shared by the parametric sweeps (temperature, purity, time)."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SweepRecord:
    """One row of a parametric sweep.

    ``param_name`` is "T", "mu" or "t"; fields that a particular sweep does
    not produce stay ``None`` (e.g. no transparency data in a plain thermal
    sweep, no partition function in a purity sweep).
    """

    param_name: str
    param_value: float
    mu: float
    phi: float
    phi_piece: str
    hbar_eff: float
    Z: float | None = None
    mu_asymptote: float | None = None
    r: float | None = None
    action: float | None = None
    ln_D: float | None = None
    D: float | None = None
    invariant_product: float | None = None
