"""Transmit power versus supply current: the S-curve model and its fit.

Measured IoT transceivers do not spend supply current linearly in
transmit power. Near the radio's floor most of the current feeds the MCU
and peripherals; near the ceiling extra current buys almost no power. A
shifted sigmoid captures this:

    p_t(c) = alpha1 - alpha2 / (exp(alpha3 * (c - alpha4)) + 1)

with p_t in dBm and the supply current c in mA. System power is simply
v_cc * c (mW for V and mA). No vendor publishes the coefficients, so they
are fitted from register-sweep calibrations.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import least_squares

from .device import DeviceProfile
from .errors import FitError

# exp() overflows doubles near 710; beyond this the sigmoid term is ~0 anyway
_EXP_CLIP = 700.0


@dataclass(frozen=True)
class CalibrationPoint:
    """One calibration measurement: supply current (mA), transmit power (dBm)."""

    supply_current: float
    tx_power: float

    def __post_init__(self):
        if not self.supply_current > 0:
            raise ValueError(
                f"supply_current must be > 0 mA, got {self.supply_current}")


class SigmoidCoefficients(NamedTuple):
    alpha1: float  # dBm
    alpha2: float  # dBm
    alpha3: float  # 1/mA
    alpha4: float  # mA


def tx_power_from_current(profile: DeviceProfile, supply_current_ma: float) -> float:
    """Transmit power (dBm) drawn from the fitted S-curve at a supply current."""
    if supply_current_ma < 0:
        raise ValueError(f"supply current must be >= 0 mA, got {supply_current_ma}")
    a1, a2, a3, a4 = profile.sigmoid_coefficients()
    x = a3 * (supply_current_ma - a4)
    if x > _EXP_CLIP:
        return a1
    return a1 - a2 / (math.exp(x) + 1.0)


def current_from_tx_power(profile: DeviceProfile, tx_power_dbm: float) -> float:
    """Supply current (mA) required for a transmit power; closed-form inverse.

    The S-curve only spans the open interval (alpha1 - alpha2, alpha1);
    powers outside it are unattainable for the device.
    """
    a1, a2, a3, a4 = profile.sigmoid_coefficients()
    if not (a1 - a2) < tx_power_dbm < a1:
        raise ValueError(
            f"transmit power {tx_power_dbm} dBm outside the attainable open "
            f"interval ({a1 - a2}, {a1}) dBm")
    return a4 + math.log(a2 / (a1 - tx_power_dbm) - 1.0) / a3


def system_power(v_cc: float, supply_current_ma: float) -> float:
    """System power consumption in mW: supply voltage times supply current."""
    if v_cc < 0:
        raise ValueError(f"supply voltage must be >= 0 V, got {v_cc}")
    if supply_current_ma < 0:
        raise ValueError(f"supply current must be >= 0 mA, got {supply_current_ma}")
    return v_cc * supply_current_ma


def fit_sigmoid(points: Sequence[CalibrationPoint], *,
                monotone_tol: float = 0.5) -> SigmoidCoefficients:
    """Least-squares fit of the four S-curve coefficients to a calibration.

    Needs at least six points spanning the curve; the measured power must
    be nondecreasing with current up to ``monotone_tol`` dB of noise.
    Returned alpha2 and alpha3 are strictly positive so the fitted curve
    is increasing.
    """
    if len(points) < 6:
        raise FitError(f"need at least 6 calibration points, got {len(points)}")
    pts = sorted(points, key=lambda p: p.supply_current)
    cs = np.array([p.supply_current for p in pts])
    ps = np.array([p.tx_power for p in pts])
    drops = np.nonzero(np.diff(ps) < -monotone_tol)[0]
    if drops.size:
        i = int(drops[0])
        raise FitError(
            "calibration power is not monotone in current beyond the "
            f"{monotone_tol} dB noise tolerance ({ps[i]:.3g} dBm at "
            f"{cs[i]:.3g} mA followed by {ps[i + 1]:.3g} dBm at {cs[i + 1]:.3g} mA)")
    p_span = float(np.ptp(ps))
    if p_span == 0.0:
        raise FitError("degenerate calibration: all powers equal")

    # Seeds: asymptotes from the data range, midpoint from the half-power
    # crossing, slope from the steepest local gradient (= alpha2*alpha3/4
    # at the midpoint of an exact sigmoid).
    a1_0 = float(ps.max()) + 0.05 * p_span
    a2_0 = 1.1 * p_span
    mid = float(ps.min()) + 0.5 * p_span
    a4_0 = float(cs[np.argmin(np.abs(ps - mid))])
    dc = np.diff(cs)
    good = dc > 0
    slope = float(np.max(np.diff(ps)[good] / dc[good])) if good.any() else 1.0
    a3_0 = max(4.0 * slope / a2_0, 1e-3)

    def residual(params):
        a1, a2, a3, a4 = params
        x = np.clip(a3 * (cs - a4), -_EXP_CLIP, _EXP_CLIP)
        return a1 - a2 / (np.exp(x) + 1.0) - ps

    result = least_squares(residual, x0=[a1_0, a2_0, a3_0, a4_0],
                           bounds=([-np.inf, 1e-9, 1e-9, -np.inf],
                                   [np.inf, np.inf, np.inf, np.inf]))
    if not result.success:
        raise FitError(f"sigmoid fit did not converge: {result.message}")
    a1, a2, a3, a4 = (float(x) for x in result.x)
    return SigmoidCoefficients(a1, a2, a3, a4)
