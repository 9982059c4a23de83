"""Supercapacitor charging model: predict, fit, and invert.

A harvester charging an energy storage component (ESC) behaves like an RC
circuit driven by the harvester's open-circuit voltage:

    v(t) = v_oc * (1 - exp(-t / (r_eq * C)))

Both v_oc and r_eq depend on the RF environment and on the capacitor
itself, so they are treated as per-trace fitted constants rather than
derived from circuit design. The open-circuit voltage of a harvester also
varies strongly with incident RF power; ``OcvTable`` interpolates measured
(incident dBm, open-circuit V) points.
"""

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import least_squares

from .device import EscState
from .errors import FitError, UnreachableVoltageError

# Sanity ceiling for ESC voltages; small harvesters stay far below this.
MAX_PHYSICAL_VOC = 10.0


@dataclass(frozen=True)
class ChargeModel:
    """Fitted charging curve: open-circuit voltage (V), equivalent
    impedance (ohm), and capacitance (F)."""

    v_oc: float
    r_eq: float
    capacitance: float

    def __post_init__(self):
        if not self.v_oc > 0:
            raise ValueError(f"v_oc must be > 0 V, got {self.v_oc}")
        if not self.r_eq > 0:
            raise ValueError(f"r_eq must be > 0 ohm, got {self.r_eq}")
        if not self.capacitance > 0:
            raise ValueError(f"capacitance must be > 0 F, got {self.capacitance}")

    @property
    def tau(self) -> float:
        """RC time constant in seconds."""
        return self.r_eq * self.capacitance


@dataclass(frozen=True)
class VoltageSample:
    """One ESC voltage measurement: time since charge start (s), volts."""

    t: float
    v: float

    def __post_init__(self):
        if self.t < 0:
            raise ValueError(f"sample time must be >= 0 s, got {self.t}")
        if self.v < 0:
            raise ValueError(f"sample voltage must be >= 0 V, got {self.v}")


class OcvTable:
    """Measured open-circuit voltage versus incident RF power.

    Points must be strictly increasing in both coordinates. Lookups
    interpolate linearly in the (dBm, V) plane and clamp to the end values
    outside the measured range; ``clamps`` reports whether a query falls
    outside.
    """

    def __init__(self, points: Iterable[tuple[float, float]]):
        pts = tuple((float(p), float(v)) for p, v in points)
        if not pts:
            raise ValueError("OCV table must contain at least one point")
        for (p0, v0), (p1, v1) in zip(pts, pts[1:]):
            if not (p1 > p0 and v1 > v0):
                raise ValueError(
                    "OCV table points must be strictly increasing in both "
                    f"coordinates; offending pair ({p0}, {v0}) -> ({p1}, {v1})")
        self.points = pts
        self._p = np.array([p for p, _ in pts])
        self._v = np.array([v for _, v in pts])

    @classmethod
    def p2110(cls) -> "OcvTable":
        """Measured table for the Powercast P2110 harvester."""
        return cls([(-14.0, 0.4), (-11.3, 0.9), (-8.5, 1.6), (-7.0, 2.0),
                    (-5.0, 2.6), (-3.0, 3.2), (-2.0, 4.0)])

    def voltage_at(self, p_dbm: float) -> float:
        return float(np.interp(p_dbm, self._p, self._v))

    def clamps(self, p_dbm: float) -> bool:
        """True when ``p_dbm`` falls outside the measured range."""
        return bool(p_dbm < self.points[0][0] or p_dbm > self.points[-1][0])

    def __len__(self) -> int:
        return len(self.points)

    def __repr__(self) -> str:
        return f"OcvTable({list(self.points)!r})"


def charge_voltage(model: ChargeModel, t: float) -> float:
    """ESC voltage (V) after charging for ``t`` seconds from empty."""
    if t < 0:
        raise ValueError(f"time must be >= 0 s, got {t}")
    # -expm1 keeps precision for t << tau
    return -model.v_oc * math.expm1(-t / model.tau)


def stored_energy(state: EscState) -> float:
    """Energy held by the ESC in joules: C * V^2 / 2."""
    return 0.5 * state.capacitance * state.voltage ** 2


def time_to_voltage(model: ChargeModel, v_target: float) -> float:
    """Seconds of charging from empty until the ESC reaches ``v_target``.

    The target must lie strictly below the open-circuit voltage, which the
    charging curve only approaches asymptotically.
    """
    if v_target < 0:
        raise ValueError(f"target voltage must be >= 0 V, got {v_target}")
    if v_target >= model.v_oc:
        raise UnreachableVoltageError(
            f"target {v_target} V is not below the open-circuit voltage "
            f"{model.v_oc} V")
    return -model.tau * math.log1p(-v_target / model.v_oc)


def prediction_error(model: ChargeModel, samples: Sequence[VoltageSample]) -> float:
    """Mean absolute difference (V) between the model and the samples."""
    if not samples:
        raise ValueError("prediction_error needs at least one sample")
    return sum(abs(charge_voltage(model, s.t) - s.v) for s in samples) / len(samples)


def _as_arrays(samples: Sequence[VoltageSample]) -> tuple[np.ndarray, np.ndarray]:
    ts = np.array([s.t for s in samples], dtype=float)
    vs = np.array([s.v for s in samples], dtype=float)
    return ts, vs


def fit_charge_model(samples: Sequence[VoltageSample], capacitance: float) -> ChargeModel:
    """Least-squares fit of (v_oc, r_eq) to a charging trace.

    Needs at least three samples at two or more distinct times, with some
    voltage variation. Seeds v_oc slightly above the highest measured
    voltage and r_eq from a closed-form inversion of the earliest usable
    sample, then refines with a bounded trust-region least-squares solve.

    Raises FitError when the trace cannot constrain the fit.
    """
    if not capacitance > 0:
        raise ValueError(f"capacitance must be > 0 F, got {capacitance}")
    if len(samples) < 3:
        raise FitError(f"need at least 3 samples to fit, got {len(samples)}")
    ts, vs = _as_arrays(samples)
    if len(np.unique(ts)) < 2:
        raise FitError("need samples at >= 2 distinct times")
    if float(np.ptp(vs)) == 0.0:
        raise FitError("degenerate trace: all voltages equal")
    v_max = float(vs.max())
    if v_max > MAX_PHYSICAL_VOC:
        raise FitError(
            f"sample voltage {v_max} V exceeds the physical ceiling "
            f"{MAX_PHYSICAL_VOC} V; wrong units?")

    v_oc0 = 1.05 * v_max
    r0 = None
    for t, v in sorted(zip(ts, vs)):
        if t > 0 and 0 < v < v_oc0:
            r0 = -t / (capacitance * math.log1p(-v / v_oc0))
            break
    if r0 is None or not math.isfinite(r0) or r0 <= 0:
        r0 = (float(ts.max()) or 1.0) / capacitance

    def residual(params):
        v_oc, r = params
        return v_oc * -np.expm1(-ts / (r * capacitance)) - vs

    result = least_squares(residual, x0=[v_oc0, r0],
                           bounds=([1e-12, 1e-12], [np.inf, np.inf]))
    if not result.success:
        raise FitError(f"charge-model fit did not converge: {result.message}")
    v_oc, r_eq = result.x
    return ChargeModel(v_oc=float(v_oc), r_eq=float(r_eq), capacitance=capacitance)


def fit_r_known_voc(samples: Sequence[VoltageSample], capacitance: float,
                    v_oc: float) -> ChargeModel:
    """Fit only the equivalent impedance when v_oc was measured directly.

    A single exact sample at t > 0 inverts the charging curve in closed
    form; several samples are reconciled by a one-dimensional least-squares
    refinement seeded with the median of the per-sample inversions.
    """
    if not capacitance > 0:
        raise ValueError(f"capacitance must be > 0 F, got {capacitance}")
    if not v_oc > 0:
        raise ValueError(f"v_oc must be > 0 V, got {v_oc}")
    if not samples:
        raise FitError("need at least one sample to fit r_eq")
    for s in samples:
        if s.v >= v_oc:
            raise FitError(
                f"sample voltage {s.v} V is not below v_oc {v_oc} V; "
                "the charging curve never reaches the open-circuit voltage")
    estimates = [-s.t / (capacitance * math.log1p(-s.v / v_oc))
                 for s in samples if s.t > 0 and s.v > 0]
    if not estimates:
        raise FitError("no usable sample with t > 0 and v > 0")
    if len(estimates) == 1 and len(samples) == 1:
        return ChargeModel(v_oc=v_oc, r_eq=estimates[0], capacitance=capacitance)

    ts, vs = _as_arrays(samples)
    r0 = float(np.median(estimates))

    def residual(params):
        (r,) = params
        return v_oc * -np.expm1(-ts / (r * capacitance)) - vs

    result = least_squares(residual, x0=[r0], bounds=([1e-12], [np.inf]))
    if not result.success:
        raise FitError(f"impedance fit did not converge: {result.message}")
    return ChargeModel(v_oc=v_oc, r_eq=float(result.x[0]), capacitance=capacitance)


def ocv_from_power(table: OcvTable, p_dbm: float) -> float:
    """Open-circuit voltage (V) for an incident power, via ``table``."""
    return table.voltage_at(p_dbm)
