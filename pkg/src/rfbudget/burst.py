"""Per-bit energy accounting under a draining energy store.

Every transmitted bit draws e_i = v_i * I / r from the store (current I in
amperes, data rate r in bit/s), and the withdrawal lowers the voltage via
the capacitor energy balance v_{i+1} = sqrt(v_i^2 - 2 e_i / C). Over a
frame this makes successive bits cheaper; to close approximation the
per-bit energies form an arithmetic progression with common difference
(I/r)^2 / C (see ``bit_energy_closed_form``).

The burst machinery here runs the exact recursion, not the progression.
Internally it carries the initial squared voltage and a single running
withdrawal total, so the voltage at any point is

    v = sqrt(v0^2 - 2 * E_total / C)

identically. This makes the energy/voltage bookkeeping independent of how
withdrawals are grouped into segments and keeps the conservation identity
exact to float rounding. ``bit_energy_oracle`` is a deliberately separate,
step-by-step implementation of the same recursion used to cross-check the
closed form and the burst accounting.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .device import DeviceProfile, EscState, FrameLayout, PacketPlan
from .errors import BrownoutWarning, EscDepletedError
from .packet import interpacket_overhead, sleep_energy, wakeup_energy
from .radiopower import current_from_tx_power

# Segment names in transmission order; also used in depletion errors.
FRAME_SEGMENTS = ("phy", "mhr", "msdu", "fcs")

DEFAULT_BROWNOUT_V = 1.8


@dataclass(frozen=True)
class FrameBreakdown:
    """Energy ledger of one frame, split at the protocol segment
    boundaries, with the store voltage after each segment."""

    e_phy_uj: float
    e_mhr_uj: float
    e_msdu_uj: float
    e_fcs_uj: float
    v_after_phy: float
    v_after_mhr: float
    v_after_msdu: float
    v_after_fcs: float

    @property
    def protocol_energy_uj(self) -> float:
        """Overhead frames only (PHY preamble + MHR + FCS), in uJ."""
        return self.e_phy_uj + self.e_mhr_uj + self.e_fcs_uj

    @property
    def total_energy_uj(self) -> float:
        return self.e_phy_uj + self.e_mhr_uj + self.e_msdu_uj + self.e_fcs_uj


@dataclass(frozen=True)
class PacketLedger:
    """Per-packet entry of a burst report.

    ``wake_energy_uj`` is nonzero only for the first packet,
    ``sleep_energy_uj`` only for the last, and ``interpacket_energy_uj``
    is the transceiver off/on overhead spent after this packet (0 when no
    gap follows or the gap is not charged to the budget).
    """

    index: int
    plan: PacketPlan
    supply_current_ma: float
    v_start: float
    frame: FrameBreakdown
    wake_energy_uj: float = 0.0
    interpacket_energy_uj: float = 0.0
    sleep_energy_uj: float = 0.0


@dataclass(frozen=True)
class BurstReport:
    """Full ledger of one burst (wake-up, N packets, sleep).

    ``sample_packet``/``sample_bit``/``sample_cumulative_uj`` are parallel
    arrays with one entry per transmitted bit: the 1-based packet index,
    the 1-based bit position within that packet's frame, and the running
    energy total (uJ) including every lump overhead withdrawn so far. They
    are empty when the burst was simulated with ``record_samples=False``.
    ``total_energy_uj`` additionally includes the final sleep ramp.
    """

    packets: tuple[PacketLedger, ...]
    sample_packet: np.ndarray
    sample_bit: np.ndarray
    sample_cumulative_uj: np.ndarray
    total_energy_uj: float
    final_state: EscState


class _Drain:
    """Squared-voltage ledger for a draining capacitor.

    State is (v0^2, total withdrawn); the voltage is always derived as
    sqrt(v0^2 - 2*total/C), so regrouping withdrawals cannot change any
    downstream value.
    """

    __slots__ = ("capacitance", "_w0", "_c2", "total_joules")

    def __init__(self, voltage: float, capacitance: float):
        if not voltage > 0:
            raise ValueError(f"voltage must be > 0 V, got {voltage}")
        if not capacitance > 0:
            raise ValueError(f"capacitance must be > 0 F, got {capacitance}")
        self.capacitance = capacitance
        self._w0 = voltage * voltage
        self._c2 = 2.0 / capacitance
        self.total_joules = 0.0

    @property
    def voltage(self) -> float:
        return math.sqrt(self._w0 - self._c2 * self.total_joules)

    def withdraw(self, energy_joules: float, *, packet=None, segment=None) -> None:
        """Remove one lump of energy; raises EscDepletedError on underrun."""
        self.total_joules += energy_joules
        if self._w0 - self._c2 * self.total_joules <= 0.0:
            raise EscDepletedError(
                f"energy store depleted by the {segment or 'lump'} withdrawal"
                + (f" of packet {packet}" if packet is not None else ""),
                packet=packet, segment=segment)

    def drain_bits(self, n_bits: int, charge_per_bit: float, *,
                   packet=None, segment=None, out=None) -> float:
        """Draw ``n_bits`` per-bit withdrawals of v * charge_per_bit joules.

        ``charge_per_bit`` is supply current (A) / data rate (bit/s).
        When ``out`` is a list, the running burst total (J) is appended
        after every bit. Returns the energy (J) drawn by this segment.
        """
        w0 = self._w0
        c2 = self._c2
        total = self.total_joules
        start = total
        b = charge_per_bit
        sqrt = math.sqrt
        append = out.append if out is not None else None
        m = w0 - c2 * total
        for i in range(n_bits):
            total += b * sqrt(m)
            m = w0 - c2 * total
            if m <= 0.0:
                self.total_joules = total
                raise EscDepletedError(
                    f"energy store depleted at bit {i + 1} of the "
                    f"{segment or 'segment'}"
                    + (f" in packet {packet}" if packet is not None else ""),
                    packet=packet, segment=segment, bit=i + 1)
            if append is not None:
                append(total)
        self.total_joules = total
        return total - start


def first_bit_energy(v_start: float, supply_current_ma: float,
                     data_rate: float) -> float:
    """Energy (uJ) of the first bit sent at ``v_start`` volts."""
    return v_start * supply_current_ma * 1e-3 / data_rate * 1e6


def bit_energy_closed_form(e_first_uj: float, bit_index: int,
                           supply_current_ma: float, data_rate: float,
                           capacitance: float) -> float:
    """Per-bit energy (uJ) from the arithmetic-progression approximation.

    Bit ``bit_index`` (1-based) of a constant-current, constant-rate run
    costs e_first - (i-1) * (I/r)^2 / C. Valid while the store is far from
    empty; raises EscDepletedError if the progression hits zero.
    """
    if not e_first_uj > 0:
        raise ValueError(f"first-bit energy must be > 0 uJ, got {e_first_uj}")
    if bit_index < 1:
        raise ValueError(f"bit_index is 1-based, got {bit_index}")
    if not capacitance > 0:
        raise ValueError(f"capacitance must be > 0 F, got {capacitance}")
    if not data_rate > 0:
        raise ValueError(f"data_rate must be > 0 bit/s, got {data_rate}")
    step_uj = (supply_current_ma * 1e-3 / data_rate) ** 2 / capacitance * 1e6
    e = e_first_uj - (bit_index - 1) * step_uj
    if e <= 0.0:
        raise EscDepletedError(
            f"closed-form energy non-positive at bit {bit_index}; store "
            "would be depleted", bit=bit_index)
    return e


def bit_energy_oracle(v_start: float, supply_current_ma: float,
                      data_rate: float, capacitance: float,
                      n_bits: int) -> tuple[np.ndarray, float]:
    """Exact per-bit energies (uJ) and final voltage, bit by bit.

    Runs the reference recursion directly: e_i = v_i * I / r, then
    v_{i+1} = sqrt(v_i^2 - 2 e_i / C). Raises EscDepletedError when the
    square-root argument becomes non-positive. This is the independent
    check for both the closed form and the burst accounting; keep it
    simple and separate.
    """
    if n_bits < 1:
        raise ValueError(f"n_bits must be >= 1, got {n_bits}")
    if not v_start > 0:
        raise ValueError(f"v_start must be > 0 V, got {v_start}")
    if not capacitance > 0:
        raise ValueError(f"capacitance must be > 0 F, got {capacitance}")
    if not data_rate > 0:
        raise ValueError(f"data_rate must be > 0 bit/s, got {data_rate}")
    if supply_current_ma < 0:
        raise ValueError(f"supply current must be >= 0 mA, got {supply_current_ma}")
    charge = supply_current_ma * 1e-3 / data_rate
    energies = np.empty(n_bits)
    v = v_start
    for i in range(n_bits):
        e = v * charge
        arg = v * v - 2.0 * e / capacitance
        if arg <= 0.0:
            raise EscDepletedError(
                f"energy store depleted at bit {i + 1} of {n_bits}", bit=i + 1)
        energies[i] = e * 1e6
        v = math.sqrt(arg)
    return energies, v


def segment_energy(v_start: float, supply_current_ma: float, data_rate: float,
                   n_bits: int, capacitance: float) -> tuple[float, float]:
    """Energy (uJ) and final voltage of one n-bit constant-rate segment.

    Exact accounting; agrees with the arithmetic-series sum
    n*e_first - n(n-1)/(2C) * (I/r)^2 to within the progression's
    linearization error.
    """
    if n_bits < 0:
        raise ValueError(f"n_bits must be >= 0, got {n_bits}")
    if not data_rate > 0:
        raise ValueError(f"data_rate must be > 0 bit/s, got {data_rate}")
    if supply_current_ma < 0:
        raise ValueError(f"supply current must be >= 0 mA, got {supply_current_ma}")
    drain = _Drain(v_start, capacitance)
    energy = drain.drain_bits(n_bits, supply_current_ma * 1e-3 / data_rate)
    return energy * 1e6, drain.voltage


def _frame_cascade(drain: _Drain, layout: FrameLayout, msdu_octets: int,
                   supply_current_ma: float, data_rate: float, *,
                   packet=None, out=None) -> FrameBreakdown:
    """Drain one frame through the four protocol segments in order."""
    current_a = supply_current_ma * 1e-3
    plan = (
        ("phy", layout.preamble_bits, current_a / layout.preamble_rate),
        ("mhr", 8 * layout.mhr_octets, current_a / data_rate),
        ("msdu", 8 * msdu_octets, current_a / data_rate),
        ("fcs", 8 * layout.fcs_octets, current_a / data_rate),
    )
    energies = {}
    voltages = {}
    for name, bits, charge in plan:
        energies[name] = drain.drain_bits(bits, charge, packet=packet,
                                          segment=name, out=out) * 1e6
        voltages[name] = drain.voltage
    return FrameBreakdown(
        e_phy_uj=energies["phy"], e_mhr_uj=energies["mhr"],
        e_msdu_uj=energies["msdu"], e_fcs_uj=energies["fcs"],
        v_after_phy=voltages["phy"], v_after_mhr=voltages["mhr"],
        v_after_msdu=voltages["msdu"], v_after_fcs=voltages["fcs"])


def protocol_overhead(layout: FrameLayout, msdu_octets: int,
                      supply_current_ma: float, data_rate: float,
                      v_start: float, capacitance: float) -> FrameBreakdown:
    """Energy breakdown of one frame sent from ``v_start`` volts.

    Chains the PHY preamble (at the preamble rate), MHR, MSDU, and FCS
    segments (at ``data_rate``), threading the post-segment voltage of
    each into the next. A depletion error names the failing segment.
    """
    if msdu_octets < 0 or msdu_octets > layout.max_msdu_octets:
        raise ValueError(
            f"msdu_octets must be in [0, {layout.max_msdu_octets}], got {msdu_octets}")
    if not data_rate > 0:
        raise ValueError(f"data_rate must be > 0 bit/s, got {data_rate}")
    if supply_current_ma < 0:
        raise ValueError(f"supply current must be >= 0 mA, got {supply_current_ma}")
    drain = _Drain(v_start, capacitance)
    return _frame_cascade(drain, layout, msdu_octets, supply_current_ma, data_rate)


def burst_energy(plans: Sequence[PacketPlan], initial: EscState,
                 profile: DeviceProfile, layout: FrameLayout, *,
                 include_final_gap: bool = True,
                 brownout_v: float | None = DEFAULT_BROWNOUT_V,
                 record_samples: bool = True) -> BurstReport:
    """Simulate one active cycle: wake-up, N packets, return to sleep.

    The sequence of withdrawals is: the wake-up lump (evaluated at the
    initial voltage, sized by the first packet's payload); per packet, the
    four-segment frame cascade at the supply current implied by its
    transmit power; after every packet except the last, the transceiver
    off/on overhead; after the last packet, the sleep ramp. Each lump is
    evaluated at the voltage at the start of its interval, and every
    withdrawal lowers the voltage through the capacitor energy balance.

    ``include_final_gap=False`` leaves the off/on overhead of the last gap
    (between packets N-1 and N) out of the budget, matching ledgers that
    only charge gaps to the middle packets.

    A BrownoutWarning is emitted (once) if the voltage dips below
    ``brownout_v``; pass None to disable. ``record_samples=False`` skips
    the per-bit cumulative arrays, which makes repeated feasibility
    simulations cheaper.
    """
    plans = tuple(plans)
    n = len(plans)
    if n == 0:
        raise ValueError("plan must contain >= 1 packet")
    if not initial.voltage > 0:
        raise ValueError(f"initial voltage must be > 0 V, got {initial.voltage}")
    for k, plan in enumerate(plans, 1):
        if plan.msdu_octets > layout.max_msdu_octets:
            raise ValueError(
                f"packet {k}: msdu_octets {plan.msdu_octets} exceeds the "
                f"layout maximum {layout.max_msdu_octets}")
    currents = [current_from_tx_power(profile, plan.tx_power) for plan in plans]

    drain = _Drain(initial.voltage, initial.capacitance)
    cum_joules: list[float] | None = [] if record_samples else None
    sample_packet: list[int] = []
    sample_bit: list[int] = []
    ledger: list[PacketLedger] = []
    v_min = initial.voltage

    wake_uj = wakeup_energy(profile, drain.voltage, plans[0].msdu_octets)
    drain.withdraw(wake_uj * 1e-6, packet=1, segment="wake-up")

    for j, (plan, current_ma) in enumerate(zip(plans, currents), 1):
        v_start = drain.voltage
        frame = _frame_cascade(drain, layout, plan.msdu_octets, current_ma,
                               plan.data_rate, packet=j, out=cum_joules)
        if record_samples:
            frame_bits = layout.frame_bits(plan.msdu_octets)
            sample_packet.extend([j] * frame_bits)
            sample_bit.extend(range(1, frame_bits + 1))

        gap_uj = 0.0
        sleep_uj = 0.0
        if j < n:
            if include_final_gap or j < n - 1:
                gap_uj = interpacket_overhead(profile, frame.v_after_fcs, current_ma)
                drain.withdraw(gap_uj * 1e-6, packet=j, segment="inter-packet")
        else:
            sleep_uj = sleep_energy(profile, frame.v_after_fcs, current_ma)
            drain.withdraw(sleep_uj * 1e-6, packet=j, segment="sleep")

        ledger.append(PacketLedger(
            index=j, plan=plan, supply_current_ma=current_ma, v_start=v_start,
            frame=frame, wake_energy_uj=wake_uj if j == 1 else 0.0,
            interpacket_energy_uj=gap_uj, sleep_energy_uj=sleep_uj))
        v_min = min(v_min, drain.voltage)

    if brownout_v is not None and v_min < brownout_v:
        warnings.warn(
            f"supply voltage reached {v_min:.3f} V, below the {brownout_v:.2f} V "
            "brown-out level; the device constants are unvalidated down there",
            BrownoutWarning, stacklevel=2)

    cum_uj = (np.asarray(cum_joules) * 1e6 if record_samples
              else np.empty(0))
    return BurstReport(
        packets=tuple(ledger),
        sample_packet=np.asarray(sample_packet, dtype=np.int32),
        sample_bit=np.asarray(sample_bit, dtype=np.int32),
        sample_cumulative_uj=cum_uj,
        total_energy_uj=drain.total_joules * 1e6,
        final_state=EscState(initial.capacitance, drain.voltage))
