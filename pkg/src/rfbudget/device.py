"""Device, frame, store, and plan parameter records.

All records are frozen dataclasses: construct once, share freely across
threads. Field units follow datasheet conventions (times in ms, currents
in mA, capacitance in farads, voltages in volts, rates in bit/s). Energy
formulas elsewhere in the package multiply (V, mA, ms) directly, which
yields microjoules.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class DeviceProfile:
    """Per-device constants of the power model.

    The sigmoid coefficients ``alpha1..alpha4`` map supply current (mA) to
    transmit power (dBm): p_t = alpha1 - alpha2 / (exp(alpha3*(c - alpha4)) + 1).
    They are device specific and have no sensible universal default, so
    they stay unset until measured (see ``fit_sigmoid``) or configured.
    The remaining constants default to measured values for an
    ATmega256RFR2-class IEEE 802.15.4 node and can be overridden for other
    hardware.
    """

    alpha1: float | None = None      # dBm, asymptote scale
    alpha2: float | None = None      # dBm, sigmoid depth
    alpha3: float | None = None      # 1/mA, slope; > 0
    alpha4: float | None = None      # mA, midpoint current
    wake_slope: float = 0.004        # ms per payload octet
    wake_intercept: float = 1.395    # ms
    wake_current: float = 7.8        # mA, average draw while waking
    sleep_time: float = 0.45         # ms, data-transfer -> deep-sleep ramp
    txrx_off_current: float = 4.0    # mA, CPU-only draw, transceiver off
    txrx_on_time: float = 0.86       # ms to re-enable the transceiver
    txrx_off_time: float = 0.2       # ms to disable the transceiver
    txrx_on_current: float = 10.25   # mA while re-enabling

    def __post_init__(self):
        for name in ("wake_slope", "wake_intercept", "wake_current",
                     "sleep_time", "txrx_off_current", "txrx_on_time",
                     "txrx_off_time", "txrx_on_current"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        alphas = (self.alpha1, self.alpha2, self.alpha3, self.alpha4)
        provided = [a is not None for a in alphas]
        if any(provided) and not all(provided):
            raise ValueError("sigmoid coefficients alpha1..alpha4 must be "
                             "provided together")
        if self.alpha3 is not None and not self.alpha3 > 0:
            raise ValueError(f"alpha3 must be > 0, got {self.alpha3}")

    @property
    def has_sigmoid(self) -> bool:
        return self.alpha1 is not None

    def sigmoid_coefficients(self) -> tuple[float, float, float, float]:
        """The four sigmoid coefficients; raises if the profile has none."""
        if not self.has_sigmoid:
            raise ValueError("device profile has no sigmoid coefficients "
                             "(alpha1..alpha4); fit or configure them first")
        return (self.alpha1, self.alpha2, self.alpha3, self.alpha4)


@dataclass(frozen=True)
class FrameLayout:
    """IEEE 802.15.4 frame segment lengths (octets) and the preamble rate.

    Defaults describe a frame with 6-octet addressing and a 10-octet
    auxiliary security header, leaving up to 106 octets of MSDU payload.
    The SHR+PHR preamble is always sent at 250 kbit/s; the rest of the
    frame goes out at the configured data rate.
    """

    shr_octets: int = 5
    phr_octets: int = 1
    mhr_octets: int = 19             # FCF 2 + SN 1 + addressing 6 + aux security 10
    fcs_octets: int = 2
    max_msdu_octets: int = 106
    preamble_rate: float = 250_000.0  # bit/s, fixed by the standard

    def __post_init__(self):
        for name in ("shr_octets", "phr_octets", "mhr_octets", "fcs_octets",
                     "max_msdu_octets"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if not self.preamble_rate > 0:
            raise ValueError(f"preamble_rate must be > 0, got {self.preamble_rate}")

    @property
    def preamble_bits(self) -> int:
        """Bits sent at the preamble rate (SHR + PHR); 48 under defaults."""
        return 8 * (self.shr_octets + self.phr_octets)

    @property
    def overhead_psdu_octets(self) -> int:
        """PSDU octets that are protocol overhead (MHR + FCS); 21 under defaults."""
        return self.mhr_octets + self.fcs_octets

    def frame_bits(self, msdu_octets: int) -> int:
        """Total bits on air for a frame carrying ``msdu_octets`` of payload."""
        return self.preamble_bits + 8 * (self.mhr_octets + msdu_octets + self.fcs_octets)


@dataclass(frozen=True)
class EscState:
    """Energy storage component state: capacitance (F) and voltage (V)."""

    capacitance: float
    voltage: float

    def __post_init__(self):
        if not self.capacitance > 0:
            raise ValueError(f"capacitance must be > 0 F, got {self.capacitance}")
        if self.voltage < 0:
            raise ValueError(f"voltage must be >= 0 V, got {self.voltage}")


@dataclass(frozen=True)
class PacketPlan:
    """One packet of a burst: payload size, transmit power, data rate."""

    msdu_octets: int
    tx_power: float    # dBm
    data_rate: float   # bit/s

    def __post_init__(self):
        if self.msdu_octets < 0:
            raise ValueError(f"msdu_octets must be >= 0, got {self.msdu_octets}")
        if not self.data_rate > 0:
            raise ValueError(f"data_rate must be > 0 bit/s, got {self.data_rate}")
