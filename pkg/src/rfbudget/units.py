"""Small unit conversions used throughout the package.

dBm is referenced to 1 mW: p_dbm = 10*log10(p_mw).
"""

import math


def dbm_to_watts(p_dbm: float) -> float:
    """Convert a power in dBm to watts."""
    if not math.isfinite(p_dbm):
        raise ValueError(f"power must be finite, got {p_dbm!r}")
    return 10.0 ** (p_dbm / 10.0) * 1e-3


def watts_to_dbm(p_watts: float) -> float:
    """Convert a power in watts to dBm. Requires a strictly positive power."""
    if not p_watts > 0.0:  # also rejects NaN
        raise ValueError(f"power must be > 0 W, got {p_watts!r}")
    return 10.0 * math.log10(p_watts * 1e3)


def octets_to_bits(n_octets: int) -> int:
    """8 bits per octet."""
    if n_octets < 0:
        raise ValueError(f"octet count must be >= 0, got {n_octets}")
    return 8 * n_octets
