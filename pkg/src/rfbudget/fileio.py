"""CSV ingestion, run configuration, and deterministic report emission.

Input file formats (comma separated, one header line):

    voltage trace   t_s,v_v
    OCV table       p_dbm,v_oc_v
    calibration     c_c_ma,p_t_dbm
    burst plan      msdu_octets,p_t_dbm,r_d_bps

Reports are flat key/value records with the unit in the key name
(energies in uJ, voltages in V, times in s). All numbers pass through a
6-significant-digit formatter so identical inputs produce byte-identical
output.
"""

import csv
import json
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .device import DeviceProfile, FrameLayout, PacketPlan
from .errors import TraceParseError
from .harvest import OcvTable, VoltageSample
from .radiopower import CalibrationPoint

TRACE_HEADER = ("t_s", "v_v")
OCV_HEADER = ("p_dbm", "v_oc_v")
CALIBRATION_HEADER = ("c_c_ma", "p_t_dbm")
PLAN_HEADER = ("msdu_octets", "p_t_dbm", "r_d_bps")

DEFAULT_CONFIG_RESOURCE = "atmega256rfr2.json"

# config key (with unit suffix) -> DeviceProfile field
_DEVICE_KEYS = {
    "alpha1_dbm": "alpha1",
    "alpha2_dbm": "alpha2",
    "alpha3_per_ma": "alpha3",
    "alpha4_ma": "alpha4",
    "wake_slope_ms_per_octet": "wake_slope",
    "wake_intercept_ms": "wake_intercept",
    "wake_current_ma": "wake_current",
    "sleep_time_ms": "sleep_time",
    "txrx_off_current_ma": "txrx_off_current",
    "txrx_on_time_ms": "txrx_on_time",
    "txrx_off_time_ms": "txrx_off_time",
    "txrx_on_current_ma": "txrx_on_current",
}

_FRAME_KEYS = {
    "shr_octets": "shr_octets",
    "phr_octets": "phr_octets",
    "mhr_octets": "mhr_octets",
    "fcs_octets": "fcs_octets",
    "max_msdu_octets": "max_msdu_octets",
    "preamble_rate_bps": "preamble_rate",
}


def _read_rows(path, header: tuple[str, ...]):
    """Yield (line_number, fields) for each data row; validates the header."""
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            first = next(reader)
        except StopIteration:
            raise TraceParseError(f"{path}: empty file, expected header "
                                  f"{','.join(header)}", line=1) from None
        if tuple(field.strip() for field in first) != header:
            raise TraceParseError(
                f"{path}: line 1: expected header {','.join(header)}, "
                f"got {','.join(first)}", line=1)
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not field.strip() for field in row):
                continue
            if len(row) != len(header):
                raise TraceParseError(
                    f"{path}: line {line_no}: expected {len(header)} fields, "
                    f"got {len(row)}", line=line_no)
            yield line_no, [field.strip() for field in row]


def _floats(path, line_no: int, fields: Sequence[str]) -> list[float]:
    try:
        return [float(field) for field in fields]
    except ValueError as exc:
        raise TraceParseError(f"{path}: line {line_no}: {exc}",
                              line=line_no) from None


def load_voltage_trace(path) -> list[VoltageSample]:
    """Read a charging trace; times must be nondecreasing."""
    samples: list[VoltageSample] = []
    last_t = None
    for line_no, fields in _read_rows(path, TRACE_HEADER):
        t, v = _floats(path, line_no, fields)
        try:
            sample = VoltageSample(t=t, v=v)
        except ValueError as exc:
            raise TraceParseError(f"{path}: line {line_no}: {exc}",
                                  line=line_no) from None
        if last_t is not None and t < last_t:
            raise TraceParseError(
                f"{path}: line {line_no}: non-monotone time {t} s after "
                f"{last_t} s", line=line_no)
        last_t = t
        samples.append(sample)
    return samples


def load_ocv_table(path) -> OcvTable:
    points = []
    for line_no, fields in _read_rows(path, OCV_HEADER):
        points.append(tuple(_floats(path, line_no, fields)))
    try:
        return OcvTable(points)
    except ValueError as exc:
        raise TraceParseError(f"{path}: {exc}") from None


def load_calibration(path) -> list[CalibrationPoint]:
    points = []
    for line_no, fields in _read_rows(path, CALIBRATION_HEADER):
        c, p = _floats(path, line_no, fields)
        try:
            points.append(CalibrationPoint(supply_current=c, tx_power=p))
        except ValueError as exc:
            raise TraceParseError(f"{path}: line {line_no}: {exc}",
                                  line=line_no) from None
    return points


def load_plan(path) -> list[PacketPlan]:
    plans = []
    for line_no, fields in _read_rows(path, PLAN_HEADER):
        msdu, p_t, r_d = _floats(path, line_no, fields)
        if msdu != int(msdu):
            raise TraceParseError(
                f"{path}: line {line_no}: msdu_octets must be an integer, "
                f"got {fields[0]}", line=line_no)
        try:
            plans.append(PacketPlan(msdu_octets=int(msdu), tx_power=p_t,
                                    data_rate=r_d))
        except ValueError as exc:
            raise TraceParseError(f"{path}: line {line_no}: {exc}",
                                  line=line_no) from None
    return plans


@dataclass(frozen=True)
class RunConfig:
    """Resolved run configuration: device, frame, OCV table, mode flags."""

    profile: DeviceProfile
    layout: FrameLayout
    ocv_table: OcvTable
    capacitance_f: float | None
    initial_voltage_v: float | None
    brownout_v: float
    include_final_gap: bool


def _apply_keys(section: dict, mapping: dict, what: str) -> dict:
    kwargs = {}
    for key, value in section.items():
        if key not in mapping:
            raise ValueError(f"unknown {what} config key {key!r}; "
                             f"expected one of {sorted(mapping)}")
        kwargs[mapping[key]] = value
    return kwargs


def default_config_text() -> str:
    return (resources.files("rfbudget") / "data"
            / DEFAULT_CONFIG_RESOURCE).read_text()


def load_config(path=None) -> RunConfig:
    """Build a RunConfig from the packaged defaults, optionally overlaid
    with a user JSON file of the same shape."""
    raw = json.loads(default_config_text())
    if path is not None:
        with open(path) as handle:
            user = json.load(handle)
        for section in ("device", "frame", "ocv_table", "esc"):
            if section in user:
                raw.setdefault(section, {}).update(user[section])
        for key in ("brownout_v", "include_final_gap"):
            if key in user:
                raw[key] = user[key]

    profile = DeviceProfile(**_apply_keys(raw.get("device", {}), _DEVICE_KEYS,
                                          "device"))
    layout = FrameLayout(**_apply_keys(raw.get("frame", {}), _FRAME_KEYS,
                                       "frame"))
    table_raw = raw.get("ocv_table", {})
    table = OcvTable(zip(table_raw["p_dbm"], table_raw["v_oc_v"]))
    esc = raw.get("esc", {})
    return RunConfig(profile=profile, layout=layout, ocv_table=table,
                     capacitance_f=esc.get("capacitance_f"),
                     initial_voltage_v=esc.get("initial_voltage_v"),
                     brownout_v=raw.get("brownout_v", 1.8),
                     include_final_gap=raw.get("include_final_gap", True))


def with_overrides(config: RunConfig, *, capacitance_f=None,
                   initial_voltage_v=None, brownout_v=None,
                   include_final_gap=None) -> RunConfig:
    """Command-line flags win over config file values."""
    updates = {}
    if capacitance_f is not None:
        updates["capacitance_f"] = capacitance_f
    if initial_voltage_v is not None:
        updates["initial_voltage_v"] = initial_voltage_v
    if brownout_v is not None:
        updates["brownout_v"] = brownout_v
    if include_final_gap is not None:
        updates["include_final_gap"] = include_final_gap
    return replace(config, **updates) if updates else config


def fmt6(value) -> str:
    """Fixed 6-significant-digit rendering used by every emitted number."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return format(value, ".6g")


def _jsonable(value):
    if isinstance(value, bool) or isinstance(value, int) or isinstance(value, str):
        return value
    return float(fmt6(value))


def render_record_json(record: dict) -> str:
    return json.dumps({k: _jsonable(v) for k, v in record.items()},
                      sort_keys=True, indent=2) + "\n"


def render_record_csv(record: dict) -> str:
    lines = ["key,value"]
    for key in sorted(record):
        lines.append(f"{key},{fmt6(record[key])}")
    return "\n".join(lines) + "\n"


def write_table(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    """Write a CSV table with every number at 6 significant digits."""
    path = Path(path)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt6(cell) if isinstance(cell, float) else cell
                             for cell in row])
