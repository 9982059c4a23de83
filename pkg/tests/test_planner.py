import numpy as np
import pytest

from rfbudget import (ChargeModel, EscDepletedError, EscState, PacketPlan,
                      UnreachableVoltageError, burst_energy, cycle_report,
                      max_packets, packet_airtime, recharge_plan,
                      time_to_voltage, wakeup_time)
from conftest import REF_CAP_F, REF_RATE_BPS, REF_TX_DBM, REF_V0

CHARGER = ChargeModel(v_oc=2.6, r_eq=170.6, capacitance=2.2e-3)


def template(msdu=106, rate=REF_RATE_BPS, tx=REF_TX_DBM):
    return PacketPlan(msdu_octets=msdu, tx_power=tx, data_rate=rate)


def linear_scan_max_packets(initial, v_cutoff, plan, profile, layout, cap_n):
    best = 0
    for n in range(1, cap_n + 1):
        try:
            report = burst_energy([plan] * n, initial, profile, layout,
                                  brownout_v=None, record_samples=False)
        except EscDepletedError:
            break
        if report.final_state.voltage < v_cutoff:
            break
        best = n
    return best


# max_packets ----------------------------------------------------------------

def test_max_packets_zero_when_below_cutoff(sig_profile, layout):
    initial = EscState(capacitance=1e-3, voltage=1.8)
    assert max_packets(initial, 1.8, template(), sig_profile, layout, 10) == 0
    assert max_packets(initial, 2.5, template(), sig_profile, layout, 10) == 0


def test_max_packets_unconstrained_with_huge_store(sig_profile, layout):
    initial = EscState(capacitance=1.0, voltage=2.5)
    assert max_packets(initial, 0.0, template(), sig_profile, layout, 7) == 7


def test_max_packets_reference_scenario(sig_profile, layout):
    initial = EscState(capacitance=REF_CAP_F, voltage=REF_V0)
    got = max_packets(initial, 1.8, template(), sig_profile, layout, 16)
    want = linear_scan_max_packets(initial, 1.8, template(), sig_profile,
                                   layout, 16)
    assert got == want


def test_max_packets_randomized_binary_equals_linear(sig_profile, layout):
    rng = np.random.default_rng(17)
    for _ in range(20):
        cap = float(rng.uniform(0.1e-3, 5e-3))
        v0 = float(rng.uniform(2.2, 4.0))
        cutoff = float(rng.uniform(1.0, v0 - 0.2))
        plan = template(msdu=int(rng.integers(2, 60)),
                        rate=float(rng.choice([250e3, 1e6, 2e6])),
                        tx=float(rng.uniform(-10.0, 3.8)))
        initial = EscState(capacitance=cap, voltage=v0)
        got = max_packets(initial, cutoff, plan, sig_profile, layout, 8)
        want = linear_scan_max_packets(initial, cutoff, plan, sig_profile,
                                       layout, 8)
        assert got == want


def test_final_voltage_decreases_with_packet_count(sig_profile, layout):
    initial = EscState(capacitance=2e-3, voltage=3.3)
    finals = []
    for n in range(1, 7):
        report = burst_energy([template(40)] * n, initial, sig_profile,
                              layout, brownout_v=None, record_samples=False)
        finals.append(report.final_state.voltage)
    assert all(b < a for a, b in zip(finals, finals[1:]))


def test_max_packets_validates_arguments(sig_profile, layout):
    initial = EscState(capacitance=1e-3, voltage=2.5)
    with pytest.raises(ValueError):
        max_packets(initial, 1.8, template(), sig_profile, layout, 0)
    with pytest.raises(ValueError):
        max_packets(initial, -0.5, template(), sig_profile, layout, 4)


# recharge_plan ---------------------------------------------------------------

def test_recharge_zero_interval():
    assert recharge_plan(CHARGER, 1.5, 1.5) == 0.0


def test_recharge_reference_interval():
    t = recharge_plan(CHARGER, 0.0, 2.6 * (1.0 - np.exp(-1.0)))
    assert t == pytest.approx(CHARGER.tau, rel=1e-9)
    assert t == pytest.approx(0.3753, abs=2e-4)


def test_recharge_rejects_unreachable():
    with pytest.raises(UnreachableVoltageError):
        recharge_plan(CHARGER, 1.0, 2.6)
    with pytest.raises(ValueError):
        recharge_plan(CHARGER, 2.0, 1.0)


def test_recharge_is_time_difference():
    lo, hi = 1.0, 2.2
    expected = time_to_voltage(CHARGER, hi) - time_to_voltage(CHARGER, lo)
    assert recharge_plan(CHARGER, lo, hi) == pytest.approx(expected, rel=1e-12)


# cycle_report ----------------------------------------------------------------

def test_cycle_report_zero_packets(sig_profile, layout):
    initial = EscState(capacitance=1e-3, voltage=1.2)
    plan = cycle_report(CHARGER, initial, 1.8, template(), sig_profile,
                        layout, 8)
    assert plan.n_packets == 0
    assert plan.burst is None
    assert plan.recharge_time == 0.0
    assert plan.duty_cycle == 0.0
    assert plan.active_time == 0.0


def test_cycle_report_single_packet_active_time(sig_profile, layout):
    # huge store: one packet fits, no gaps, so the active time is exactly
    # wake + airtime + sleep
    model = ChargeModel(v_oc=4.0, r_eq=500.0, capacitance=1.0)
    initial = EscState(capacitance=1.0, voltage=2.5)
    plan = cycle_report(model, initial, 2.4995, template(), sig_profile,
                        layout, 1)
    assert plan.n_packets == 1
    expected_ms = (wakeup_time(sig_profile, 106)
                   + packet_airtime(layout, 106, REF_RATE_BPS).airtime
                   + sig_profile.sleep_time)
    assert plan.active_time == pytest.approx(expected_ms * 1e-3, rel=1e-12)
    assert plan.recharge_time > 0.0
    assert 0.0 < plan.duty_cycle < 1.0


def test_cycle_report_composition(sig_profile, layout):
    # every field reproduced by composing the public pieces step by step
    model = ChargeModel(v_oc=3.0, r_eq=800.0, capacitance=REF_CAP_F)
    initial = EscState(capacitance=REF_CAP_F, voltage=REF_V0)
    plan = cycle_report(model, initial, 1.8, template(), sig_profile,
                        layout, 16, brownout_v=None)
    n = max_packets(initial, 1.8, template(), sig_profile, layout, 16)
    assert plan.n_packets == n
    if n == 0:
        assert plan.burst is None
        return
    burst = burst_energy([template()] * n, initial, sig_profile, layout,
                         brownout_v=None)
    assert plan.burst.total_energy_uj == pytest.approx(burst.total_energy_uj,
                                                       rel=1e-12)
    assert plan.recharge_time == pytest.approx(
        recharge_plan(model, burst.final_state.voltage, REF_V0), rel=1e-12)
    active_ms = (wakeup_time(sig_profile, 106)
                 + n * packet_airtime(layout, 106, REF_RATE_BPS).airtime
                 + (n - 1) * (sig_profile.txrx_off_time + sig_profile.txrx_on_time)
                 + sig_profile.sleep_time)
    assert plan.active_time == pytest.approx(active_ms * 1e-3, rel=1e-12)
    assert plan.duty_cycle == pytest.approx(
        plan.active_time / (plan.active_time + plan.recharge_time), rel=1e-12)


def test_cycle_report_propagates_unreachable_recharge(sig_profile, layout):
    # initial voltage above the charger's open-circuit voltage cannot be
    # restored after a burst
    model = ChargeModel(v_oc=2.0, r_eq=500.0, capacitance=5e-3)
    initial = EscState(capacitance=5e-3, voltage=2.5)
    with pytest.raises(UnreachableVoltageError):
        cycle_report(model, initial, 1.8, template(20), sig_profile, layout, 4,
                     brownout_v=None)


def test_duty_cycle_bounds(sig_profile, layout):
    rng = np.random.default_rng(23)
    for _ in range(10):
        cap = float(rng.uniform(0.2e-3, 3e-3))
        v0 = float(rng.uniform(2.0, 2.5))
        model = ChargeModel(v_oc=v0 + float(rng.uniform(0.1, 1.0)),
                            r_eq=float(rng.uniform(100.0, 5e3)),
                            capacitance=cap)
        plan = cycle_report(model, EscState(cap, v0), 1.8,
                            template(int(rng.integers(2, 106))), sig_profile,
                            layout, 6, brownout_v=None)
        assert 0.0 <= plan.duty_cycle <= 1.0
        if plan.n_packets > 0:
            assert plan.burst.final_state.voltage >= 1.8
