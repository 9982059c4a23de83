import dataclasses

import pytest

from rfbudget import DeviceProfile, EscState, FrameLayout, PacketPlan


def test_frame_layout_default_overheads(layout):
    assert layout.overhead_psdu_octets == 21
    assert layout.preamble_bits == 48
    assert layout.frame_bits(106) == 48 + 8 * (19 + 106 + 2)
    assert layout.frame_bits(0) == 48 + 168


def test_frame_layout_rejects_bad_values():
    with pytest.raises(ValueError):
        FrameLayout(shr_octets=-1)
    with pytest.raises(ValueError):
        FrameLayout(preamble_rate=0.0)


def test_device_profile_defaults(profile):
    assert profile.wake_slope == 0.004
    assert profile.wake_intercept == 1.395
    assert profile.wake_current == 7.8
    assert profile.sleep_time == 0.45
    assert profile.txrx_off_current == 4.0
    assert profile.txrx_on_time == 0.86
    assert profile.txrx_on_current == 10.25
    assert profile.txrx_off_time == 0.2
    assert not profile.has_sigmoid


def test_device_profile_rejects_negative_constants():
    with pytest.raises(ValueError):
        DeviceProfile(wake_current=-1.0)
    with pytest.raises(ValueError):
        DeviceProfile(sleep_time=-0.1)


def test_device_profile_alphas_all_or_none():
    with pytest.raises(ValueError):
        DeviceProfile(alpha1=4.0)
    with pytest.raises(ValueError):
        DeviceProfile(alpha1=4.0, alpha2=40.0, alpha3=0.5)


def test_device_profile_alpha3_positive():
    with pytest.raises(ValueError):
        DeviceProfile(alpha1=4.0, alpha2=40.0, alpha3=0.0, alpha4=14.0)
    with pytest.raises(ValueError):
        DeviceProfile(alpha1=4.0, alpha2=40.0, alpha3=-0.5, alpha4=14.0)


def test_sigmoid_coefficients_requires_alphas(profile, sig_profile):
    with pytest.raises(ValueError):
        profile.sigmoid_coefficients()
    assert sig_profile.sigmoid_coefficients()[0] == 4.0


def test_esc_state_validation():
    with pytest.raises(ValueError):
        EscState(capacitance=0.0, voltage=1.0)
    with pytest.raises(ValueError):
        EscState(capacitance=1e-3, voltage=-0.1)
    state = EscState(capacitance=1e-3, voltage=0.0)
    assert state.voltage == 0.0


def test_packet_plan_validation():
    with pytest.raises(ValueError):
        PacketPlan(msdu_octets=-1, tx_power=0.0, data_rate=250e3)
    with pytest.raises(ValueError):
        PacketPlan(msdu_octets=10, tx_power=0.0, data_rate=0.0)


def test_records_are_immutable(profile, layout):
    with pytest.raises(dataclasses.FrozenInstanceError):
        profile.wake_current = 9.0
    with pytest.raises(dataclasses.FrozenInstanceError):
        layout.mhr_octets = 20
