import math

import pytest

from rfbudget import DeviceProfile, FrameLayout, OcvTable

# Synthetic S-curve coefficients used across the radio and burst tests.
# alpha4 is chosen so that 3.5 dBm maps to exactly 16.24 mA, the supply
# current of the reference transmit scenario.
ALPHA1 = 4.0
ALPHA2 = 40.0
ALPHA3 = 0.5
ALPHA4 = 16.24 - math.log(ALPHA2 / (ALPHA1 - 3.5) - 1.0) / ALPHA3

# Reference transmit scenario: full payload at 3.5 dBm / 16.24 mA,
# 250 kbit/s, from a 0.12 mF store charged to 2.5 V.
REF_CAP_F = 0.12e-3
REF_CURRENT_MA = 16.24
REF_RATE_BPS = 250e3
REF_V0 = 2.5
REF_TX_DBM = 3.5


@pytest.fixture
def profile():
    return DeviceProfile()


@pytest.fixture
def sig_profile():
    return DeviceProfile(alpha1=ALPHA1, alpha2=ALPHA2, alpha3=ALPHA3,
                         alpha4=ALPHA4)


@pytest.fixture
def layout():
    return FrameLayout()


@pytest.fixture
def p2110_table():
    return OcvTable.p2110()
