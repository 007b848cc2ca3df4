"""
Shared fixtures for the test suite
"""

import math

import pytest

from analysis.contour import make_gamma
from analysis.series_core import IntPoly, RationalFn, expand_rational, geometric_series


@pytest.fixture
def geometric():
    """1/(1 - z) through z^30"""
    return geometric_series(30)


@pytest.fixture
def fibonacci():
    """1/(1 - z - z^2) through z^30"""
    return expand_rational(RationalFn(IntPoly((1,)), IntPoly((1, -1, -1))), 30)


@pytest.fixture
def gamma():
    """Γ(π/2, −π/2, 1.2, 0.05)"""
    return make_gamma(math.pi / 2, -math.pi / 2, 1.2, 0.05)


@pytest.fixture
def gamma_wide():
    """Γ(π/2, −π/2, 1.2, 0.1), arc length 2.1π + 0.6"""
    return make_gamma(math.pi / 2, -math.pi / 2, 1.2, 0.1)


@pytest.fixture
def report_dir(tmp_path, monkeypatch):
    """Reports go to a temporary directory"""
    from config import config
    monkeypatch.setattr(config, "report_dir", str(tmp_path))
    return tmp_path
