"""Shared fixtures: solved profiles are cached per session since the Newton
solves are deterministic."""

import warnings

import pytest

from nlswaves.waves import Nonlinearity, WaveParams, solve_profile


@pytest.fixture(scope="session")
def profile_cache():
    cache = {}

    def get(a, b, sign=Nonlinearity.DEFOCUSING, modes=64):
        key = (a, b, Nonlinearity.parse(sign), modes)
        if key not in cache:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                cache[key] = solve_profile(WaveParams(*key[:3]), modes)
        return cache[key]

    return get
