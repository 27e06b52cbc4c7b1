"""Shared fixtures: reference scenes and frames, synthesized once."""

import dataclasses

import numpy as np
import pytest

import radaranc as ra


@pytest.fixture(scope="session")
def table1():
    return ra.table1_scene()


@pytest.fixture(scope="session")
def table1_frame(table1):
    return ra.synthesize(table1)


@pytest.fixture(scope="session")
def table1_interference_only(table1):
    return dataclasses.replace(table1, targets=(), noise_power=0.0)


@pytest.fixture(scope="session")
def table1_targets_only(table1):
    return dataclasses.replace(table1, interferers=())


@pytest.fixture(scope="session")
def table2():
    return ra.table2_scene()


@pytest.fixture(scope="session")
def table2_frame(table2):
    return ra.synthesize(table2)


def spectrum_db(x):
    return 10.0 * np.log10(np.abs(np.asarray(x)) ** 2 + np.finfo(float).tiny)
