"""Shared fixtures: models, crossings, and the heavy pipeline results."""

import pytest

from myxoripple import build_model, find_crossing, mode_eigensystem
from myxoripple.hopf_multiple import verify_hopf_multiple
from myxoripple.hopf_single import verify_hopf_single


@pytest.fixture(scope="session")
def nonsym():
    return build_model("nonsymmetric")


@pytest.fixture(scope="session")
def sym():
    return build_model("symmetric")


@pytest.fixture(scope="session")
def nonsym_crossing(nonsym):
    return find_crossing(nonsym)


@pytest.fixture(scope="session")
def sym_crossing(sym):
    return find_crossing(sym)


@pytest.fixture(scope="session")
def nonsym_crit(nonsym, nonsym_crossing):
    return mode_eigensystem(nonsym, nonsym_crossing.lam0,
                            nonsym_crossing.kappa0)


@pytest.fixture(scope="session")
def nonsym_hopf(nonsym, nonsym_crossing):
    return verify_hopf_single(nonsym, nonsym_crossing.lam0,
                              nonsym_crossing.kappa0)


@pytest.fixture(scope="session")
def sym_hopf(sym, sym_crossing):
    return verify_hopf_multiple(sym, sym_crossing.lam0, sym_crossing.kappa0)
