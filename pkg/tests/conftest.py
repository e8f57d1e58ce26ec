"""Shared fixtures: every bundled example algebra with its dual, GNS space,
multiplicative unitary and bi-inner group model, built once per session."""

from dataclasses import dataclass

import pytest

from fqg import (BlockAlgebra, DualHopfAlgebra, HopfAlgebra, build_dual,
                 build_gns, build_group_model, build_kac_paljutkin,
                 build_multiplicative_unitary, function_algebra, group_algebra)
from fqg.biinner import BiInnerGroupModel
from fqg.groups import by_name
from fqg.multunitary import GnsSpace, MultiplicativeUnitary

GROUPS = ["Z2", "Z3", "Z4", "S3", "D4"]
ALGEBRA_KEYS = [f"group:{g}" for g in GROUPS] + [f"function:{g}" for g in GROUPS] + ["kp"]


@dataclass
class Workbench:
    key: str
    hopf: HopfAlgebra
    dual: DualHopfAlgebra
    gns: GnsSpace
    mu: MultiplicativeUnitary
    model: BiInnerGroupModel


def _build(key: str) -> Workbench:
    if key == "kp":
        h = build_kac_paljutkin()
    else:
        kind, _, gname = key.partition(":")
        g = by_name(gname)
        h = group_algebra(g) if kind == "group" else function_algebra(g)
    d = build_dual(h)
    gns = build_gns(h)
    mu = build_multiplicative_unitary(gns, d)
    model = build_group_model(h)
    return Workbench(key, h, d, gns, mu, model)


@pytest.fixture(scope="session")
def workbenches() -> dict[str, Workbench]:
    return {key: _build(key) for key in ALGEBRA_KEYS}


@pytest.fixture(scope="session")
def kp(workbenches) -> Workbench:
    return workbenches["kp"]


@pytest.fixture(scope="session")
def gs3(workbenches) -> Workbench:
    return workbenches["group:S3"]


@pytest.fixture(scope="session")
def fs3(workbenches) -> Workbench:
    return workbenches["function:S3"]


@pytest.fixture(scope="session")
def gz2(workbenches) -> Workbench:
    return workbenches["group:Z2"]
