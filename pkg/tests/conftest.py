import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from tiltbench import cluster as cl  # noqa: E402
from tiltbench import modcat as mc  # noqa: E402
from tiltbench.algebra import (QuiverPresentation, build_algebra,
                               cyclic_nakayama)  # noqa: E402


def _subcat(A, keys, name):
    _, aliases = mc.standard_names(A, mc.all_indecs(A))
    return cl.ClusterSubcat(A, 2, [aliases[k] for k in keys], name=name)


@pytest.fixture(scope="session")
def a3r2_alg():
    """Linear A3 quiver, composite of the two arrows killed."""
    pres = QuiverPresentation(
        ["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")],
        [[(1, ("a", "b"))]], p=2, name="A3R2")
    return build_algebra(pres)


@pytest.fixture(scope="session")
def ppa2_alg():
    """Two vertices, arrows both ways, both composites killed."""
    pres = QuiverPresentation(
        ["1", "2"], [("x", "1", "2"), ("y", "2", "1")],
        [[(1, ("x", "y"))], [(1, ("y", "x"))]], p=2, name="PPA2")
    return build_algebra(pres)


@pytest.fixture(scope="session")
def nak3_alg():
    """F_2[t] / (t^3)."""
    return build_algebra(cyclic_nakayama(1, 3))


@pytest.fixture(scope="session")
def m3_sub(a3r2_alg):
    """The 2-cluster-tilting subcategory add(P1 + P2 + S1 + S3) for A3R2.

    Session-scoped so the per-cap enumeration caches hanging off the
    subcategory are shared between test modules.
    """
    return _subcat(a3r2_alg, ("P1", "P2", "S1", "S3"), "M3")


@pytest.fixture(scope="session")
def mpp_sub(ppa2_alg):
    """The 2-cluster-tilting subcategory add(P1 + P2 + S1) for PPA2."""
    return _subcat(ppa2_alg, ("P1", "P2", "S1"), "Mpp")
