"""The compiled kernels must agree exactly with the pure-Python fallback."""

import os
import subprocess
import sys

import pytest
from hypothesis import given, settings

from marcello import _pykernels, kernels
from marcello.canon import proper_classes
from marcello.engine import eligible_mask
from marcello.graph import cycle, path

from test_graph import graphs

ck = pytest.importorskip("marcello._ckernels")


def _args(g, saturated=True):
    return g.n, g.adj, g.degrees(), eligible_mask(g), saturated


def test_compiled_backend_selected():
    assert kernels.BACKEND == "cython"


def test_env_forces_fallback():
    code = "from marcello import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, MARCELLO_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@settings(max_examples=300)
@given(graphs(max_n=12))
def test_canonical_labeling_identical(g):
    assert list(ck.canonical_labeling(g.n, g.adj)) == list(_pykernels.canonical_labeling(g.n, g.adj))


@pytest.mark.parametrize("saturated", [True, False])
def test_outcomes_identical_small_classes(saturated):
    for n in range(3, 6):
        for g in proper_classes(n):
            a = ck.enumerate_outcomes(*_args(g, saturated))
            b = _pykernels.enumerate_outcomes(*_args(g, saturated))
            assert a[0].keys() == b[0].keys()
            assert a[1] == b[1]


def test_outcomes_identical_larger():
    for g in (path(7), cycle(7)):
        a = ck.enumerate_outcomes(*_args(g))
        b = _pykernels.enumerate_outcomes(*_args(g))
        assert a[0] == b[0]
