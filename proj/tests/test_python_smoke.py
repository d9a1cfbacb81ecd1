"""Smoke tests for the python bindings.

The module location comes from SOQ_MODULE_DIR (set by ctest to the build
tree); an installed `soq` package works too.
"""

import json
import os
import sys

import pytest

module_dir = os.environ.get("SOQ_MODULE_DIR")
if module_dir:
    sys.path.insert(0, module_dir)

try:
    import _soq as soq
except ImportError:  # packaged layout
    from soq import _soq as soq


def test_normal_form():
    assert soq.normal_form("y+12") == "1/2*d1 + 1/2*d2"
    assert soq.normal_form("y+12 - y+12") == "0"


def test_ring_equality():
    assert soq.equal_in_ring("y+12 + y-12", "y+11")
    assert not soq.equal_in_ring("y+12", "y-12")


def test_enumerate_good():
    goods = soq.enumerate_good(2, 1)
    assert len(goods) == 7
    assert "y+11^2*y+12^4*y+22^2" in goods


def test_decompose_roundtrips_json():
    cert = json.loads(soq.decompose("y-12^8", 2, 1))
    assert cert["terms"]
    for term in cert["terms"]:
        assert "theta" in term and "good" in term


def test_decompose_rejects_low_degree():
    with pytest.raises(Exception):
        soq.decompose("y+12", 2, 1)


def test_verify_theorem():
    report = json.loads(soq.verify_theorem(2, 1))
    assert report["all_certified"]
    assert len(report["monomials"]) == 9


def test_block_lemmas():
    report = json.loads(soq.check_block_lemmas(4))
    assert report["all_hold"]


def test_holonomy():
    report = json.loads(soq.holonomy_stress(2, 1, trials=200))
    assert report["violations"] == 0
    assert soq.kappa_residual(2) < 1e-9
