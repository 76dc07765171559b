"""Shared fixtures for the ssb-sectors test suite."""

import json
import os
import sys
from typing import Dict

import numpy as np
import pytest

# Make the repository root importable so tests can import src.* and sectors.py
ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, ROOT)

from src.core.config import RUN_DEFAULTS, TOLERANCES  # noqa: E402
from src.groups.catalog import catalog_group  # noqa: E402
from src.ssb.field_system import build_field_system  # noqa: E402

SAMPLES_DIR = os.path.join(ROOT, "samples")


def _load_sample(name: str) -> Dict:
    with open(os.path.join(SAMPLES_DIR, name), "r", encoding="utf-8") as f:
        return json.load(f)


@pytest.fixture
def samples_dir() -> str:
    return SAMPLES_DIR


@pytest.fixture
def s3_spec() -> Dict:
    """S3 as an explicit multiplication table with Z3 and Z2 named."""
    return _load_sample("s3.json")


@pytest.fixture
def malformed_loop_spec() -> Dict:
    """A Latin square with identity that is not associative."""
    return _load_sample("malformed_loop.json")


@pytest.fixture
def s3():
    return catalog_group("S3")


@pytest.fixture
def z3():
    return catalog_group("Z3")


@pytest.fixture
def z4():
    return catalog_group("Z4")


@pytest.fixture
def s3_z3(s3):
    """Regular field system of S3 broken to Z3 (two vacua)."""
    return build_field_system(s3, s3.subgroup("Z3"))


@pytest.fixture
def s3_s(s3):
    """Regular field system of S3 broken to a reflection subgroup (three vacua)."""
    return build_field_system(s3, s3.subgroup("s"))


@pytest.fixture
def z4_z2(z4):
    return build_field_system(z4, z4.subgroup("Z2"))


@pytest.fixture
def rng():
    return np.random.default_rng(RUN_DEFAULTS['seed'])


@pytest.fixture
def restore_settings():
    """Snapshot TOLERANCES and RUN_DEFAULTS around a test that mutates them."""
    tolerances = dict(TOLERANCES)
    defaults = dict(RUN_DEFAULTS)
    yield
    TOLERANCES.clear()
    TOLERANCES.update(tolerances)
    RUN_DEFAULTS.clear()
    RUN_DEFAULTS.update(defaults)


@pytest.fixture
def write_json(tmp_path):
    """Write a document to a temporary JSON file and return its path."""
    def _write(doc, name: str = "doc.json") -> str:
        path = tmp_path / name
        path.write_text(json.dumps(doc), encoding="utf-8")
        return str(path)
    return _write


@pytest.fixture
def catalog_system():
    """Build the regular field system of a catalog group broken to one of its named subgroups."""
    def _build(name: str, label: str):
        G = catalog_group(name)
        return build_field_system(G, G.subgroup(label))
    return _build
