import json
import os
import random
from functools import lru_cache
from pathlib import Path
from typing import Tuple

import hypothesis
import pytest
from dotenv import load_dotenv

from models.data_models import DefiningData
from classify.cases import enumerate_shard, shards
from classify.table import load_expected_table, realize
from geometry.rap import apply_ops, grading, is_fano, random_admissible_sequence, validate
from utils.errors import GeometryError

load_dotenv()

hypothesis.settings.register_profile("default", max_examples=50, deadline=None)
hypothesis.settings.register_profile("ci", max_examples=200, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=1000, deadline=None)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))

DATA_DIR = Path(__file__).resolve().parent / "data"


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full classification runs, enabled with RUN_SLOW=1")


def pytest_collection_modifyitems(config, items):
    if os.getenv("RUN_SLOW") == "1":
        return
    skip_slow = pytest.mark.skip(reason="set RUN_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def load_instance(name: str) -> DefiningData:
    return DefiningData.model_validate(json.loads((DATA_DIR / "instances" / f"{name}.json").read_text()))


@pytest.fixture
def quadric() -> DefiningData:
    return load_instance("quadric")


@pytest.fixture
def e6_cubic() -> DefiningData:
    return load_instance("e6_cubic")


@pytest.fixture
def row26() -> DefiningData:
    return load_instance("row26")


@lru_cache(maxsize=None)
def realized_rows() -> Tuple[Tuple[int, DefiningData], ...]:
    """Every bundled table row rebuilt as defining data, keyed by row number"""
    return tuple((row.no, realize(row)) for row in load_expected_table())


def moved_instance(no: int, seed: int, length: int = 4) -> DefiningData:
    """A realized row shuffled by a seeded sequence of admissible operations"""
    D = dict(realized_rows())[no]
    return apply_ops(D, random_admissible_sequence(D, random.Random(seed), length=length))


@lru_cache(maxsize=None)
def unit_candidates(volume: int = 8) -> Tuple[DefiningData, ...]:
    """Rank-one Fano candidates with positive degrees from the small unit-exponent shards"""
    pool = []
    for shard in shards(["i"]):
        l21, d211 = shard.key if shard.subcase == "i.unit" else (0, 0)
        if not l21 or (l21 + 1) * d211 > volume:
            continue
        for D in enumerate_shard(shard):
            try:
                validate(D)
            except GeometryError:
                continue
            G = grading(D)
            if G.free_rank == 1 and all(deg.free[0] > 0 for deg in G.degrees) and is_fano(D, G):
                pool.append(D)
    return tuple(pool)
