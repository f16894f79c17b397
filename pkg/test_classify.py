import csv
import json
from collections import Counter
from fractions import Fraction
from typing import Optional

import pytest
from hypothesis import given, strategies as st

from conftest import load_instance
from models.data_models import ClassRow, RunStats, TableRow
from classify.bounds import BOUNDS, CASE_SHAPES, EMPTY_CASES, records_for
from classify.cases import (SUBCASES, Shard, closed_range, enumerate_case, enumerate_shard, open_range, shards,
                            subcases_for, tower_221, tower_221_weights, tower_311)
from classify.pipeline import filter_pipeline, screen
from classify.runner import deduplicate, run_classification
from classify.table import (diff_table, load_expected_table, table_row, write_table_csv, write_table_json)
from geometry.rap import assemble_P
from storage.checkpoint_store import CheckpointStore
from test_rap import redundant_tower
from test_tropfan import cubic_333
from utils.errors import CheckpointCorrupt, SchemaMismatch

small = st.integers(min_value=-6, max_value=6)
exponent = st.integers(min_value=1, max_value=6)


def test_every_subcase_has_a_bound_record():
    assert set(SUBCASES) <= set(BOUNDS)
    for case in CASE_SHAPES:
        assert records_for(case)
    for case in EMPTY_CASES:
        assert subcases_for(case) == []
    assert shards(list(EMPTY_CASES)) == []
    with pytest.raises(ValueError):
        subcases_for("ix")


def test_integer_ranges():
    assert list(open_range(Fraction(1, 2), 3)) == [1, 2]
    assert list(open_range(0, 3)) == [1, 2]
    assert list(open_range(Fraction(-7, 3), -1)) == [-2]
    assert list(closed_range(Fraction(-1, 2), 2)) == [0, 1, 2]
    assert list(closed_range(-2, -2)) == [-2]


def test_shards_are_deterministic():
    first = shards(["vi", "iv"])
    assert first == shards(["vi", "iv"])
    names = [shard.name for shard in first]
    assert len(set(names)) == len(names)
    assert shards(["vi", "iv"], limit=3) == first[:3]
    assert Shard("vi", "vi", (7, 9)).name == "vi_7_9"


def test_vi_outer_bound():
    keys = [shard.key for shard in shards(["vi"])]
    assert max(l11 for l21, l11 in keys if l21 == 7) == 9
    assert min(l11 for l21, l11 in keys if l21 == 7) == 7


def test_smallest_iv_shard():
    (candidate,) = list(enumerate_shard(Shard("iv", "iv.l21_2.a", (2,))))
    assert candidate == tower_311(2, 2, -2, 1, -1, 0)


@given(l11=exponent, l12=exponent, l21=exponent, d111=small, d112=small, d121=small, d211=small, d212=small,
       d221=small)
def test_weights_span_the_kernel(l11, l12, l21, d111, d112, d121, d211, d212, d221):
    args = (l11, l12, l21, d111, d112, d121, d211, d212, d221)
    weights = tower_221_weights(*args)
    assert list(assemble_P(tower_221(*args)).apply(weights)) == [0, 0, 0, 0]


@pytest.mark.parametrize("d221", [-3, -4, -6])
def test_low_b_enumeration_matches_brute_force(d221):
    d211, l21 = 1 - d221, 2
    expected = set()
    for d121 in range(-10, 10):
        for d111 in range(-40, 40):
            if not 0 <= d121 < -d221:
                continue
            if Fraction((d121 + l21) * d211, d221) < d111 < Fraction(d121 * d211, d221):
                expected.add((d111, d121))
    found = {(D.d[0][2], D.d[0][4]) for D in enumerate_shard(Shard("i", "i.l21_2.low.b", (d221,)))}
    assert found == expected


def test_unit_candidates_respect_their_inequalities():
    for D in enumerate_shard(Shard("i", "i.unit", (2, 1))):
        (_, _, d111, _, d121), (_, _, d211, _, d221) = D.d
        assert 0 <= d111 < d211
        assert -d211 * 2 < d221 < 0
        assert Fraction(d111 * d221, d211) - 2 < d121 < 0


def test_empty_case_enumerates_nothing():
    assert list(enumerate_case("viii")) == []


def test_pipeline_gates(quadric, e6_cubic):
    row, gate = screen(quadric)
    assert gate is None
    assert row.invariants.antican_cube == 54
    assert screen(e6_cubic) == (None, "terminal")
    assert screen(redundant_tower()) == (None, "irredundant")
    assert screen(cubic_333()) == (None, "log_terminal")

    duplicate = quadric.model_copy(update={"d": ((0, 0, 0, 0, -1), (0, 0, 1, -1, 0))})
    stats = RunStats()
    rows = list(filter_pipeline([quadric, duplicate, e6_cubic, redundant_tower()], stats))
    assert len(rows) == 1
    assert (stats.generated, stats.skipped, stats.found) == (4, 1, 1)
    assert stats.rejected == {"terminal": 1, "irredundant": 1}


def test_deduplicate_merges_equivalent_data(quadric):
    row, _ = screen(quadric)
    swapped = quadric.model_copy(update={"d": ((0, 0, 1, 0, -1), (0, 1, 0, 0, -1))})
    other, _ = screen(swapped)
    assert len(deduplicate([row, other])) == 1


def test_table_diff():
    expected = load_expected_table()
    report = diff_table(expected, expected)
    assert report["summary"] == "40/40 matched, 0 missing, 0 extra, 0 field differences"

    without_seven = [row for row in expected if row.no != 7]
    assert diff_table(without_seven, expected)["missing"] == [7]

    (five,) = [row for row in expected if row.no == 5]
    changed = [row.model_copy(update={"gorenstein_index": five.gorenstein_index + 1}) if row.no == 5 else row
               for row in expected]
    report = diff_table(changed, expected)
    assert report["field_diffs"] == [{"no": 5, "field": "gorenstein_index", "expected": str(five.gorenstein_index),
                                      "found": str(five.gorenstein_index + 1)}]
    assert report["missing"] == [] and report["extra"] == []


def test_table_files(tmp_path, quadric):
    row, _ = screen(quadric)
    rows = [table_row(row, 1)]
    write_table_json(rows, tmp_path / "table.json")
    assert load_expected_table(tmp_path / "table.json") == rows
    write_table_csv(rows, tmp_path / "table.csv")
    with open(tmp_path / "table.csv", newline="", encoding="utf-8") as file:
        (line,) = list(csv.DictReader(file))
    assert line["relations"] == "T1T2+T3T4+T5^2"
    assert line["class_group"] == "Z"
    assert json.loads(line["degree_matrix"]) == [[1, 1, 1, 1, 1]]
    assert line["antican_cube"] == "54"


def test_table_schema_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"rows": [{"no": 1, "exponents": [[1, 1], [1, 1], [2]],
                                         "class_group": {"free_rank": 1}, "degree_matrix": [[1, 1, 1]],
                                         "antican_cube": "54", "gorenstein_index": 1}]}))
    with pytest.raises(SchemaMismatch):
        load_expected_table(bad)
    with pytest.raises(SchemaMismatch):
        load_expected_table(tmp_path / "missing.json")


def test_checkpoint_round_trip(tmp_path, quadric):
    store = CheckpointStore(tmp_path / "store", version="test")
    assert CheckpointStore(tmp_path / "store") is store
    row, _ = screen(quadric)
    stats = RunStats(generated=3, skipped=1, found=1, shards=1, rejected={"fano": 1})
    store.save_shard("i.unit_2_1", [row], stats)
    assert store.has_shard("i.unit_2_1")
    loaded_rows, loaded_stats = store.load_shard("i.unit_2_1")
    assert loaded_rows == [row]
    assert loaded_stats == stats
    store.save_run_summary(stats, 1)
    assert store.completed_shards() == ["i.unit_2_1"]


def test_corrupt_checkpoint(tmp_path):
    store = CheckpointStore(tmp_path / "corrupt", version="test")
    store.path_for("broken").write_text("{not json")
    with pytest.raises(CheckpointCorrupt):
        store.load_shard("broken")
    store.path_for("stale").write_text(json.dumps({"version": "0", "rows": [], "stats": {}}))
    with pytest.raises(CheckpointCorrupt):
        store.load_shard("stale")


def test_resumed_run_reads_checkpoints(tmp_path):
    first_rows, first_stats = run_classification(["iv"], checkpoint_dir=tmp_path / "run", limit_shards=2)
    store = CheckpointStore(tmp_path / "run")
    assert len(store.completed_shards()) == 2
    second_rows, second_stats = run_classification(["iv"], checkpoint_dir=tmp_path / "run", limit_shards=2)
    assert [r.model_dump() for r in second_rows] == [r.model_dump() for r in first_rows]
    assert second_stats == first_stats
    assert first_stats.shards == 2 and first_stats.generated >= 1


def test_every_row_is_a_class_row(quadric):
    row, _ = screen(quadric)
    assert isinstance(row, ClassRow)
    assert row.presentation.relations == ["T1T2+T3T4+T5^2"]


@pytest.mark.slow
def test_full_classification_reproduces_the_table(tmp_path):
    rows, stats = run_classification(list(CASE_SHAPES), workers=4, checkpoint_dir=tmp_path / "full")
    found = [table_row(row, no) for no, row in enumerate(rows, start=1)]
    report = diff_table(found, load_expected_table())
    assert report["missing"] == []
    assert report["extra"] == []
    assert report["field_diffs"] == []
    assert len(rows) == 40


def case_of(row: TableRow) -> Optional[str]:
    sizes = sorted(len(block) for block in row.exponents)
    for case, shape in CASE_SHAPES.items():
        if sorted(shape.n) == sizes and shape.m == row.m:
            return case
    return None


def test_table_rows_split_over_the_enumerated_cases():
    counts = Counter(case_of(row) for row in load_expected_table())
    assert counts == {"i": 25, "ii": 1, "iv": 2, "vi": 12}
    assert not set(counts) & set(EMPTY_CASES)


def test_smallest_unit_shard_is_the_quadric(quadric):
    assert list(enumerate_shard(Shard("i", "i.unit", (2, 1)))) == [quadric]
    assert screen(quadric)[1] is None


def test_table_json_is_byte_stable(tmp_path):
    rows = load_expected_table()
    write_table_json(rows, tmp_path / "first.json")
    reloaded = load_expected_table(tmp_path / "first.json")
    assert reloaded == rows
    write_table_json(reloaded, tmp_path / "second.json")
    assert (tmp_path / "second.json").read_bytes() == (tmp_path / "first.json").read_bytes()


@pytest.mark.slow
@pytest.mark.parametrize("case", ["i", "ii", "iv", "vi"])
def test_each_case_reproduces_its_rows(tmp_path, case):
    rows, stats = run_classification([case], workers=4, checkpoint_dir=tmp_path / case)
    expected = [row for row in load_expected_table() if case_of(row) == case]
    report = diff_table([table_row(row, no) for no, row in enumerate(rows, start=1)], expected)
    assert report["missing"] == []
    assert report["extra"] == []
    assert report["field_diffs"] == []
    assert stats.found >= len(expected)
