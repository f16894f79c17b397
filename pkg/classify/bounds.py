"""Bound records for the bounded enumeration.

Every sub-case of the case analysis has one record: the block shape it
lives in, a human readable transcription of its inequalities, and the
numeric caps the enumerators read. The enumerators in classify.cases take
every constant from here.
"""
from typing import Dict, List, Tuple

from pydantic import BaseModel, ConfigDict, Field

BOUNDS_VERSION = "1"


class CaseShape(BaseModel):
    model_config = ConfigDict(frozen=True)

    case: str
    r: int
    n: Tuple[int, ...]
    m: int


class BoundRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    case: str
    subcase: str
    description: str
    inequalities: Tuple[str, ...]
    caps: Dict[str, object] = Field(default_factory=dict)
    notes: str = ""


CASE_SHAPES: Dict[str, CaseShape] = {
    "i": CaseShape(case="i", r=2, n=(2, 2, 1), m=0),
    "ii": CaseShape(case="ii", r=3, n=(2, 2, 1, 1), m=0),
    "iii": CaseShape(case="iii", r=4, n=(2, 2, 1, 1, 1), m=0),
    "iv": CaseShape(case="iv", r=2, n=(3, 1, 1), m=0),
    "v": CaseShape(case="v", r=3, n=(3, 1, 1, 1), m=0),
    "vi": CaseShape(case="vi", r=2, n=(2, 1, 1), m=1),
    "vii": CaseShape(case="vii", r=3, n=(2, 1, 1, 1), m=1),
    "viii": CaseShape(case="viii", r=2, n=(1, 1, 1), m=2),
}

EMPTY_CASES = ("iii", "v", "vii", "viii")

NORMAL_FORM = (
    "0 <= d121, d221 < l21",
    "d121 < d221 if d221 != 0",
    "0 <= d112 < w11",
    "-((l21 + d121) w21 + d112 w12) / w11 < d111 < -(d121 w21 + d112 w12) / w11",
)

RECORDS: List[BoundRecord] = [
    BoundRecord(
        case="i", subcase="i.unit",
        description="l11 = l12 = 1 after d112 = d212 = 0",
        inequalities=(
            "3 <= (l21 + 1) d211 <= 72",
            "0 <= d111 < d211",
            "-d211 l21 < d221 < 0",
            "d111 d221 / d211 - l21 < d121 < 0",
        ),
        caps={"volume": 72, "volume_min": 3},
    ),
    BoundRecord(
        case="i", subcase="i.l21_2.a",
        description="l21 = 2, h(g1) < 1, h(g2) > -1, d121 = 1, d221 = 0, normal-form shape",
        inequalities=("(2 + l12) d211 + (2 + l11)(-d212) <= 36",) + NORMAL_FORM,
        caps={"weight_sum": 36, "l11": 70, "h1_below": 1, "h2_above": -1},
        notes="weight sum w11 + w12 + w21 equals three times the simplex volume",
    ),
    BoundRecord(
        case="i", subcase="i.l21_2.b",
        description="l21 = 2, h(g1) < 1, h(g2) > -1, d121 = 0, d221 = 1, normal-form shape",
        inequalities=("(l11 - l12) + (2 + l12) d211 + (2 + l11)(-d212) <= 36",) + NORMAL_FORM,
        caps={"weight_sum": 36, "l11": 70, "h1_below": 1, "h2_above": -1},
    ),
    BoundRecord(
        case="i", subcase="i.l21_2.low.b",
        description="l21 = 2, h(g2) <= -1, l11 = 2, l12 = 1, d112 = d212 = 0",
        inequalities=(
            "-6 <= d221 <= -3",
            "d211 = 1 - d221",
            "0 <= d121 < -d221",
            "d121 d211 / d221 + 2 d211 / d221 < d111 < d121 d211 / d221",
        ),
        caps={"d221_min": -6, "d221_max": -3},
    ),
    BoundRecord(
        case="i", subcase="i.l21_2.low.c",
        description="l21 = 2, h(g2) <= -1, 3 <= l11 < 140, l12 = 1, d112 = d212 = 0",
        inequalities=(
            "(-5 l11 + 2) / (l11 - 2) < d221 <= -3",
            "-(l11 / 2) d221 < d211 < -(l11 / 2) d221 + l11 / 2",
            "0 <= d121 < -d221",
            "d121 d211 / d221 + 2 d211 / d221 < d111 < d121 d211 / d221",
        ),
        caps={"l11_min": 3, "l11_below": 140, "d221_max": -3},
    ),
    BoundRecord(
        case="i", subcase="i.l21_ge3.a",
        description="3 <= l21 <= 5, h(g1) < 1, h(g2) > -2, normal-form shape",
        inequalities=(
            "-2 - (l12 / l21)(d221 + 2) < d212 < 0",
            "-(l11 / l21) d221 < d211 < -(l11 / l21) d221 + 1 + l11 / l21",
        ) + NORMAL_FORM,
        caps={"l_caps": {3: (4, 5), 4: (2, 3), 5: (2, 2)}, "h1_below": 1, "h2_above": -2},
        notes="l_caps maps l21 to (max l12, max l11)",
    ),
    BoundRecord(
        case="i", subcase="i.l21_ge3.c",
        description="l21 >= 6, l11 = 2, l12 = 1, d112 = d212 = 0",
        inequalities=(
            "-2 (l21 + 1) < d221 < 0",
            "d111 d221 / d211 - l21 < d121 < d111 d221 / d211",
        ),
        caps={"l21_min": 6, "pair_caps": {(0, 1): 141, (1, 2): 71, (1, 3): 71, (1, 4): 179,
                                          (1, 5): 177, (2, 3): 137, (2, 5): 143}},
        notes="(d111, d211) pairs outside the listed seven are excluded",
    ),
    BoundRecord(
        case="i", subcase="i.l21_ge3.low.b",
        description="l21 in {3, 4}, h(g2) <= -2, l11 = 2, l12 = 1, d112 = d212 = 0",
        inequalities=(
            "-4 (l21 + 1) < d221 < 0",
            "-(2 / l21) d221 < d211 < -(2 / l21)(d221 - 1) + 1",
            "0 <= d121 < -d221",
            "d211 (d121 + l21) / d221 < d111 < d211 d121 / d221",
        ),
        caps={"l21_values": (3, 4)},
    ),
    BoundRecord(
        case="iv", subcase="iv.l21_2.a",
        description="l21 = 2, d121 = 1, d221 = 0",
        inequalities=("l11 <= 69", "-l11 / 2 - 1 < d211 < 0", "-l11 <= d111 < -l11 / 2"),
        caps={"l11": 69},
    ),
    BoundRecord(
        case="iv", subcase="iv.l21_2.b",
        description="l21 = 2, d121 = 1, d221 = 1",
        inequalities=("-35 <= d111 < 0", "d111 <= d211 < 0", "max(2, -d111) <= l11 < -2 d211"),
        caps={"d111_min": -35},
    ),
    BoundRecord(
        case="iv", subcase="iv.l21_3",
        description="l21 = 3, 0 <= d121 <= d221 < 3",
        inequalities=(
            "-(l11 / 3)(d121 + 1) - 1 < d111 < -(l11 / 3) d121",
            "-(l11 / 3)(d221 + 1) - 1 < d211 < -(l11 / 3) d221",
        ),
        caps={"pair_caps": {(0, 1): 71, (0, 2): 211, (1, 1): 103, (1, 2): 211, (2, 2): 69}},
    ),
    BoundRecord(
        case="iv", subcase="iv.l21_4_5",
        description="l21 in {4, 5}",
        inequalities=(
            "l11 < 3 l21 / (l21 - 3)",
            "0 <= d121, d221 < l21",
            "-l11 d121 / l21 - l11 < d111 < -l11 d121 / l21",
            "-l11 d221 / l21 - l11 < d211 < -l11 d221 / l21",
        ),
        caps={"l21_values": (4, 5)},
    ),
    BoundRecord(
        case="ii", subcase="ii.l31_2",
        description="l31 = 2, d111 = 0",
        inequalities=(
            "-(l21 / 2)(d231 + 1) - 1 < d221 < -(l21 / 2) d231",
            "-d221 / l21 - d231 / 2 < d211 < -d221 / l21 - d231 / 2 + (2 + l21) / (2 l21)",
            "-l21 d131 / 2 - l21 < d121 < -l21 d131 / 2",
        ),
        caps={"pair_caps": {(0, 1): 33, (1, 0): 141, (1, 1): 69}},
        notes="d211 runs over its whole interval; the d121 range comes from positivity of w01 and w02",
    ),
    BoundRecord(
        case="ii", subcase="ii.l31_3",
        description="l31 = 3, 3 <= l21 <= 5, 0 <= d131, d231 < 3",
        inequalities=(
            "-(l21 / 3)(d231 + 1) - 1 < d221 < -(l21 / 3) d231",
            "-d221 / l21 - d231 / 3 < d211 < -d221 / l21 - d231 / 3 + (3 + l21) / (3 l21)",
            "0 <= d111 < 3 d211",
            "X - l21 < d121 < X with X = (d111 (l21 d231 + 3 d221) - l21 d211 d131) / (3 d211)",
        ),
        caps={"l21_values": (3, 4, 5)},
    ),
    BoundRecord(
        case="vi", subcase="vi",
        description="m = 1, l11 >= l21, 0 <= d121, d221 < l21",
        inequalities=(
            "-(l11 / l21) d121 - l21 < d111 < -(l11 / l21) d121",
            "-(l11 / l21)(d221 + 1) - 1 < d211 < -(l11 / l21) d221",
        ),
        caps={"l11_caps": {2: 140, 3: 211, 4: 283, 5: 19, 6: 11, 7: 9}},
    ),
] + [
    BoundRecord(
        case=case, subcase=case,
        description=f"case {case} admits no terminal Q-factorial Fano threefold of Picard number one",
        inequalities=(),
    )
    for case in EMPTY_CASES
]

BOUNDS: Dict[str, BoundRecord] = {record.subcase: record for record in RECORDS}


def records_for(case: str) -> List[BoundRecord]:
    return [record for record in RECORDS if record.case == case]
