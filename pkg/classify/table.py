import csv
import json
import logging
import os
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from dotenv import load_dotenv
from pydantic import ValidationError

from models.data_models import ClassRow, DefiningData, TableRow
from geometry.invariants import canonical_columns, exponent_key
from geometry.rap import top_rows, validate
from utils.errors import GeometryError, RealizationError, SchemaMismatch
from utils.exact import IntMat, kernel_basis, smith_normal_form, solve_rational, unimodular_inverse

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

load_dotenv()

TABLE_COLUMNS = ("no", "relations", "class_group", "degree_matrix", "antican_cube", "gorenstein_index")
BUNDLED_TABLE = Path(__file__).resolve().parent.parent / "data" / "expected_table.json"
EXPECTED_TABLE = os.getenv("EXPECTED_TABLE")


def table_row(row: ClassRow, no: int = 0) -> TableRow:
    return TableRow(
        no=no,
        relations=", ".join(row.presentation.relations),
        exponents=row.invariants.exponents,
        m=row.invariants.m,
        lam=row.presentation.lam,
        class_group=row.invariants.class_group,
        degree_matrix=row.invariants.degree_matrix,
        antican_cube=row.invariants.antican_cube,
        gorenstein_index=row.invariants.gorenstein_index,
    )


def row_key(row: TableRow) -> Tuple:
    """Class group, canonically ordered degree columns and relation exponents"""
    group = row.class_group
    width = len(row.degree_matrix[0]) if row.degree_matrix else 0
    columns = [tuple(line[j] for line in row.degree_matrix) for j in range(width)]
    return ((group.free_rank, tuple(group.torsion)), canonical_columns(group.free_rank, group.torsion, columns)) \
        + exponent_key(row.exponents, row.m)


def realize(row: TableRow) -> DefiningData:
    """Defining data whose rows span the kernel of the degree map of the row"""
    blocks = [tuple(b) for b in row.exponents]
    r = len(blocks) - 1
    n = tuple(len(b) for b in blocks)
    N = sum(n) + row.m
    group = row.class_group
    q = len(group.torsion)
    s = N - group.free_rank - r
    if r < 1 or s < 0:
        raise RealizationError(f"row {row.no}: {N} generators cannot carry {r + 1} relation blocks")

    free_rows = row.degree_matrix[:group.free_rank]
    torsion_rows = row.degree_matrix[group.free_rank:]
    extended = [list(w) + [0] * q for w in free_rows]
    extended += [list(tau) + [t if k == kk else 0 for kk in range(q)]
                 for k, (tau, t) in enumerate(zip(torsion_rows, group.torsion))]
    basis = [v[:N] for v in kernel_basis(IntMat.from_rows(extended, N + q))]
    if len(basis) != r + s:
        raise RealizationError(f"row {row.no}: degree map has kernel of rank {len(basis)}, expected {r + s}")

    shape = DefiningData(r=r, s=s, m=row.m, n=n, L=tuple(blocks),
                         d=tuple((0,) * sum(n) for _ in range(s)),
                         dprime=tuple((0,) * row.m for _ in range(s)) if row.m else ())
    transposed = [[v[j] for v in basis] for j in range(N)]
    coefficients = []
    for top in top_rows(shape):
        c = solve_rational(transposed, top)
        if c is None or any(Fraction(x).denominator != 1 for x in c):
            raise RealizationError(f"row {row.no}: relation row {top} is not in the kernel lattice")
        coefficients.append([int(x) for x in c])

    C = IntMat.from_rows(coefficients, r + s)
    snf = smith_normal_form(C)
    if list(snf.invariant_factors) != [1] * r:
        raise RealizationError(f"row {row.no}: relation rows do not extend to a lattice basis")
    completed = unimodular_inverse(snf.V) @ IntMat.from_rows(basis, N)
    lower = [completed.row(k) for k in range(r, r + s)]
    D = shape.model_copy(update={
        "d": tuple(tuple(line[:sum(n)]) for line in lower),
        "dprime": tuple(tuple(line[sum(n):]) for line in lower) if row.m else (),
        "lam": tuple(row.lam) if row.lam else None,
    })
    try:
        validate(D)
    except GeometryError as e:
        raise RealizationError(f"row {row.no}: realized data is invalid: {e}")
    return D


def _parse_rows(payload, source: str) -> List[TableRow]:
    items = payload.get("rows") if isinstance(payload, dict) else payload
    if not isinstance(items, list):
        raise SchemaMismatch(f"{source}: expected a list of table rows")
    try:
        return [item if isinstance(item, TableRow) else TableRow.model_validate(item) for item in items]
    except ValidationError as e:
        raise SchemaMismatch(f"{source}: {e}")


def load_expected_table(path: Optional[Union[str, Path]] = None) -> List[TableRow]:
    path = Path(path or EXPECTED_TABLE or BUNDLED_TABLE)
    try:
        payload = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise SchemaMismatch(f"Cannot read table {path}: {e}")
    rows = _parse_rows(payload, str(path))
    logger.info(f"Loaded {len(rows)} table rows from {path}")
    return rows


def write_table_json(rows: Sequence[TableRow], path: Union[str, Path]):
    payload = {"columns": list(TABLE_COLUMNS),
               "rows": [row.model_dump(mode="json", by_alias=True) for row in rows]}
    Path(path).write_text(json.dumps(payload, indent=1, ensure_ascii=False))
    logger.info(f"Wrote {len(rows)} rows to {path}")


def write_table_csv(rows: Sequence[TableRow], path: Union[str, Path]):
    with open(path, "w", newline="", encoding="utf-8") as file:
        writer = csv.DictWriter(file, fieldnames=list(TABLE_COLUMNS))
        writer.writeheader()
        for row in rows:
            writer.writerow({
                "no": row.no,
                "relations": row.relations,
                "class_group": row.class_group.render(),
                "degree_matrix": json.dumps(row.degree_matrix),
                "antican_cube": str(row.antican_cube),
                "gorenstein_index": row.gorenstein_index,
            })
    logger.info(f"Wrote {len(rows)} rows to {path}")


def diff_table(result, expected) -> Dict:
    """Match rows by identity key and report missing, extra and per-field differences"""
    found = _parse_rows(result, "result")
    wanted = _parse_rows(expected, "expected")
    by_key: Dict[Tuple, TableRow] = {}
    for row in found:
        by_key.setdefault(row_key(row), row)

    matched, missing, field_diffs = [], [], []
    seen = set()
    for row in wanted:
        key = row_key(row)
        other = by_key.get(key)
        if other is None:
            missing.append(row.no)
            continue
        seen.add(key)
        matched.append(row.no)
        for field in ("antican_cube", "gorenstein_index"):
            if getattr(row, field) != getattr(other, field):
                field_diffs.append({"no": row.no, "field": field,
                                    "expected": str(getattr(row, field)), "found": str(getattr(other, field))})
    extra = [row.no for row in found if row_key(row) not in seen]
    return {
        "matched": matched,
        "missing": missing,
        "extra": extra,
        "field_diffs": field_diffs,
        "summary": f"{len(matched)}/{len(wanted)} matched, {len(missing)} missing, {len(extra)} extra, "
                   f"{len(field_diffs)} field differences",
    }
