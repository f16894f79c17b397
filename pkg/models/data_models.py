from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, PlainValidator, field_validator, model_validator

from utils.exact import format_rat, parse_rat

RatStr = Annotated[Fraction, PlainValidator(parse_rat), PlainSerializer(format_rat, return_type=str)]


class DefiningData(BaseModel):
    """Block data of the defining matrix P; lam carries the opaque moduli tags for r >= 3"""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    r: int = Field(ge=1)
    s: int = Field(ge=0)
    m: int = Field(ge=0)
    n: Tuple[int, ...]
    L: Tuple[Tuple[int, ...], ...]
    d: Tuple[Tuple[int, ...], ...]
    dprime: Tuple[Tuple[int, ...], ...] = ()
    lam: Optional[Tuple[str, ...]] = Field(default=None, alias="lambda")

    @property
    def n_total(self) -> int:
        return sum(self.n)

    @property
    def columns(self) -> int:
        return self.n_total + self.m

    def block_offsets(self) -> List[int]:
        offsets, total = [], 0
        for size in self.n:
            offsets.append(total)
            total += size
        return offsets

    def block_of(self, column: int) -> Optional[int]:
        """Block index of a column, None for the extra columns"""
        for i, offset in enumerate(self.block_offsets()):
            if offset <= column < offset + self.n[i]:
                return i
        return None

    def exponent(self, column: int) -> int:
        i = self.block_of(column)
        return self.L[i][column - self.block_offsets()[i]]

    def to_json_dict(self) -> Dict[str, Any]:
        payload = self.model_dump(mode="json", by_alias=True)
        if payload.get("lambda") is None:
            payload.pop("lambda", None)
        return payload


class DegreeClass(BaseModel):
    """Element of K = Z^free_rank (+) torsion, torsion part as residues"""
    model_config = ConfigDict(frozen=True)

    free: Tuple[int, ...]
    torsion: Tuple[int, ...] = ()


class Grading(BaseModel):
    model_config = ConfigDict(frozen=True)

    free_rank: int
    torsion: Tuple[int, ...]
    degrees: Tuple[DegreeClass, ...]
    kappa: DegreeClass

    def degree_of(self, vector) -> DegreeClass:
        free = tuple(sum(c * deg.free[k] for c, deg in zip(vector, self.degrees)) for k in range(self.free_rank))
        torsion = tuple(
            sum(c * deg.torsion[k] for c, deg in zip(vector, self.degrees)) % t
            for k, t in enumerate(self.torsion)
        )
        return DegreeClass(free=free, torsion=torsion)

    def degree_matrix(self) -> List[List[int]]:
        rows = [[deg.free[k] for deg in self.degrees] for k in range(self.free_rank)]
        rows += [[deg.torsion[k] for deg in self.degrees] for k in range(len(self.torsion))]
        return rows


class CoxPresentation(BaseModel):
    generators: List[str]
    degrees: List[DegreeClass]
    exponents: List[List[int]]
    relations: List[str]
    relation_degree: DegreeClass
    lam: Optional[List[str]] = None


class ElemBigCone(BaseModel):
    model_config = ConfigDict(frozen=True)

    columns: Tuple[int, ...]
    l_values: Tuple[int, ...]
    ell_per_ray: Tuple[int, ...]
    ell: int
    v_sigma: Tuple[int, ...]
    c_sigma: int
    v_prime: Optional[Tuple[RatStr, ...]] = None


class SingularityVerdict(BaseModel):
    log_terminal: bool
    canonical: bool
    terminal: bool
    eps: Optional[RatStr] = None
    eps_log_terminal: Optional[bool] = None
    witnesses: Dict[str, List[int]] = Field(default_factory=dict)


class ClassGroup(BaseModel):
    model_config = ConfigDict(frozen=True)

    free_rank: int
    torsion: Tuple[int, ...] = ()

    def render(self) -> str:
        parts = ["Z" if self.free_rank == 1 else f"Z^{self.free_rank}"] if self.free_rank else []
        parts += [f"Z/{t}" for t in self.torsion]
        return "+".join(parts) or "0"


class InvariantSet(BaseModel):
    class_group: ClassGroup
    degree_matrix: List[List[int]]
    exponents: List[List[int]]
    m: int = 0
    antican_cube: RatStr
    gorenstein_index: int


class TableRow(BaseModel):
    no: int = 0
    relations: str = ""
    exponents: List[List[int]]
    m: int = 0
    lam: Optional[List[str]] = Field(default=None, alias="lambda")
    class_group: ClassGroup
    degree_matrix: List[List[int]]
    antican_cube: RatStr
    gorenstein_index: int

    model_config = ConfigDict(populate_by_name=True)

    @model_validator(mode="after")
    def check_widths(self):
        width = sum(len(block) for block in self.exponents) + self.m
        if len(self.degree_matrix) != self.class_group.free_rank + len(self.class_group.torsion):
            raise ValueError("degree matrix rows do not match the class group")
        if any(len(row) != width for row in self.degree_matrix):
            raise ValueError("degree matrix width does not match the generator count")
        return self


class ClassRow(BaseModel):
    data: DefiningData
    invariants: InvariantSet
    presentation: CoxPresentation


class RunStats(BaseModel):
    generated: int = 0
    skipped: int = 0
    rejected: Dict[str, int] = Field(default_factory=dict)
    found: int = 0
    shards: int = 0

    def reject(self, gate: str):
        self.rejected[gate] = self.rejected.get(gate, 0) + 1

    def merge(self, other: "RunStats") -> "RunStats":
        rejected = dict(self.rejected)
        for gate, count in other.rejected.items():
            rejected[gate] = rejected.get(gate, 0) + count
        return RunStats(
            generated=self.generated + other.generated,
            skipped=self.skipped + other.skipped,
            rejected=rejected,
            found=self.found + other.found,
            shards=self.shards + other.shards,
        )


class RunConfig(BaseModel):
    command: str
    input: Optional[Path] = None
    output: Optional[Path] = None
    cases: Tuple[str, ...] = ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii")
    workers: int = Field(default=1, ge=1)
    checkpoint_dir: Optional[Path] = None
    eps: Optional[RatStr] = None
    csv_path: Optional[Path] = None
    json_path: Optional[Path] = None
    seed_table: Optional[Path] = None
    limit_shards: Optional[int] = Field(default=None, ge=0)
    lattice_points: bool = False
    oracle: bool = False

    @field_validator("eps")
    @classmethod
    def eps_positive(cls, value):
        if value is not None and value <= 0:
            raise ValueError("eps must be positive")
        return value

    @field_validator("cases")
    @classmethod
    def known_cases(cls, value):
        unknown = set(value) - {"i", "ii", "iii", "iv", "v", "vi", "vii", "viii"}
        if unknown:
            raise ValueError(f"unknown cases: {sorted(unknown)}")
        return value

    @field_validator("input", "seed_table")
    @classmethod
    def existing_file(cls, value):
        if value is not None and not value.is_file():
            raise ValueError(f"no such file: {value}")
        return value


class CommandResponse(BaseModel):
    success: bool
    data: Any
    message: str
