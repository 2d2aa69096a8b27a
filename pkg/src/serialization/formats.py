"""
File Formats

Pydantic models for every file the toolkit reads or writes:
- code files: {"d", "N", "rows", "syndrome"}
- Wigner files: {"d", "N", "values"} in flat index order
- dense state files: {"d", "re", "im"}
- distillation results, witness reports and experiment manifests

CSV tables go through pandas with 17 significant digits; graphs are
exported in 1-indexed DIMACS edge format.
"""

import hashlib
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Type, TypeVar, Union

import networkx as nx
import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, ValidationError, model_validator

sys.path.insert(0, str(Path(__file__).parent.parent.parent))
from src.algebra.zd import Prime
from src.codes.stabilizer import StabilizerCode
from src.oracle.dense import DenseState
from src.phase_space.wigner import WignerFunction, wigner_from_density
from src.utils.errors import InputFormatError, InvalidModulus

PathLike = Union[str, Path]
M = TypeVar("M", bound="JsonFile")


class JsonFile(BaseModel):
    """Base for JSON file models with load/save helpers."""

    @classmethod
    def load(cls: Type[M], path: PathLike) -> M:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise InputFormatError(f"cannot read {path}: {e}") from e
        return cls.parse(text, source=str(path))

    @classmethod
    def parse(cls: Type[M], text: str, source: str = "<string>") -> M:
        try:
            return cls.model_validate_json(text)
        except ValidationError as e:
            raise InputFormatError(f"{source}: {e.errors()[0]['msg']}") from e

    def save(self, path: PathLike) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.model_dump_json(indent=2) + "\n", encoding="utf-8")
        return path


def _check_prime(d: int) -> None:
    try:
        Prime(d)
    except InvalidModulus as e:
        raise ValueError(str(e)) from e


class CodeFile(JsonFile):
    """Stabilizer code: rows are (a_1..a_N, b_1..b_N)."""
    d: int
    N: int = Field(..., ge=2)
    rows: List[List[int]]
    syndrome: Optional[List[int]] = None

    @model_validator(mode="after")
    def check_shape(self) -> "CodeFile":
        _check_prime(self.d)
        for i, row in enumerate(self.rows):
            if len(row) != 2 * self.N:
                raise ValueError(f"row {i} has {len(row)} entries, expected {2 * self.N}")
            if any(not 0 <= v < self.d for v in row):
                raise ValueError(f"row {i} has entries outside [0, {self.d})")
        if self.syndrome is not None:
            if len(self.syndrome) != len(self.rows):
                raise ValueError(f"syndrome has {len(self.syndrome)} entries for {len(self.rows)} rows")
            if any(not 0 <= v < self.d for v in self.syndrome):
                raise ValueError(f"syndrome entries outside [0, {self.d})")
        return self

    @classmethod
    def from_code(cls, code: StabilizerCode) -> "CodeFile":
        return cls(d=int(code.d), N=code.n_qudits, rows=code.matrix.tolist(),
                   syndrome=code.syndrome.tolist())

    def to_code(self) -> StabilizerCode:
        if not self.rows:
            raise InputFormatError("code file has no generator rows")
        return StabilizerCode.from_rows(self.rows, self.d, self.syndrome)


class WignerFile(JsonFile):
    d: int
    N: int = Field(1, ge=1)
    values: List[float]

    @model_validator(mode="after")
    def check_length(self) -> "WignerFile":
        _check_prime(self.d)
        if len(self.values) != self.d ** (2 * self.N):
            raise ValueError(f"{len(self.values)} values, expected {self.d ** (2 * self.N)}")
        return self

    @classmethod
    def from_wigner(cls, w: WignerFunction) -> "WignerFile":
        return cls(d=int(w.d), N=w.n_qudits, values=w.values.tolist())

    def to_wigner(self) -> WignerFunction:
        try:
            return WignerFunction(self.d, self.N, np.asarray(self.values))
        except ValueError as e:
            raise InputFormatError(str(e)) from e


class DenseStateFile(JsonFile):
    d: int
    re: List[List[float]]
    im: Optional[List[List[float]]] = None

    @model_validator(mode="after")
    def check_square(self) -> "DenseStateFile":
        _check_prime(self.d)
        dim = len(self.re)
        if any(len(r) != dim for r in self.re):
            raise ValueError("real part is not square")
        if self.im is not None and (len(self.im) != dim or any(len(r) != dim for r in self.im)):
            raise ValueError("imaginary part does not match the real part")
        return self

    def to_matrix(self) -> np.ndarray:
        out = np.asarray(self.re, dtype=complex)
        if self.im is not None:
            out = out + 1j * np.asarray(self.im, dtype=float)
        return out

    @classmethod
    def from_matrix(cls, rho: np.ndarray, d: int) -> "DenseStateFile":
        rho = np.asarray(rho, dtype=complex)
        return cls(d=int(d), re=rho.real.tolist(), im=rho.imag.tolist())


def load_state(path: PathLike) -> Tuple[WignerFunction, Optional[np.ndarray]]:
    """
    Read a single-qudit state file, auto-detecting Wigner or dense form.

    Returns:
        (Wigner function, dense matrix or None for Wigner input)
    """
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise InputFormatError(f"cannot parse {path}: {e}") from e
    if not isinstance(raw, dict):
        raise InputFormatError(f"{path}: expected a JSON object")
    text = json.dumps(raw)
    if "values" in raw:
        return WignerFile.parse(text, str(path)).to_wigner(), None
    if "re" in raw:
        dense = DenseStateFile.parse(text, str(path))
        try:
            rho = DenseState(dense.to_matrix(), dense.d).matrix
            return wigner_from_density(rho, d=dense.d), rho
        except ValueError as e:
            raise InputFormatError(f"{path}: {e}") from e
    raise InputFormatError(f"{path}: state file needs 'values' or 're'")


class DistillationResultFile(JsonFile):
    engine: str
    d: int
    N: int
    values: List[float]
    acceptance_probability: float
    histogram: List[float]
    samples: Optional[int] = None
    accepted: Optional[int] = None
    seed: Optional[int] = None
    prng: Optional[str] = None


class WitnessReportFile(JsonFile):
    face: List[int]
    value: float
    bound: float
    contextual: bool


class ExperimentManifest(JsonFile):
    """Everything needed to rerun a command and check its outputs."""
    command: str
    parameters: Dict[str, Any]
    seed: Optional[int] = None
    version: str
    started_at: str
    finished_at: str
    exit_code: int
    outputs: Dict[str, str] = Field(default_factory=dict, description="path -> sha256")


def file_digest(path: PathLike) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_csv(frame: pd.DataFrame, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.17g")
    return path


def write_dimacs(graph, path: PathLike) -> Path:
    """Write `p edge V E` and 1-indexed `e i j` lines."""
    g = graph if isinstance(graph, nx.Graph) else graph.to_networkx()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    edges = sorted((min(i, j), max(i, j)) for i, j in g.edges())
    lines = [f"p edge {g.number_of_nodes()} {len(edges)}"]
    lines += [f"e {i + 1} {j + 1}" for i, j in edges]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_dimacs(path: PathLike) -> nx.Graph:
    """Parse a DIMACS edge file into a graph on nodes 0..V-1."""
    g = nx.Graph()
    with open(path, encoding="utf-8") as f:
        for line in f:
            parts = line.split()
            if not parts or parts[0] == "c":
                continue
            if parts[0] == "p":
                g.add_nodes_from(range(int(parts[2])))
            elif parts[0] == "e":
                g.add_edge(int(parts[1]) - 1, int(parts[2]) - 1)
            else:
                raise InputFormatError(f"{path}: unexpected DIMACS line {line.strip()!r}")
    return g
