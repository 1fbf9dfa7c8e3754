"""JSON persistence of tomography records and reconstructed states"""

import json
from pathlib import Path
from typing import Sequence

from pydantic import BaseModel, Field

from quantum import CompositeSpace, DensityMatrix
from utils.state import atomic_write

from .readout import VisibilityMatrix
from .state import MeasurementRecord, record_from_counts


class RecordEntry(BaseModel):
    setting: list[str]
    shots: int = Field(ge=1)
    counts: dict[str, int]


class TomographyFile(BaseModel):
    """On-disk layout: raw counts only, corrected values are recomputed on load."""

    records: list[RecordEntry]
    state: dict | None = Field(default=None, description="Reconstructed state, quantum-core JSON")


def dump_records(
    records: Sequence[MeasurementRecord], state: DensityMatrix | None = None
) -> str:
    entries = [
        RecordEntry(setting=list(r.setting), shots=r.shots, counts=dict(r.counts))
        for r in records
        if r.counts
    ]
    payload = TomographyFile(
        records=entries, state=state.to_json_dict() if state is not None else None
    )
    return payload.model_dump_json(indent=2)


def save_records(
    path: Path | str,
    records: Sequence[MeasurementRecord],
    state: DensityMatrix | None = None,
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    atomic_write(path, dump_records(records, state))
    return path


def load_records(
    path: Path | str, vis: Sequence[VisibilityMatrix] | None = None
) -> tuple[list[MeasurementRecord], DensityMatrix | None]:
    """Read a tomography file, re-applying readout correction with ``vis``."""
    data = TomographyFile.model_validate(json.loads(Path(path).read_text()))
    records = []
    for entry in data.records:
        n = len(entry.setting)
        bitstrings = CompositeSpace.qubits(*(f"q{i}" for i in range(n))).basis_labels()
        qubit_vis = list(vis) if vis is not None else [VisibilityMatrix()] * n
        records.append(record_from_counts(entry.setting, entry.counts, qubit_vis, bitstrings))
    state = DensityMatrix.from_json_dict(data.state) if data.state is not None else None
    return records, state
