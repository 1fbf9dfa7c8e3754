"""Labeled composite Hilbert spaces"""

import math

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config import settings

from .errors import DimensionError, LabelError

# Level names for basis literals: g=0, e=1, f=2
LEVELS = "gef"


class CompositeSpace(BaseModel):
    """Ordered tensor product of labeled subsystems.

    The composite index is big-endian in label order: the first label is the
    slowest-varying digit.
    """

    model_config = ConfigDict(frozen=True)

    dims: tuple[int, ...] = Field(description="Subsystem dimensions, each >= 2")
    labels: tuple[str, ...] = Field(description="Subsystem names, unique")

    @field_validator("dims")
    @classmethod
    def _check_dims(cls, dims: tuple[int, ...]) -> tuple[int, ...]:
        if not dims:
            raise DimensionError("A space needs at least one subsystem")
        if any(d < 2 for d in dims):
            raise DimensionError(f"Subsystem dimensions must be >= 2, got {dims}")
        return dims

    @model_validator(mode="after")
    def _check_structure(self) -> "CompositeSpace":
        if len(self.dims) != len(self.labels):
            raise DimensionError(
                f"{len(self.dims)} dims but {len(self.labels)} labels"
            )
        if len(set(self.labels)) != len(self.labels):
            raise LabelError(f"Duplicate subsystem labels: {self.labels}")
        if self.total_dim > settings.MAX_DIM:
            raise DimensionError(
                f"Total dimension {self.total_dim} exceeds guard {settings.MAX_DIM}"
            )
        return self

    @classmethod
    def qubits(cls, *labels: str) -> "CompositeSpace":
        return cls(dims=(2,) * len(labels), labels=tuple(labels))

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    def dim_of(self, label: str) -> int:
        return self.dims[self.index_of(label)]

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LabelError(f"Unknown subsystem label '{label}' in {self.labels}") from None

    def subspace(self, labels) -> "CompositeSpace":
        """Space over ``labels`` in the given order."""
        labels = tuple(labels)
        return CompositeSpace(
            dims=tuple(self.dim_of(label) for label in labels), labels=labels
        )

    def concat(self, other: "CompositeSpace") -> "CompositeSpace":
        clash = set(self.labels) & set(other.labels)
        if clash:
            raise LabelError(f"Duplicate subsystem labels: {sorted(clash)}")
        return CompositeSpace(
            dims=self.dims + other.dims, labels=self.labels + other.labels
        )

    def basis_index(self, levels: str) -> int:
        """Composite index of a basis literal such as ``"eg"`` or ``"g1g"``."""
        if len(levels) != len(self.dims):
            raise DimensionError(
                f"Basis literal '{levels}' does not match {len(self.dims)} subsystems"
            )
        index = 0
        for char, dim in zip(levels, self.dims):
            level = LEVELS.index(char) if char in LEVELS else int(char)
            if level >= dim:
                raise DimensionError(f"Level '{char}' outside dimension {dim}")
            index = index * dim + level
        return index

    def basis_labels(self) -> list[str]:
        """All basis literals in composite-index order."""
        names = [""]
        for dim in self.dims:
            symbols = [LEVELS[n] if n < len(LEVELS) else str(n) for n in range(dim)]
            names = [prefix + symbol for prefix in names for symbol in symbols]
        return names
