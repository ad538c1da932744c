"""Instance and labeling data model for rotating-label packing.

Holds the four anchoring models, the lossless normalizations that reduce
the two-position and sliding models to fixed anchors, the unit-disk
reduction used for hardness cross-checks, conflict-graph construction, and
labeling validation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

from .geometry import (
    DEFAULT_FP_TOLERANCE,
    Point,
    RotatingSegment,
    SweepDisk,
    conflicts_fp,
    conflicts_vertical,
)


class ModelMismatchError(ValueError):
    """Operation applied to an instance with the wrong anchoring model."""


class LabelingIndexError(ValueError):
    """Labeling refers to a label index outside the instance."""


class AnchorModel(str, Enum):
    ONE_P = "1p"
    TWO_P = "2p"
    SLIDING = "sliding"
    FIXED_POSITION = "fp"


def _check_label(model: AnchorModel, index: int, label: RotatingSegment) -> None:
    if model is AnchorModel.FIXED_POSITION:
        return
    if label.orientation != 0.0:
        raise ModelMismatchError(
            f"label {index}: model {model.value} requires vertical orientation"
        )
    if model is AnchorModel.ONE_P and label.anchor_offset != 0.0:
        raise ModelMismatchError(f"label {index}: 1p anchors at the bottom endpoint")
    if model is AnchorModel.TWO_P and label.anchor_offset not in (0.0, label.length):
        raise ModelMismatchError(f"label {index}: 2p anchors at an endpoint")


@dataclass(frozen=True)
class Instance:
    """An immutable set of labels under one anchoring model.

    Label indices (0-based positions) are the stable identifiers used by
    labelings, conflict graphs and solvers.
    """

    labels: tuple[RotatingSegment, ...]
    model: AnchorModel
    id: str = ""
    metadata: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "metadata", dict(self.metadata))
        for i, label in enumerate(self.labels):
            _check_label(self.model, i, label)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def n(self) -> int:
        return len(self.labels)

    def sweep_disks(self) -> list[SweepDisk]:
        return [label.sweep_disk() for label in self.labels]


@dataclass(frozen=True)
class Labeling:
    """A selected subset of label indices, with anchor choices when the
    model leaves the anchor free (two-position and sliding outputs)."""

    selected: frozenset[int]
    anchor_choice: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "selected", frozenset(self.selected))
        object.__setattr__(self, "anchor_choice", dict(self.anchor_choice))

    @property
    def size(self) -> int:
        return len(self.selected)

    def sorted_indices(self) -> list[int]:
        return sorted(self.selected)


@dataclass(frozen=True)
class ConflictGraph:
    """Pairwise conflicts of an instance as an undirected graph on indices."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", frozenset(self.edges))
        for i, j in self.edges:
            if not (0 <= i < j < self.n):
                raise ValueError(f"bad edge ({i}, {j}) for n={self.n}")

    def neighbor_masks(self) -> list[int]:
        masks = [0] * self.n
        for i, j in self.edges:
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        return masks


class ValidationResult(NamedTuple):
    ok: bool
    violation: Optional[tuple[int, int]]


def _with_metadata(instance: Instance, **extra: str) -> dict[str, str]:
    meta = dict(instance.metadata)
    meta.update(extra)
    return meta


def normalize_2p(instance: Instance) -> Instance:
    """Re-anchor every two-position label at its bottom endpoint.

    Any proper labeling of the input stays proper, so the optimum is
    preserved; the result is a plain 1p instance.
    """
    if instance.model is not AnchorModel.TWO_P:
        raise ModelMismatchError(f"normalize_2p expects a 2p instance, got {instance.model.value}")
    labels = tuple(replace(label, anchor_offset=0.0) for label in instance.labels)
    return Instance(
        labels,
        AnchorModel.ONE_P,
        id=instance.id,
        metadata=_with_metadata(instance, normalized_from="2p"),
    )


def normalize_sliding(instance: Instance) -> Instance:
    """Re-anchor every sliding label at its midpoint.

    Midpoint anchoring minimises the pairwise conflict threshold
    max(up_a + down_b, up_b + down_a), whose value is always at least
    (len_a + len_b) / 2, so no proper labeling is lost.  Midpoint anchors
    are a fixed choice, hence the result uses the fixed-position model.
    """
    if instance.model is not AnchorModel.SLIDING:
        raise ModelMismatchError(
            f"normalize_sliding expects a sliding instance, got {instance.model.value}"
        )
    labels = tuple(
        replace(label, anchor_offset=label.length / 2.0) for label in instance.labels
    )
    return Instance(
        labels,
        AnchorModel.FIXED_POSITION,
        id=instance.id,
        metadata=_with_metadata(instance, normalized_from="sliding"),
    )


def normalize_for_solving(instance: Instance) -> tuple[Instance, Optional[dict[int, float]]]:
    """Normalize any model to one the solvers accept (1p or fp).

    Returns the normalized instance and, for models with anchor freedom, the
    per-index anchor offsets the normalization fixed (to be echoed into the
    output labeling); None otherwise.
    """
    if instance.model is AnchorModel.TWO_P:
        norm = normalize_2p(instance)
        return norm, {i: 0.0 for i in range(instance.n)}
    if instance.model is AnchorModel.SLIDING:
        norm = normalize_sliding(instance)
        return norm, {i: label.length / 2.0 for i, label in enumerate(instance.labels)}
    return instance, None


def reduce_gmis_to_mris(disk_centres: Sequence[Point]) -> Instance:
    """Encode a unit-disk packing instance as a 1p labeling instance.

    One bottom-anchored label of length 2 per disk centre; maximum
    non-intersecting disk subsets and maximum proper labelings have equal
    size in both directions.
    """
    labels = tuple(RotatingSegment(anchor=c, length=2.0) for c in disk_centres)
    return Instance(
        labels,
        AnchorModel.ONE_P,
        id="unit-disk-reduction",
        metadata={"source": "gmis-unit-disks"},
    )


def build_conflict_graph(
    instance: Instance, fp_tolerance: float = DEFAULT_FP_TOLERANCE
) -> ConflictGraph:
    """All conflicting pairs under the instance's model, by O(n^2) evaluation.

    Requires a normalized model: 1p uses the exact vertical closed form,
    fixed-position uses the tolerance-based predicate.  Two-position and
    sliding instances must be normalized first.
    """
    labels = instance.labels
    n = len(labels)
    if instance.model is AnchorModel.ONE_P:
        def conflict(a: RotatingSegment, b: RotatingSegment) -> bool:
            return conflicts_vertical(
                a.anchor, a.down_reach, a.up_reach, b.anchor, b.down_reach, b.up_reach
            )
    elif instance.model is AnchorModel.FIXED_POSITION:
        def conflict(a: RotatingSegment, b: RotatingSegment) -> bool:
            return conflicts_fp(a, b, fp_tolerance)
    else:
        raise ModelMismatchError(
            f"conflict graph needs a normalized model (1p or fp), got {instance.model.value}"
        )
    edges = frozenset(
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if conflict(labels[i], labels[j])
    )
    return ConflictGraph(n=n, edges=edges)


def _effective_label(
    instance: Instance, index: int, labeling: Labeling
) -> RotatingSegment:
    label = instance.labels[index]
    if index in labeling.anchor_choice:
        choice = labeling.anchor_choice[index]
        if instance.model in (AnchorModel.ONE_P, AnchorModel.FIXED_POSITION):
            raise ValueError(
                f"model {instance.model.value} fixes anchors; choice for label {index} rejected"
            )
        if not (0.0 <= choice <= label.length):
            raise ValueError(f"anchor choice {choice} for label {index} outside [0, length]")
        if instance.model is AnchorModel.TWO_P and choice not in (0.0, label.length):
            raise ValueError(f"anchor choice {choice} for label {index} not a 2p endpoint")
        return replace(label, anchor_offset=choice)
    return label


def validate_labeling(
    instance: Instance,
    labeling: Labeling,
    fp_tolerance: float = DEFAULT_FP_TOLERANCE,
) -> ValidationResult:
    """Check that every selected pair is conflict-free under the instance
    model with the labeling's anchor choices.

    Returns the lexicographically smallest violating pair on failure.
    Out-of-range indices raise ``LabelingIndexError`` instead of counting as
    a validation failure.
    """
    n = instance.n
    for index in labeling.selected:
        if not (0 <= index < n):
            raise LabelingIndexError(f"label index {index} outside instance of size {n}")
    for index in labeling.anchor_choice:
        if index not in labeling.selected:
            raise LabelingIndexError(f"anchor choice for unselected label {index}")
    chosen = sorted(labeling.selected)
    placed = {i: _effective_label(instance, i, labeling) for i in chosen}
    vertical = instance.model is not AnchorModel.FIXED_POSITION
    for pos, i in enumerate(chosen):
        for j in chosen[pos + 1 :]:
            a, b = placed[i], placed[j]
            if vertical:
                hit = conflicts_vertical(
                    a.anchor, a.down_reach, a.up_reach, b.anchor, b.down_reach, b.up_reach
                )
            else:
                hit = conflicts_fp(a, b, fp_tolerance)
            if hit:
                return ValidationResult(False, (i, j))
    return ValidationResult(True, None)
