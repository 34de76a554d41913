"""Minimum-variance component selection and subject templates.

Enrollment computes one invariant per quadtree tile for each of the P
genuine training samples, filters tiles by repeatedly discarding those
with at-or-above-average variance until the component budget b is met, and
stores the surviving tile indices along with the training samples' feature
values (the per-sample sum of the invariant over the chosen tiles).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .moments import MomentKind, hu_moment
from .quadtree import ComponentGrid, decompose, extract_region

TEMPLATE_VERSION = 1


def component_moments(
    mass: np.ndarray, d1: int, kind: MomentKind, order: str = "morton"
) -> np.ndarray:
    """Invariant value of every tile, indexed 0..L-1; massless tiles give 0."""
    grid = decompose(d1, m=np.asarray(mass).shape[0], order=order)
    values = np.empty(grid.count, dtype=np.float64)
    for i in range(1, grid.count + 1):
        tile = extract_region(mass, grid, i)
        try:
            values[i - 1] = hu_moment(tile, kind)
        except ValueError:
            values[i - 1] = 0.0  # empty tile contributes no evidence
    return values


def select_mvqc(training: np.ndarray, b: int) -> list[int]:
    """Indices (1-based, ascending) of the b minimum-variance components.

    ``training`` is a P x L matrix of per-sample component values. Starting
    from all L components, the components with variance strictly below the
    survivors' average variance are kept, repeatedly, until exactly b
    survive. If a pass leaves fewer than b (or makes no progress), the b
    smallest-variance components of the current set are taken, ties going
    to the lowest index.
    """
    values = np.asarray(training, dtype=np.float64)
    if values.ndim != 2:
        raise ValueError("training matrix must be P x L")
    p, l = values.shape
    if p < 2:
        raise ValueError("variance needs at least 2 training samples")
    if not 1 <= b <= l:
        raise ValueError("component budget %d out of range 1..%d" % (b, l))
    variances = values.var(axis=0)  # population variance
    selected = list(range(l))
    while True:
        avg = float(variances[selected].mean())
        survivors = [i for i in selected if variances[i] < avg]
        if len(survivors) == b:
            return [i + 1 for i in survivors]
        if len(survivors) < b or len(survivors) == len(selected):
            by_variance = sorted(selected, key=lambda i: (variances[i], i))
            return sorted(i + 1 for i in by_variance[:b])
        selected = survivors


@dataclass(frozen=True)
class MvqcTemplate:
    """A subject's enrolled model.

    ``indices`` are the b chosen component indices (1-based, ascending);
    ``training_features`` holds the P training samples' feature values.
    ``context`` carries optional harness metadata (modality, window) that
    standalone verification needs.
    """

    subject_id: str
    kind: MomentKind
    d1: int
    b: int
    indices: tuple[int, ...]
    training_features: tuple[float, ...]
    tile_order: str = "morton"
    context: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.indices) != self.b:
            raise ValueError("template must hold exactly b component indices")
        if list(self.indices) != sorted(set(self.indices)):
            raise ValueError("component indices must be strictly increasing")

    def grid(self, m: int = 512) -> ComponentGrid:
        return decompose(self.d1, m=m, order=self.tile_order)

    def to_dict(self) -> dict:
        doc = {
            "version": TEMPLATE_VERSION,
            "subject": self.subject_id,
            "kind": self.kind.value,
            "d1": self.d1,
            "b": self.b,
            "indices": list(self.indices),
            "training_features": list(self.training_features),
            "tile_order": self.tile_order,
        }
        if self.context:
            doc["context"] = dict(self.context)
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "MvqcTemplate":
        version = doc.get("version")
        if version != TEMPLATE_VERSION:
            raise ValueError("unsupported template version %r" % version)
        return cls(
            subject_id=doc["subject"],
            kind=MomentKind(doc["kind"]),
            d1=int(doc["d1"]),
            b=int(doc["b"]),
            indices=tuple(int(i) for i in doc["indices"]),
            training_features=tuple(float(v) for v in doc["training_features"]),
            tile_order=doc.get("tile_order", "morton"),
            context=dict(doc.get("context", {})),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "MvqcTemplate":
        return cls.from_dict(json.loads(Path(path).read_text()))


def moment_summation(mass: np.ndarray, template: MvqcTemplate) -> float:
    """Sum of the template's invariant over its chosen components."""
    values = component_moments(mass, template.d1, template.kind, template.tile_order)
    return float(sum(values[i - 1] for i in template.indices))


def training_matrix(
    samples: list[np.ndarray], d1: int, kind: MomentKind, order: str = "morton"
) -> np.ndarray:
    """P x L matrix of per-sample component values."""
    return np.stack([component_moments(s, d1, kind, order) for s in samples])


def enroll(
    samples: list[np.ndarray],
    d1: int,
    kind: MomentKind,
    b: int,
    subject_id: str = "",
    tile_order: str = "morton",
    context: dict | None = None,
) -> MvqcTemplate:
    """Build a subject template from P genuine training mass images."""
    if len(samples) < 2:
        raise ValueError("enrollment needs at least 2 training samples")
    matrix = training_matrix(samples, d1, kind, tile_order)
    indices = select_mvqc(matrix, b)
    features = tuple(float(matrix[s, [i - 1 for i in indices]].sum()) for s in range(len(samples)))
    return MvqcTemplate(
        subject_id=subject_id,
        kind=MomentKind(kind),
        d1=d1,
        b=b,
        indices=tuple(indices),
        training_features=features,
        tile_order=tile_order,
        context=dict(context or {}),
    )
