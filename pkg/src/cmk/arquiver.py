"""Auslander-Reiten quiver data and the relation matrices built from it."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import InputError
from .zmodule import IntegerMatrix


@dataclass(frozen=True)
class EndoDescriptor:
    """What little of End(M) the K_1 computations need.

    ``radical_dim`` is the k-dimension of the radical of the endomorphism
    ring of M in the relevant quotient category: 0 means that ring is the
    residue field itself, 1 means it is k[t]/(t^2).
    """

    residue: str = "k"
    radical_dim: int = 0


@dataclass(frozen=True)
class Indecomposable:
    id: str
    is_projective: bool = False
    endo: EndoDescriptor | None = None


@dataclass(frozen=True)
class ARSequence:
    """0 -> left -> middle -> target -> 0, the middle kept as multiplicities."""

    target: str
    middle: tuple[tuple[str, int], ...]
    left: str

    def __post_init__(self):
        middle = self.middle
        if isinstance(middle, Mapping):
            middle = middle.items()
        object.__setattr__(self, "middle", tuple((str(k), int(v)) for k, v in middle))

    @property
    def middle_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for k, v in self.middle:
            counts[k] = counts.get(k, 0) + v
        return counts


@dataclass(frozen=True)
class ARQuiver:
    name: str
    indecomposables: tuple[Indecomposable, ...]
    sequences: tuple[ARSequence, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "indecomposables", tuple(self.indecomposables))
        object.__setattr__(self, "sequences", tuple(self.sequences))

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(m.id for m in self.indecomposables)

    @property
    def non_projective_ids(self) -> tuple[str, ...]:
        return tuple(m.id for m in self.indecomposables if not m.is_projective)

    @property
    def projective_id(self) -> str:
        projectives = [m.id for m in self.indecomposables if m.is_projective]
        if len(projectives) != 1:
            raise InputError(f"quiver {self.name!r} has {len(projectives)} projectives, expected 1")
        return projectives[0]

    def index(self, id: str) -> int:
        for i, m in enumerate(self.indecomposables):
            if m.id == id:
                return i
        raise InputError(f"unknown indecomposable {id!r} in quiver {self.name!r}")

    def get(self, id: str) -> Indecomposable:
        return self.indecomposables[self.index(id)]

    def sequence_ending_in(self, id: str) -> ARSequence:
        for s in self.sequences:
            if s.target == id:
                return s
        raise InputError(f"no AR sequence ends in {id!r}")


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "valid" if self.ok else "\n".join(self.violations)


def validate(q: ARQuiver) -> ValidationReport:
    report = ValidationReport()
    bad = report.violations

    seen = set()
    for m in q.indecomposables:
        if m.id in seen:
            bad.append(f"duplicate id {m.id!r}")
        seen.add(m.id)
        if m.endo is not None and m.endo.radical_dim < 0:
            bad.append(f"negative radical_dim on {m.id!r}")

    projectives = [m.id for m in q.indecomposables if m.is_projective]
    if not projectives:
        bad.append("no projective")
    elif len(projectives) > 1:
        bad.append(f"multiple projectives: {', '.join(projectives)}")
    elif q.indecomposables[0].id != projectives[0]:
        bad.append(f"projective {projectives[0]!r} is not at index 0")

    ending: dict[str, int] = {}
    for s in q.sequences:
        for ref in (s.target, s.left, *(k for k, _ in s.middle)):
            if ref not in seen:
                bad.append(f"AR sequence ending in {s.target!r} references unknown id {ref!r}")
        for k, v in s.middle:
            if v <= 0:
                bad.append(f"AR sequence ending in {s.target!r} has multiplicity {v} for {k!r}")
        if s.target in projectives:
            bad.append(f"AR sequence ends in the projective {s.target!r}")
        ending[s.target] = ending.get(s.target, 0) + 1

    for m in q.indecomposables:
        if m.is_projective:
            continue
        count = ending.get(m.id, 0)
        if count == 0:
            bad.append(f"non-projective without AR sequence: {m.id!r}")
        elif count > 1:
            bad.append(f"{count} AR sequences end in {m.id!r}")
    return report


def require_valid(q: ARQuiver) -> None:
    report = validate(q)
    if not report.ok:
        raise InputError(f"invalid quiver {q.name!r}: " + "; ".join(report.violations))


def multiplicity(q: ARQuiver, l: str, Q: Mapping[str, int] | Iterable[tuple[str, int]]) -> int:
    """Number of summands isomorphic to ``l`` in the module described by ``Q``."""
    items = Q.items() if isinstance(Q, Mapping) else Q
    q.index(l)
    total = 0
    for k, v in items:
        q.index(k)
        if k == l:
            total += v
    return total


def relation_vector(q: ARQuiver, s: ARSequence) -> tuple[int, ...]:
    """[N] - [E] + [M] in the basis of all indecomposables."""
    target, left = {s.target: 1}, {s.left: 1}
    return tuple(multiplicity(q, l, target) - multiplicity(q, l, s.middle)
                 + multiplicity(q, l, left)
                 for l in q.ids)


@dataclass(frozen=True)
class ARMatrix:
    matrix: IntegerMatrix
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]

    def table(self) -> str:
        width = max([len(str(x)) for x in self.matrix.entries] + [len(c) for c in self.col_labels] + [1])
        pad = max([len(r) for r in self.row_labels] + [0])
        lines = [" " * pad + "  " + " ".join(c.rjust(width) for c in self.col_labels)]
        for i, label in enumerate(self.row_labels):
            lines.append(label.ljust(pad) + "  "
                         + " ".join(str(x).rjust(width) for x in self.matrix.row(i)))
        return "\n".join(lines)


def ar_matrix(q: ARQuiver) -> ARMatrix:
    """The matrix T: one column [N] - [E] + [M] per non-projective M."""
    require_valid(q)
    cols = q.non_projective_ids
    vectors = [relation_vector(q, q.sequence_ending_in(c)) for c in cols]
    return ARMatrix(IntegerMatrix.from_columns(vectors, len(q.ids)), q.ids, cols)


def deleted_ar_matrix(q: ARQuiver) -> ARMatrix:
    """T with the projective's row removed; square."""
    T = ar_matrix(q)
    p = q.index(q.projective_id)
    return ARMatrix(T.matrix.delete_rows([p]),
                    tuple(r for i, r in enumerate(T.row_labels) if i != p),
                    T.col_labels)


def full_subcategory_indices(q: ARQuiver, subset: Iterable[str]) -> tuple[int, ...]:
    """Indices, in quiver order, of the indecomposables spanning add(subset)."""
    return tuple(sorted({q.index(s) for s in subset}))
