"""Localization sequences for Krull-Schmidt categories and the filtration of K_1.

For a full additive subcategory B = add(subset) of the category A of MCM
modules, the K_0 part of the localization sequence

    K_1(A/B) -> K_0(B) -> K_0(A) -> K_0(A/B) -> 0

is checked on the bases given by isomorphism classes of indecomposables.
The connecting map out of K_1(A/B) is never computed; it is only displayed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .arquiver import ARQuiver, EndoDescriptor, full_subcategory_indices, require_valid
from .errors import InputError, RefusalError
from .ktheory import (
    AdditiveAtom,
    CoefficientSpec,
    Cyclic,
    GroupExpression,
    OpaqueAtom,
    UnitsAtom,
    instantiate_atom,
)
from .zmodule import FGAbelianGroup, IntegerMatrix, image_lattice, is_exact_at

F0_NOTE = "quotient of R^× (not computed)"


@dataclass(frozen=True)
class ExactSequenceReport:
    node_labels: tuple[str, ...]
    node_groups: tuple[FGAbelianGroup, ...]
    maps: tuple[IntegerMatrix, ...]
    exact_at: tuple[bool, ...]
    surjective_end: bool
    diagnostics: tuple[str, ...] = ()

    @property
    def exact(self) -> bool:
        return all(self.exact_at) and self.surjective_end

    def to_dict(self) -> dict:
        return {
            "nodes": [{"label": l, "group": g.to_dict()}
                      for l, g in zip(self.node_labels, self.node_groups)],
            "maps": [{"rows": m.rows, "cols": m.cols, "entries": list(m.entries)}
                     for m in self.maps],
            "exact_at": list(self.exact_at),
            "surjective_end": self.surjective_end,
            "diagnostics": list(self.diagnostics),
        }

    def __str__(self):
        row = " → ".join(f"{l} = {g}" for l, g in zip(self.node_labels, self.node_groups))
        status = "exact" if self.exact else "NOT exact: " + "; ".join(self.diagnostics)
        return f"{row}\n{status}"


def _subset_indices(q: ARQuiver, subset: Iterable[str]) -> tuple[int, ...]:
    subset = list(subset)
    if len(set(subset)) != len(subset):
        raise InputError("subset lists an id twice")
    return full_subcategory_indices(q, subset)


def k0_localization_sequence(q: ARQuiver, subset: Iterable[str]) -> ExactSequenceReport:
    """K_0(B) -> K_0(A) -> K_0(A/B) -> 0 for B = add(subset), with exactness checked."""
    require_valid(q)
    inside = _subset_indices(q, subset)
    outside = tuple(i for i in range(len(q.ids)) if i not in inside)
    n = len(q.ids)
    ident = IntegerMatrix.identity(n)
    inclusion = ident.select_columns(inside)
    projection = ident.select_rows(outside)
    to_zero = IntegerMatrix.zeros(0, len(outside))

    checks = [is_exact_at(inclusion, projection), is_exact_at(projection, to_zero)]
    surjective = image_lattice(projection) == IntegerMatrix.identity(len(outside))
    diagnostics = [f"at {label}: {c.diagnostic}"
                   for label, c in zip(("K0(A)", "K0(A/B)"), checks) if not c]
    if not surjective:
        diagnostics.append("K0(A) → K0(A/B) is not surjective")
    return ExactSequenceReport(
        ("K0(B)", "K0(A)", "K0(A/B)", "0"),
        (FGAbelianGroup.free(len(inside)), FGAbelianGroup.free(n),
         FGAbelianGroup.free(len(outside)), FGAbelianGroup.trivial()),
        (inclusion, projection, to_zero),
        tuple(bool(c) for c in checks),
        surjective,
        tuple(diagnostics),
    )


def unit_group_of_endo(d: EndoDescriptor, c: CoefficientSpec = CoefficientSpec()) -> GroupExpression:
    """K_1 of the local ring End(M) modulo the radical of the category.

    radical_dim 0 gives the field, with units k^x; radical_dim 1 gives the
    dual numbers k[t]/(t^2), whose units a(1 + bt) split as k^x + k^+.
    """
    if d.radical_dim == 0:
        atoms = [UnitsAtom(d.residue)]
    elif d.radical_dim == 1:
        atoms = [UnitsAtom(d.residue), AdditiveAtom(d.residue)]
    else:
        raise RefusalError(f"unit-group formula not specified for radical_dim {d.radical_dim}")
    if c.is_symbolic:
        return GroupExpression(tuple(atoms))
    out = []
    for a in atoms:
        out += [Cyclic(n) for n in instantiate_atom(a, c.q).cyclic_orders]
    return GroupExpression(tuple(out))


@dataclass(frozen=True)
class FiltrationStep:
    subset_ids: tuple[str, ...]
    indecomposable: str
    endo: EndoDescriptor | None
    k1_expression: GroupExpression
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "subset": list(self.subset_ids),
            "indecomposable": self.indecomposable,
            "endo": None if self.endo is None else
            {"residue": self.endo.residue, "radical_dim": self.endo.radical_dim},
            "k1": self.k1_expression.to_dict(),
            "k1_text": str(self.k1_expression),
            "note": self.note,
        }


@dataclass(frozen=True)
class FiltrationReport:
    quiver: str
    steps: tuple[FiltrationStep, ...]
    coefficients: CoefficientSpec = field(default_factory=CoefficientSpec)

    def to_dict(self) -> dict:
        return {"quiver": self.quiver, "coefficients": str(self.coefficients),
                "steps": [s.to_dict() for s in self.steps]}

    def __str__(self):
        lines = []
        for i, s in enumerate(self.steps):
            label = "F0" if i == 0 else f"F{i}/F{i - 1}"
            tail = f"   [{s.note}]" if s.note else ""
            lines.append(f"{label:<9} {s.indecomposable:<6} {s.k1_expression}{tail}")
        return "\n".join(lines)


def filtration_report(q: ARQuiver, ordering: Sequence[str] | None = None,
                      c: CoefficientSpec = CoefficientSpec()) -> FiltrationReport:
    """Subquotients F_i / F_(i-1) of K_1 along B_i = add(M_0, ..., M_i)."""
    require_valid(q)
    ordering = tuple(q.ids if ordering is None else ordering)
    if sorted(ordering) != sorted(q.ids):
        raise InputError("ordering must be a permutation of the quiver's ids")
    if ordering[0] != q.projective_id:
        raise InputError(f"ordering must start with the projective {q.projective_id!r}")
    missing = [i for i in ordering if q.get(i).endo is None]
    if missing:
        raise InputError(f"missing endo data for {', '.join(missing)}")

    steps = []
    for i, id_ in enumerate(ordering):
        endo = q.get(id_).endo
        if i == 0:
            expr = GroupExpression.of(OpaqueAtom("F0", (F0_NOTE,)))
            note = F0_NOTE
        else:
            expr = unit_group_of_endo(endo, c)
            note = ""
        steps.append(FiltrationStep(ordering[:i + 1], id_, endo, expr, note))
    return FiltrationReport(q.name, tuple(steps), c)


def semiperfect_view(q: ARQuiver, subset: Iterable[str]) -> str:
    """The localization data rephrased for the semiperfect ring End(⊕ M_i)^op.

    ``e`` is the idempotent projecting onto the summands in ``subset``;
    eRe is Morita equivalent to add(subset) and R/ReR to the quotient category.
    """
    report = k0_localization_sequence(q, subset)
    inside = _subset_indices(q, subset)
    ins = [q.ids[i] for i in inside]
    outs = [x for x in q.ids if x not in ins]
    e = " + ".join(f"e_{x}" for x in ins) if ins else "0"
    lines = [f"quiver {q.name}: R = End(" + " ⊕ ".join(q.ids) + ")^op",
             f"e = {e}"]
    lines.append("eRe = 0" if not ins else f"eRe Morita ↔ add({', '.join(ins)})")
    lines.append("R/ReR = 0" if not outs else f"R/ReR Morita ↔ add({', '.join(outs)})")
    g = report.node_groups
    lines += [
        "six-term sequence:",
        f"  K1(eRe) → K1(R) → K1(R/ReR) ⇢ K0(eRe) → K0(R) → K0(R/ReR) → 0",
        f"  K1 nodes symbolic; connecting map K1(R/ReR) ⇢ K0(eRe) not computed",
        f"  K0 row: {g[0]} → {g[1]} → {g[2]} → 0  "
        + ("exact" if report.exact else "NOT exact: " + "; ".join(report.diagnostics)),
    ]
    return "\n".join(lines)
