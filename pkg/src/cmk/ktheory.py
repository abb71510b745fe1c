"""K_0 and K_1 invariants computed from AR matrices.

K_0 groups come out as concrete :class:`FGAbelianGroup` values.  K_1 groups
are only known up to extensions and up to a summand G that is not finitely
generated, so they are returned as :class:`GroupExpression` values: formal
direct sums of atoms such as k^x and k^+.  Over a finite field of order q the
instantiable atoms can be evaluated to finite abelian groups.  That is a
testing device: the underlying theory assumes an algebraically closed
residue field.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Union

from .arquiver import ARQuiver, ar_matrix, deleted_ar_matrix, require_valid
from .errors import InputError, RefusalError
from .zmodule import (
    FGAbelianGroup,
    FiniteAbelianGroup,
    IntegerMatrix,
    cokernel,
    cokernel_with_coefficients,
    determinant,
    prime_factors,
    smith_normal_form,
)

FORMAL_INSTANTIATION = ("formal instantiation: finite residue field, outside the "
                        "algebraically closed setting the results are stated for")
G_CONSTRAINT = "exact: R^×/k^× → G → k^+ → 0"


class HypersurfaceWarning(UserWarning):
    pass


class InstantiationRefused(RefusalError):
    def __init__(self, atoms):
        self.atoms = tuple(atoms)
        super().__init__("cannot instantiate: " + ", ".join(self.atoms))


# -- atoms -------------------------------------------------------------------

@dataclass(frozen=True)
class Free:
    rank: int

    def __str__(self):
        return "Z" if self.rank == 1 else f"Z^{self.rank}"


@dataclass(frozen=True)
class Cyclic:
    order: int

    def __str__(self):
        return f"Z/{self.order}"


@dataclass(frozen=True)
class UnitsAtom:
    field_symbol: str = "k"

    def __str__(self):
        return f"{self.field_symbol}^×"


@dataclass(frozen=True)
class AdditiveAtom:
    field_symbol: str = "k"

    def __str__(self):
        return f"{self.field_symbol}^+"


@dataclass(frozen=True)
class ResidueUnitsAtom:
    def __str__(self):
        return "R^×/k^×"


@dataclass(frozen=True)
class QuotientAtom:
    """base / d.base"""

    base: "Atom"
    d: int

    def __str__(self):
        return f"({self.base})/{self.d}"


@dataclass(frozen=True)
class OpaqueAtom:
    name: str
    constraints: tuple[str, ...] = ()

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Extension:
    """An unspecified extension 0 -> kernel -> ? -> quotient -> 0."""

    kernel: "GroupExpression"
    quotient: "GroupExpression"

    def __str__(self):
        return f"ext({self.quotient} by {self.kernel})"


Atom = Union[Free, Cyclic, UnitsAtom, AdditiveAtom, ResidueUnitsAtom, QuotientAtom,
             OpaqueAtom, Extension]


@dataclass(frozen=True)
class GroupExpression:
    summands: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(self.summands))

    @classmethod
    def of(cls, *atoms) -> GroupExpression:
        return cls(tuple(atoms))

    @classmethod
    def from_group(cls, g: FiniteAbelianGroup) -> GroupExpression:
        return cls(tuple(Cyclic(n) for n in g.canonical().cyclic_orders))

    def __add__(self, other: GroupExpression) -> GroupExpression:
        return GroupExpression(self.summands + other.summands)

    def is_empty(self) -> bool:
        return not self.summands

    def opaque_atoms(self) -> list[OpaqueAtom]:
        out = []
        for a in self.summands:
            if isinstance(a, OpaqueAtom):
                out.append(a)
            elif isinstance(a, Extension):
                out += a.kernel.opaque_atoms() + a.quotient.opaque_atoms()
        return out

    def __str__(self):
        return " ⊕ ".join(str(a) for a in self.summands) or "0"

    def to_dict(self) -> list:
        return [atom_to_dict(a) for a in self.summands]


def atom_to_dict(a) -> dict:
    if isinstance(a, Free):
        return {"atom": "free", "rank": a.rank}
    if isinstance(a, Cyclic):
        return {"atom": "cyclic", "order": a.order}
    if isinstance(a, UnitsAtom):
        return {"atom": "units", "field": a.field_symbol}
    if isinstance(a, AdditiveAtom):
        return {"atom": "additive", "field": a.field_symbol}
    if isinstance(a, ResidueUnitsAtom):
        return {"atom": "residue_units"}
    if isinstance(a, QuotientAtom):
        return {"atom": "quotient", "base": atom_to_dict(a.base), "d": a.d}
    if isinstance(a, OpaqueAtom):
        return {"atom": "opaque", "name": a.name, "constraints": list(a.constraints)}
    if isinstance(a, Extension):
        return {"atom": "extension", "kernel": a.kernel.to_dict(),
                "quotient": a.quotient.to_dict()}
    raise TypeError(f"not an atom: {a!r}")


# -- finite-field instantiation ----------------------------------------------

def prime_power(q: int) -> tuple[int, int]:
    """(p, e) with q = p^e, or InputError."""
    if isinstance(q, bool) or not isinstance(q, int) or q < 2:
        raise InputError(f"field order must be a prime power >= 2, got {q!r}")
    primes = prime_factors(q)
    if len(primes) != 1:
        raise InputError(f"field order {q} is not a prime power")
    p, e, r = primes[0], 0, q
    while r > 1:
        r //= p
        e += 1
    return p, e


def field_units(q: int) -> FiniteAbelianGroup:
    prime_power(q)
    return FiniteAbelianGroup.of(q - 1)


def field_additive(q: int) -> FiniteAbelianGroup:
    p, e = prime_power(q)
    return FiniteAbelianGroup((p,) * e)


def instantiate_atom(a, q: int) -> FiniteAbelianGroup:
    if isinstance(a, Cyclic):
        return FiniteAbelianGroup.of(a.order)
    if isinstance(a, Free):
        if a.rank:
            raise InstantiationRefused([str(a)])
        return FiniteAbelianGroup()
    if isinstance(a, UnitsAtom):
        return field_units(q)
    if isinstance(a, AdditiveAtom):
        return field_additive(q)
    if isinstance(a, QuotientAtom):
        return instantiate_atom(a.base, q).quotient_by_multiple(a.d)
    if isinstance(a, Extension):
        kernel = instantiate(a.kernel, q)
        quotient = instantiate(a.quotient, q)
        if kernel.is_trivial():
            return quotient
        if quotient.is_trivial() or math.gcd(kernel.order, quotient.order) == 1:
            return kernel.direct_sum(quotient).canonical()
        raise InstantiationRefused([f"{a} (extension of non-coprime orders not determined)"])
    raise InstantiationRefused([str(a)])


def instantiate(e: GroupExpression, q: int) -> FiniteAbelianGroup:
    """Evaluate ``e`` over the field with q elements.

    Raises :class:`InstantiationRefused` naming every atom that has no finite
    value (opaque atoms, R^x/k^x, free summands).
    """
    prime_power(q)
    refused, out = [], FiniteAbelianGroup()
    for a in e.summands:
        try:
            out = out.direct_sum(instantiate_atom(a, q))
        except InstantiationRefused as exc:
            refused.extend(exc.atoms)
    if refused:
        raise InstantiationRefused(refused)
    return out.canonical()


@dataclass(frozen=True)
class CoefficientSpec:
    mode: str = "symbolic"
    q: int | None = None

    def __post_init__(self):
        if self.mode == "symbolic":
            if self.q is not None:
                raise InputError("symbolic coefficients take no field order")
        elif self.mode == "finite_field":
            prime_power(self.q)
        else:
            raise InputError(f"unknown coefficient mode {self.mode!r}")

    @classmethod
    def symbolic(cls) -> CoefficientSpec:
        return cls()

    @classmethod
    def finite_field(cls, q: int) -> CoefficientSpec:
        return cls("finite_field", q)

    @classmethod
    def parse(cls, text: str) -> CoefficientSpec:
        """``symbolic`` or ``ff:q``."""
        if text == "symbolic":
            return cls()
        if text.startswith("ff:"):
            try:
                return cls.finite_field(int(text[3:]))
            except ValueError:
                pass
        raise InputError(f"coefficients must be 'symbolic' or 'ff:q', got {text!r}")

    @property
    def is_symbolic(self) -> bool:
        return self.mode == "symbolic"

    def __str__(self):
        return "symbolic" if self.is_symbolic else f"ff:{self.q}"


# -- K_0 ---------------------------------------------------------------------

def k0_prime(q: ARQuiver) -> FGAbelianGroup:
    """K_0'(R) = coker(T : Z^I0 -> Z^I)."""
    return cokernel(ar_matrix(q).matrix)


def k0_lambda(q: ARQuiver) -> FGAbelianGroup:
    """K_0 of the Auslander algebra: free on the indecomposables."""
    require_valid(q)
    return FGAbelianGroup.free(len(q.indecomposables))


def k0_mf(q: ARQuiver, hypersurface: bool = False) -> FGAbelianGroup:
    """K_0 of matrix factorizations, coker(T').

    Only meaningful when R is a hypersurface; without ``hypersurface=True``
    the group is still computed but a :class:`HypersurfaceWarning` is issued.
    """
    group = cokernel(deleted_ar_matrix(q).matrix)
    if not hypersurface:
        warnings.warn(f"{q.name}: hypersurface hypothesis not asserted; K_0(MF) = coker(T') "
                      "holds only for R = S/(w)", HypersurfaceWarning, stacklevel=2)
    return group


def det_deleted_matrix(q: ARQuiver) -> tuple[int, bool]:
    d = determinant(deleted_ar_matrix(q).matrix)
    return d, d > 0


# -- K_1 ---------------------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    """A K_1 group as an expression, with the facts it was derived from."""

    expression: GroupExpression
    certificate: tuple[str, ...] = ()
    flags: tuple[str, ...] = ()
    matrices: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {"expression": self.expression.to_dict(), "text": str(self.expression),
                "certificate": list(self.certificate), "flags": list(self.flags)}


def units_cokernel(M: IntegerMatrix, c: CoefficientSpec) -> GroupExpression:
    """coker(M . id_{k^x}) as an expression.

    Symbolically this is read off the Smith form: a copy of k^x/d k^x per
    diagonal entry d > 1 and a free copy of k^x per zero row.  Over F_q it is
    evaluated concretely.
    """
    if not c.is_symbolic:
        return GroupExpression.from_group(cokernel_with_coefficients(M, field_units(c.q)))
    d = smith_normal_form(M).diagonal
    atoms = [QuotientAtom(UnitsAtom(), x) for x in d if x > 1]
    atoms += [UnitsAtom()] * (M.rows - len(d))
    return GroupExpression(tuple(atoms))


def _g_atom() -> OpaqueAtom:
    return OpaqueAtom("G", (G_CONSTRAINT,))


def _gate(q: ARQuiver) -> int:
    det, positive = det_deleted_matrix(q)
    if not positive:
        raise RefusalError(f"{q.name}: injectivity hypothesis unverified (det T' = {det} is not > 0)")
    return det


def _ff_flags(c: CoefficientSpec, expr: GroupExpression) -> tuple[str, ...]:
    if c.is_symbolic:
        return ()
    flags = [FORMAL_INSTANTIATION]
    flags += [f"opaque summand {a.name} left symbolic" for a in expr.opaque_atoms()]
    return tuple(flags)


def k1_prime_presentation(q: ARQuiver, c: CoefficientSpec = CoefficientSpec()) -> Presentation:
    """K_1'(R) = coker(T . id_{k^x}) ⊕ G, once det T' > 0 is confirmed."""
    det = _gate(q)
    T = ar_matrix(q).matrix
    expr = units_cokernel(T, c) + GroupExpression.of(_g_atom())
    certificate = (
        f"det T' = {det} > 0, so K_1'(R) -> (K_0 k)^n -> K_0(C) ends in an injection",
        "K_1'(R) ≅ coker[K_1(m) ∘ (T · id_{k^×})]",
        "K_1(C^⊕) ≅ coker(T · id_{k^×}) ⊕ G",
        f"G: {G_CONSTRAINT}",
    )
    return Presentation(expr, certificate, _ff_flags(c, expr), {"T": T.digest()})


def k1_mf_presentation(q: ARQuiver, c: CoefficientSpec = CoefficientSpec()) -> Presentation:
    """K_1(MF) as an extension of k^+ by coker(T' . id_{k^x})."""
    det = _gate(q)
    Tp = deleted_ar_matrix(q).matrix
    kernel = units_cokernel(Tp, c)
    n = Tp.rows
    certificate = [
        f"det T' = {det} > 0, so K_1(MF) -> (K_0 k)^n -> K_0(X) ends in an injection",
        "exact: 0 → coker(T' · id_{k^×}) → K_1(MF) → k^+ → 0",
        f"K1(X): exact: 0 → (k^×)^{n} → K1(X) → k^+ → 0",
        "K1(X): exact: K_1(C^⊕) → K1(X) → K_0(R) → K_0(C^⊕)",
    ]
    if c.is_symbolic:
        expr = GroupExpression.of(Extension(kernel, GroupExpression.of(AdditiveAtom())))
    else:
        k_group = instantiate(kernel, c.q)
        additive = field_additive(c.q)
        if k_group.is_trivial():
            expr = GroupExpression.from_group(additive)
            certificate.append(f"kernel term is trivial over F_{c.q}")
        elif math.gcd(k_group.order, additive.order) == 1:
            expr = GroupExpression.from_group(k_group.direct_sum(additive))
            certificate.append(f"kernel order {k_group.order} is coprime to q = {c.q}; "
                               "the extension splits")
        else:
            expr = GroupExpression.of(Extension(GroupExpression.from_group(k_group),
                                                GroupExpression.from_group(additive)))
    return Presentation(expr, tuple(certificate), _ff_flags(c, expr), {"T'": Tp.digest()})


def k1_additive_category(q: ARQuiver, c: CoefficientSpec = CoefficientSpec()) -> Presentation:
    """K_1 of the additive category of MCM modules: coker(T . id_{k^x}) ⊕ G."""
    require_valid(q)
    missing = [m.id for m in q.indecomposables if m.endo is None]
    if missing:
        raise InputError(f"missing endo data for {', '.join(missing)}")
    T = ar_matrix(q).matrix
    expr = units_cokernel(T, c) + GroupExpression.of(_g_atom())
    certificate = ("K_1(C^⊕) ≅ coker(T · id_{k^×}) ⊕ G", f"G: {G_CONSTRAINT}")
    return Presentation(expr, certificate, _ff_flags(c, expr), {"T": T.digest()})
