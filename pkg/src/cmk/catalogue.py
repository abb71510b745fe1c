"""The A_2n family and the JSON interchange format for quivers."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .arquiver import ARQuiver, ARSequence, EndoDescriptor, Indecomposable
from .errors import InputError, ParseError


@dataclass(frozen=True)
class CatalogueEntry:
    family: str
    parameter: int
    quiver: ARQuiver
    hypersurface: bool = False
    notes: tuple[str, ...] = ()


A2N_NOTES = (
    "R = k[[t^2, t^(2n+1)]], M_i = k[[t^2, t^(2(n-i)+1)]], M_0 = R",
    "AR sequences chosen so that their relation vectors reproduce the closed-form T: "
    "middle term M_(j-1) + M_(j+1) for 0 < j < n, M_(n-1) + M_n for j = n",
    "R is the hypersurface k[[x, y]]/(x^(2n+1) - y^2)",
)


def a2n_quiver(n: int) -> ARQuiver:
    """AR quiver of the curve singularity k[[t^2, t^(2n+1)]] of type A_2n."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InputError(f"A_2n needs an integer n >= 1, got {n!r}")
    ids = [f"M{i}" for i in range(n + 1)]
    indecomposables = [Indecomposable("M0", True, EndoDescriptor("k", 0))]
    indecomposables += [Indecomposable(ids[i], False, EndoDescriptor("k", int(i == n)))
                        for i in range(1, n + 1)]
    sequences = []
    for j in range(1, n):
        sequences.append(ARSequence(ids[j], ((ids[j - 1], 1), (ids[j + 1], 1)), ids[j]))
    sequences.append(ARSequence(ids[n], ((ids[n - 1], 1), (ids[n], 1)), ids[n]))
    return ARQuiver(f"A{2 * n}", tuple(indecomposables), tuple(sequences))


def a2n_entry(n: int) -> CatalogueEntry:
    return CatalogueEntry("a2n", n, a2n_quiver(n), hypersurface=True, notes=A2N_NOTES)


FAMILIES = {"a2n": a2n_entry}


def family_entry(family: str, n: int) -> CatalogueEntry:
    try:
        make = FAMILIES[family.lower()]
    except KeyError:
        raise InputError(f"unknown family {family!r}; known: {', '.join(FAMILIES)}") from None
    return make(n)


# -- interchange format ------------------------------------------------------

_TOP_KEYS = {"name", "indecomposables", "ar_sequences"}
_INDEC_KEYS = {"id", "projective", "endo"}
_ENDO_KEYS = {"residue", "radical_dim"}
_SEQ_KEYS = {"target", "middle", "left"}


def quiver_to_dict(q: ARQuiver) -> dict:
    indecs = []
    for m in q.indecomposables:
        d = {"id": m.id, "projective": m.is_projective}
        if m.endo is not None:
            d["endo"] = {"residue": m.endo.residue, "radical_dim": m.endo.radical_dim}
        indecs.append(d)
    return {
        "name": q.name,
        "indecomposables": indecs,
        "ar_sequences": [{"target": s.target, "middle": dict(s.middle), "left": s.left}
                         for s in q.sequences],
    }


def dumps(q: ARQuiver) -> str:
    return json.dumps(quiver_to_dict(q), indent=2, ensure_ascii=False) + "\n"


def _no_duplicate_keys(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ParseError(f"duplicate key {k!r}")
        out[k] = v
    return out


def _expect(value, kind, where):
    if kind is int:
        ok = isinstance(value, int) and not isinstance(value, bool)
    else:
        ok = isinstance(value, kind)
    if not ok:
        raise ParseError(f"expected {kind.__name__}, got {type(value).__name__}", where)
    return value


def _check_keys(obj, allowed, required, where):
    _expect(obj, dict, where)
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ParseError(f"unknown key(s) {', '.join(map(repr, unknown))}", where)
    missing = sorted(required - set(obj))
    if missing:
        raise ParseError(f"missing key(s) {', '.join(map(repr, missing))}", where)


def quiver_from_dict(data) -> ARQuiver:
    _check_keys(data, _TOP_KEYS, _TOP_KEYS, "<root>")
    name = _expect(data["name"], str, "name")
    indecs = []
    seen = set()
    for i, item in enumerate(_expect(data["indecomposables"], list, "indecomposables")):
        where = f"indecomposables[{i}]"
        _check_keys(item, _INDEC_KEYS, {"id", "projective"}, where)
        id_ = _expect(item["id"], str, f"{where}.id")
        if id_ in seen:
            raise ParseError(f"duplicate id {id_!r}", f"{where}.id")
        seen.add(id_)
        projective = _expect(item["projective"], bool, f"{where}.projective")
        endo = None
        if "endo" in item:
            e = item["endo"]
            _check_keys(e, _ENDO_KEYS, _ENDO_KEYS, f"{where}.endo")
            endo = EndoDescriptor(_expect(e["residue"], str, f"{where}.endo.residue"),
                                  _expect(e["radical_dim"], int, f"{where}.endo.radical_dim"))
        indecs.append(Indecomposable(id_, projective, endo))
    sequences = []
    for i, item in enumerate(_expect(data["ar_sequences"], list, "ar_sequences")):
        where = f"ar_sequences[{i}]"
        _check_keys(item, _SEQ_KEYS, _SEQ_KEYS, where)
        middle = _expect(item["middle"], dict, f"{where}.middle")
        for k, v in middle.items():
            _expect(v, int, f"{where}.middle[{k!r}]")
        sequences.append(ARSequence(_expect(item["target"], str, f"{where}.target"),
                                    tuple(middle.items()),
                                    _expect(item["left"], str, f"{where}.left")))
    return ARQuiver(name, tuple(indecs), tuple(sequences))


def loads(text: str) -> ARQuiver:
    try:
        data = json.loads(text, object_pairs_hook=_no_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    return quiver_from_dict(data)


def load_quiver(path) -> ARQuiver:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(exc.strerror or str(exc), str(path)) from None
    except UnicodeDecodeError:
        raise ParseError("file is not valid UTF-8", str(path)) from None
    return loads(text)


def save_quiver(q: ARQuiver, path) -> None:
    Path(path).write_text(dumps(q), encoding="utf-8")
