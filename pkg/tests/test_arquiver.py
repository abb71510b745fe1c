import pytest

from cmk.arquiver import (
    ARQuiver,
    ARSequence,
    EndoDescriptor,
    Indecomposable,
    ar_matrix,
    deleted_ar_matrix,
    full_subcategory_indices,
    multiplicity,
    relation_vector,
    validate,
)
from cmk.catalogue import a2n_quiver
from cmk.errors import InputError
from cmk.zmodule import IntegerMatrix, cokernel

M = IntegerMatrix.from_rows


def quiver(indecs, seqs, name="test"):
    return ARQuiver(name, tuple(indecs), tuple(seqs))


def test_a4_validates(a4):
    assert validate(a4).ok


def test_two_projectives_flagged():
    q = quiver([Indecomposable("P", True), Indecomposable("Q", True)], [])
    assert any("multiple projectives" in v for v in validate(q).violations)


def test_missing_sequence_flagged(a4):
    q = ARQuiver(a4.name, a4.indecomposables, a4.sequences[1:])
    assert "non-projective without AR sequence: 'M1'" in validate(q).violations


@pytest.mark.parametrize("q, fragment", [
    (quiver([Indecomposable("A"), Indecomposable("P", True)],
            [ARSequence("A", {}, "A")]), "not at index 0"),
    (quiver([Indecomposable("P", True), Indecomposable("P")], []), "duplicate id"),
    (quiver([Indecomposable("P", True)], [ARSequence("P", {}, "P")]), "ends in the projective"),
    (quiver([Indecomposable("P", True), Indecomposable("A")],
            [ARSequence("A", {"X": 1}, "A")]), "unknown id 'X'"),
    (quiver([Indecomposable("P", True), Indecomposable("A")],
            [ARSequence("A", {}, "A"), ARSequence("A", {"P": 1}, "A")]), "2 AR sequences"),
    (quiver([Indecomposable("P", True), Indecomposable("A")],
            [ARSequence("A", {"P": 0}, "A")]), "multiplicity 0"),
    (quiver([Indecomposable("P", True, EndoDescriptor("k", -1))], []), "negative radical_dim"),
    (quiver([Indecomposable("A")], []), "no projective"),
])
def test_violations(q, fragment):
    report = validate(q)
    assert not report.ok
    assert any(fragment in v for v in report.violations), report.violations


def test_multiplicity(a4):
    assert multiplicity(a4, "M1", {"M0": 1, "M1": 3}) == 3
    assert multiplicity(a4, "M2", {}) == 0
    assert multiplicity(a4, "M0", {"M0": 1, "M2": 1}) == 1
    with pytest.raises(InputError):
        multiplicity(a4, "nope", {})
    with pytest.raises(InputError):
        multiplicity(a4, "M0", {"nope": 1})


def test_relation_vectors(a4):
    assert relation_vector(a4, a4.sequence_ending_in("M1")) == (-1, 2, -1)
    assert relation_vector(a4, a4.sequence_ending_in("M2")) == (0, -1, 1)
    split = ARSequence("M2", {"M1": 1, "M2": 1}, "M1")
    assert relation_vector(a4, split) == (0, 0, 0)


def test_ar_matrix_examples(a4):
    T = ar_matrix(a4)
    assert T.matrix == M([[-1, 0], [2, -1], [-1, 1]])
    assert T.row_labels == ("M0", "M1", "M2") and T.col_labels == ("M1", "M2")
    assert ar_matrix(a2n_quiver(1)).matrix == M([[-1], [1]])
    regular = quiver([Indecomposable("R", True)], [])
    assert ar_matrix(regular).matrix == IntegerMatrix.zeros(1, 0)


def test_deleted_ar_matrix_examples(a4):
    assert deleted_ar_matrix(a4).matrix == M([[2, -1], [-1, 1]])
    assert deleted_ar_matrix(a2n_quiver(1)).matrix == M([[1]])
    assert deleted_ar_matrix(a2n_quiver(3)).matrix == M([[2, -1, 0], [-1, 2, -1], [0, -1, 1]])


def test_invalid_quiver_rejected():
    q = quiver([Indecomposable("P", True), Indecomposable("A")], [])
    with pytest.raises(InputError):
        ar_matrix(q)
    with pytest.raises(InputError):
        deleted_ar_matrix(q)


@pytest.mark.parametrize("n", range(1, 8))
def test_columns_are_relation_vectors(n):
    q = a2n_quiver(n)
    T = ar_matrix(q)
    for j, target in enumerate(T.col_labels):
        assert T.matrix.column(j) == relation_vector(q, q.sequence_ending_in(target))
    assert deleted_ar_matrix(q).matrix == T.matrix.delete_rows([0])


def test_permuting_non_projectives(a4):
    a6 = a2n_quiver(3)
    perm = (a6.indecomposables[0],) + tuple(reversed(a6.indecomposables[1:]))
    q = ARQuiver("perm", perm, tuple(reversed(a6.sequences)))
    T, T0 = ar_matrix(q), ar_matrix(a6)
    assert T.col_labels == ("M3", "M2", "M1")
    for j, label in enumerate(T.col_labels):
        col = T.matrix.column(j)
        orig = T0.matrix.column(T0.col_labels.index(label))
        assert col == tuple(orig[T0.row_labels.index(r)] for r in T.row_labels)
    assert cokernel(T.matrix) == cokernel(T0.matrix)
    Tp, Tp0 = deleted_ar_matrix(q).matrix, deleted_ar_matrix(a6).matrix
    assert Tp == IntegerMatrix.from_rows([[Tp0[2 - i, 2 - j] for j in range(3)] for i in range(3)])


def test_full_subcategory_indices(a4):
    assert full_subcategory_indices(a4, {"M0", "M1"}) == (0, 1)
    assert full_subcategory_indices(a4, set()) == ()
    assert full_subcategory_indices(a4, {"M2", "M0", "M1"}) == (0, 1, 2)
    with pytest.raises(InputError):
        full_subcategory_indices(a4, {"M7"})


def test_table_has_labels(a4):
    text = ar_matrix(a4).table()
    assert text.splitlines()[0].split() == ["M1", "M2"]
    assert text.splitlines()[1].split() == ["M0", "-1", "0"]
