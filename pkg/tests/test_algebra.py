import numpy as np
import pytest

from tiltbench import linalg as la
from tiltbench.algebra import (Algebra, QuiverPresentation, build_algebra,
                               cyclic_nakayama, load_spec, parse_spec)
from tiltbench.errors import NotAdmissible, SpecFileError

A3R2_TEXT = """\
# linear A3 with the long path killed
field p=2
vertices 1 2 3
arrow a: 1 -> 2
arrow b: 2 -> 3
relation a*b
"""


def a3r2():
    return QuiverPresentation(
        ["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")],
        [[(1, ("a", "b"))]], p=2, name="A3R2")


def ppa2():
    return QuiverPresentation(
        ["1", "2"], [("x", "1", "2"), ("y", "2", "1")],
        [[(1, ("x", "y"))], [(1, ("y", "x"))]], p=2, name="PPA2")


def test_a3r2_build():
    A = build_algebra(a3r2())
    assert A.dim == 5
    assert A.labels == ["e_1", "e_2", "e_3", "a", "b"]
    # a*b is the relation, so the product of the two arrows vanishes
    assert not A.multiply(A.gen_rows[3], A.gen_rows[4]).any()
    # e_1 * a = a
    assert np.array_equal(A.multiply(A.e(0), A.gen_rows[3]), A.gen_rows[3])
    # dimensions of e_v A, i.e. the projectives
    dims = [la.rank(A.left_mult(A.e(v)), 2) for v in range(3)]
    assert dims == [2, 2, 1]


def test_a3r2_opposite():
    A = build_algebra(a3r2())
    op = A.opposite()
    assert op.opposite() is A
    dims = [la.rank(op.left_mult(op.e(v)), 2) for v in range(3)]
    assert dims == [1, 2, 2]
    op.verify()


def test_ppa2_build():
    A = build_algebra(ppa2())
    assert A.dim == 4
    dims = [la.rank(A.left_mult(A.e(v)), 2) for v in range(2)]
    assert dims == [2, 2]


def test_nakayama_dims():
    for m, ell in [(1, 3), (2, 2), (3, 2), (4, 6)]:
        A = build_algebra(cyclic_nakayama(m, ell))
        assert A.dim == m * ell
        assert A.n_idempotents == m


def test_nak3_is_local_chain():
    A = build_algebra(cyclic_nakayama(1, 3))
    assert A.dim == 3
    t = A.gen_rows[1]
    t2 = A.multiply(t, t)
    assert t2.any()
    assert not A.multiply(t2, t).any()


def test_commuting_dual_numbers_p3():
    # F_3[s,t]/(s^2, t^2, st - ts): basis e, s, t, st
    pres = QuiverPresentation(
        ["1"], [("s", "1", "1"), ("t", "1", "1")],
        [[(1, ("s", "s"))], [(1, ("t", "t"))],
         [(1, ("s", "t")), (-1, ("t", "s"))]], p=3)
    A = build_algebra(pres)
    assert A.dim == 4
    i_s = A.labels.index("s")
    i_t = A.labels.index("t")
    assert np.array_equal(A.mult[i_s, i_t], A.mult[i_t, i_s])
    assert A.mult[i_s, i_t].any()


def test_not_admissible():
    pres = QuiverPresentation(["1"], [("t", "1", "1")], [], p=2)
    with pytest.raises(NotAdmissible):
        build_algebra(pres)


def test_zero_algebra():
    A = build_algebra(QuiverPresentation([], [], [], p=2))
    assert A.dim == 0
    A.verify()


def test_generic_radical_matches_grading():
    for pres in [a3r2(), cyclic_nakayama(1, 3), ppa2()]:
        A = build_algebra(pres)
        B = Algebra(A.p, A.mult, A.unit, A.idempotent_rows,
                    A.idempotent_labels, labels=A.labels)
        assert la.row_space_key(B.rad_rows, A.p) == \
            la.row_space_key(A.rad_rows, A.p)


def test_parse_roundtrip():
    pres = parse_spec(A3R2_TEXT, name="A3R2")
    assert pres.p == 2
    assert pres.vertices == ["1", "2", "3"]
    assert build_algebra(pres).dim == 5
    again = parse_spec(pres.canonical_text(), name="A3R2")
    assert again.spec_hash() == pres.spec_hash()


def test_parse_field_override():
    pres = parse_spec(A3R2_TEXT, p=3)
    assert pres.p == 3
    assert build_algebra(pres).dim == 5


def test_parse_relation_with_coefficients():
    text = """\
field p=3
vertices 1
arrow s: 1 -> 1
arrow t: 1 -> 1
relation s*s
relation t*t
relation s*t - 2 t*s
"""
    pres = parse_spec(text)
    assert pres.relations[2] == [(1, ("s", "t")), (1, ("t", "s"))]


def test_parse_errors_carry_positions():
    with pytest.raises(SpecFileError) as ei:
        parse_spec("verticies 1 2\n")
    assert ei.value.line == 1 and ei.value.col == 1

    with pytest.raises(SpecFileError) as ei:
        parse_spec("vertices 1 2\narrow a: 1 -> 3\n")
    assert ei.value.line == 2

    bad_rel = "vertices 1 2\narrow a: 1 -> 2\nrelation a*c\n"
    with pytest.raises(SpecFileError) as ei:
        parse_spec(bad_rel)
    assert ei.value.line == 3

    with pytest.raises(SpecFileError):
        parse_spec("vertices 1\narrow a: 1 -> 1\nrelation a\n")

    with pytest.raises(SpecFileError):
        parse_spec("vertices 1\narrow a: 1 -> 1\nrelation a*\n")

    with pytest.raises(SpecFileError) as ei:
        parse_spec("field p=6\n")
    assert "not prime" in str(ei.value)


def test_parse_non_composable():
    text = "vertices 1 2\narrow a: 1 -> 2\nrelation a*a\n"
    with pytest.raises(SpecFileError):
        parse_spec(text)


def test_load_spec(tmp_path):
    f = tmp_path / "A3R2.alg"
    f.write_text(A3R2_TEXT)
    pres = load_spec(str(f))
    assert pres.name == "A3R2"
    assert build_algebra(pres).dim == 5


def test_left_right_mult_consistency():
    A = build_algebra(ppa2())
    rng = np.random.default_rng(0)
    for _ in range(10):
        x = rng.integers(0, 2, A.dim)
        y = rng.integers(0, 2, A.dim)
        assert np.array_equal(A.multiply(x, y), (x @ A.right_mult(y)) % 2)
        assert np.array_equal(A.multiply(x, y), (y @ A.left_mult(x)) % 2)
