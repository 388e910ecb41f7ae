import pytest
from hypothesis import given, strategies as st

from flatblock import ParseError, fixture, parse, print_document, to_surface
from flatblock.fileformat import from_surface
from flatblock.fixtures import DOCUMENTS, NAMES
from flatblock.surface import SurfaceError


@pytest.mark.parametrize("name", NAMES)
def test_roundtrip(name):
    doc = parse(DOCUMENTS[name])
    text = print_document(doc)
    assert parse(text) == doc
    assert print_document(parse(text)) == text


@pytest.mark.parametrize("name", NAMES)
def test_surface_roundtrip(name):
    S = fixture(name)
    U = to_surface(parse(print_document(from_surface(S))))
    assert U.polygons == S.polygons
    assert U.gluings == S.gluings


def test_comments_and_marks():
    doc = parse("field rational # c\npolygon S { (0,0) (1,0) (1,1) (0,1) }\nglue S.e0 ~ S.e2\nglue S.e1 ~ S.e3\nmark S (1/2,1/2)\n")
    assert len(doc.marks) == 1


@pytest.mark.parametrize(
    "text,line,col",
    [
        ("polygon S { }", 1, 1),
        ("field rational\npolygon S { (0,0) (1,0) (1,q) }", 2, 28),
        ("field rational\nglue X.e0 ~ X.e1", 2, 6),
        ("field sqrt 4", 1, 12),
        ("field rational\npolygon S { (0,0) (1,0) (0,1) }\nfoo", 3, 1),
        ("field rational\npolygon S { (0,0) (1,r) (0,1) }", 2, 22),
    ],
)
def test_errors_carry_position(text, line, col):
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert (exc.value.line, exc.value.col) == (line, col)


def test_self_glue_parses_but_fails_validation():
    doc = parse("field rational\npolygon S { (0,0) (1,0) (1,1) (0,1) }\nglue S.e0 ~ S.e0\nglue S.e1 ~ S.e3\n")
    with pytest.raises(SurfaceError):
        to_surface(doc)


def test_billiard_block():
    doc = parse("field rational\nbilliard { angles: 1/2 1/2 1/2 1/2; vertices: (0,0) (1,0) (1,1) (0,1) }\n")
    assert doc.billiard.frame == "euclidean"
    assert parse(print_document(doc)) == doc


@given(st.lists(st.tuples(st.integers(1, 9), st.integers(1, 9)), min_size=1, max_size=4))
def test_rectangle_strips_roundtrip(sizes):
    # a horizontal chain of rectangles closed up into a torus-like strip
    polys, glues = [], []
    for k, (w, h) in enumerate(sizes):
        polys.append(f"polygon P{k} {{ (0,0) ({w},0) ({w},{h}) (0,{h}) }}")
        glues.append(f"glue P{k}.e0 ~ P{k}.e2")
        glues.append(f"glue P{k}.e1 ~ P{k}.e3")
    text = "field rational\n" + "\n".join(polys + glues) + "\n"
    doc = parse(text)
    assert parse(print_document(doc)) == doc
