import pytest
from hypothesis import given, settings, strategies as st

from genusrna.diagram import Diagram, DiagramError
from genusrna.records import DiagramRecord, RecordError, read_records
from genusrna.sampling import RandomSource


@st.composite
def diagrams(draw, max_length=10**4):
    length = draw(st.integers(0, max_length))
    seed = draw(st.integers(0, 2**32 - 1))
    gen = RandomSource(seed).generator
    k = int(gen.integers(0, length // 2 + 1))
    pts = gen.permutation(length)[:2 * k].reshape(-1, 2) + 1
    return Diagram(length, [tuple(sorted(map(int, a))) for a in pts])


@settings(max_examples=60, deadline=None)
@given(diagrams())
def test_text_roundtrip(d):
    assert Diagram.from_text(d.to_text()) == d
    rec = DiagramRecord.from_diagram(d, genus=3)
    assert DiagramRecord.from_text(rec.to_text()) == rec
    assert DiagramRecord.from_json(rec.to_json()) == rec


def test_text_format():
    d = Diagram(6, [(2, 5), (1, 3)])
    assert d.to_text() == "6 | (1,3)(2,5)"
    assert Diagram(5).to_text() == "5 |"
    rec = DiagramRecord(6, ((1, 3), (2, 5)), genus=1, boundary=4)
    assert rec.to_text() == "6 | (1,3)(2,5) | g=1 r=4"


def test_json_fields():
    rec = DiagramRecord(4, ((1, 3), (2, 4)), genus=1, seed=7, index=2)
    assert rec.to_json() == '{"length":4,"arcs":[[1,3],[2,4]],"genus":1,"seed":7,"index":2}'


@pytest.mark.parametrize("text", ["6 (1,3)", "x | (1,2)", "4 | (1,3)(3,4)", "4 | (1,5)",
                                  "4 | (1,2) junk", "4 | (1,2) | q=1"])
def test_bad_text(text):
    with pytest.raises((DiagramError, RecordError)):
        DiagramRecord.from_text(text)


def test_read_records_reports_line_numbers():
    lines = ["# header", "4 | (1,3)(2,4)", "", '{"length":2,"arcs":[[1,2]]}', "3 | (1,5)"]
    it = read_records(lines)
    assert next(it).arcs == ((1, 3), (2, 4))
    assert next(it).arcs == ((1, 2),)
    with pytest.raises(RecordError) as exc:
        next(it)
    assert exc.value.lineno == 5
