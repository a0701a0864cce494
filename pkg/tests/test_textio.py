from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringconv.errors import NonUnitDenominator, ParseError, SemanticError
from ringconv.matrix import PolyMatrix
from ringconv.poly import Poly
from ringconv.ring import RingCtx
from ringconv.textio import InputDocument, format_document, parse_input, parse_poly_expr, parse_rational

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def test_parse_z9_decomposition():
    doc = parse_input((SAMPLES / "z9_decomposed.rc").read_text())
    assert (doc.ctx.p, doc.ctx.r) == (3, 2)
    assert list(doc.matrices) == ["G0", "G1"]
    assert doc.decompositions[0].name == "C"
    assert doc.decompositions[0].components == ["G0", "G1"]
    assert str(doc.matrices["G0"][0, 0]) == "3+3D"


def test_directives_and_rows_block():
    doc = parse_input("ring: Z(3)\nset horizon=64\nrows:\n[1+D, D, 2]\n")
    assert doc.directives == {"horizon": 64}
    assert doc.matrices["G"].shape == (1, 3)


@pytest.mark.parametrize(
    "text, exc, line",
    [
        ("ring: Z(2)\nmatrix G:\n", ParseError, 2),
        ("ring: Z(6^1)\nmatrix G:\n[1]\n", SemanticError, 1),
        ("matrix G:\n[1]\n", ParseError, 1),
        ("ring: Z(2)\nmatrix G:\n[1, D]\n[1]\n", SemanticError, 2),
        ("ring: Z(2)\nmatrix G:\n[1, D +]\n", ParseError, 3),
        ("ring: Z(2)\n[1]\n", ParseError, 2),
        ("ring: Z(2^2)\nmatrix G:\n[1]\ndecompose: C = G + p^2*G\n", SemanticError, 4),
        ("ring: Z(2^2)\nmatrix G:\n[1]\ndecompose: C = G + p*H\n", SemanticError, None),
        ("ring: Z(2)\nmatrix G:\n[1]\nmatrix G:\n[1]\n", SemanticError, 4),
        ("ring: Z(2)\nwhatever\n", ParseError, 2),
    ],
)
def test_parse_errors_carry_location(text, exc, line):
    with pytest.raises(exc) as info:
        parse_input(text)
    assert info.value.line == line


def test_empty_entry_is_parse_error():
    with pytest.raises(ParseError):
        parse_poly_expr("  ", RingCtx(2, 1))


def test_parse_rational():
    ctx = RingCtx(3, 1)
    f = parse_rational("D/(2+D)", ctx)
    assert f.num == Poly.parse("D", ctx) and f.den == Poly.parse("2+D", ctx)
    with pytest.raises((NonUnitDenominator, ParseError)):
        parse_rational("1/(3D)", RingCtx(3, 2))


def test_samples_round_trip():
    for path in sorted(SAMPLES.glob("*.rc")):
        doc = parse_input(path.read_text())
        again = parse_input(format_document(doc))
        assert again.matrices == doc.matrices
        assert again.decompositions == doc.decompositions
        assert again.directives == doc.directives


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([(2, 1), (2, 4), (3, 2), (5, 1)]), st.data())
def test_random_document_round_trip(pr, data):
    ctx = RingCtx(*pr)
    k = data.draw(st.integers(1, 3))
    n = data.draw(st.integers(1, 3))
    coeffs = st.lists(st.integers(0, ctx.modulus - 1), max_size=4)
    rows = [[Poly(tuple(data.draw(coeffs)), ctx) for _ in range(n)] for _ in range(k)]
    doc = InputDocument(ctx, {"G": PolyMatrix(rows, ctx)})
    assert parse_input(format_document(doc)).matrices == doc.matrices
