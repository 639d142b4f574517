from __future__ import annotations

from fractions import Fraction as F

import pytest

from conftest import SPECS
from pcm.dsl import ParseError, format_spec, format_vec, load_spec, parse_spec, tokenize
from pcm.exact import Scalar
from pcm.linalg import Matrix
from pcm.oracle import SearchConfig, random_search

BASE = '''manifold "t" {
  dim 3
  params [alpha]
  metric diag(1, -1, 1)
  bracket [1,2] = -2 * e3
  phi e1 = e2
  phi e2 = e1
  xi = e3
  eta = dual(e3)
}
'''


def test_reference_source_normalizes():
    spec = load_spec(str(SPECS / "ss_example.pcm"))
    a, b = Scalar.var("alpha", spec.params), Scalar.var("beta", spec.params)
    assert spec.name == "ss-example" and spec.dim == 3 and spec.params == ("alpha", "beta")
    assert spec.metric == Matrix.diag([1, -1, 1])
    assert spec.c(0, 1, 2) == a and spec.c(1, 0, 2) == -a
    assert spec.c(0, 2, 1) == b and spec.c(1, 2, 0) == b
    assert spec.phi == Matrix([[0, 1, 0], [1, 0, 0], [0, 0, 0]])
    assert tuple(spec.xi) == (0, 0, 1) and tuple(spec.eta) == (0, 0, 1)


def test_unlisted_phi_columns_are_zero():
    spec = parse_spec(BASE)
    assert [str(x) for x in spec.phi.col(2)] == ["0", "0", "0"]


@pytest.mark.parametrize("path", sorted(SPECS.glob("*.pcm")), ids=lambda p: p.name)
def test_round_trip_fixtures(path):
    spec = load_spec(str(path))
    text = format_spec(spec)
    again = parse_spec(text)
    assert format_spec(again) == text
    assert again.metric == spec.metric and again.phi == spec.phi and again.bracket == spec.bracket


def test_round_trip_search_outputs():
    for h in random_search(SearchConfig(budget=30, seed=4)):
        text = format_spec(h.spec)
        assert format_spec(parse_spec(text)) == text


def test_rational_and_polynomial_scalars():
    spec = parse_spec(BASE.replace("-2 * e3", "(alpha^2 - 1/2) * e3 + 3/4 * e1"))
    a = Scalar.var("alpha", ("alpha",))
    assert spec.c(0, 1, 2) == a * a - F(1, 2)
    assert spec.c(0, 1, 0) == F(3, 4)


def test_metric_rows_form():
    spec = parse_spec(BASE.replace("diag(1, -1, 1)", "rows(1, 0, 0; 0, -1, 0; 0, 0, 1)"))
    assert spec.metric == Matrix.diag([1, -1, 1])


def test_comments_and_blank_lines():
    text = "# header\n\n" + BASE.replace("  dim 3\n", "  dim 3   # odd\n\n")
    assert parse_spec(text).dim == 3


def test_format_vec():
    assert format_vec([F(0), F(1), F(-2)]) == "e2 - 2 * e3"
    assert format_vec([F(4), F(0), F(0)], dual=True) == "4 * dual(e1)"
    assert format_vec([F(0)] * 3) == "0"


def test_tokenizer_positions():
    toks = tokenize('dim 3\n  xi = e3', "f")
    spans = [(t.text, t.span.line, t.span.column) for t in toks if t.kind not in ("NL", "EOF")]
    assert spans == [("dim", 1, 1), ("3", 1, 5), ("xi", 2, 3), ("=", 2, 6), ("e3", 2, 8)]


ERRORS = [
    ("missing xi", BASE.replace("  xi = e3\n", ""), 9, 1, "missing required item: xi"),
    ("same index", BASE.replace("[1,2]", "[2,2]"), 5, 12, "bracket indices must differ"),
    ("basis range", BASE.replace("-2 * e3", "-2 * e4"), 5, 24, "index out of range"),
    ("unknown param", BASE.replace("-2 * e3", "gamma * e3"), 5, 19, "unknown parameter: gamma"),
    ("duplicate", BASE.replace("  phi e1", "  bracket [1,2] = e3\n  phi e1"), 6, 3, "duplicate bracket [1,2]"),
    ("eta mismatch", BASE.replace("dual(e3)", "2 * dual(e3)"), 9, 9, "eta does not match g(., xi)"),
    ("missing star", BASE.replace("-2 * e3", "-2 e3"), 5, 22, "expected '*'"),
    ("symbolic metric", BASE.replace("diag(1, -1, 1)", "diag(alpha, -1, 1)"), 4, 15, "metric entries must be constant"),
    ("even dim", BASE.replace("dim 3", "dim 4"), 2, 7, "dim must be odd"),
    ("bad char", BASE.replace("-2 * e3", "-2 * e3 $"), 5, 27, "unexpected character"),
]


@pytest.mark.parametrize("name, text, line, col, msg", ERRORS, ids=[e[0] for e in ERRORS])
def test_error_spans(name, text, line, col, msg):
    with pytest.raises(ParseError) as info:
        parse_spec(text, "x.pcm")
    err = info.value
    assert (err.span.file, err.span.line, err.span.column) == ("x.pcm", line, col)
    assert msg in err.message
    assert str(err).startswith(f"x.pcm:{line}:{col}: ")
