import copy
from fractions import Fraction as Q

import pytest

from boxpers.covercomplex import format_rational, parse_document, parse_rational, theta_compare, validate
from boxpers.errors import EmptyComplex, NotACocycle, OutOfSafeRange, SchemaError, WindowTooSmall
from boxpers.fieldlin import FieldSpec
from boxpers.fixtures import FIXTURES, fix_c, fix_w


def _model(doc):
    return validate(doc.spec, doc.form, doc.field)


@pytest.mark.parametrize("text,value", [("1/3", Q(1, 3)), ("-2/4", Q(-1, 2)), (7, Q(7)), ("5", Q(5))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", [0.5, True, "x", None])
def test_parse_rational_rejects_inexact(bad):
    with pytest.raises(SchemaError):
        parse_rational(bad)


def test_format_round_trip():
    for q in (Q(0), Q(-1, 4), Q(7, 3)):
        assert parse_rational(format_rational(q)) == q


def test_document_round_trip():
    for name, mk in FIXTURES.items():
        doc = mk()
        again = parse_document(doc.to_json())
        assert again.to_json() == doc.to_json(), name


def test_float_form_value_rejected():
    raw = fix_w().to_json()
    raw["form"][0]["value"] = 0.25
    with pytest.raises(SchemaError):
        parse_document(raw)


def test_empty_complex_rejected():
    with pytest.raises(EmptyComplex):
        parse_document({"field": "Fp", "p": 2, "complex": {"vertices": [], "simplices": {}}, "form": []})


def test_missing_face_rejected():
    raw = {"complex": {"vertices": ["a", "b", "c"], "simplices": {"2": [["a", "b", "c"]]}}, "form": []}
    with pytest.raises(SchemaError):
        parse_document(raw)


def test_non_cocycle_rejected():
    raw = {
        "complex": {
            "vertices": ["a", "b", "c"],
            "simplices": {"1": [["a", "b"], ["b", "c"], ["a", "c"]], "2": [["a", "b", "c"]]},
        },
        "form": [
            {"edge": ["a", "b"], "value": "1"},
            {"edge": ["b", "c"], "value": "1"},
            {"edge": ["a", "c"], "value": "1"},
        ],
    }
    doc = parse_document(raw)
    with pytest.raises(NotACocycle):
        _model(doc)


def test_field_override():
    raw = fix_w().to_json()
    assert parse_document(raw, FieldSpec.rationals()).field == FieldSpec.rationals()


def test_periods_and_critical_values():
    mw = _model(fix_w())
    assert mw.period == 1
    assert mw.critical.values == [Q(0), Q(1, 4), Q(1, 3), Q(2, 3)]
    mc = _model(fix_c())
    assert mc.period == 1
    assert _model(FIXTURES["FIX-G"]()).trivial


def test_window_needs_a_core():
    m = _model(fix_w())
    with pytest.raises(WindowTooSmall):
        m.window_for(2 * m.margin)
    with pytest.raises(WindowTooSmall):
        m.window(1, 0)


def test_safe_range_enforced():
    m = _model(fix_w())
    w = m.window_for(m.min_sheets + 2)
    assert w.is_safe(Q(1, 4))
    with pytest.raises(OutOfSafeRange):
        w.require_safe(w.safe_hi)
    with pytest.raises(OutOfSafeRange):
        w.require_safe(w.safe_lo - 1)


def test_deck_translation_preserves_heights():
    m = _model(fix_w())
    w = m.window_for(5)
    for i in range(w.cx.count(0)):
        base, sheet = w.vertex(i)
        assert w.heights[i] == m.heights[base] + sheet * m.period


def test_side_loop_pair_homology_and_theta():
    m = _model(fix_w())
    w = m.window_for(m.min_sheets + 2)
    assert w.pair_homology(1, Q(1, 4)).dim >= 1
    assert theta_compare(w, 1, Q(1, 4))["ok"]


def test_line_cover_has_no_relative_classes():
    m = _model(fix_c())
    w = m.window_for(m.min_sheets + 2)
    assert w.ambient(1, "standard").dim == 0
    assert w.ambient(0, "bm").dim == 0
