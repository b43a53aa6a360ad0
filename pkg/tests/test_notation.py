import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from knotband.diagram import component_count, mirror, unknot, writhe
from knotband.notation import (
    HOPF_NEGATIVE,
    HOPF_POSITIVE,
    Family,
    Mirror,
    Name,
    ParseError,
    Sum,
    TableError,
    default_table_path,
    km_diagram,
    load_knot_table,
    parse_expr,
    parse_knot_expr,
    parse_pd,
    record_to_json,
    render_expr,
    summands,
)

atoms = st.one_of(
    st.sampled_from(["3_1", "4_1", "10_132", "U", "hopf", "hopf-"]),
    st.integers(-30, 30).map(lambda m: f"K[{m}]"),
)
terms = st.tuples(atoms, st.booleans()).map(lambda t: t[0] + ("!" if t[1] else ""))
exprs = st.lists(terms, min_size=1, max_size=4).map("#".join)


@given(exprs)
def test_render_parse_roundtrip(text):
    e = parse_expr(text)
    assert render_expr(e) == text
    assert parse_expr(render_expr(e)) == e


def test_parse_structure():
    assert parse_expr("3_1") == Name("3_1")
    assert parse_expr("K[-12]") == Family(-12)
    assert parse_expr(" 3_1 ! # K[ 4 ] ") == Sum((Mirror(Name("3_1")), Family(4)))
    assert render_expr(parse_expr("PD[X(1,1,2,2)]")) == "PD[X(1,1,2,2)]"


def test_mirror_of_sum_distributes():
    e = Mirror(Sum((Name("3_1"), Mirror(Name("6_1")))))
    assert summands(e) == [Mirror(Name("3_1")), Name("6_1")]


@pytest.mark.parametrize(
    "text, position",
    [
        ("", 0),
        ("3_1#", 4),
        ("K[x]", 2),
        ("K[3", 3),
        ("3_1 4_1", 4),
        ("PD[X(1,2,3)]", 10),
        ("PD[X(0,1,1,0)]", 5),
    ],
)
def test_parse_error_positions(text, position):
    with pytest.raises(ParseError) as info:
        parse_expr(text)
    assert info.value.position == position
    assert f"position {position}" in str(info.value)


def test_parse_pd_rejects_invalid_diagram():
    with pytest.raises(ParseError, match="Euler"):
        parse_pd("PD[X(1,4,2,5),X(1,4,2,5)]")
    assert parse_pd("PD[]") == unknot()
    d = parse_pd("PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]")
    assert d.n == 3 and component_count(d) == 1


def test_unknown_names_and_link_summands(table):
    with pytest.raises(ParseError, match="unknown knot name"):
        parse_knot_expr("12_1", table)
    with pytest.raises(ParseError, match="2-component"):
        parse_knot_expr("hopf#3_1", table)


def test_hopf_literals(table):
    assert writhe(parse_knot_expr("hopf", table)) == 2
    assert writhe(parse_knot_expr("hopf-", table)) == -2
    assert component_count(HOPF_POSITIVE) == component_count(HOPF_NEGATIVE) == 2


@pytest.mark.parametrize("m", range(-9, 10))
def test_km_diagram_crossings(m):
    d = km_diagram(m)
    assert d.n == 7 + abs(m)
    assert component_count(d) == 1


def test_mirror_expression(table):
    assert parse_knot_expr("3_1!", table) == mirror(table["3_1"].pd)
    with pytest.raises(ParseError, match="position 4"):
        parse_expr("3_1!!")


def test_connected_sum_crossings(table):
    assert parse_knot_expr("3_1#4_1#5_1!", table).n == 12
    assert parse_knot_expr("U#3_1", table) == table["3_1"].pd


# -- table loading ---------------------------------------------------------------


def test_bundled_table(table):
    assert len(table) >= 90
    assert table["3_1"].u == (1, 1)
    assert table["9_24"].ambiguous
    for name in table.names():
        rec = table[name]
        assert component_count(rec.pd) == rec.components


def test_record_roundtrip(tmp_path, table):
    path = tmp_path / "t.jsonl"
    path.write_text("\n".join(record_to_json(table[n]) for n in table.names()) + "\n")
    again = load_knot_table(path)
    assert again.records == table.records


GOOD = {"name": "3_1", "pd": [[4, 1, 5, 2], [6, 3, 1, 4], [2, 5, 3, 6]], "components": 1, "u": [1, 1]}


@pytest.mark.parametrize(
    "records, message",
    [
        ([dict(GOOD, colour="red")], "unknown field"),
        ([GOOD, GOOD], "line 2: duplicate name"),
        ([{k: v for k, v in GOOD.items() if k != "u"}], "missing field 'u'"),
        ([dict(GOOD, components=2)], "PD code has 1"),
        ([dict(GOOD, u=[2, 1])], "field 'u'"),
        ([dict(GOOD, pd=[[1, 2, 3, 4]])], "field 'pd'"),
        ([dict(GOOD, bu=-1)], "field 'bu'"),
    ],
)
def test_table_errors(tmp_path, records, message):
    path = tmp_path / "bad.jsonl"
    path.write_text("\n".join(json.dumps(r) for r in records))
    with pytest.raises(TableError, match=message):
        load_knot_table(path)


def test_invalid_json_line(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text(json.dumps(GOOD) + "\n{oops\n")
    with pytest.raises(TableError, match="line 2: invalid JSON"):
        load_knot_table(path)


def test_data_env_var(tmp_path, monkeypatch):
    path = tmp_path / "mine.jsonl"
    path.write_text(json.dumps(GOOD) + "\n")
    monkeypatch.setenv("KNOTBAND_DATA", str(path))
    assert default_table_path() == path
    assert load_knot_table(default_table_path()).names() == ["3_1"]
    monkeypatch.delenv("KNOTBAND_DATA")
    assert default_table_path().name == "knots.jsonl"
