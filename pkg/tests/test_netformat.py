import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from petrilive.errors import ParseError
from petrilive.netformat import (NetDocument, parse_marking_literal, parse_net,
                                 serialize_net)
from petrilive.samples import running_example, random_net

from conftest import FIXTURES


def test_fixture_file():
    doc = parse_net((FIXTURES / "running.net").read_bytes())
    assert doc.net == running_example()
    assert doc.initial_marking == (3, 1, 0)
    assert len(list(doc.net.arcs())) == 8


def test_default_weight():
    doc = parse_net(b"net n\nplaces p\ntransitions t\narc p t\n")
    assert doc.net.weight("p", "t") == 1
    assert doc.net.weight("t", "p") == 0


@pytest.mark.parametrize("text,kind", [
    ("net n\nplaces p1 p2\narc p1 p2 1\n", "kind-mismatch"),
    ("net n\nplaces p\ntransitions t\narc p q\n", "unknown"),
    ("net n\nplaces p p\n", "duplicate"),
    ("net n\nplaces p\ntransitions t\narc p t -2\n", "negative"),
    ("net n\nplaces p\nfrobnicate\n", "directive"),
    ("net n\nplaces p\nmarking p=x\n", "number"),
])
def test_parse_errors(text, kind):
    with pytest.raises(ParseError) as err:
        parse_net(text.encode())
    assert err.value.kind == kind
    assert err.value.line is not None


def test_kind_mismatch_message():
    with pytest.raises(ParseError, match="arc endpoints must alternate place/transition"):
        parse_net(b"net n\nplaces p1 p2\narc p1 p2 1\n")


def test_crlf_and_comments():
    doc = parse_net(b"net n # name\r\nplaces p\r\ntransitions t\r\narc t p 3\r\n")
    assert doc.net.weight("t", "p") == 3


def test_invalid_utf8_is_positioned():
    with pytest.raises(ParseError):
        parse_net(b"net n\nplaces \xff\n")


def test_round_trip_fixture():
    doc = parse_net((FIXTURES / "running.net").read_bytes())
    assert parse_net(serialize_net(doc)) == doc


def test_empty_net_is_two_lines():
    from petrilive.net import Net
    text = serialize_net(NetDocument(Net.build("e", [], [], {})))
    assert text.decode().splitlines() == ["net e", "places"]
    assert parse_net(text).net.dim == 0


def test_round_trip_random_nets():
    r = random.Random(5)
    for i in range(100):
        n = random_net(r, name=f"n{i}")
        m = tuple(r.randint(0, 4) for _ in n.places) if i % 2 else None
        doc = NetDocument(n, m, {"origin": "random"} if i % 3 == 0 else {})
        assert parse_net(serialize_net(doc)) == doc


def test_marking_literal():
    assert parse_marking_literal(running_example(), "p1=3,p2=1") == (3, 1, 0)
    assert parse_marking_literal(running_example(), "") == (0, 0, 0)


@settings(max_examples=300, deadline=None)
@given(st.binary(max_size=200))
def test_parser_total_on_bytes(data):
    try:
        parse_net(data)
    except ParseError:
        pass


@settings(max_examples=300, deadline=None)
@given(st.lists(st.sampled_from(["net a", "places p q", "transitions t", "arc p t 2",
                                 "arc t q", "marking p=2", "arc q p", "meta k v", "# c",
                                 "places", "arc p t -1", "transitions p"]), max_size=8))
def test_parser_total_on_directive_soup(lines):
    try:
        parse_net("\n".join(lines).encode())
    except ParseError:
        pass
