import json
import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mhrev.chainfile import (
    chain_from_dict,
    chain_to_dict,
    format_number,
    parse_number,
    parse_vector,
    read_chain,
    read_vector_arg,
    write_chain,
)
from mhrev.core import validate_generator
from mhrev.errors import NegativeOffDiagonal, ParseError, RowSumViolation, ZeroTargetMass

from conftest import instances


def test_parse_number_forms():
    assert parse_number(2) == 2.0
    assert parse_number("0.25") == 0.25
    assert parse_number(" 1/3 ") == 1 / 3
    assert parse_number("1e-3") == 1e-3
    for bad in ("abc", "1/0", True, None, [1]):
        with pytest.raises(ParseError):
            parse_number(bad)


def test_parse_vector_inline():
    np.testing.assert_array_equal(parse_vector("1, -1"), [1.0, -1.0])
    np.testing.assert_array_equal(parse_vector(["1/2", 0.5]), [0.5, 0.5])


@settings(max_examples=200)
@given(st.floats(allow_nan=False, allow_infinity=False))
def test_format_round_trips(x):
    assert parse_number(format_number(x)) == x


def test_read_with_states_and_target(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"states": ["a", "b"], "rates": [["-2", "2"], ["1", "-1"]], "target": ["1/2", "1/2"]}))
    chain = read_chain(path)
    assert list(chain.states) == ["a", "b"]
    np.testing.assert_array_equal(chain.generator.rates, [[-2, 2], [1, -1]])
    np.testing.assert_array_equal(chain.target, [0.5, 0.5])


def test_target_renormalised_with_warning(caplog):
    with caplog.at_level(logging.WARNING):
        chain = chain_from_dict({"rates": [[-1, 1], [1, -1]], "target": [0.5, 0.5000001]})
    assert "renormalising" in caplog.text
    assert chain.target.sum() == pytest.approx(1.0, abs=1e-15)


def test_target_errors():
    with pytest.raises(ParseError):
        chain_from_dict({"rates": [[-1, 1], [1, -1]], "target": [0.5, 0.6]})
    with pytest.raises(ZeroTargetMass):
        chain_from_dict({"rates": [[-1, 1], [1, -1]], "target": [1.0, 0.0]})
    with pytest.raises(ParseError):
        chain_from_dict({"rates": [[-1, 1], [1, -1]], "target": [1.0]})


def test_rate_errors():
    with pytest.raises(RowSumViolation, match="row 1"):
        chain_from_dict({"rates": [[-1, 1], [1, -2]]})
    with pytest.raises(NegativeOffDiagonal):
        chain_from_dict({"rates": [[1, -1], [1, -1]]})
    with pytest.raises(ParseError):
        chain_from_dict({"rates": [[-1, 1], [1]]})
    with pytest.raises(ParseError):
        chain_from_dict({"rates": []})
    with pytest.raises(ParseError):
        chain_from_dict([1, 2])


def test_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ParseError):
        read_chain(path)
    with pytest.raises(ParseError):
        read_chain(tmp_path / "missing.json")


@settings(max_examples=40, deadline=None)
@given(instances())
def test_write_read_round_trip(tmp_path_factory, inst):
    q, mu = inst
    path = tmp_path_factory.mktemp("rt") / "chain.json"
    write_chain(path, q, mu, note="x")
    back = read_chain(path)
    np.testing.assert_array_equal(back.generator.rates, q.rates)
    np.testing.assert_array_equal(back.target, mu)
    assert json.loads(path.read_text())["note"] == "x"


def test_labels_written():
    g = validate_generator([[-1, 1], [1, -1]], ["x", "y"])
    assert chain_to_dict(g)["states"] == ["x", "y"]


def test_vector_arg_sources(tmp_path):
    np.testing.assert_array_equal(read_vector_arg("0.2,0.8"), [0.2, 0.8])
    (tmp_path / "v.json").write_text("[0.1, 0.9]")
    np.testing.assert_array_equal(read_vector_arg(str(tmp_path / "v.json")), [0.1, 0.9])
    (tmp_path / "d.json").write_text('{"proposal": ["1/4", "3/4"]}')
    np.testing.assert_array_equal(read_vector_arg(str(tmp_path / "d.json")), [0.25, 0.75])
    (tmp_path / "e.json").write_text('{"other": 1}')
    with pytest.raises(ParseError):
        read_vector_arg(str(tmp_path / "e.json"))
