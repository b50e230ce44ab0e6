import json

import numpy as np
import pytest

from riskforge import (
    DslError,
    DslSemanticError,
    DslSyntaxError,
    Interval,
    Period,
    from_json,
    parse,
    serialize,
    to_json,
)
from riskforge.dsl import canonical

from genmodels import random_model

HEADER = 'riskmodel "m" timeunit 10y\n'


def test_parse_initiate_line():
    text = HEADER + (
        "threat NF\nscenario NCD\nincident R consequence 1\n"
        "initiate NF -> NCD frequency 30:10y\nleadsto NCD -> R likelihood 1\n"
    )
    m = parse(text)
    rel = m.initiates[0]
    assert (rel.source, rel.target) == ("NF", "NCD")
    assert rel.frequency.occurrences == Interval.point(30.0)
    assert rel.frequency.per == Period(10, "y")


def test_parse_treats_effect_suffixes():
    text = HEADER + (
        "threat T\nscenario NCD\nincident R consequence 1\n"
        "initiate T -> NCD frequency 1:1y\nleadsto NCD -> R likelihood 1\n"
        "countermeasure IRN cost 10:1y\n"
        "treats IRN -> NCD effect 0.7L 0.0C\n"
    )
    t = parse(text).treats[0]
    assert t.freq_effect == Interval.point(0.7)
    assert t.cons_effect == Interval.point(0.0)


def test_parse_negative_likelihood_rejected_with_span():
    text = HEADER + (
        "threat T\nscenario NCD\nscenario TDI\nincident R consequence 1\n"
        "initiate T -> NCD frequency 1:1y\n"
        "leadsto NCD -> TDI likelihood -0.5\n"
        "leadsto TDI -> R likelihood 1\n"
    )
    with pytest.raises(DslSemanticError) as exc:
        parse(text)
    assert "likelihood must be >= 0" in str(exc.value)
    assert exc.value.span.line == 7


def test_parse_duplicate_id():
    text = HEADER + "threat A\nscenario A\n"
    with pytest.raises(DslSemanticError, match="duplicate id 'A'"):
        parse(text)


def test_parse_syntax_error_has_span():
    with pytest.raises(DslSyntaxError) as exc:
        parse(HEADER + "threat !!!\n")
    assert exc.value.span is not None
    assert exc.value.span.line == 2


def test_parse_interval_frequency_rendering(ehealth):
    text = HEADER + (
        "threat T\nincident R consequence 1\n"
        "initiate T -> R frequency [20,40]:10y\n"
    )
    m = parse(text)
    assert m.initiates[0].frequency.occurrences == Interval(20.0, 40.0)
    assert "frequency [20,40]:10y" in serialize(m)


def test_serialize_empty_model():
    m = parse('riskmodel "x" timeunit 1y\n')
    assert serialize(m) == 'riskmodel "x" timeunit 1y\n'


def test_roundtrip_ehealth(ehealth, ehealth_text):
    assert parse(serialize(ehealth)) == ehealth
    assert parse(ehealth_text) == ehealth


def test_roundtrip_random_models():
    rng = np.random.default_rng(7)
    for _ in range(50):
        m = random_model(rng, interval=bool(rng.random() < 0.5))
        assert parse(serialize(m)) == canonical(m)


def test_json_roundtrip_ehealth(ehealth):
    assert from_json(to_json(ehealth)) == ehealth


def test_json_schema_gate(ehealth):
    doc = json.loads(to_json(ehealth))
    doc["schema"] = 99
    with pytest.raises(DslSemanticError, match="schema version"):
        from_json(json.dumps(doc))


def test_json_dangling_depends(ehealth):
    doc = json.loads(to_json(ehealth))
    doc["depends"][0]["treats"]["target"] = "HGD"
    with pytest.raises(DslSemanticError, match="missing treats relation"):
        from_json(json.dumps(doc))


def test_coras_mode_rejects_high_likelihood():
    text = HEADER + (
        "threat T\nscenario A\nincident R consequence 1\n"
        "initiate T -> A frequency 1:1y\n"
        "leadsto A -> R likelihood 1.5\n"
    )
    parse(text)  # fine by default
    with pytest.raises(DslError):
        parse(text, coras=True)


def test_via_clause_is_kept(ehealth):
    nf = next(r for r in ehealth.initiates if r.source == "NF")
    assert nf.via == "unstable/unreliable network connection"
    assert 'via "unstable/unreliable network connection"' in serialize(ehealth)
