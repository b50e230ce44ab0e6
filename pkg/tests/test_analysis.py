import numpy as np
import pytest

from riskforge import (
    applicable_countermeasures,
    build_decision_diagram,
    enumerate_states,
    export_csv,
    export_dot,
)
from riskforge.analysis import AnalysisError

from genmodels import random_model

LMD_TABLE = {
    frozenset(): 26.4,
    frozenset({"IRH"}): 21.36,
    frozenset({"IRN"}): 12.96,
    frozenset({"EQS"}): 12.96,
    frozenset({"IRN", "IRH"}): 7.92,
    frozenset({"EQS", "IRH"}): 7.92,
    frozenset({"IRN", "EQS"}): 10.1376,
    frozenset({"IRN", "EQS", "IRH"}): 5.0976,
}


def test_applicable_countermeasures_lmd(ehealth):
    assert applicable_countermeasures(ehealth, "LMD") == {"IRN", "EQS", "IRH"}


def test_applicable_countermeasures_rejects_non_incident(ehealth):
    with pytest.raises(AnalysisError):
        applicable_countermeasures(ehealth, "NCD")


def test_applicable_excludes_other_branches():
    rng = np.random.default_rng(3)
    # Hand-built: countermeasure on a scenario not upstream of the risk.
    from riskforge import (
        Countermeasure,
        Frequency,
        InitiateRel,
        Interval,
        LeadsToRel,
        Period,
        RiskModel,
        TreatsRel,
        Vertex,
        VertexKind,
    )

    p = Period(1, "y")
    m = RiskModel(
        name="branches",
        base_period=p,
        vertices=(
            Vertex("T", VertexKind.THREAT),
            Vertex("A", VertexKind.THREAT_SCENARIO),
            Vertex("B", VertexKind.THREAT_SCENARIO),
            Vertex("R1", VertexKind.UNWANTED_INCIDENT, consequence=Interval.point(1.0)),
            Vertex("R2", VertexKind.UNWANTED_INCIDENT, consequence=Interval.point(1.0)),
        ),
        initiates=(
            InitiateRel("T", "A", Frequency(Interval.point(1.0), p)),
            InitiateRel("T", "B", Frequency(Interval.point(1.0), p)),
        ),
        leadsto=(
            LeadsToRel("A", "R1", Interval.point(0.5)),
            LeadsToRel("B", "R2", Interval.point(0.5)),
        ),
        countermeasures=(Countermeasure("cB", per=p),),
        treats=(TreatsRel("cB", "B", Interval.point(0.5), Interval.point(0.0)),),
    )
    assert applicable_countermeasures(m, "R1") == set()
    assert applicable_countermeasures(m, "R2") == {"cB"}


def test_enumerate_states_lmd(ehealth):
    states = enumerate_states(ehealth, "LMD")
    assert len(states) == 8
    for s in states:
        assert s.frequency.lo == pytest.approx(LMD_TABLE[s.alternative])
        assert s.consequence.lo == pytest.approx(5000.0)
    # Deterministic binary-counter order over sorted ids EQS, IRH, IRN.
    assert states[0].alternative == frozenset()
    assert states[1].alternative == frozenset({"EQS"})
    assert states[2].alternative == frozenset({"IRH"})
    assert states[3].alternative == frozenset({"EQS", "IRH"})
    assert [s.index for s in states] == list(range(8))


def test_enumerate_states_keeps_equal_residuals_distinct(ehealth):
    states = enumerate_states(ehealth, "LMD")
    near = [s for s in states if s.frequency.lo == pytest.approx(12.96)]
    assert len(near) == 2
    assert near[0].alternative != near[1].alternative


def test_enumerate_states_cap(ehealth):
    with pytest.raises(AnalysisError, match="cap"):
        enumerate_states(ehealth, "LMD", cap=2)


def test_decision_diagram_is_hypercube(ehealth):
    states = enumerate_states(ehealth, "LMD")
    diagram = build_decision_diagram(states)
    assert len(diagram.states) == 8
    assert len(diagram.edges) == 12  # n * 2^(n-1) for n = 3
    assert diagram.pruned == ()
    assert diagram.initial.alternative == frozenset()
    by_index = {s.index: s for s in diagram.states}
    for a, b, cm in diagram.edges:
        assert by_index[b].alternative == by_index[a].alternative | {cm}


def test_decision_diagram_single_state(ehealth):
    states = enumerate_states(ehealth, "LMD")
    diagram = build_decision_diagram(states[:1])
    assert len(diagram.states) == 1
    assert diagram.edges == ()


def test_no_pruning_with_unit_effects():
    rng = np.random.default_rng(23)
    for _ in range(20):
        m = random_model(rng, max_cms=3)
        for risk in (v.id for v in m.incidents):
            if len(applicable_countermeasures(m, risk)) > 3:
                continue
            diagram = build_decision_diagram(enumerate_states(m, risk))
            assert diagram.pruned == ()


def test_export_dot(ehealth):
    dot = export_dot(build_decision_diagram(enumerate_states(ehealth, "LMD")))
    assert dot.startswith("digraph")
    assert 'S0 [label="S0\\n(26.4, 5000)" pos="26.4,5000!"]' in dot


def test_export_csv(ehealth):
    csv = export_csv(enumerate_states(ehealth, "LMD"))
    lines = csv.strip().split("\n")
    assert lines[0] == "state,alternative,frequency,consequence"
    assert lines[1] == "S0,,26.4,5000"
    assert len(lines) == 9
