"""Per-risk countermeasure analysis: state enumeration and decision diagrams."""

from __future__ import annotations

import io
from dataclasses import dataclass

from .calculus import Alternative, propagate
from .intervals import Interval
from .model import RiskModel, VertexKind


class AnalysisError(Exception):
    pass


DEFAULT_SUBSET_CAP = 20


@dataclass(frozen=True)
class RiskState:
    """A risk's residual value under one countermeasure alternative."""

    risk: str
    alternative: Alternative
    frequency: Interval  # per base period
    consequence: Interval

    @property
    def name(self) -> str:
        # Assigned by enumeration order; S0 is the untreated state.
        return f"S{self.index}"

    index: int = 0


@dataclass(frozen=True)
class DecisionDiagram:
    states: tuple[RiskState, ...]
    edges: tuple[tuple[int, int, str], ...]  # (from index, to index, added countermeasure)
    initial: RiskState
    pruned: tuple[RiskState, ...] = ()


def applicable_countermeasures(model: RiskModel, risk: str) -> set[str]:
    """Countermeasures treating the risk vertex or any of its ancestors."""
    v = model.vertex(risk)
    if v.kind is not VertexKind.UNWANTED_INCIDENT:
        raise AnalysisError(f"{risk!r} is not an unwanted incident")
    incoming: dict[str, set[str]] = {}
    for a, b in model.edges():
        incoming.setdefault(b, set()).add(a)
    relevant = {risk}
    frontier = [risk]
    while frontier:
        for src in incoming.get(frontier.pop(), ()):
            if src not in relevant:
                relevant.add(src)
                frontier.append(src)
    return {t.countermeasure for t in model.treats if t.target in relevant}


def enumerate_states(
    model: RiskModel, risk: str, cap: int = DEFAULT_SUBSET_CAP
) -> list[RiskState]:
    """All 2^n risk states for the risk's applicable countermeasures.

    Subsets are visited in binary-counter order over the sorted countermeasure
    ids, so the output order is deterministic.
    """
    cms = sorted(applicable_countermeasures(model, risk))
    if len(cms) > cap:
        raise AnalysisError(
            f"{len(cms)} applicable countermeasures exceed the cap of {cap}; "
            f"filter the model down per risk before enumerating"
        )
    states = []
    for mask in range(2 ** len(cms)):
        subset = frozenset(cms[i] for i in range(len(cms)) if mask >> i & 1)
        res = propagate(model, subset)[risk]
        states.append(RiskState(risk, subset, res.frequency, res.consequence, index=mask))
    return states


def build_decision_diagram(states: list[RiskState]) -> DecisionDiagram:
    """Connect states differing by one added countermeasure; drop states worse
    than the untreated state on both axes (interval midpoints)."""
    if not states:
        raise AnalysisError("no states to build a diagram from")
    initial = next(s for s in states if not s.alternative)
    kept, pruned = [], []
    for s in states:
        if (
            s is not initial
            and s.frequency.midpoint > initial.frequency.midpoint
            and s.consequence.midpoint > initial.consequence.midpoint
        ):
            pruned.append(s)
        else:
            kept.append(s)
    edges = []
    for s in kept:
        for t in kept:
            added = t.alternative - s.alternative
            if len(added) == 1 and s.alternative <= t.alternative:
                edges.append((s.index, t.index, next(iter(added))))
    return DecisionDiagram(tuple(kept), tuple(edges), initial, tuple(pruned))


def export_dot(diagram: DecisionDiagram) -> str:
    """DOT text; node positions put frequency on X and consequence on Y."""
    out = io.StringIO()
    out.write("digraph decision {\n")
    out.write("  node [shape=circle];\n")
    for s in diagram.states:
        f, co = s.frequency.midpoint, s.consequence.midpoint
        out.write(
            f'  {s.name} [label="{s.name}\\n({s.frequency}, {s.consequence})" '
            f'pos="{f:g},{co:g}!"];\n'
        )
    for a, b, cm in diagram.edges:
        out.write(f'  S{a} -> S{b} [label="{cm}"];\n')
    out.write("}\n")
    return out.getvalue()


def export_csv(states: list[RiskState]) -> str:
    """CSV of states: state,alternative,frequency,consequence."""
    lines = ["state,alternative,frequency,consequence"]
    for s in states:
        alt = "+".join(sorted(s.alternative))
        lines.append(f"S{s.index},{alt},{s.frequency},{s.consequence}")
    return "\n".join(lines) + "\n"
