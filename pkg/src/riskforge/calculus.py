"""Propagation of frequencies and consequences under a countermeasure alternative."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .intervals import Interval
from .model import (
    DependsRel,
    MergePolicy,
    RiskModel,
    TreatsRel,
    Vertex,
    VertexKind,
    validate,
)

Alternative = frozenset


class CalculusError(Exception):
    pass


@dataclass(frozen=True)
class VertexResult:
    frequency: Interval  # occurrences per base period
    consequence: Interval


PropagationResult = Mapping[str, VertexResult]


def effective_effect(
    treats: TreatsRel, selected: Alternative, deps: Iterable[DependsRel]
) -> tuple[Interval, Interval]:
    """Reduction effect of a selected countermeasure after active dependencies.

    Each dependency whose depending countermeasure is also selected scales the
    effect by (1 - d); unselected countermeasures exert no influence.
    """
    freq = treats.freq_effect
    cons = treats.cons_effect
    for d in deps:
        if d.treats_key == treats.key and d.countermeasure in selected:
            freq = freq * d.freq_dep.complement()
            cons = cons * d.cons_dep.complement()
    return freq, cons


def apply_countermeasures(
    freq: Interval, cons: Interval, effects: Iterable[tuple[Interval, Interval]]
) -> tuple[Interval, Interval]:
    """Multiply residuals by the surviving fraction of every effect.

    Effects are applied in a canonical value order so the result is identical
    bit-for-bit no matter how the caller ordered the list.
    """
    ordered = sorted(effects, key=lambda e: (e[0].lo, e[0].hi, e[1].lo, e[1].hi))
    for e_f, e_i in ordered:
        freq = freq * e_f.complement()
        cons = cons * e_i.complement()
    return freq, cons


def propagate_leadsto(freq_source: Interval, likelihood: Interval) -> Interval:
    """Frequency contributed over a leads-to relation: source rate times likelihood."""
    if likelihood.lo < 0:
        raise CalculusError("leads-to likelihood must be >= 0")
    return freq_source * likelihood


def combine_incoming(
    contributions: list[Interval],
    policy: MergePolicy,
    vertex_id: str = "?",
    rel_tol: float = 1e-9,
) -> Interval:
    """Merge the frequency contributions arriving at one vertex.

    Separate vertices sum (disjoint event classes); mutually exclusive vertices
    require all contributions to agree and yield that shared value; overlapping
    vertices yield [max of lows, sum of highs].
    """
    if not contributions:
        raise CalculusError(f"no contributions to combine at {vertex_id!r}")
    if policy is MergePolicy.SEPARATE:
        total = contributions[0]
        for c in contributions[1:]:
            total = total + c
        return total
    if policy is MergePolicy.EXCLUSIVE:
        first = contributions[0]
        for c in contributions[1:]:
            for a, b in ((first.lo, c.lo), (first.hi, c.hi)):
                if abs(a - b) > rel_tol * max(abs(a), abs(b), 1.0):
                    raise CalculusError(
                        f"mutually exclusive vertex {vertex_id!r} has unequal "
                        f"contributions {first} and {c}"
                    )
        return first
    # Overlapping: nothing is known about how the incoming event classes relate.
    return Interval(
        max(c.lo for c in contributions), sum(c.hi for c in contributions)
    )


def _check_valid(model: RiskModel):
    errors = [d for d in validate(model) if d.is_error]
    if errors:
        raise CalculusError(
            "cannot propagate over an invalid model: " + "; ".join(d.message for d in errors)
        )


def _topological_order(model: RiskModel) -> list[Vertex]:
    # Kahn's algorithm with ties broken by vertex id for a stable order.
    core = {v.id: v for v in model.core_vertices}
    indeg = {vid: 0 for vid in core}
    out: dict[str, list[str]] = {vid: [] for vid in core}
    for r in model.leadsto:
        out[r.source].append(r.target)
        indeg[r.target] += 1
    ready = sorted(vid for vid, n in indeg.items() if n == 0)
    order: list[Vertex] = []
    while ready:
        vid = ready.pop(0)
        order.append(core[vid])
        changed = False
        for w in out[vid]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
                changed = True
        if changed:
            ready.sort()
    return order


def propagate(model: RiskModel, alternative: Alternative) -> dict[str, VertexResult]:
    """Residual (frequency, consequence) for every core vertex.

    Walks the DAG in topological order: incoming contributions are gathered
    from initiate frequencies and leads-to relations, merged per the vertex's
    policy, then reduced by every selected countermeasure treating the vertex.
    """
    _check_valid(model)
    unknown = alternative - {c.id for c in model.countermeasures}
    if unknown:
        raise CalculusError(f"unknown countermeasures in alternative: {sorted(unknown)}")

    results: dict[str, VertexResult] = {}
    for v in _topological_order(model):
        contributions: list[Interval] = []
        for r in sorted(
            (r for r in model.initiates if r.target == v.id), key=lambda r: r.source
        ):
            contributions.append(r.frequency.per_period(model.base_period))
        for r in sorted(
            (r for r in model.leadsto if r.target == v.id), key=lambda r: r.source
        ):
            contributions.append(
                propagate_leadsto(results[r.source].frequency, r.likelihood)
            )
        if contributions:
            freq = combine_incoming(contributions, v.merge_policy, v.id)
        else:
            freq = Interval.point(0.0)
        cons = v.consequence if v.consequence is not None else Interval.point(0.0)

        effects = [
            effective_effect(t, alternative, model.depends)
            for t in sorted(model.treats, key=lambda t: t.countermeasure)
            if t.target == v.id and t.countermeasure in alternative
        ]
        freq, cons = apply_countermeasures(freq, cons, effects)
        results[v.id] = VertexResult(freq, cons)
    return results
