"""Global countermeasure-alternative search: filter by acceptance criteria,
rank by overall cost, recommend."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

from .analysis import RiskState
from .calculus import Alternative, propagate
from .model import RiskModel


class SynergyError(Exception):
    pass


DEFAULT_SUBSET_CAP = 20


@dataclass(frozen=True)
class GlobalAlternative:
    countermeasures: Alternative
    per_risk_states: dict  # risk id -> RiskState
    overall_cost: float  # per base period

    def __post_init__(self):
        object.__setattr__(self, "per_risk_states", dict(self.per_risk_states))


@dataclass(frozen=True)
class RiskGap:
    """Best achievable residual for one risk versus its acceptance bounds."""

    risk: str
    best_frequency: float
    best_risk_cost: float
    max_frequency: Optional[float]
    max_risk_cost: Optional[float]


@dataclass(frozen=True)
class Recommendation:
    outcome: str  # "recommended", "no_feasible" or "over_budget"
    best: Optional[GlobalAlternative] = None
    budget: Optional[float] = None
    report: tuple[RiskGap, ...] = ()


def risk_cost(state: RiskState, pessimistic: bool = False) -> float:
    """Expected loss per base period: consequence times frequency.

    Midpoints by default; with pessimistic=True the interval upper endpoints.
    """
    if pessimistic:
        return state.frequency.hi * state.consequence.hi
    return state.frequency.midpoint * state.consequence.midpoint


def _states_under(model: RiskModel, ca: Alternative) -> dict[str, RiskState]:
    results = propagate(model, ca)
    return {
        v.id: RiskState(v.id, ca, results[v.id].frequency, results[v.id].consequence)
        for v in model.incidents
    }


def overall_cost(model: RiskModel, ca: Alternative, pessimistic: bool = False) -> float:
    """Residual risk cost over all risks plus countermeasure expenditures,
    everything per the model's base period."""
    states = _states_under(model, ca)
    total = sum(risk_cost(s, pessimistic) for s in states.values())
    total += sum(
        model.countermeasure(cid).expenditure_per(model.base_period) for cid in ca
    )
    return total


def acceptable(
    model: RiskModel, ca: Alternative, pessimistic: bool = False
) -> dict[str, bool]:
    """Per-risk verdict against the model's acceptance criteria.

    Risks without criteria are vacuously acceptable (warned once per call).
    """
    return _verdicts(model, _states_under(model, ca), pessimistic, warn=True)


def _verdicts(
    model: RiskModel,
    states: dict[str, RiskState],
    pessimistic: bool,
    warn: bool,
) -> dict[str, bool]:
    by_risk = {a.risk: a for a in model.criteria}
    verdicts: dict[str, bool] = {}
    for risk, state in states.items():
        crit = by_risk.get(risk)
        if crit is None:
            if warn:
                warnings.warn(
                    f"risk {risk!r} has no acceptance criterion; treated as acceptable"
                )
            verdicts[risk] = True
            continue
        ok = True
        if crit.max_frequency is not None:
            bound = crit.max_frequency.per_period(model.base_period).midpoint
            freq = state.frequency.hi if pessimistic else state.frequency.midpoint
            ok = ok and freq <= bound
        if crit.max_risk_cost is not None:
            bound = (
                crit.max_risk_cost
                * model.base_period.days
                / crit.max_risk_cost_per.days
            )
            ok = ok and risk_cost(state, pessimistic) <= bound
        verdicts[risk] = ok
    return verdicts


def _all_subsets(model: RiskModel, cap: int) -> list[Alternative]:
    cms = sorted(c.id for c in model.countermeasures)
    if len(cms) > cap:
        raise SynergyError(
            f"{len(cms)} countermeasures exceed the enumeration cap of {cap}"
        )
    return [
        frozenset(cms[i] for i in range(len(cms)) if mask >> i & 1)
        for mask in range(2 ** len(cms))
    ]


def find_alternatives(
    model: RiskModel, cap: int = DEFAULT_SUBSET_CAP, pessimistic: bool = False
) -> list[GlobalAlternative]:
    """Exhaustively rank the acceptable global alternatives by overall cost.

    Ties break on smaller set size, then lexicographic countermeasure ids.
    """
    ranked = []
    for ca in _all_subsets(model, cap):
        states = _states_under(model, ca)
        if not all(_verdicts(model, states, pessimistic, warn=False).values()):
            continue
        cost = sum(risk_cost(s, pessimistic) for s in states.values()) + sum(
            model.countermeasure(cid).expenditure_per(model.base_period) for cid in ca
        )
        ranked.append(GlobalAlternative(ca, states, cost))
    ranked.sort(
        key=lambda g: (g.overall_cost, len(g.countermeasures), tuple(sorted(g.countermeasures)))
    )
    return ranked


def _gap_report(model: RiskModel, cap: int, pessimistic: bool) -> tuple[RiskGap, ...]:
    by_risk = {a.risk: a for a in model.criteria}
    best_freq: dict[str, float] = {}
    best_cost: dict[str, float] = {}
    for ca in _all_subsets(model, cap):
        for risk, state in _states_under(model, ca).items():
            freq = state.frequency.hi if pessimistic else state.frequency.midpoint
            best_freq[risk] = min(best_freq.get(risk, float("inf")), freq)
            best_cost[risk] = min(
                best_cost.get(risk, float("inf")), risk_cost(state, pessimistic)
            )
    gaps = []
    for risk in sorted(best_freq):
        crit = by_risk.get(risk)
        max_f = None
        if crit is not None and crit.max_frequency is not None:
            max_f = crit.max_frequency.per_period(model.base_period).midpoint
        max_c = None
        if crit is not None and crit.max_risk_cost is not None:
            max_c = crit.max_risk_cost * model.base_period.days / crit.max_risk_cost_per.days
        gaps.append(RiskGap(risk, best_freq[risk], best_cost[risk], max_f, max_c))
    return tuple(gaps)


def recommend(
    model: RiskModel,
    budget: Optional[float] = None,
    cap: int = DEFAULT_SUBSET_CAP,
    pessimistic: bool = False,
) -> Recommendation:
    """Pick the cheapest acceptable global alternative, or explain why none fits."""
    ranked = find_alternatives(model, cap, pessimistic)
    if not ranked:
        return Recommendation("no_feasible", report=_gap_report(model, cap, pessimistic))
    best = ranked[0]
    if budget is not None and best.overall_cost > budget:
        return Recommendation("over_budget", best=best, budget=budget)
    return Recommendation("recommended", best=best)


def export_ranking_csv(ranked: list[GlobalAlternative]) -> str:
    """CSV ranking: rank,alternative,overall_cost,acceptable."""
    lines = ["rank,alternative,overall_cost,acceptable"]
    for i, g in enumerate(ranked, start=1):
        alt = "+".join(sorted(g.countermeasures))
        lines.append(f"{i},{alt},{g.overall_cost:g},true")
    return "\n".join(lines) + "\n"
