"""Domain types for annotated risk graphs, validation, and period normalization."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Optional

from .intervals import Interval

# Calendar convention: 30-day months, 360-day years, so 12 months == 1 year.
_UNIT_DAYS = {"d": 1.0, "m": 30.0, "y": 360.0}


class VertexKind(enum.Enum):
    THREAT = "threat"
    THREAT_SCENARIO = "scenario"
    UNWANTED_INCIDENT = "incident"
    ASSET = "asset"


class MergePolicy(enum.Enum):
    SEPARATE = "separate"
    EXCLUSIVE = "exclusive"
    OVERLAPPING = "overlapping"


CORE_KINDS = (VertexKind.THREAT_SCENARIO, VertexKind.UNWANTED_INCIDENT)


@dataclass(frozen=True)
class Period:
    """A span of time, e.g. 10 years; the denominator of every rate."""

    magnitude: int
    unit: str  # "d", "m" or "y"

    def __post_init__(self):
        if self.magnitude <= 0:
            raise ValueError("period magnitude must be positive")
        if self.unit not in _UNIT_DAYS:
            raise ValueError(f"unknown period unit {self.unit!r}")

    @property
    def days(self) -> float:
        return self.magnitude * _UNIT_DAYS[self.unit]

    def __str__(self) -> str:
        return f"{self.magnitude}{self.unit}"


@dataclass(frozen=True)
class Frequency:
    """Occurrence count per period, e.g. 30:10y."""

    occurrences: Interval
    per: Period

    def __post_init__(self):
        if self.occurrences.lo < 0:
            raise ValueError("frequency must be nonnegative")

    def per_period(self, target: Period) -> Interval:
        """Occurrence interval rescaled to the target period."""
        return self.occurrences.scale(target.days / self.per.days)

    def __str__(self) -> str:
        return f"{self.occurrences}:{self.per}"


@dataclass(frozen=True)
class Vertex:
    id: str
    kind: VertexKind
    label: str = ""
    consequence: Optional[Interval] = None  # incidents only, money per occurrence
    merge_policy: MergePolicy = MergePolicy.SEPARATE


@dataclass(frozen=True)
class InitiateRel:
    source: str  # threat
    target: str  # core vertex
    frequency: Frequency
    via: str = ""  # exploited vulnerability, informational only


@dataclass(frozen=True)
class LeadsToRel:
    source: str
    target: str
    likelihood: Interval  # conditional, nonnegative; > 1 allowed outside CORAS mode
    via: str = ""


@dataclass(frozen=True)
class Countermeasure:
    id: str
    label: str = ""
    expenditure: float = 0.0
    per: Period = Period(1, "y")

    def __post_init__(self):
        if self.expenditure < 0:
            raise ValueError("expenditure must be nonnegative")

    def expenditure_per(self, target: Period) -> float:
        return self.expenditure * target.days / self.per.days


@dataclass(frozen=True)
class TreatsRel:
    countermeasure: str
    target: str
    freq_effect: Interval  # within [0,1]
    cons_effect: Interval  # within [0,1]

    @property
    def key(self) -> tuple:
        return (self.countermeasure, self.target)


@dataclass(frozen=True)
class DependsRel:
    countermeasure: str  # the depending countermeasure
    treats_countermeasure: str
    treats_target: str
    freq_dep: Interval  # within [0,1]
    cons_dep: Interval  # within [0,1]

    @property
    def treats_key(self) -> tuple:
        return (self.treats_countermeasure, self.treats_target)


@dataclass(frozen=True)
class ImpactRel:
    source: str  # incident
    target: str  # asset


@dataclass(frozen=True)
class AcceptanceCriterion:
    risk: str  # incident id
    max_frequency: Optional[Frequency] = None
    max_risk_cost: Optional[float] = None  # money per max_risk_cost_per
    max_risk_cost_per: Optional[Period] = None


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" or "warning"
    message: str

    @property
    def is_error(self) -> bool:
        return self.severity == "error"

    def __str__(self) -> str:
        return f"{self.severity}: {self.message}"


@dataclass(frozen=True)
class RiskModel:
    """An annotated risk graph: vertices, relations, countermeasures and criteria."""

    name: str
    base_period: Period
    vertices: tuple[Vertex, ...] = ()
    initiates: tuple[InitiateRel, ...] = ()
    leadsto: tuple[LeadsToRel, ...] = ()
    countermeasures: tuple[Countermeasure, ...] = ()
    treats: tuple[TreatsRel, ...] = ()
    depends: tuple[DependsRel, ...] = ()
    impacts: tuple[ImpactRel, ...] = ()
    criteria: tuple[AcceptanceCriterion, ...] = ()

    def vertex(self, vid: str) -> Vertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise KeyError(f"unknown vertex {vid!r}")

    def countermeasure(self, cid: str) -> Countermeasure:
        for c in self.countermeasures:
            if c.id == cid:
                return c
        raise KeyError(f"unknown countermeasure {cid!r}")

    def has_vertex(self, vid: str) -> bool:
        return any(v.id == vid for v in self.vertices)

    @property
    def core_vertices(self) -> tuple[Vertex, ...]:
        return tuple(v for v in self.vertices if v.kind in CORE_KINDS)

    @property
    def incidents(self) -> tuple[Vertex, ...]:
        return tuple(v for v in self.vertices if v.kind is VertexKind.UNWANTED_INCIDENT)

    def edges(self) -> list[tuple[str, str]]:
        """Directed edges of the propagation graph (initiate and leads-to)."""
        return [(r.source, r.target) for r in self.initiates] + [
            (r.source, r.target) for r in self.leadsto
        ]

    def is_point_valued(self) -> bool:
        """True when every numeric annotation is a point (width-0) interval."""
        intervals = [r.frequency.occurrences for r in self.initiates]
        intervals += [r.likelihood for r in self.leadsto]
        intervals += [t.freq_effect for t in self.treats] + [t.cons_effect for t in self.treats]
        intervals += [d.freq_dep for d in self.depends] + [d.cons_dep for d in self.depends]
        intervals += [v.consequence for v in self.vertices if v.consequence is not None]
        return all(iv.is_point for iv in intervals)


def _find_cycle(vertices: list[str], edges: list[tuple[str, str]]) -> Optional[list[str]]:
    out: dict[str, list[str]] = {v: [] for v in vertices}
    for a, b in edges:
        if a in out and b in out:
            out[a].append(b)
    WHITE, GREY, BLACK = 0, 1, 2
    color = {v: WHITE for v in vertices}
    stack: list[str] = []

    def visit(v: str) -> Optional[list[str]]:
        color[v] = GREY
        stack.append(v)
        for w in out[v]:
            if color[w] == GREY:
                return stack[stack.index(w):]
            if color[w] == WHITE:
                cyc = visit(w)
                if cyc is not None:
                    return cyc
        stack.pop()
        color[v] = BLACK
        return None

    for v in vertices:
        if color[v] == WHITE:
            cyc = visit(v)
            if cyc is not None:
                return cyc
    return None


def validate(model: RiskModel, coras: bool = False) -> list[Diagnostic]:
    """Check all structural invariants; returns diagnostics, never raises.

    With coras=True, leads-to likelihoods above 1 are errors instead of
    warnings (the CORAS reading restricts them to [0,1]).
    """
    diags: list[Diagnostic] = []

    def err(msg: str):
        diags.append(Diagnostic("error", msg))

    def warn(msg: str):
        diags.append(Diagnostic("warning", msg))

    seen: set[str] = set()
    for v in model.vertices:
        if v.id in seen:
            err(f"duplicate vertex id {v.id!r}")
        seen.add(v.id)
        if v.kind is VertexKind.UNWANTED_INCIDENT:
            if v.consequence is None:
                err(f"incident {v.id!r} has no consequence")
            elif v.consequence.lo < 0:
                err(f"incident {v.id!r} has negative consequence")
        elif v.consequence is not None:
            err(f"{v.kind.value} {v.id!r} must not carry a consequence")
    cm_seen: set[str] = set()
    for c in model.countermeasures:
        if c.id in seen or c.id in cm_seen:
            err(f"duplicate id {c.id!r}")
        cm_seen.add(c.id)

    ids = {v.id for v in model.vertices}
    core_ids = {v.id for v in model.core_vertices}

    for r in model.initiates:
        if r.source not in ids or r.target not in ids:
            err(f"initiate {r.source}->{r.target} references an undeclared vertex")
            continue
        if model.vertex(r.source).kind is not VertexKind.THREAT:
            err(f"initiate source {r.source!r} is not a threat")
        if r.target not in core_ids:
            err(f"initiate target {r.target!r} is not a scenario or incident")
        if r.frequency.occurrences.lo < 0:
            err(f"initiate {r.source}->{r.target} has a negative frequency")

    for r in model.leadsto:
        if r.source not in ids or r.target not in ids:
            err(f"leadsto {r.source}->{r.target} references an undeclared vertex")
            continue
        if r.source not in core_ids or r.target not in core_ids:
            err(f"leadsto {r.source}->{r.target} must connect core vertices")
        if r.likelihood.lo < 0:
            err(f"leadsto {r.source}->{r.target} likelihood must be >= 0")
        elif r.likelihood.hi > 1:
            if coras:
                err(f"leadsto {r.source}->{r.target} likelihood exceeds 1 (CORAS mode)")
            else:
                warn(f"leadsto {r.source}->{r.target} likelihood exceeds 1")

    for r in model.impacts:
        if r.source not in ids or r.target not in ids:
            err(f"impact {r.source}->{r.target} references an undeclared vertex")
            continue
        if model.vertex(r.source).kind is not VertexKind.UNWANTED_INCIDENT:
            err(f"impact source {r.source!r} is not an incident")
        if model.vertex(r.target).kind is not VertexKind.ASSET:
            err(f"impact target {r.target!r} is not an asset")

    unit_box = Interval(0.0, 1.0)
    treat_keys: set[tuple] = set()
    for t in model.treats:
        if t.countermeasure not in cm_seen:
            err(f"treats references undeclared countermeasure {t.countermeasure!r}")
        if t.target not in ids:
            err(f"treats references undeclared vertex {t.target!r}")
        elif t.target not in core_ids:
            # The calculus only defines treatment of scenarios and incidents.
            err(f"treats target {t.target!r} is not a scenario or incident")
        for iv, what in ((t.freq_effect, "frequency"), (t.cons_effect, "consequence")):
            if not unit_box.contains(iv):
                err(f"treats {t.countermeasure}->{t.target} {what} effect outside [0,1]")
        if t.key in treat_keys:
            err(f"duplicate treats relation {t.countermeasure}->{t.target}")
        treat_keys.add(t.key)

    for d in model.depends:
        if d.countermeasure not in cm_seen:
            err(f"depends references undeclared countermeasure {d.countermeasure!r}")
        if d.treats_key not in treat_keys:
            err(
                f"depends references missing treats relation "
                f"{d.treats_countermeasure}->{d.treats_target}"
            )
        if d.countermeasure == d.treats_countermeasure:
            err(f"countermeasure {d.countermeasure!r} cannot depend on its own effect")
        for iv, what in ((d.freq_dep, "frequency"), (d.cons_dep, "consequence")):
            if not unit_box.contains(iv):
                err(f"depends {d.countermeasure} {what} dependency outside [0,1]")

    for a in model.criteria:
        if a.risk not in ids:
            err(f"acceptance criterion references undeclared vertex {a.risk!r}")
        elif model.vertex(a.risk).kind is not VertexKind.UNWANTED_INCIDENT:
            err(f"acceptance criterion target {a.risk!r} is not an incident")
        if a.max_frequency is None and a.max_risk_cost is None:
            err(f"acceptance criterion for {a.risk!r} has no bound")

    cycle = _find_cycle(sorted(ids), model.edges())
    if cycle is not None:
        err("cycle: " + ",".join(cycle))
    else:
        # Reachability only makes sense on a DAG with resolved endpoints.
        if not any(d.is_error for d in diags):
            reachable: set[str] = {v.id for v in model.vertices if v.kind is VertexKind.THREAT}
            changed = True
            while changed:
                changed = False
                for a, b in model.edges():
                    if a in reachable and b not in reachable:
                        reachable.add(b)
                        changed = True
            for v in model.incidents:
                if v.id not in reachable:
                    err(f"incident {v.id!r} is unreachable from every threat")

    for v in model.core_vertices:
        if v.merge_policy is MergePolicy.OVERLAPPING and model.is_point_valued():
            warn(
                f"vertex {v.id!r} merges overlapping contributions but the model is "
                f"point-valued; combined results will still be intervals"
            )

    return diags


def normalize(model: RiskModel, target: Period) -> RiskModel:
    """Rescale every rate and expenditure to the target period.

    Relative quantities (likelihoods, effects, dependencies) are untouched.
    """

    def freq(f: Frequency) -> Frequency:
        return Frequency(f.per_period(target), target)

    return replace(
        model,
        base_period=target,
        initiates=tuple(replace(r, frequency=freq(r.frequency)) for r in model.initiates),
        countermeasures=tuple(
            replace(c, expenditure=c.expenditure_per(target), per=target)
            for c in model.countermeasures
        ),
        criteria=tuple(
            replace(
                a,
                max_frequency=None if a.max_frequency is None else freq(a.max_frequency),
                max_risk_cost=(
                    None
                    if a.max_risk_cost is None
                    else a.max_risk_cost * target.days / a.max_risk_cost_per.days
                ),
                max_risk_cost_per=None if a.max_risk_cost is None else target,
            )
            for a in model.criteria
        ),
    )
