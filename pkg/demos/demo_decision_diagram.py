"""Enumerate the residual states of one risk and emit its decision diagram.

Every subset of the applicable countermeasures yields one state; the diagram
connects states that differ by a single added countermeasure. The DOT output
places each node at (frequency, consequence), so rendering it with neato -n
reproduces the familiar frequency-versus-consequence plot.
"""

from pathlib import Path

from riskforge import build_decision_diagram, enumerate_states, export_dot, parse

MODEL = Path(__file__).parent.parent / "tests" / "fixtures" / "ehealth.riskdsl"


def main():
    model = parse(MODEL.read_text())
    states = enumerate_states(model, "LMD")

    print("residual states of LMD (loss of monitored data):")
    for s in states:
        alt = "+".join(sorted(s.alternative)) or "(none)"
        print(f"  {s.name:3} {alt:12} frequency {s.frequency} per {model.base_period}")
    print()

    diagram = build_decision_diagram(states)
    out = Path(__file__).parent / "lmd_decision.dot"
    out.write_text(export_dot(diagram))
    print(f"decision diagram with {len(diagram.states)} states and "
          f"{len(diagram.edges)} transitions written to {out.name}")


if __name__ == "__main__":
    main()
