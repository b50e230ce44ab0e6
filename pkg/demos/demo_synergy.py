"""Rank global countermeasure alternatives by overall cost.

Overall cost is the residual risk cost (frequency times consequence, summed
over the risks) plus the expenditure of the chosen countermeasures. Only
alternatives meeting every acceptance criterion qualify; the cheapest one is
the recommendation.
"""

from pathlib import Path

from riskforge import find_alternatives, overall_cost, parse, recommend

MODEL = Path(__file__).parent.parent / "tests" / "fixtures" / "ehealth.riskdsl"


def main():
    model = parse(MODEL.read_text())
    print(f"doing nothing costs {overall_cost(model, frozenset()):.0f} per {model.base_period}")
    print()

    print("acceptable alternatives, cheapest first:")
    for rank, g in enumerate(find_alternatives(model), start=1):
        alt = "+".join(sorted(g.countermeasures))
        print(f"  {rank}. {alt:12} overall cost {g.overall_cost:.0f}")
    print()

    rec = recommend(model)
    best = "+".join(sorted(rec.best.countermeasures))
    print(f"recommendation: {best} at {rec.best.overall_cost:.0f} per {model.base_period}")
    print()
    print("Adding the QoS measure on top of the redundant network would buy a")
    print("further frequency reduction, but its price exceeds the saving, so")
    print("the cheaper pair wins.")


if __name__ == "__main__":
    main()
