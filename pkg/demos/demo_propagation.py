"""Walk through frequency propagation on the patient-monitoring model.

Loads the model from its DSL source, propagates it untreated and under the
full countermeasure set, and prints the residual frequencies side by side.
"""

from pathlib import Path

from riskforge import parse, propagate

MODEL = Path(__file__).parent.parent / "tests" / "fixtures" / "ehealth.riskdsl"


def main():
    model = parse(MODEL.read_text())
    print(f"model: {model.name} (frequencies per {model.base_period})")
    print()

    untreated = propagate(model, frozenset())
    treated = propagate(model, frozenset({"IRN", "EQS", "IRH"}))

    print(f"{'vertex':8} {'untreated':>10} {'all treatments':>15}")
    for v in model.core_vertices:
        a = untreated[v.id].frequency
        b = treated[v.id].frequency
        print(f"{v.id:8} {str(a):>10} {str(b):>15}")
    print()
    print("Loss of monitored data drops from 26.4 to about 5.1 per ten years;")
    print("the two network measures overlap, so their combined reduction is")
    print("weaker than the product of their individual ones.")


if __name__ == "__main__":
    main()
