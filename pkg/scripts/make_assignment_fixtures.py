#!/usr/bin/env python3
"""Generate (probabilities, threshold) -> assignment fixtures for the
frontend tests, computed with the server-side assignment logic so the
client implementation is cross-checked against it.
"""

import json
import random
from pathlib import Path

from picoscreen.classifier import ARGMAX, ProbabilityVector, assign_labels
from picoscreen.labels import CLASS_ORDER

OUT = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"


def main() -> None:
    rng = random.Random(2024)
    cases = []
    for i in range(50):
        values = [round(rng.random(), 6) for _ in CLASS_ORDER]
        if i % 7 == 0:  # exercise exact-boundary ties
            values[i % len(values)] = 0.5
        threshold = round(rng.random(), 6) if i % 5 else 0.5
        vec = ProbabilityVector(tuple(values))
        probabilities = vec.as_dict()
        cases.append(
            {
                "probabilities": probabilities,
                "threshold": threshold,
                "expected_threshold": sorted(c.value for c in assign_labels(vec, threshold)),
                "expected_argmax": sorted(c.value for c in assign_labels(vec, ARGMAX)),
            }
        )
    OUT.mkdir(parents=True, exist_ok=True)
    target = OUT / "assignment_fixtures.json"
    target.write_text(json.dumps({"class_order": [c.value for c in CLASS_ORDER],
                                  "cases": cases}, indent=2))
    print(f"wrote {len(cases)} cases to {target}")


if __name__ == "__main__":
    main()
