#!/usr/bin/env python3
"""Time the engine on the desk-scale sizing target (100 vulns, 200 controls, 5 actors)."""

from __future__ import annotations

import argparse
import statistics
import time

from iotraq.assessment import compute_report
from iotraq.sensitivity import sensitivity_analysis
from iotraq.synthetic import performance_case


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    taxonomy, assessment = performance_case()
    print(
        f"case: {len(taxonomy.vulnerabilities)} vulnerabilities, {len(taxonomy.controls)} controls, "
        f"{len(taxonomy.actions)} actions, {len(assessment.threat_actors)} actors"
    )

    compute_times = []
    sensitivity_times = []
    for _ in range(args.repeats):
        started = time.perf_counter()
        compute_report(taxonomy, assessment)
        compute_times.append(time.perf_counter() - started)

        started = time.perf_counter()
        sensitivity_analysis(taxonomy, assessment)
        sensitivity_times.append(time.perf_counter() - started)

    def show(label: str, times: list[float]) -> None:
        print(
            f"{label}: median {statistics.median(times) * 1000:.1f}ms  "
            f"min {min(times) * 1000:.1f}ms  max {max(times) * 1000:.1f}ms"
        )

    show("full compute (report incl. sensitivity)", compute_times)
    show(f"sensitivity over {len(taxonomy.controls)} controls", sensitivity_times)


if __name__ == "__main__":
    main()
