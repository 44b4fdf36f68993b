#!/usr/bin/env python3
"""Print the reports behind the library's reference numbers."""

import time

from hookup import OptimizerConfig, full_report, preset
from hookup.mdms import find_thresholds


def main():
    cfg = OptimizerConfig()
    for name in ("paper-example", "bell", "w-mixture"):
        started = time.perf_counter()
        report = full_report(preset(name), cfg=cfg)
        elapsed = time.perf_counter() - started
        print(f"== {name} ({elapsed:.2f} s) ==")
        print(report.format_text())
        print()

    for method in ("basis-switch", "derivative"):
        result = find_thresholds(method, cfg)
        print(
            f"thresholds via {method}: eps' = {result.eps_prime:.6f}, "
            f"eps'' = {result.eps_double_prime:.6f}"
        )


if __name__ == "__main__":
    main()
