#!/usr/bin/env python3
"""Write the default family sweep and the K-vs-J summary into out/."""

import pathlib
import time

from hookup import OptimizerConfig
from hookup.mdms import compare_jk, scan_mdms, scan_to_csv


def main():
    out = pathlib.Path("out")
    out.mkdir(exist_ok=True)
    cfg = OptimizerConfig()

    started = time.perf_counter()
    table = scan_mdms(theta_points=65, epsilon_points=101, cfg=cfg)
    (out / "mdms_scan.csv").write_text(scan_to_csv(table))
    print(f"wrote out/mdms_scan.csv in {time.perf_counter() - started:.1f} s")

    rows = compare_jk([0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9], cfg=cfg)
    lines = ["epsilon,J,max_K_minus_J,min_K_minus_J"]
    for r in rows:
        lines.append(
            f"{r['epsilon']:.17g},{r['J']:.17g},"
            f"{r['max_K_minus_J']:.17g},{r['min_K_minus_J']:.17g}"
        )
    (out / "compare_jk.csv").write_text("\n".join(lines) + "\n")
    print("wrote out/compare_jk.csv")


if __name__ == "__main__":
    main()
