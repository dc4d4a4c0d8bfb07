#!/usr/bin/env python3
"""Benchmark the jitted kernels against the pure-numpy fallback.

Times the hot paths (breadth-first closure, normalizer scan, batched
element powers) on desk-scale groups under both backends by re-invoking
itself with ENDOTRIV_BACKEND set.  Run from the repository root:

    python scripts/bench_backends.py
"""

import json
import os
import subprocess
import sys
import time

WORKLOADS = [
    ("closure GL(2,5) (order 480)", "liea.enumerate_group(2, 5, 4)"),
    ("closure SL(3,3) (order 5616)", "liea.enumerate_group(3, 3)"),
    ("closure GL(3,4) (order 181440)", "liea.enumerate_group(3, 4, 3)"),
    ("normalizer scan in SL(3,3)",
     "mg.normalizer(G, liea.sylow_in(G, liea.compute_params(3, 3, 2, 1)))"),
    ("order-p masks over GL(3,4)", "G4.elements_satisfying_power(3)"),
]


def run_child(backend: str) -> dict:
    env = dict(os.environ, ENDOTRIV_BACKEND=backend)
    out = subprocess.run([sys.executable, __file__, "--child"], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def child() -> None:
    from endotriv import backend, liea
    from endotriv import matgrp as mg

    # warm the jit before timing
    liea.enumerate_group(2, 3)
    G = liea.enumerate_group(3, 3)
    G4 = liea.enumerate_group(3, 4, 3)
    scope = {"liea": liea, "mg": mg, "G": G, "G4": G4}
    timings = {"backend": backend.backend_name()}
    for label, expr in WORKLOADS:
        t0 = time.perf_counter()
        eval(expr, scope)  # noqa: S307 - fixed workload table above
        timings[label] = round(time.perf_counter() - t0, 4)
    print(json.dumps(timings))


def main() -> None:
    if "--child" in sys.argv:
        child()
        return
    rows = {b: run_child(b) for b in ("numba", "numpy")}
    width = max(len(label) for label, _ in WORKLOADS)
    print(f"{'workload':<{width}}  {'numba':>9}  {'numpy':>9}  speedup")
    for label, _ in WORKLOADS:
        tn = rows["numba"][label]
        tp = rows["numpy"][label]
        ratio = tp / tn if tn else float("inf")
        print(f"{label:<{width}}  {tn:>8.3f}s  {tp:>8.3f}s  {ratio:6.1f}x")


if __name__ == "__main__":
    main()
