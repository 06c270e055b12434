"""Compare the compiled search kernel with the pure-Python fallback.

Each mode runs in its own interpreter (the kernel choice is fixed at import
time by ``AUTOTOPISM_NO_JIT``).  Every workload is timed after one warm-up
call, so the JIT column excludes compilation.

    python3 benchmarks/bench_search.py [--repeat 3]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKLOADS = [
    # (label, alpha, beta, gamma)
    ("count trivial n=4", "1^4", "1^4", "1^4"),
    ("count trivial n=5", "1^5", "1^5", "1^5"),
    ("count 3.1^3 n=6", "3.1^3", "3.1^3", "3.1^3"),
    ("count 2^3 (3^2,6) n=6", "2^3", "3^2", "6"),
    ("count 4.1^3 n=7", "4.1^3", "4.1^3", "4.1^3"),
]

_CHILD = r"""
import json, sys, time
from autotopism.perm import CycleStructure, Isotopism, StructureTriple
from autotopism.search import JIT_ACTIVE, count_delta
repeat = int(sys.argv[1])
out = {"jit": JIT_ACTIVE, "rows": []}
for label, a, b, c in json.loads(sys.argv[2]):
    theta = Isotopism.canonical(StructureTriple(*(CycleStructure.parse(x) for x in (a, b, c))))
    count_delta(theta)  # warm-up (compilation / caches)
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        res = count_delta(theta)
        best = min(best, time.perf_counter() - t)
    out["rows"].append([label, str(res), best])
print(json.dumps(out))
"""


def run_mode(no_jit: bool, repeat: int) -> dict:
    env = dict(os.environ)
    if no_jit:
        env["AUTOTOPISM_NO_JIT"] = "1"
    else:
        env.pop("AUTOTOPISM_NO_JIT", None)
    proc = subprocess.run(
        [sys.executable, "-c", _CHILD, str(repeat), json.dumps(WORKLOADS)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(proc.stdout)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    jit = run_mode(False, args.repeat)
    pure = run_mode(True, args.repeat)
    if not jit["jit"] or pure["jit"]:
        print("warning: kernel selection did not follow AUTOTOPISM_NO_JIT", file=sys.stderr)
    print(f"{'workload':28} {'count':>10} {'jit [s]':>10} {'pure [s]':>10} {'speed-up':>9}")
    for (label, c1, t1), (_, c2, t2) in zip(jit["rows"], pure["rows"]):
        if c1 != c2:
            print(f"MISMATCH {label}: jit {c1} vs pure {c2}", file=sys.stderr)
            return 1
        print(f"{label:28} {c1:>10} {t1:10.4f} {t2:10.4f} {t2 / t1:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
