#!/usr/bin/env python3
"""Benchmark the compiled scan kernels against the pure-Python
fallback.

Runs the isotropy and orthogonality scans over the largest
discriminant forms in the candidate family, once per backend (each in
a fresh interpreter, since the backend is chosen at import time), and
prints the timing ratio.  The per-case checksums guarantee both
backends produced identical output.
"""

import argparse
import hashlib
import json
import os
import subprocess
import sys
import time

DEFAULT_CASES = ["12A1", "8A2", "6A3", "2A7+A3+A1", "3A5+3A1", "3A6"]


def run_case(text: str, repeat: int) -> tuple[float, str]:
    from k3ade.ade_types import disc_form_closed, parse_type
    from k3ade.kernels import isotropic_list, orthogonal_filter

    form, _ = disc_form_closed(parse_type(text))
    start = time.perf_counter()
    results = []
    for _ in range(repeat):
        iso = isotropic_list(form)
        results.append(len(iso))
        for v in iso[:8]:
            results.append(len(orthogonal_filter(form, iso, v)))
    elapsed = time.perf_counter() - start
    digest = hashlib.sha256(repr(results).encode()).hexdigest()[:16]
    return elapsed, digest


def child_main(cases: list[str], repeat: int) -> None:
    from k3ade.kernels import backend

    report = {"backend": backend(), "cases": {}}
    for text in cases:
        seconds, digest = run_case(text, repeat)
        report["cases"][text] = {"seconds": seconds, "checksum": digest}
    json.dump(report, sys.stdout)


def spawn(pure: bool, cases: list[str], repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("K3ADE_PURE", None)
    if pure:
        env["K3ADE_PURE"] = "1"
    proc = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--child",
         "--repeat", str(repeat), "--cases", ",".join(cases)],
        env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main() -> int:
    parser = argparse.ArgumentParser(
        description="compare the scan-kernel backends")
    parser.add_argument("--repeat", type=int, default=3,
                        help="workload repetitions per case")
    parser.add_argument("--cases", default=",".join(DEFAULT_CASES),
                        help="comma-separated ADE type strings")
    parser.add_argument("--child", action="store_true",
                        help=argparse.SUPPRESS)
    args = parser.parse_args()
    cases = [c for c in args.cases.split(",") if c]

    if args.child:
        child_main(cases, args.repeat)
        return 0

    pure = spawn(True, cases, args.repeat)
    fast = spawn(False, cases, args.repeat)
    if fast["backend"] != "compiled":
        print("note: compiled extension unavailable; both runs used the "
              "pure backend")

    width = max(len(c) for c in cases)
    print(f"{'case':<{width}}  {'pure':>9}  {fast['backend']:>9}  ratio")
    for text in cases:
        a = pure["cases"][text]
        b = fast["cases"][text]
        if a["checksum"] != b["checksum"]:
            print(f"{text:<{width}}  result mismatch between backends!")
            return 1
        ratio = a["seconds"] / b["seconds"] if b["seconds"] else float("inf")
        print(f"{text:<{width}}  {a['seconds']:>8.3f}s  "
              f"{b['seconds']:>8.3f}s  {ratio:>5.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
