"""Run the bundled pipelines and print their checklists."""
import argparse
import time

from pepscanon.demos import DEMOS, run_demo
from pepscanon.tensor_core import Tolerance


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("names", nargs="*", default=list(DEMOS), help=f"any of {sorted(DEMOS)}")
    p.add_argument("--rel-cut", type=float, default=1e-9)
    p.add_argument("--res-cut", type=float, default=1e-9)
    args = p.parse_args()
    tol = Tolerance(args.rel_cut, args.res_cut)
    failures = 0
    for name in args.names:
        t0 = time.perf_counter()
        checks = run_demo(name, tol)
        print(f"== {name} ({time.perf_counter() - t0:.2f} s)")
        for c in checks:
            failures += not c.passed
            print(f"  {'PASS' if c.passed else 'FAIL'}  {c.label}  [{c.tag}]  {c.value}")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
