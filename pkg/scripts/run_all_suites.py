"""Run every verification suite and write one JSON report per suite."""

import argparse
import os
import sys

from metaconf.cli import main
from metaconf.suites import SUITES


def run(outdir: str) -> int:
    os.makedirs(outdir, exist_ok=True)
    worst = 0
    for name in SUITES:
        path = os.path.join(outdir, f"verify_{name}.json")
        code = main(["verify", name, "--out", path])
        print(f"{name:12s} {'PASS' if code == 0 else 'FAIL'}  {path}")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("outdir", nargs="?", default="reports")
    sys.exit(run(ap.parse_args().outdir))
