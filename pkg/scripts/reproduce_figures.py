"""Write CSV and SVG data for every figure into a directory (default: figures/)."""

import argparse
import os
import sys

from metaconf.cli import FIGURES, main


def run(outdir: str) -> int:
    os.makedirs(outdir, exist_ok=True)
    for which in FIGURES:
        for fmt in ("csv", "svg"):
            path = os.path.join(outdir, f"{which}.{fmt}")
            code = main(["figure", which, "--format", fmt, "--out", path])
            if code:
                return code
            print(path)
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("outdir", nargs="?", default="figures")
    sys.exit(run(ap.parse_args().outdir))
