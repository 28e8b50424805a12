"""Run the acceptance criteria outside pytest.

    python scripts/run_acceptance.py            # all nine
    python scripts/run_acceptance.py 3 8        # a subset
"""
import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

import acceptance as A  # noqa: E402


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("numbers", nargs="*", type=int, help="criteria to run (default: all)")
    ap.add_argument("--findings", type=int, default=10, help="findings to print per criterion")
    args = ap.parse_args(argv)
    numbers = args.numbers or range(1, len(A.ALL) + 1)
    failed = 0
    for k in numbers:
        if not 1 <= k <= len(A.ALL):
            ap.error(f"no criterion {k}")
        result = A.ALL[k - 1]()
        print(result.line(), flush=True)
        for f in result.findings[: args.findings]:
            print(f"    finding: {f}")
        failed += not result.passed
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
