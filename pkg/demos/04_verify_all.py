"""Run the verification suite on every shipped fixture and tabulate it."""

from collections import Counter

from quasitoric import fixtures
from quasitoric.verify import RunConfig, run_suite

config = RunConfig(samples=50, seed=7)
for name in fixtures.NAMES:
    records, ctx = run_suite(fixtures.load(name), config)
    tally = Counter(r.status for r in records)
    print(f"{name:11s} pass {tally['pass']:2d}  fail {tally['fail']:2d}  skip {tally['skip']:2d}")
    for r in records:
        if r.status == "fail":
            print("   ", r.name, r.residual, r.detail)
