"""Times the pure-Python kernels against the compiled backend.

Runs each kernel workload under both implementations and prints a small
table with speedups, then repeats one end-to-end training/scoring job in
subprocesses so the numbers include backend selection exactly as users
get it.

    python3 benchmarks/bench_backends.py [--repeat 3] [--scale 1.0]
"""

from __future__ import annotations

import argparse
import json
import os
import random
import subprocess
import sys
import time

from vomm._kernels import available_backends


def timed(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def lz_workloads(mod, scale):
    n = int(300_000 * scale)
    rng = random.Random(7)
    data = [rng.randrange(8) for _ in range(n)]
    ctx = [rng.randrange(8) for _ in range(int(100_000 * scale))]

    def parse():
        mod.LzTrie(8).parse(data, 2)

    trie = mod.LzTrie(8)
    trie.parse(data, 2)

    def score():
        state = 0
        total = 0.0
        recent = []
        for sym in ctx:
            total += trie.conditional(state, sym)
            recent.append(sym)
            if len(recent) > 2:
                recent.pop(0)
            state = trie.advance_state(state, sym, recent)
        return total

    return [("lz parse 300k", parse), ("lz score 100k", score)]


def ppm_workloads(mod, scale):
    n = int(120_000 * scale)
    rng = random.Random(8)
    data = [rng.randrange(16) for _ in range(n)]
    queries = [[rng.randrange(16) for _ in range(5)] for _ in range(int(3_000 * scale))]

    def fit():
        mod.PpmTrie(16, 5).fit_sequence(data)

    trie = mod.PpmTrie(16, 5)
    trie.fit_sequence(data)

    def score():
        total = 0.0
        for q in queries:
            for p in trie.distribution(q, True, 0):
                total += p
        return total

    return [("ppm fit 120k D=5", fit), ("ppm 3k distributions", score)]


def ctw_workloads(mod, scale):
    n = int(300_000 * scale)
    rng = random.Random(9)
    bits = [rng.randrange(2) for _ in range(n)]
    test = [rng.randrange(2) for _ in range(int(30_000 * scale))]

    def fit():
        m = mod.ContextTreeModel(2, 8, 0.5, [0, 1])
        m.fit_stream(bits)

    model = mod.ContextTreeModel(2, 8, 0.5, [0, 1])
    model.fit_stream(bits)

    def session():
        s = mod.ContextTreeSession(model, [])
        total = 0.0
        for b in test:
            total += s.advance(b)
        return total

    return [("ctw fit 300k D=8", fit), ("ctw session 30k", session)]


END_TO_END = """
import random, time
from vomm import Alphabet, Sequence, registry, average_log_loss
from vomm._kernels import BACKEND_NAME

rng = random.Random(21)
alphabet = Alphabet(range(16))
train = Sequence(alphabet, [rng.randrange(16) for _ in range({n})])
test = Sequence(alphabet, [rng.randrange(16) for _ in range({m})])
t0 = time.perf_counter()
pred = registry.train("ppmc", train, {{"D": 5}})
loss = average_log_loss(pred, test, history=train)
print(BACKEND_NAME, time.perf_counter() - t0)
"""


def end_to_end(scale) -> dict[str, float]:
    snippet = END_TO_END.format(n=int(150_000 * scale), m=int(30_000 * scale))
    out = {}
    for name, flag in (("pure", "1"), ("native", None)):
        env = dict(os.environ)
        env.pop("VOMM_PURE_PYTHON", None)
        if flag:
            env["VOMM_PURE_PYTHON"] = flag
        proc = subprocess.run(
            [sys.executable, "-c", snippet], capture_output=True, text=True, env=env, check=True
        )
        backend, seconds = proc.stdout.split()
        out[backend] = float(seconds)
    return out


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3, help="best-of repetitions per cell")
    parser.add_argument("--scale", type=float, default=1.0, help="workload size multiplier")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    args = parser.parse_args()

    backends = available_backends()
    if "native" not in backends:
        print("compiled backend not built; run pip install -e . first", file=sys.stderr)
        return 1

    rows = []
    for maker in (lz_workloads, ppm_workloads, ctw_workloads):
        pure_jobs = maker(backends["pure"], args.scale)
        native_jobs = maker(backends["native"], args.scale)
        for (name, pure_fn), (_, native_fn) in zip(pure_jobs, native_jobs):
            tp = timed(pure_fn, args.repeat)
            tn = timed(native_fn, args.repeat)
            rows.append((name, tp, tn))

    e2e = end_to_end(args.scale)
    rows.append(("end-to-end ppm train+eval", e2e["pure"], e2e["native"]))

    if args.json:
        print(json.dumps([
            {"workload": n, "pure_s": tp, "native_s": tn, "speedup": tp / tn}
            for n, tp, tn in rows
        ], indent=2))
        return 0

    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'pure':>8}  {'native':>8}  {'speedup':>7}")
    for name, tp, tn in rows:
        print(f"{name:<{width}}  {tp:>7.3f}s  {tn:>7.3f}s  {tp / tn:>6.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
