"""Compare the compiled and pure-Python matching kernels.

Usage: python3 benchmarks/bench_kernels.py [--sizes 10 50 200] [--repeat 5]
"""

from __future__ import annotations

import argparse
import random
import time

from chapterforge import kernels


def random_spans(rng: random.Random, duration: int, n: int) -> list[tuple[int, int]]:
    starts = [0] + sorted(rng.sample(range(1, duration), n - 1))
    ends = starts[1:] + [duration]
    return list(zip(starts, ends))


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv: list[str] | None = None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[10, 50, 200, 500])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    impls = kernels.implementations()
    if "cython" not in impls:
        print("compiled kernels not built; only the Python fallback is available")
    rng = random.Random(args.seed)
    print(f"{'n':>5} {'kernel':>16} " + " ".join(f"{name:>10}" for name in impls) + "   speedup")
    for n in args.sizes:
        duration = 20 * n
        pred, gt = random_spans(rng, duration, n), random_spans(rng, duration, n)
        ps, gs = [b for b, _ in pred], [b for b, _ in gt]
        cases = {
            "greedy_match": lambda m: m.greedy_match(pred, gt, False),
            "match_boundaries": lambda m: m.match_boundaries(ps, gs, 5),
        }
        for label, call in cases.items():
            timings = {name: best_of(lambda m=mod: call(m), args.repeat) for name, mod in impls.items()}
            speedup = timings["python"] / timings["cython"] if "cython" in timings else 1.0
            cols = " ".join(f"{1e3 * t:>8.2f}ms" for t in timings.values())
            print(f"{n:>5} {label:>16} {cols}   {speedup:6.1f}x")
    results = [impls[name].greedy_match(pred, gt) for name in impls]
    if any(r != results[0] for r in results):
        raise SystemExit("kernels disagree on the last case")
    print("kernels agree on the last case")


if __name__ == "__main__":
    main()
