"""Compare the compiled and pure-Python rank kernels on evaluated structure matrices.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import random
import timeit

from quadnil import _kernels_py
from quadnil.family import build_B, num_params
from quadnil.kernels import PRIME

try:
    from quadnil import _kernels
except ImportError:
    _kernels = None


def sample(d, support_size, rng):
    C = build_B(d)
    support = rng.sample(range(1, num_params(d) + 1), support_size)
    values = {t: rng.randint(-10**6, 10**6) or 1 for t in support}
    return [[int(x) for x in row] for row in C.evaluate(values)]


def bench(fn, mats, repeat):
    t = min(timeit.repeat(lambda: [fn(m) for m in mats], number=1, repeat=repeat))
    return t / len(mats) * 1e6


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--samples", type=int, default=200)
    args = ap.parse_args()
    rng = random.Random(0)
    backends = [("python", _kernels_py)]
    if _kernels is not None:
        backends.append(("cython", _kernels))
    else:
        print("compiled kernels not built; only the Python backend is timed")
    print(f"{'kernel':<14}{'case':<16}" + "".join(f"{name:>12}" for name, _ in backends) + "   (us/call)")
    for d, size in [(5, 2), (7, 3), (8, 3), (8, 56), (9, 84)]:
        mats = [sample(d, size, rng) for _ in range(args.samples)]
        for kernel, call in [
            ("bareiss_rank", lambda mod: mod.bareiss_rank),
            ("rank_mod_p", lambda mod: (lambda m: mod.rank_mod_p(m, PRIME))),
        ]:
            times = [bench(call(mod), mats, args.repeat) for _, mod in backends]
            print(f"{kernel:<14}{f'd={d} |S|={size}':<16}" + "".join(f"{t:12.1f}" for t in times))


if __name__ == "__main__":
    main()
