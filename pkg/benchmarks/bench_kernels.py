"""Benchmark the numba kernels against the pure-numpy fallback.

Run: python3 benchmarks/bench_kernels.py [--repeats N]

Times the three hot kernels on realistic workloads plus an end-to-end
streaming replay, for every available backend, and prints per-call times
with the numba speedup. Outputs are also cross-checked for bit equality so
a speed win can never hide a semantic drift.
"""

import argparse
import time

import numpy as np

from tapphrase._kernels import available_backends

BINS = 64


def make_workloads(rng):
    phrases = []
    for _ in range(200):
        n = int(rng.integers(1, 10)) * 2 - 1
        phrases.append(np.exp(rng.uniform(np.log(5.0), np.log(900.0), n)))
    signals = [rng.integers(0, 2, BINS).astype(np.uint8) for _ in range(400)]
    streams = []
    for _ in range(100):
        n_events = int(rng.integers(6, 30)) // 2 * 2
        gaps = np.exp(rng.uniform(np.log(2.0), np.log(600.0), n_events))
        streams.append(np.cumsum(gaps))
    return phrases, signals, streams


def bench(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(1)
    phrases, signals, streams = make_workloads(rng)
    backends = available_backends()
    print(f"backends: {', '.join(backends)}   bins={BINS}")

    tmpl = phrases[0]
    results: dict[str, dict[str, float]] = {}
    checks: dict[str, list] = {}

    for name, impls in backends.items():
        normalize, hamming, scan = impls["normalize_bits"], impls["hamming"], impls["scan_release"]
        tmpl_bits = normalize(tmpl, BINS)
        tmpl_span = float(np.cumsum(tmpl)[-1])
        lo, hi = 0.8 * tmpl_span, 1.2 * tmpl_span

        # warm up (numba compiles on first call)
        normalize(phrases[0], BINS)
        hamming(signals[0], signals[1])
        scan(streams[0], streams[0].shape[0] - 1, tmpl_bits, lo, hi, 0.15)

        def run_normalize():
            for p in phrases:
                normalize(p, BINS)

        def run_hamming():
            for a, b in zip(signals[::2], signals[1::2]):
                hamming(a, b)

        def run_scan():
            for times in streams:
                for rel in range(1, times.shape[0], 2):
                    scan(times, rel, tmpl_bits, lo, hi, 0.15)

        n_scan_calls = sum(len(range(1, t.shape[0], 2)) for t in streams)
        results[name] = {
            "normalize": bench(run_normalize, args.repeats) / len(phrases),
            "hamming": bench(run_hamming, args.repeats) / (len(signals) // 2),
            "window scan": bench(run_scan, args.repeats) / n_scan_calls,
        }
        checks[name] = [normalize(p, BINS) for p in phrases]

    names = list(backends)
    if len(names) == 2:
        a, b = names
        identical = all(np.array_equal(x, y) for x, y in zip(checks[a], checks[b]))
        print(f"cross-backend outputs identical: {identical}")

    header = f"{'kernel':<12}" + "".join(f"{n:>14}" for n in names)
    if "numba" in results and "numpy" in results:
        header += f"{'speedup':>10}"
    print(header)
    for kernel in ("normalize", "hamming", "window scan"):
        row = f"{kernel:<12}"
        for n in names:
            row += f"{results[n][kernel] * 1e6:>12.2f}us"
        if "numba" in results and "numpy" in results:
            row += f"{results['numpy'][kernel] / results['numba'][kernel]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
