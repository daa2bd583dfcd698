"""Compare the compiled and pure-Python kernel backends.

Workloads mirror how the package uses the kernels: many small blocks (the
Monte Carlo stress test), a Gershgorin scan over many weights (certification)
and single large blocks.  Each backend is checked against the other before it
is timed.

    python3 benchmarks/bench_backends.py [--repeat 5] [--json out.json]
"""

import argparse
import json
import platform
import timeit

import numpy as np

from hodge_spectra import _backend


def _metrics(n, seed=0):
    return np.random.default_rng(seed).uniform(0.1, 10.0, size=(n, 3))


def many_small_blocks(kern, triples, k_max=10):
    for a, b, c in triples:
        for k in range(k_max + 1):
            kern.delta1_eigvals(k, a, b, c)


def gershgorin_scan(kern, triples, k_probe=200):
    for a, b, c in triples:
        for k in range(k_probe + 1):
            kern.gershgorin_delta1(k, a, b, c)


def large_block(kern, k, triple=(1.3, 0.7, 2.1)):
    kern.delta1_eigvals(k, *triple)


def assembly_only(kern, triples, k=25):
    for a, b, c in triples:
        kern.delta1_real(k, a, b, c)


WORKLOADS = {
    "stress: 100 metrics x k<=10 eigvals": lambda kern: many_small_blocks(kern, _metrics(100)),
    "certify: 10 metrics x k<=200 Gershgorin": lambda kern: gershgorin_scan(kern, _metrics(10)),
    "assembly: 200 metrics, k=25 real form": lambda kern: assembly_only(kern, _metrics(200)),
    "single block k=100": lambda kern: large_block(kern, 100),
    "single block k=400": lambda kern: large_block(kern, 400),
}


def check_agreement(kernels):
    ref = _backend.load("python")
    worst = 0.0
    for a, b, c in _metrics(20, seed=1):
        for k in (0, 1, 5, 17, 60):
            want = ref.delta1_eigvals(k, a, b, c)
            for kern in kernels.values():
                got = kern.delta1_eigvals(k, a, b, c)
                worst = max(worst, float(np.max(np.abs(got - want)) / np.max(np.abs(want))))
    return worst


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5, help="timing repeats, best is reported")
    ap.add_argument("--json", default=None, help="also write results here")
    args = ap.parse_args(argv)

    kernels = {name: _backend.load(name) for name in _backend.available()}
    if "compiled" not in kernels:
        print("compiled backend not built; timing the Python backend only")
    dev = check_agreement(kernels)
    print(f"backends agree to {dev:.1e} (max eigenvalue error / block norm)")
    print(f"python {platform.python_version()}, numpy {np.__version__}, {platform.machine()}")

    rows = []
    header = f"{'workload':42s}" + "".join(f"{n:>12s}" for n in kernels) + f"{'speedup':>10s}"
    print(header)
    print("-" * len(header))
    for label, fn in WORKLOADS.items():
        times = {}
        for name, kern in kernels.items():
            fn(kern)  # warm up
            times[name] = min(timeit.repeat(lambda: fn(kern), number=1, repeat=args.repeat))
        speed = times["python"] / times["compiled"] if "compiled" in times else float("nan")
        print(f"{label:42s}" + "".join(f"{times[n] * 1e3:10.2f}ms" for n in kernels) + f"{speed:9.1f}x")
        rows.append({"workload": label, "seconds": times, "speedup": speed})

    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump({"agreement": dev, "results": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
