"""Compare the compiled and pure-Python kernel backends.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from qcorr import kernels
from qcorr.graphene import GrapheneParams, build_hamiltonian, thermal_state
from qcorr.qmat import sqrtm_psd
from qcorr.sphere import fibonacci_sphere


def cases():
    p = GrapheneParams(1.0, 3.0, 6.0, 1.0, np.pi / 3)
    h = build_hamiltonian(p)
    rho = thermal_state(p, 0.5)
    q = sqrtm_psd(rho)
    dirs = fibonacci_sphere(2000)
    return {
        "jacobi_eigh (4x4)": lambda b: b.jacobi_eigh(h),
        "tmin_objective (2000 dirs)": lambda b: b.tmin_objective(rho, dirs),
        "skew_objective (2000 dirs)": lambda b: b.skew_objective(q, dirs),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    names = [n for n in ("compiled", "python") if n in kernels.BACKENDS]
    if "compiled" not in names:
        print("compiled backend not built; timing the python backend only")
    print(f"{'kernel':28s}" + "".join(f"{n:>14s}" for n in names) + ("     speedup" if len(names) == 2 else ""))
    for label, fn in cases().items():
        times = []
        for n in names:
            b = kernels.get_backend(n)
            number = 200 if label.startswith("jacobi") else 1
            if n == "python" and number > 1:
                number = 20
            t = min(timeit.repeat(lambda: fn(b), number=number, repeat=args.repeat)) / number
            times.append(t)
        line = f"{label:28s}" + "".join(f"{t * 1e3:12.3f}ms" for t in times)
        if len(times) == 2:
            line += f"{times[1] / times[0]:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
