"""Compare the numba kernels against the pure-numpy fallback.

Runs the three hot operations (group closure, center scan, coset
labeling) on mid-sized unitriangular instances with both backends and
prints a timing table.  The numba timings exclude compilation: each
kernel is warmed on a tiny instance first.

Usage: python benchmarks/bench_kernels.py
"""

import time

from abelslab.abels import contracting, unipotent_and_torus
from abelslab.kernels import (
    NUMBA_AVAILABLE,
    center_mask,
    coded_ring,
    coset_labels,
    encode_matrices,
    group_closure,
)
from abelslab.rings import make_ring

INSTANCES = (
    ("U4 over zmod:5", 4, "zmod:5"),
    ("U5 over zmod:3", 5, "zmod:3"),
)


def material(n, descriptor):
    ring = make_ring(descriptor)
    cr = coded_ring(ring)
    group = unipotent_and_torus(n, ring)[0]
    sub = contracting(n, ring, 1)
    return cr, encode_matrices(cr, group.generators), encode_matrices(
        cr, sub.generators
    ), n


def run_backend(backend, cr, gens, sub_gens, n):
    timings = {}
    start = time.perf_counter()
    status, elems, keys = group_closure(cr, gens, n, backend=backend)
    timings["closure"] = time.perf_counter() - start
    assert status == "complete"

    start = time.perf_counter()
    center_mask(cr, elems, gens, n, backend=backend)
    timings["center"] = time.perf_counter() - start

    start = time.perf_counter()
    _, sub_elems, _ = group_closure(cr, sub_gens, n, backend=backend)
    coset_labels(cr, elems, keys, sub_elems, n, backend=backend)
    timings["cosets"] = time.perf_counter() - start
    return len(elems), timings


def main():
    backends = ["numpy"] + (["numba"] if NUMBA_AVAILABLE else [])
    if NUMBA_AVAILABLE:
        # warm the JIT so the table reflects steady-state throughput
        run_backend("numba", *material(4, "zmod:2"))
    header = f"{'instance':<18} {'order':>7} {'op':<8}" + "".join(
        f" {b:>10}" for b in backends
    )
    print(header)
    print("-" * len(header))
    for name, n, descriptor in INSTANCES:
        rows = {}
        order = None
        for backend in backends:
            order, timings = run_backend(backend, *material(n, descriptor))
            for op, sec in timings.items():
                rows.setdefault(op, {})[backend] = sec
        for op, by_backend in rows.items():
            cells = "".join(f" {by_backend[b] * 1000:>9.1f}ms" for b in backends)
            label = name if op == "closure" else ""
            print(f"{label:<18} {order:>7} {op:<8}{cells}")
    if not NUMBA_AVAILABLE:
        print("numba unavailable: fallback timings only")


if __name__ == "__main__":
    main()
