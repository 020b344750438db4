"""Time the hot kernels under both backends.

Each backend runs in its own interpreter because the choice is made at
import time. Usage: ``python3 benchmarks/bench_kernels.py [--repeat 3]``.
"""
import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json, sys, time
import numpy as np
from timevortex._accel import backend
from timevortex.lattice import Embedding
from timevortex.metric import graph_norms, graph_norm_bfs
from timevortex.distance import code_distance
from timevortex.search import search_optimal
from timevortex.dem import build_memory_experiment
from timevortex.montecarlo import Sampler
from timevortex.decoder import Decoder
from timevortex.matching import min_weight_perfect_matching

repeat = int(sys.argv[1])
e = Embedding.from_vectors((3, 0, -6), (1, -5, 0))
big = Embedding.from_vectors((20, 2, 42), (4, -23, -78))
pts = np.array([(i, j, 2 * (i - j) + 6 * k) for i in range(-20, 21) for j in range(-20, 21)
                for k in range(-10, 11)], dtype=np.int64)
g = build_memory_experiment(e, 3, 0.01)
syn, _ = Sampler(g).sample(0, range(2000))
dec = Decoder(g)
rng = np.random.default_rng(0)
w = rng.integers(0, 1000, (60, 60)); w = np.triu(w, 1); w = w + w.T

cases = {
    "graph_norms (35k points)": lambda: graph_norms(pts),
    "graph_norm_bfs (6,0,-12)": lambda: graph_norm_bfs((6, 0, -12), 6),
    "code_distance N=936": lambda: code_distance(big),
    "search_optimal N<=120": lambda: search_optimal(120, True),
    "decode_batch 2000 shots": lambda: dec.decode_batch(syn),
    "matching 60 defects": lambda: min_weight_perfect_matching(w, tie_break="fast"),
}
out = {"backend": backend()}
for name, fn in cases.items():
    fn()  # warm-up, includes compilation
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter(); fn(); best = min(best, time.perf_counter() - t0)
    out[name] = best
print(json.dumps(out))
"""


def run(flag: str, repeat: int) -> dict:
    env = dict(os.environ, TIMEVORTEX_NUMBA=flag)
    res = subprocess.run([sys.executable, "-c", CHILD, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast, slow = run("1", args.repeat), run("0", args.repeat)
    print(f"{'kernel':32s} {fast.pop('backend'):>10s} {slow.pop('backend'):>10s} {'speedup':>8s}")
    for name in fast:
        print(f"{name:32s} {fast[name]:10.4f} {slow[name]:10.4f} {slow[name] / fast[name]:8.1f}x")


if __name__ == "__main__":
    main()
