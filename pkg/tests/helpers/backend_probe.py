"""Prints a JSON digest of kernel outputs for the active backend."""
import json
import sys

import numpy as np

from timevortex._accel import backend
from timevortex.decoder import Decoder
from timevortex.dem import build_memory_experiment
from timevortex.distance import code_distance, distance_cycle_oracle
from timevortex.lattice import Embedding
from timevortex.matching import min_weight_perfect_matching
from timevortex.metric import graph_norm_bfs, graph_norms
from timevortex.montecarlo import Sampler
from timevortex.search import results_to_json, search_optimal

e30 = Embedding.from_vectors((3, 0, -6), (1, -5, 0))
e42 = Embedding.from_vectors((4, 1, 0), (1, -5, 0))
pts = np.array([(i, j, 2 * (i - j) + 6 * k) for i in range(-4, 5) for j in range(-4, 5)
                for k in range(-3, 4)], dtype=np.int64)
g = build_memory_experiment(e30, 3, 0.02)
syn, _ = Sampler(g).sample(1, range(300))
rng = np.random.default_rng(0)
w = rng.integers(0, 50, (14, 14))
w = np.triu(w, 1)
w = w + w.T
out = {
    "backend": backend(),
    "norms": graph_norms(pts).tolist(),
    "bfs": [graph_norm_bfs(tuple(p), 12) for p in pts[::37].tolist()],
    "distance": [code_distance(e30), code_distance(e42)],
    "oracle": [distance_cycle_oracle(e30)],
    "search": results_to_json(search_optimal(int(sys.argv[1]), True)),
    "decode": Decoder(g).decode_batch(syn).tolist(),
    "matching": min_weight_perfect_matching(w),
}
print(json.dumps(out, sort_keys=True))
