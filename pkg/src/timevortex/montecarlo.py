"""Monte Carlo memory experiments on the detector error model.

Each shot draws its mechanism flips from its own Philox stream keyed by
``(seed, shot)``, so results do not depend on how shots are split across
workers.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
from scipy.sparse import csr_matrix

from .decoder import Decoder
from .dem import DetectorGraph, build_memory_experiment
from .distance import code_distance
from .lattice import Embedding

log = logging.getLogger(__name__)

CHUNK = 4096
Z95 = 1.959963984540054


def shot_rng(seed: int, shot: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, shot, 0, 0]))


def wilson_halfwidth(k: int, n: int, z: float = Z95) -> float:
    """Half-width of the Wilson score interval for ``k`` successes in ``n`` trials."""
    if n == 0:
        return 0.0
    ph = k / n
    denom = 1 + z * z / n
    return z * math.sqrt(ph * (1 - ph) / n + z * z / (4 * n * n)) / denom


def wilson_interval(k: int, n: int, z: float = Z95) -> tuple[float, float]:
    ph = k / n
    center = (ph + z * z / (2 * n)) / (1 + z * z / n)
    h = wilson_halfwidth(k, n, z)
    return center - h, center + h


class Sampler:
    """Draws syndromes and true logical flips from a detector graph."""

    def __init__(self, g: DetectorGraph):
        self.graph = g
        self.q = g.probabilities()
        indptr, indices = g.incidence()
        M = len(g.mechanisms)
        self.H = csr_matrix((np.ones(len(indices), dtype=np.int32), indices, indptr),
                            shape=(M, g.num_detectors))
        self.labels = g.logicals()

    def fired(self, seed: int, shots: range) -> np.ndarray:
        out = np.empty((len(shots), len(self.q)), dtype=bool)
        for r, s in enumerate(shots):
            out[r] = shot_rng(seed, s).random(len(self.q)) < self.q
        return out

    def sample(self, seed: int, shots: range) -> tuple[np.ndarray, np.ndarray]:
        """Syndromes ``(len(shots), V)`` and true labels (ints 0..3)."""
        f = self.fired(seed, shots)
        syn = (csr_matrix(f.astype(np.int32)) @ self.H).toarray() & 1
        lab = np.bitwise_xor.reduce(np.where(f, self.labels[None, :], 0), axis=1) if f.shape[1] \
            else np.zeros(len(shots), dtype=np.int64)
        return syn.astype(bool), lab.astype(np.int64)


def sample(g: DetectorGraph, seed: int, shot: int = 0) -> tuple[np.ndarray, tuple[int, int]]:
    """One shot: syndrome bit vector and true ``(L0, L1)`` flip."""
    syn, lab = Sampler(g).sample(seed, range(shot, shot + 1))
    return syn[0], (int(lab[0]) & 1, int(lab[0]) >> 1)


@dataclass
class MCStats:
    shots: int
    failures_obs1: int
    failures_obs2: int
    failures_any: int
    rate: float
    ci95: float
    seed: int
    fingerprint: str
    N: int = 0
    D: int = 0
    rounds: int = 0
    p: float = 0.0
    embedding: str = ""

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def config_fingerprint(emb: Embedding, rounds: int, p: float, shots: int, seed: int) -> str:
    blob = json.dumps({"embedding": emb.to_dict(), "rounds": rounds, "p": repr(float(p)),
                       "shots": shots, "seed": seed}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def _count_chunk(args):
    g, seed, lo, hi = args
    return _count(Sampler(g), Decoder(g), seed, lo, hi)


def _count(sampler, decoder, seed, lo, hi):
    f1 = f2 = fa = 0
    for start in range(lo, hi, CHUNK):
        shots = range(start, min(hi, start + CHUNK))
        syn, truth = sampler.sample(seed, shots)
        wrong = decoder.decode_batch(syn) ^ truth
        f1 += int(np.count_nonzero(wrong & 1))
        f2 += int(np.count_nonzero(wrong & 2))
        fa += int(np.count_nonzero(wrong))
    return f1, f2, fa


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("WORKERS", "1")))
    except ValueError:
        return 1


def count_failures(g: DetectorGraph, shots: int, seed: int, workers: int | None = None):
    """``(failures_obs1, failures_obs2, failures_any)`` over ``shots`` shots."""
    workers = worker_count() if workers is None else workers
    if workers <= 1 or shots <= CHUNK:
        return _count(Sampler(g), Decoder(g), seed, 0, shots)
    bounds = np.linspace(0, shots, workers + 1).astype(int)
    jobs = [(g, seed, int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        parts = list(ex.map(_count_chunk, jobs))
    return tuple(sum(x) for x in zip(*parts))


def default_rounds(emb: Embedding, rounds_factor: float = 1.0) -> int:
    return max(1, int(round(code_distance(emb) * rounds_factor)))


def run_memory(emb: Embedding, rounds: int, p: float, shots: int, seed: int,
               workers: int | None = None) -> MCStats:
    """Logical error rates of an X-basis memory experiment decoded by matching."""
    if shots < 1:
        raise ValueError("shots must be at least 1")
    g = build_memory_experiment(emb, rounds, p)
    f1, f2, fa = count_failures(g, shots, seed, workers)
    return MCStats(shots, f1, f2, fa, fa / shots, wilson_halfwidth(fa, shots), seed,
                   config_fingerprint(emb, rounds, p, shots, seed),
                   emb.num_qubits, code_distance(emb), rounds, float(p), emb.label())


SWEEP_FIELDS = ["config", "N", "D", "rounds", "p", "shots", "failures_any", "failures_obs1",
                "failures_obs2", "rate", "ci95", "seed"]


def sweep_rows(configs, ps, shots: int, seed: int, rounds_factor: float = 1.0, workers=None):
    for emb in configs:
        rounds = default_rounds(emb, rounds_factor)
        for p in ps:
            st = run_memory(emb, rounds, p, shots, seed, workers)
            log.info("%s p=%g rate=%.3g", emb.label(), p, st.rate)
            yield {
                "config": emb.label(), "N": st.N, "D": st.D, "rounds": rounds,
                "p": repr(float(p)), "shots": shots, "failures_any": st.failures_any,
                "failures_obs1": st.failures_obs1, "failures_obs2": st.failures_obs2,
                "rate": f"{st.rate:.8g}", "ci95": f"{st.ci95:.8g}", "seed": seed,
            }


def sweep(configs, ps, shots: int, seed: int, rounds_factor: float = 1.0, workers=None) -> str:
    """CSV table, one row per (config, p)."""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SWEEP_FIELDS, lineterminator="\n")
    w.writeheader()
    w.writerows(sweep_rows(configs, ps, shots, seed, rounds_factor, workers))
    return buf.getvalue()
