"""Command-line interface: ``timevortex <command> [options]``.

Exit codes: 0 success, 1 usage error, 2 embedding violates the vortex
constraints, 3 I/O error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys

from .errors import TimeVortexError

EXIT_OK, EXIT_USAGE, EXIT_CONSTRAINT, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("timevortex")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _triple(s: str) -> tuple[int, int, int]:
    try:
        vals = tuple(int(x) for x in s.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a,b,t integers, got {s!r}")
    if len(vals) != 3:
        raise argparse.ArgumentTypeError(f"expected three integers, got {s!r}")
    return vals


def _sextuple(s: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(x) for x in s.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected c1,d1,n1,c2,d2,n2, got {s!r}")
    if len(vals) != 6:
        raise argparse.ArgumentTypeError(f"expected six integers, got {s!r}")
    return vals


def _pair(s: str):
    parts = s.split(";")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'a,b,t;a,b,t', got {s!r}")
    return _triple(parts[0]), _triple(parts[1])


def _add_embedding(p):
    p.add_argument("--L1", type=_triple, help="first torus vector a,b,t")
    p.add_argument("--L2", type=_triple, help="second torus vector a,b,t")
    p.add_argument("--cdn", type=_sextuple, help="superlattice form c1,d1,n1,c2,d2,n2")


def _embedding(args):
    from .lattice import Embedding

    if args.cdn is not None:
        if args.L1 is not None or args.L2 is not None:
            raise UsageError("give either --cdn or --L1/--L2, not both")
        return Embedding(*args.cdn)
    if args.L1 is None or args.L2 is None:
        raise UsageError("an embedding is required: --L1 and --L2, or --cdn")
    return Embedding.from_vectors(args.L1, args.L2)


def _families(v: str):
    return {"on": [True], "off": [False], "both": [False, True]}[v]


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="timevortex", description="Floquet colour code with time vortices")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("distance", help="code distance of one embedding")
    _add_embedding(p)

    for name, hlp in (("search", "exhaustive optimal-embedding search"),
                      ("table", "CSV of optimal embeddings per distance")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("--max-qubits", type=int, default=1000)
        p.add_argument("--vortices", choices=["on", "off", "both"], default="both")

    p = sub.add_parser("simulate", help="Monte Carlo memory experiment")
    _add_embedding(p)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--shots", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rounds-factor", type=float, default=1.0)
    p.add_argument("--rounds", type=int, help="noisy periods (overrides --rounds-factor)")

    p = sub.add_parser("sweep", help="logical error rate over configs and p values")
    p.add_argument("--config", type=_pair, action="append", default=[],
                   help="embedding as 'a,b,t;a,b,t' (repeatable)")
    p.add_argument("--cdn", type=_sextuple, action="append", default=[],
                   help="embedding in superlattice form (repeatable)")
    p.add_argument("--p", type=float, nargs="*", default=[])
    p.add_argument("--shots", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rounds-factor", type=float, default=1.0)

    p = sub.add_parser("export-dem", help="write the detector error model")
    _add_embedding(p)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--rounds", type=int)
    p.add_argument("--rounds-factor", type=float, default=1.0)

    p = sub.add_parser("variants", help="repetition code, toric code, idle tradeoff")
    vs = p.add_subparsers(dest="variant", required=True, parser_class=_Parser)
    r = vs.add_parser("repetition")
    r.add_argument("--qubits", type=int, required=True)
    r.add_argument("--rounds", type=int)
    r.add_argument("--vortices", type=int, default=0)
    t = vs.add_parser("toric")
    t.add_argument("--Lx", type=int, required=True)
    t.add_argument("--Ly", type=int)
    t.add_argument("--rounds", type=int)
    t.add_argument("--vortices-x", type=int, default=0)
    t.add_argument("--no-diagonals", action="store_true")
    i = vs.add_parser("tradeoff")
    i.add_argument("--p", type=float, required=True)
    i.add_argument("--alpha", type=float, required=True)
    i.add_argument("--y", type=float, required=True)
    i.add_argument("--z", type=float, required=True)
    i.add_argument("--D0", type=int, required=True)

    for sp in list(sub.choices.values()) + list(vs.choices.values()):
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--format", choices=["json", "csv"], default=None)
    return ap


# ---------------------------------------------------------------------------


def _config_of(args) -> dict:
    cfg = {}
    for k, v in sorted(vars(args).items()):
        if k in ("out",):
            continue
        if isinstance(v, tuple):
            v = list(v)
        elif isinstance(v, list):
            v = [list(x) if isinstance(x, tuple) else x for x in v]
        cfg[k] = v
    return json.loads(json.dumps(cfg, default=lambda x: [list(y) for y in x]))


def _fingerprint(cfg: dict) -> str:
    return hashlib.sha256(json.dumps(cfg, sort_keys=True).encode()).hexdigest()


def _json_payload(args, result: dict) -> str:
    cfg = _config_of(args)
    body = dict(result)
    body["run_config"] = cfg
    body["fingerprint"] = _fingerprint(cfg)
    return json.dumps(body, sort_keys=True, indent=2) + "\n"


def _emit(args, text: str, meta: bool = False):
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
        if meta:
            cfg = _config_of(args)
            with open(args.out + ".meta.json", "w") as fh:
                json.dump({"run_config": cfg, "fingerprint": _fingerprint(cfg)}, fh,
                          sort_keys=True, indent=2)
                fh.write("\n")
    else:
        sys.stdout.write(text)


def cmd_distance(args) -> int:
    from .distance import distance_details
    from .lattice import check_vortex_constraints, vortex_delays

    emb = _embedding(args)
    res = distance_details(emb)
    ok = check_vortex_constraints(emb)
    N = emb.num_qubits
    out = {
        "L1": list(emb.L1), "L2": list(emb.L2), "N": N, "D": res.distance,
        "R": f"{N}/{res.distance ** 2}", "R_float": N / res.distance ** 2,
        "minimizers": [{"m": [m1, m2], "w": list(w)} for m1, m2, w in res.minimizers],
        "constraints_ok": ok,
        "delays": [str(d) for d in vortex_delays(emb)],
    }
    if not ok:
        out["warning"] = "measurement order changes locally: delays must lie in (-1, 5)"
    _emit(args, _json_payload(args, out))
    return EXIT_OK if ok else EXIT_CONSTRAINT


def _run_search(args):
    from .search import search_optimal

    if args.max_qubits < 6:
        raise UsageError("--max-qubits must be at least 6")
    return {v: search_optimal(args.max_qubits, v) for v in _families(args.vortices)}


def cmd_search(args) -> int:
    from .search import rate_curve_csv, results_to_json

    res = _run_search(args)
    if args.format == "csv":
        _emit(args, rate_curve_csv(res.get(False, []), res.get(True, [])), meta=True)
    else:
        out = {("vortexed" if v else "vortex-free"): results_to_json(r) for v, r in res.items()}
        _emit(args, _json_payload(args, out))
    return EXIT_OK


def cmd_table(args) -> int:
    from .search import results_to_json, table_csv

    res = _run_search(args)
    if args.format == "json":
        out = {("vortexed" if v else "vortex-free"): results_to_json(r) for v, r in res.items()}
        _emit(args, _json_payload(args, out))
    else:
        _emit(args, table_csv(res.get(False), res.get(True)), meta=True)
    return EXIT_OK


def _check(emb) -> bool:
    from .lattice import check_vortex_constraints

    if not check_vortex_constraints(emb):
        log.error("embedding %s violates the vortex order constraints", emb.label())
        return False
    return True


def cmd_simulate(args) -> int:
    from dataclasses import asdict

    from .montecarlo import default_rounds, run_memory

    emb = _embedding(args)
    if not _check(emb):
        return EXIT_CONSTRAINT
    rounds = args.rounds if args.rounds is not None else default_rounds(emb, args.rounds_factor)
    st = run_memory(emb, rounds, args.p, args.shots, args.seed)
    if args.format == "csv":
        from .montecarlo import SWEEP_FIELDS
        import csv
        import io

        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=SWEEP_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerow({"config": emb.label(), "N": st.N, "D": st.D, "rounds": rounds,
                    "p": repr(float(args.p)), "shots": st.shots, "failures_any": st.failures_any,
                    "failures_obs1": st.failures_obs1, "failures_obs2": st.failures_obs2,
                    "rate": f"{st.rate:.8g}", "ci95": f"{st.ci95:.8g}", "seed": st.seed})
        _emit(args, buf.getvalue(), meta=True)
    else:
        _emit(args, _json_payload(args, {"stats": asdict(st)}))
    return EXIT_OK


def cmd_sweep(args) -> int:
    from .lattice import Embedding
    from .montecarlo import sweep

    configs = [Embedding.from_vectors(a, b) for a, b in args.config]
    configs += [Embedding(*c) for c in args.cdn]
    for emb in configs:
        if not _check(emb):
            return EXIT_CONSTRAINT
    _emit(args, sweep(configs, args.p, args.shots, args.seed, args.rounds_factor), meta=True)
    return EXIT_OK


def cmd_export_dem(args) -> int:
    from .dem import build_memory_experiment, to_text
    from .montecarlo import default_rounds

    emb = _embedding(args)
    if not _check(emb):
        return EXIT_CONSTRAINT
    rounds = args.rounds if args.rounds is not None else default_rounds(emb, args.rounds_factor)
    if rounds < 0:
        raise UsageError("--rounds must be non-negative")
    _emit(args, to_text(build_memory_experiment(emb, rounds, args.p)))
    return EXIT_OK


def cmd_variants(args) -> int:
    from .variants import (IdleParams, RepetitionSpec, ToricSpec, idle_tradeoff,
                           repetition_distance, toric_distance)

    if args.variant == "repetition":
        rounds = args.rounds if args.rounds is not None else args.qubits + abs(args.vortices) + 2
        spec = RepetitionSpec(args.qubits, rounds, args.vortices)
        out = {"qubits": spec.qubits, "rounds": rounds, "vortices": spec.vortices,
               "distance": repetition_distance(spec)}
    elif args.variant == "toric":
        Ly = args.Ly if args.Ly is not None else args.Lx
        rounds = args.rounds if args.rounds is not None else 2 * args.Lx + abs(args.vortices_x) + 2
        spec = ToricSpec(args.Lx, Ly, rounds, args.vortices_x)
        out = {"Lx": spec.Lx, "Ly": spec.Ly, "rounds": rounds, "vortices_x": spec.vortices_x,
               "diagonals": not args.no_diagonals,
               "distance": toric_distance(spec, not args.no_diagonals)}
    else:
        r = idle_tradeoff(IdleParams(args.p, args.alpha, args.y, args.z, args.D0))
        out = {"exponent": r.exponent, "base": r.base, "beneficial": r.beneficial}
    _emit(args, _json_payload(args, out))
    return EXIT_OK


COMMANDS = {
    "distance": cmd_distance, "search": cmd_search, "table": cmd_table,
    "simulate": cmd_simulate, "sweep": cmd_sweep, "export-dem": cmd_export_dem,
    "variants": cmd_variants,
}


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("LOG_LEVEL", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"timevortex: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"timevortex: I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except TimeVortexError as e:
        print(f"timevortex: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
