"""Command-line interface: ``genusrna count|sample|genus|stats|verify``.

Samples are drawn in fixed-size blocks, block ``b`` using the stream
``RandomSource.for_block(seed, b)``, so output depends only on the seed and
the count; ``--threads`` only changes how many blocks run at once.
"""
import argparse
import sys
from concurrent.futures import ProcessPoolExecutor

from .counting import InfeasibleError, delta, delta_total, epsilon
from .energy import EnergyParams, Genus1Sampler, TEST_VECTOR
from .fatgraph import genus_of_diagram
from .records import DiagramRecord, RecordError, read_records
from .sampling import RandomSource, uniform_diagram, uniform_matching
from .stats import LoopHistogram
from .verify import run_verification

BLOCK = 4096
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# sampling jobs ------------------------------------------------------------

def _make_sampler(kind, size, genus, params):
    if kind == "matching":
        if 2 * genus > size:
            raise InfeasibleError(f"no genus-{genus} matching with {size} arcs")
        return lambda rng: uniform_matching(size, genus, rng)
    if kind == "diagram":
        if delta_total(genus, size) == 0:
            raise InfeasibleError(f"no genus-{genus} diagram on {size} vertices")
        return lambda rng: uniform_diagram(size, genus, rng)
    if size < 4:
        raise InfeasibleError("genus 1 needs at least four vertices")
    sampler = Genus1Sampler(params, size)
    return lambda rng: sampler.sample(size, rng)


def _run_block(job):
    kind, size, genus, params, seed, block, start, stop, mode = job
    draw = _make_sampler(kind, size, genus, params)
    rng = RandomSource.for_block(seed, block)
    if mode == "stats":
        hist = LoopHistogram()
        for _ in range(start, stop):
            hist.add(draw(rng))
        return hist
    return [draw(rng) for _ in range(start, stop)]


def _blocks(kind, size, genus, params, seed, count, mode):
    return [(kind, size, genus, params, seed, b, start, min(start + BLOCK, count), mode)
            for b, start in enumerate(range(0, count, BLOCK))]


def _run_jobs(jobs, threads):
    if threads <= 1 or len(jobs) <= 1:
        return [_run_block(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_run_block, jobs))


# commands -----------------------------------------------------------------

def cmd_count(args, out):
    if (args.edges is None) == (args.length is None):
        raise UsageError("count needs exactly one of --edges or --length")
    g = args.genus
    if args.edges is not None:
        value = epsilon(g, args.edges)
        if value == 0:
            raise InfeasibleError(f"no genus-{g} matching with {args.edges} arcs")
        out.write(f"{value}\n")
        return EXIT_OK
    value = delta_total(g, args.length)
    if value == 0:
        raise InfeasibleError(f"no genus-{g} diagram on {args.length} vertices")
    out.write(f"{value}\n")
    if args.breakdown:
        for n in range(args.length // 2 + 1):
            part = delta(g, args.length, n)
            if part:
                out.write(f"n={n}\t{part}\n")
    return EXIT_OK


def _load_params(path):
    if path is None:
        return TEST_VECTOR
    try:
        return EnergyParams.from_file(path)
    except OSError as exc:
        raise UsageError(f"cannot read params file: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"bad params file {path}: {exc}") from None


def cmd_sample(args, out):
    if args.kind == "matching":
        size, genus = args.edges, args.genus
        if size is None or genus is None:
            raise UsageError("sample matching needs --edges and --genus")
    else:
        size, genus = args.length, args.genus
        if size is None:
            raise UsageError(f"sample {args.kind} needs --length")
        if args.kind == "diagram" and genus is None:
            raise UsageError("sample diagram needs --genus")
        if args.kind == "energy1":
            if genus not in (None, 1):
                raise UsageError("energy1 samples genus 1 only")
            genus = 1
    params = _load_params(args.params) if args.kind == "energy1" else None
    _make_sampler(args.kind, size, genus, params)  # fail fast on infeasible input
    jobs = _blocks(args.kind, size, genus, params, args.seed, args.count, "sample")
    index = 0
    for chunk in _run_jobs(jobs, args.threads):
        for d in chunk:
            if args.json:
                rec = DiagramRecord.from_diagram(d, genus=genus, seed=args.seed, index=index)
                out.write(rec.to_json() + "\n")
            else:
                out.write(d.to_text() + "\n")
            index += 1
    return EXIT_OK


def cmd_genus(args, out):
    stream = sys.stdin if args.input in (None, "-") else open(args.input, encoding="utf-8")
    try:
        for rec in read_records(stream):
            res = genus_of_diagram(rec.to_diagram())
            tagged = DiagramRecord(rec.length, rec.arcs, res.genus, res.boundary_count,
                                   rec.seed, rec.index)
            out.write((tagged.to_json() if args.json else tagged.to_text()) + "\n")
    finally:
        if stream is not sys.stdin:
            stream.close()
    return EXIT_OK


def cmd_stats(args, out):
    if 2 * args.genus > args.edges:
        raise InfeasibleError(f"no genus-{args.genus} matching with {args.edges} arcs")
    jobs = _blocks("matching", args.edges, args.genus, None, args.seed, args.count, "stats")
    hist = LoopHistogram()
    for part in _run_jobs(jobs, args.threads):
        hist.update(part)
    out.write(hist.to_tsv())
    return EXIT_OK


def cmd_verify(args, out):
    ok, lines = run_verification(args.max_edges, args.samples, args.seed)
    for line in lines:
        out.write(line + "\n")
    out.write(f"overall: {'OK' if ok else 'FAIL'}\n")
    return EXIT_OK if ok else EXIT_FAIL


# parser -------------------------------------------------------------------

def _non_negative(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser():
    parser = argparse.ArgumentParser(
        prog="genusrna", description="Random RNA structures of fixed topological genus.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="exact number of matchings or diagrams of a genus")
    p.add_argument("--edges", type=_non_negative, help="arcs of a perfect matching")
    p.add_argument("--length", type=_non_negative, help="backbone length of a diagram")
    p.add_argument("--genus", type=_non_negative, required=True)
    p.add_argument("--breakdown", action="store_true", help="per arc-count terms (with --length)")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("sample", help="draw random structures")
    p.add_argument("kind", choices=("matching", "diagram", "energy1"))
    p.add_argument("--edges", type=_non_negative)
    p.add_argument("--length", type=_non_negative)
    p.add_argument("--genus", type=_non_negative)
    p.add_argument("--params", help="key=value energy parameter file (energy1)")
    _sampling_flags(p)
    p.add_argument("--json", action="store_true", help="one JSON object per line")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("genus", help="annotate records with genus and boundary count")
    p.add_argument("input", nargs="?", help="record file (default: standard input)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_genus)

    p = sub.add_parser("stats", help="statistics over uniform samples")
    stats_sub = p.add_subparsers(dest="what", required=True)
    q = stats_sub.add_parser("loops", help="loop class and size histogram (TSV)")
    q.add_argument("--edges", type=_non_negative, required=True)
    q.add_argument("--genus", type=_non_negative, required=True)
    _sampling_flags(q)
    q.set_defaults(func=cmd_stats)

    p = sub.add_parser("verify", help="brute-force checks; exit status 1 on any failure")
    p.add_argument("--max-edges", type=_positive, default=4)
    p.add_argument("--samples", type=_positive, default=10000)
    p.add_argument("--seed", type=_non_negative, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def _sampling_flags(p):
    p.add_argument("--count", type=_non_negative, default=1)
    p.add_argument("--seed", type=_non_negative, default=0)
    p.add_argument("--threads", type=_positive, default=1)


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (UsageError, InfeasibleError, RecordError, OSError) as exc:
        sys.stderr.write(f"genusrna: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
