"""Command-line interface.

Verbs: ``build`` an index from a text and an alphabet spec, ``query`` it,
print structural ``stats``, ``bench`` tree-assisted queries against plain
suffix-array search, and ``self-check`` an index against the brute-force
oracle. Occurrence output is machine-parseable (one ascending position per
line on stdout); everything diagnostic goes to stderr.
"""

from __future__ import annotations

import argparse
import csv
import random
import sys
import time
from pathlib import Path

from . import index_io
from .alphabet import encode_pattern, ingest, parse_alphabet_spec
from .errors import PstrayError
from .oracle import naive_ppm
from .suffixes import QueryStats, range_search, report
from .tray import assemble, query


def _read_text_file(path: str, mode: str) -> str:
    content = Path(path).read_text(encoding="utf-8")
    if mode == "bytes" and content.endswith("\n"):
        content = content[:-1]  # trailing newline is an artifact, not a symbol
    return content


def _load_text(args):
    spec = parse_alphabet_spec(Path(args.alphabet).read_text(encoding="utf-8"))
    return ingest(_read_text_file(args.text, spec.mode), spec)


def _pattern_arg(raw: str, mode: str) -> str:
    if raw.startswith("@"):
        return _read_text_file(raw[1:], mode)
    return raw


def cmd_build(args) -> int:
    text = _load_text(args)
    index = assemble(text, with_rmq=not args.no_rmq)
    index_io.save(index, args.out)
    ann = index.ann
    pnodes = sum(ann.is_pnode)
    branching = sum(ann.is_branching)
    print(f"n={text.n} pi={text.pi} sigma={text.sigma} "
          f"nodes={index.tree.size} pnodes={pnodes} "
          f"branching_pnodes={branching} parray_cells={ann.parray_cells()}")
    return 0


def cmd_query(args) -> int:
    index = index_io.load(args.index)
    pattern = _pattern_arg(args.pattern, index.text.spec.mode)
    occ, stats = query(index, index.text, pattern)
    for pos in occ:
        print(pos)
    if args.stats:
        for key, val in stats.as_dict().items():
            print(f"{key}={val}", file=sys.stderr)
    if args.oracle_check:
        encoded = encode_pattern(index.text, pattern)
        expect = sorted(naive_ppm(index.text, encoded)) if encoded else []
        if occ != expect:
            print(f"oracle mismatch: index={occ} oracle={expect}",
                  file=sys.stderr)
            return 1
        print("oracle-check ok", file=sys.stderr)
    return 0


def cmd_stats(args) -> int:
    index = index_io.load(args.index)
    text = index.text
    tree = index.tree
    ann = index.ann
    n = text.n
    threshold = max(text.sigma, text.pi)
    branching = sum(ann.is_branching)
    cells = ann.parray_cells()
    leaves = sum(1 for v in range(tree.size) if tree.is_leaf(v))
    print(f"n={n}")
    print(f"pi={text.pi}")
    print(f"sigma={text.sigma}")
    print(f"nodes={tree.size}")
    print(f"leaves={leaves}")
    print(f"internal={tree.size - leaves}")
    print(f"pnodes={sum(ann.is_pnode)}")
    print(f"branching_pnodes={branching}")
    print(f"branching_bound={n // threshold}")
    print(f"branching_margin={n // threshold - branching}")
    print(f"parray_cells={cells}")
    print(f"parray_cells_bound={2 * n}")
    print(f"parray_cells_margin={2 * n - cells}")
    print(f"rmq={'enabled' if index.psa_index.rmq is not None else 'disabled'}")
    return 0


def cmd_bench(args) -> int:
    index = index_io.load(args.index)
    text = index.text
    patterns = [line for line in
                Path(args.patterns).read_text(encoding="utf-8").splitlines()
                if line]
    rows = []
    for pid, raw in enumerate(patterns):
        t0 = time.perf_counter()
        occ, stats = query(index, text, raw)
        micros_tray = (time.perf_counter() - t0) * 1e6

        encoded = encode_pattern(text, raw)
        psa_stats = QueryStats()
        t0 = time.perf_counter()
        if encoded:
            from .encoding import prev

            rng = range_search(index.psa_index, text, prev(encoded, text.pi),
                               1, text.n, 0, psa_stats)
            psa_occ = sorted(report(index.psa_index, rng))
        else:
            psa_occ = []
        micros_psa = (time.perf_counter() - t0) * 1e6
        if psa_occ != occ:
            print(f"bench mismatch on pattern {pid}", file=sys.stderr)
            return 1
        rows.append({
            "pattern_id": pid, "m": len(encoded or []), "occ": len(occ),
            "comparisons_tray": stats.symbol_comparisons,
            "comparisons_psa": psa_stats.symbol_comparisons,
            "max_range": stats.max_range_searched,
            "micros_tray": f"{micros_tray:.1f}",
            "micros_psa": f"{micros_psa:.1f}",
        })
    fields = ["pattern_id", "m", "occ", "comparisons_tray", "comparisons_psa",
              "max_range", "micros_tray", "micros_psa"]
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=fields)
            writer.writeheader()
            writer.writerows(rows)
    else:
        writer = csv.DictWriter(sys.stdout, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
    return 0


def _random_pattern(rng: random.Random, text) -> str | list[str]:
    """Half window-with-renaming (guaranteed-ish hits), half random draws."""
    n = text.n
    tokens = sorted(text.tok2id)
    pi_toks = sorted(t for t in tokens if text.spec.is_parameterized(t))
    if rng.random() < 0.5 and n > 2:
        m = rng.randint(1, min(12, n - 1))
        start = rng.randint(1, n - m)
        window = [text.id2tok[text.symbols[p - 1]] for p in range(start, start + m)]
        if pi_toks:
            shuffled = pi_toks[:]
            rng.shuffle(shuffled)
            renaming = dict(zip(pi_toks, shuffled))
            window = [renaming.get(t, t) for t in window]
    else:
        m = rng.randint(1, 12)
        window = [rng.choice(tokens) for _ in range(m)]
    if text.spec.mode == "bytes":
        return "".join(window)
    return window


def cmd_self_check(args) -> int:
    text = _load_text(args)
    if args.trials <= 0:
        return 0
    index = assemble(text)
    index.validate()
    rng = random.Random(args.seed)
    for trial in range(args.trials):
        pattern = _random_pattern(rng, text)
        occ, _ = query(index, text, pattern)
        encoded = encode_pattern(text, pattern)
        expect = sorted(naive_ppm(text, encoded)) if encoded else []
        if occ != expect:
            print(f"self-check mismatch at trial {trial}: pattern={pattern!r} "
                  f"index={occ} oracle={expect}", file=sys.stderr)
            return 1
    print(f"ok trials={args.trials} seed={args.seed}")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pstray",
        description="parameterized pattern matching index")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("build", help="build and save an index")
    p.add_argument("--text", required=True)
    p.add_argument("--alphabet", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--no-rmq", action="store_true",
                   help="skip the range-minimum table (plain binary search)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="find pattern occurrences")
    p.add_argument("--index", required=True)
    p.add_argument("--pattern", required=True,
                   help="pattern string, or @file to read one")
    p.add_argument("--stats", action="store_true")
    p.add_argument("--oracle-check", action="store_true")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("stats", help="structural report of an index")
    p.add_argument("--index", required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", help="compare tree-assisted vs plain search")
    p.add_argument("--index", required=True)
    p.add_argument("--patterns", required=True,
                   help="file with one pattern per line")
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("self-check", help="randomized oracle equivalence")
    p.add_argument("--text", required=True)
    p.add_argument("--alphabet", required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_self_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except PstrayError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
