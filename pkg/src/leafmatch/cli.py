"""Command line: build-db, occlude, query, evaluate, gen-synthetic.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

import argparse
import csv
import json
import math
import os
import sys

from .config import RunConfig

EXIT_USAGE = 1
EXIT_DATA = 2

CONTOUR_SUFFIXES = (".txt", ".pgm", ".pbm", ".png", ".bmp")


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load_config(path):
    if not path:
        return RunConfig()
    try:
        return RunConfig.from_json_file(path)
    except (OSError, ValueError, TypeError) as exc:
        raise DataError(f"cannot read config {path}: {exc}") from None


def read_labels(path):
    """``id,species`` CSV (header optional) -> dict."""
    out = {}
    try:
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].startswith("#"):
                    continue
                if len(row) < 2:
                    raise DataError(f"{path}: expected 'id,species', got {row!r}")
                rid, sp = row[0].strip(), row[1].strip()
                if (rid, sp) == ("id", "species"):
                    continue
                out[rid] = sp
    except OSError as exc:
        raise DataError(f"cannot read labels {path}: {exc}") from None
    return out


def _contour_files(folder):
    if not os.path.isdir(folder):
        raise DataError(f"not a directory: {folder}")
    names = sorted(f for f in os.listdir(folder) if f.lower().endswith(CONTOUR_SUFFIXES))
    return [os.path.join(folder, f) for f in names]


def _stem(path):
    return os.path.splitext(os.path.basename(path))[0]


def cmd_build_db(args):
    from .pipeline import build_database, save_database

    cfg = _load_config(args.config)
    files = _contour_files(args.input)
    if not files:
        raise DataError(f"no contours in {args.input}")
    labels = read_labels(args.labels) if args.labels else None
    try:
        db = build_database(files, labels, cfg)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    for src, reason in db.skipped:
        print(f"skipped {src}: {reason}", file=sys.stderr)
    save_database(db, args.out)
    print(f"wrote {len(db)} records to {args.out}")
    return 0


def cmd_occlude(args):
    from .geometry import occlude
    from .io import format_curve, read_curve

    limit = 0.95 if args.force else 0.5
    if not 0.0 <= args.fraction <= limit:
        hint = "" if args.force else " (use --force for up to 0.95)"
        raise UsageError(f"--fraction must lie in [0, {limit}]{hint}")
    try:
        curve = read_curve(args.input)
    except (OSError, ValueError) as exc:
        raise DataError(str(exc)) from None
    if not curve.closed:
        raise DataError(f"{args.input} is not a closed contour")
    try:
        occ = occlude(curve, args.fraction, args.seed)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    text = format_curve(occ)
    head, body = text.split("\n", 1)
    text = f"{head}\n# fraction={args.fraction!r} seed={args.seed}\n{body}"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _query_curve(path):
    from .geometry import OpenCurve
    from .io import read_any

    try:
        curve = read_any(path)
    except (OSError, ValueError) as exc:
        raise DataError(str(exc)) from None
    if curve.closed:
        # an unoccluded contour, opened at its first point
        curve = OpenCurve(curve.points)
    return curve


def _load_db(path):
    from .pipeline import load_database

    try:
        return load_database(path)
    except (OSError, ValueError, KeyError) as exc:
        raise DataError(f"cannot load database {path}: {exc}") from None


def _num(x):
    return None if x is None or not math.isfinite(x) else float(x)


def result_to_dict(res, cfg):
    return {
        "config": cfg.to_dict(),
        "best_id": res.best_id,
        "frechet_best_id": res.frechet_best_id,
        "ranked": [
            {
                "id": c.record_id,
                "species": c.species,
                "mapping_cost": _num(c.mapping.cost) if c.mapping is not None else None,
                "frechet": _num(c.frechet),
                "energy": _num(c.energy),
            }
            for c in res.ranked
        ],
        "timings": res.stage_stats,
    }


def cmd_query(args):
    from .pipeline import query

    db = _load_db(args.db)
    cfg = _load_config(args.config) if args.config else db.config
    curve = _query_curve(args.query)
    res = query(db, curve, cfg, args.threads)
    text = json.dumps(result_to_dict(res, cfg), indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _parse_range(text):
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"--occlusion-range must look like 0.20:0.50, got {text!r}") from None
    if not 0.0 <= lo <= hi <= 0.95:
        raise UsageError("--occlusion-range needs 0 <= lo <= hi <= 0.95")
    return lo, hi


def evaluation_csv(table, cfg, occ, seed, n_queries, results=()):
    lo, hi = occ
    label = f"{lo:.2f}:{hi:.2f}"
    lines = [
        f"# config {cfg.to_json()}",
        f"# occlusion_range {label} seed {seed} queries {n_queries}",
    ]
    if results:
        # how often the energy stage overrode the Frechet winner
        moved = sum(r.best_id != r.frechet_best_id for r in results)
        lines.append(f"# energy_reranked {moved}/{len(results)}")
    lines.append("occlusion,rank,precision,recall")
    for r, p, q in zip(table.rank, table.precision, table.recall):
        lines.append(f"{label},{int(r)},{p:.6f},{q:.6f}")
    lines.append(f"summary,1,{table.accuracy:.6f},{table.recall[0]:.6f}")
    return "\n".join(lines) + "\n"


def cmd_evaluate(args):
    from .evaluation import evaluate
    from .io import read_any

    occ = _parse_range(args.occlusion_range)
    db = _load_db(args.db)
    cfg = _load_config(args.config) if args.config else db.config
    truth = read_labels(args.truth)
    files = _contour_files(args.queries)
    if not files:
        raise DataError(f"no query contours in {args.queries}")
    queries = []
    for f in files:
        qid = _stem(f)
        if qid not in truth:
            raise DataError(f"query {qid} has no entry in {args.truth}")
        try:
            queries.append((qid, read_any(f), truth[qid]))
        except (OSError, ValueError) as exc:
            raise DataError(f"{f}: {exc}") from None
    try:
        table, results, fracs = evaluate(db, queries, occ, args.seed, cfg, args.threads)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    text = evaluation_csv(table, cfg, occ, args.seed, len(queries), results)
    if args.details:
        rows = [
            {"id": qid, "species": sp, "fraction": f, "best_id": r.best_id,
             "best_species": r.ranked[0].species, "frechet_best_id": r.frechet_best_id}
            for (qid, _, sp), r, f in zip(queries, results, fracs)
        ]
        with open(args.details, "w") as fh:
            json.dump({"config": cfg.to_dict(), "seed": args.seed, "queries": rows}, fh, indent=2)
            fh.write("\n")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_gen_synthetic(args):
    from dataclasses import asdict

    from .synthetic import class_table, write_corpus

    if args.classes < 1 or args.per_class < 1:
        raise UsageError("--classes and --per-class must be >= 1")
    ids = write_corpus(args.out, args.classes, args.per_class, args.seed)
    meta = {
        "classes": args.classes,
        "per_class": args.per_class,
        "seed": args.seed,
        "class_params": [asdict(c) for c in class_table(args.classes, args.seed)],
    }
    with open(os.path.join(args.out, "corpus.json"), "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {len(ids)} contours to {args.out}")
    return 0


def build_parser():
    p = _Parser(prog="leafmatch", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="worker threads (default: available cores)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build-db", help="ingest contours into a database directory")
    b.add_argument("--input", required=True, help="directory of contour files or binary masks")
    b.add_argument("--labels", help="CSV of id,species")
    b.add_argument("--out", required=True)
    b.add_argument("--config", help="JSON RunConfig")
    b.set_defaults(func=cmd_build_db)

    o = sub.add_parser("occlude", help="cut a random arc out of a closed contour")
    o.add_argument("--input", required=True)
    o.add_argument("--fraction", type=float, required=True)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--out")
    o.add_argument("--force", action="store_true", help="allow fractions above 0.5 (up to 0.95)")
    o.set_defaults(func=cmd_occlude)

    q = sub.add_parser("query", help="rank database records for an occluded curve")
    q.add_argument("--db", required=True)
    q.add_argument("--query", required=True)
    q.add_argument("--out")
    q.add_argument("--config", help="JSON RunConfig overriding the database's")
    q.set_defaults(func=cmd_query)

    e = sub.add_parser("evaluate", help="occlude queries, rank them and write precision/recall")
    e.add_argument("--db", required=True)
    e.add_argument("--queries", required=True)
    e.add_argument("--truth", required=True, help="CSV of query id,species")
    e.add_argument("--occlusion-range", default="0.20:0.50")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out")
    e.add_argument("--details", help="also write per-query best matches as JSON")
    e.add_argument("--config")
    e.set_defaults(func=cmd_evaluate)

    g = sub.add_parser("gen-synthetic", help="write a seeded superformula corpus")
    g.add_argument("--classes", type=int, default=10)
    g.add_argument("--per-class", type=int, default=5)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen_synthetic)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"leafmatch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"leafmatch: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
