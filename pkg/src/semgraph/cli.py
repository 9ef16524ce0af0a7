"""Command-line entry points.

    semgraph json-to-penman  -i IN [-o OUT]
    semgraph penman-to-json  -i IN [-o OUT]
    semgraph annotate        -a ANNOTATOR [-s SCHEME] [-r RESOURCE_DIR]
                             [--host H] [--port P] [path]
    semgraph eval            GOLD PRED [--breakdown] [--restarts N]
                             [--seed N] [--format F] [--json-report PATH]

The converters are directory-batch oriented: they pick up every
matching file in IN (or the single file given), write sibling-named
outputs into OUT (default: next to the input), keep going past per-file
failures, and exit 1 if anything failed.  Exit codes: 0 success,
1 data errors, 2 usage errors.  "python -m semgraph.json_to_penman",
".penman_to_json" and ".annotator" are shims over these subcommands.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import jsonio, penman, smatch
from .frames import ResourceError, load_resources
from .graph import Batch


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    return args.func(args, parser)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semgraph",
        description="Meaning-representation graphs: convert, annotate, evaluate.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("json-to-penman",
                       help="convert annotation JSON files to Penman")
    _converter_flags(p)
    p.set_defaults(func=cmd_json_to_penman)

    p = sub.add_parser("penman-to-json",
                       help="convert Penman files to annotation JSON")
    _converter_flags(p)
    p.set_defaults(func=cmd_penman_to_json)

    p = sub.add_parser("annotate", help="start the annotation server")
    p.add_argument("-a", "--annotator", required=True,
                   help="annotator id stamped into claim files")
    p.add_argument("-s", "--scheme", default=None,
                   help="bundled annotation scheme (default: wiser)")
    p.add_argument("-r", "--resources", default=None, metavar="DIR",
                   help="custom resource directory; overrides -s")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8051)
    p.add_argument("path", nargs="?", default=None,
                   help="JSON or text file to open at startup")
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("eval", help="score predicted graphs against gold")
    p.add_argument("gold")
    p.add_argument("pred")
    p.add_argument("--breakdown", action="store_true",
                   help="also print per-category scores")
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("auto", "json", "penman"), default="auto")
    p.add_argument("--json-report", metavar="PATH",
                   help="write a machine-readable report")
    p.set_defaults(func=cmd_eval)
    return parser


def _converter_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("-i", "--input", required=True,
                   help="input file or directory")
    p.add_argument("-o", "--output", default=None,
                   help="output directory (default: alongside the input)")


# ----------------------------------------------------------------------
# converters

def cmd_json_to_penman(args, parser) -> int:
    return _convert(args, parser, "*.json", ".penman", _json_file_to_penman)


def cmd_penman_to_json(args, parser) -> int:
    return _convert(args, parser, "*.penman", ".json", _penman_file_to_json)


def _json_file_to_penman(src: Path) -> str:
    batch = jsonio.read_json(src.read_text(encoding="utf-8"), source_name=src.name)
    return penman.serialize_batch(batch)


def _penman_file_to_json(src: Path) -> str:
    batch = penman.parse_penman(src.read_text(encoding="utf-8"), source_name=src.name)
    return jsonio.write_json(batch).decode("utf-8")


def _convert(args, parser, pattern: str, out_ext: str, convert_one) -> int:
    src = Path(args.input)
    if src.is_dir():
        files = sorted(p for p in src.glob(pattern) if p.is_file())
        default_out = src
    elif src.is_file():
        files = [src]
        default_out = src.parent
    else:
        print(f"error: input not found: {src}", file=sys.stderr)
        return 2
    out_dir = Path(args.output) if args.output else default_out
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        print(f"error: cannot create output directory: {e}", file=sys.stderr)
        return 2

    def work(path: Path):
        try:
            payload = convert_one(path)
            dest = out_dir / (path.stem + out_ext)
            dest.write_text(payload, encoding="utf-8")
            return path, dest, None
        except Exception as e:          # per-file isolation, keep going
            return path, None, e

    with ThreadPoolExecutor(max_workers=min(8, max(1, len(files)))) as pool:
        results = list(pool.map(work, files))

    failures = 0
    for path, dest, error in results:   # pool.map preserves input order
        if error is None:
            print(f"wrote {dest}")
        else:
            failures += 1
            print(f"error: {path}: {error}", file=sys.stderr)
    print(f"{len(files) - failures} converted, {failures} failed")
    return 1 if failures else 0


# ----------------------------------------------------------------------
# annotation server

def cmd_annotate(args, parser) -> int:
    if not args.annotator.strip():
        parser.error("annotator id must be nonempty")
    try:
        rs = load_resources(scheme=args.scheme or "wiser", path=args.resources)
    except ResourceError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    from .server import create_app      # deferred: pulls in fastapi
    try:
        app = create_app(annotator=args.annotator.strip(), resources=rs,
                         open_path=args.path)
    except (OSError, ValueError, jsonio.FormatError, penman.PenmanError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(f"serving on http://{args.host}:{args.port} "
          f"(scheme: {rs.scheme}, annotator: {args.annotator.strip()})")
    try:
        _run_server(app, args.host, args.port)
    except OSError as e:                # typically: port already in use
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


def _run_server(app, host: str, port: int) -> None:
    import uvicorn

    uvicorn.run(app, host=host, port=port, log_level="warning")


# ----------------------------------------------------------------------
# evaluation

def cmd_eval(args, parser) -> int:
    try:
        gold = _load_any(Path(args.gold), args.format)
        pred = _load_any(Path(args.pred), args.format)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (jsonio.FormatError, penman.PenmanError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1

    gold_by_tid = {g.tid: g for g in gold.graphs}
    pred_by_tid = {g.tid: g for g in pred.graphs}
    only_gold = sorted(set(gold_by_tid) - set(pred_by_tid))
    only_pred = sorted(set(pred_by_tid) - set(gold_by_tid))
    if only_gold or only_pred:
        print("pairing error: gold and prediction files cover different ids",
              file=sys.stderr)
        if only_gold:
            print(f"  only in gold: {', '.join(only_gold)}", file=sys.stderr)
        if only_pred:
            print(f"  only in pred: {', '.join(only_pred)}", file=sys.stderr)
        return 1

    pairs = []
    matched = left = right = 0
    for g in gold.graphs:
        p = pred_by_tid[g.tid]
        score = smatch.smatch(smatch.triples(p), smatch.triples(g),
                              restarts=args.restarts, seed=args.seed)
        pairs.append((g.tid, score))
        matched += score.matched
        left += score.total_left
        right += score.total_right
        print(f"{g.tid}\tP={_f(score.precision)}\tR={_f(score.recall)}"
              f"\tF1={_f(score.f1)}")
    corpus = _micro(matched, left, right)
    print(f"corpus\tP={_f(corpus['precision'])}\tR={_f(corpus['recall'])}"
          f"\tF1={_f(corpus['f1'])}\t({matched} matched / {left} pred / {right} gold)")

    categories = None
    if args.breakdown:
        categories = _corpus_breakdown(gold, pred_by_tid, args.restarts, args.seed)
        width = max(len(c) for c in categories)
        for cat, entry in categories.items():
            print(f"{cat.ljust(width)}\tP={_f(entry['precision'])}"
                  f"\tR={_f(entry['recall'])}\tF1={_f(entry['f1'])}")

    if args.json_report:
        report = {
            "gold": str(args.gold),
            "pred": str(args.pred),
            "restarts": args.restarts,
            "seed": args.seed,
            "sentences": [
                {"tid": tid, "precision": float(s.precision),
                 "recall": float(s.recall), "f1": float(s.f1),
                 "matched": s.matched, "pred_size": s.total_left,
                 "gold_size": s.total_right}
                for tid, s in pairs
            ],
            "corpus": {k: (float(v) if isinstance(v, Fraction) else v)
                       for k, v in corpus.items()},
        }
        if categories is not None:
            report["breakdown"] = {
                cat: {k: (float(v) if isinstance(v, Fraction) else v)
                      for k, v in entry.items()}
                for cat, entry in categories.items()
            }
        Path(args.json_report).write_text(
            json.dumps(report, indent=2) + "\n", encoding="utf-8")
    return 0


def _corpus_breakdown(gold: Batch, pred_by_tid, restarts: int, seed: int):
    sums = {cat: [0, 0, 0] for cat in smatch.DEFAULT_CATEGORIES}
    for g in gold.graphs:
        scores = smatch.breakdown(pred_by_tid[g.tid], g,
                                  restarts=restarts, seed=seed)
        for cat, s in scores.items():
            acc = sums[cat]
            acc[0] += s.matched
            acc[1] += s.total_left
            acc[2] += s.total_right
    return {cat: _micro(*acc) for cat, acc in sums.items()}


def _micro(matched: int, left: int, right: int) -> dict:
    if left == 0 and right == 0:
        p = r = f = Fraction(1)
    else:
        p = Fraction(matched, left) if left else Fraction(0)
        r = Fraction(matched, right) if right else Fraction(0)
        f = 2 * p * r / (p + r) if p + r else Fraction(0)
    return {"precision": p, "recall": r, "f1": f,
            "matched": matched, "pred_size": left, "gold_size": right}


def _f(x: Fraction) -> str:
    return f"{float(x):.4f}"


def _load_any(path: Path, fmt: str) -> Batch:
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    text = path.read_text(encoding="utf-8")
    if fmt == "json" or (fmt == "auto" and path.suffix == ".json"):
        return jsonio.read_json(text, source_name=path.name)
    if fmt == "penman" or (fmt == "auto" and path.suffix in (".penman", ".pm", ".txt")):
        return penman.parse_penman(text, source_name=path.name)
    raise ValueError(
        f"cannot infer format of {path}; pass --format json|penman")
