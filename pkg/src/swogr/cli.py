"""Batch front door: page and corpus digitization, evaluation against
gold transcriptions, and catalog utilities.

Commands:
    swogr recognize IMAGE      write IMAGE's SWML transcription
    swogr batch DIR            transcribe every page image in DIR
    swogr eval GOLD PRED       score a predicted SWML against a gold one
    swogr render CODE OUT      rasterize a catalog symbol
    swogr catalog ...          inspect the symbol catalog

The catalog comes from $SWOGR_CATALOG when set, else the packaged
default. Recognizer thresholds may be given in a ``key = value`` config
file (--config); individual flags override file values. Exit codes:
0 success, 1 batch had failures, 2 unreadable input or usage error,
3 write failure, 4 unknown symbol.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

from .embed import embed as embed_outcome
from .catalog import SymbolCatalog, catalog_load, default_catalog
from .codes import format_code, parse_code
from .engine import RecognizerConfig, recognize_page
from .errors import (ConfigError, MalformedCode, OutOfRange, SchemaViolation,
                     SwmlParseError, UnknownSymbol)
from .evaluate import evaluate
from .imageio import SUPPORTED_SUFFIXES, load_gray, save_gray, save_rgb_png
from .swml import swml_parse, swml_serialize
from .templates import render_template

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_USAGE = 2
EXIT_WRITE = 3
EXIT_UNKNOWN_SYMBOL = 4

_CONFIG_FLAGS = ("tau_circ", "tau_fill", "tau_elong", "tau_extent_square",
                 "min_area", "signbox_gap", "column_overlap")


def _load_catalog() -> SymbolCatalog:
    path = os.environ.get("SWOGR_CATALOG")
    if path:
        return catalog_load(Path(path).read_bytes())
    return default_catalog()


def _build_config(args) -> RecognizerConfig:
    cfg = RecognizerConfig.from_file(args.config) if args.config else RecognizerConfig()
    overrides = {}
    for name in _CONFIG_FLAGS:
        value = getattr(args, name)
        if value is not None:
            overrides[name] = value
    return replace(cfg, **overrides) if overrides else cfg


def _add_config_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--config", metavar="FILE",
                        help="key = value recognizer config file")
    group = parser.add_argument_group("recognizer overrides")
    for name in _CONFIG_FLAGS:
        kind = int if name in ("min_area", "signbox_gap") else float
        group.add_argument("--" + name.replace("_", "-"), dest=name,
                           type=kind, default=None)


def _process_page(path: Path, catalog: SymbolCatalog, cfg: RecognizerConfig,
                  annotate: bool) -> str:
    """Recognize one page and write its outputs. Returns the summary line;
    raises on unreadable input or write failure."""
    image = load_gray(path)
    outcome = recognize_page(image, catalog, cfg)
    data = swml_serialize(outcome.to_document(path.name))
    out_path = path.with_suffix(".swml")
    out_path.write_bytes(data)
    if annotate:
        annotated = embed_outcome(image, outcome, path.name)
        save_rgb_png(path.with_suffix(".ogr.png"), annotated.image)
    return (f"{path.name}: {len(outcome.glyphs)} glyphs in "
            f"{len(outcome.signboxes)} signboxes, "
            f"{len(outcome.unrecognized)} unrecognized")


def cmd_recognize(args) -> int:
    path = Path(args.image)
    try:
        cfg = _build_config(args)
        catalog = _load_catalog()
    except (ConfigError, OSError) as exc:
        print(f"swogr: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        image = load_gray(path)
    except OSError as exc:
        print(f"swogr: cannot read {path}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    outcome = recognize_page(image, catalog, cfg)
    try:
        Path(path.with_suffix(".swml")).write_bytes(
            swml_serialize(outcome.to_document(path.name)))
        if args.annotate:
            annotated = embed_outcome(image, outcome, path.name)
            save_rgb_png(path.with_suffix(".ogr.png"), annotated.image)
    except OSError as exc:
        print(f"swogr: cannot write output for {path}: {exc}", file=sys.stderr)
        return EXIT_WRITE
    print(f"{path.name}: {len(outcome.glyphs)} glyphs in "
          f"{len(outcome.signboxes)} signboxes, "
          f"{len(outcome.unrecognized)} unrecognized")
    return EXIT_OK


def cmd_batch(args) -> int:
    directory = Path(args.directory)
    if not directory.is_dir():
        print(f"swogr: no such directory: {directory}", file=sys.stderr)
        return EXIT_USAGE
    try:
        cfg = _build_config(args)
        catalog = _load_catalog()
    except (ConfigError, OSError) as exc:
        print(f"swogr: {exc}", file=sys.stderr)
        return EXIT_USAGE

    pages = sorted(p for p in directory.iterdir()
                   if p.suffix.lower() in SUPPORTED_SUFFIXES)

    def work(path: Path):
        try:
            return _process_page(path, catalog, cfg, args.annotate), None
        except Exception as exc:  # per-file failures never abort the run
            return None, f"{path.name}: {exc}"

    ok = failed = 0
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        for line, error in pool.map(work, pages):
            if error is None:
                ok += 1
                print(line)
            else:
                failed += 1
                print(f"swogr: {error}", file=sys.stderr)
    print(f"{ok} ok, {failed} failed")
    return EXIT_OK if failed == 0 else EXIT_PARTIAL


def cmd_eval(args) -> int:
    docs = []
    for label, path in (("gold", args.gold), ("pred", args.pred)):
        try:
            docs.append(swml_parse(Path(path).read_bytes()))
        except (OSError, SwmlParseError, SchemaViolation) as exc:
            print(f"swogr: cannot parse {label} file {path}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    report = evaluate(docs[0], docs[1])

    print(f"{'category':>10} {'tp':>5} {'fp':>5} {'fn':>5} "
          f"{'precision':>10} {'recall':>10} {'f1':>10}")
    for cat, score in report.per_category.items():
        print(f"{cat:>10} {score.true_positives:>5} {score.false_positives:>5} "
              f"{score.false_negatives:>5} {score.precision:>10.3f} "
              f"{score.recall:>10.3f} {score.f1:>10.3f}")
    print(f"{'all':>10} {report.true_positives:>5} {report.false_positives:>5} "
          f"{report.false_negatives:>5} {report.precision:>10.3f} "
          f"{report.recall:>10.3f} {report.f1:>10.3f}")
    print("EVAL\t" + "\t".join([
        f"tp={report.true_positives}",
        f"fp={report.false_positives}",
        f"fn={report.false_negatives}",
        f"precision={report.precision:.4f}",
        f"recall={report.recall:.4f}",
        f"f1={report.f1:.4f}",
    ]))
    return EXIT_OK


def cmd_render(args) -> int:
    try:
        code = parse_code(args.code)
    except (MalformedCode, OutOfRange) as exc:
        print(f"swogr: bad code: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        meta = _load_catalog().lookup(code)
    except UnknownSymbol:
        print(f"swogr: unknown symbol {format_code(code)}", file=sys.stderr)
        return EXIT_UNKNOWN_SYMBOL
    rotation = code.rotation if meta.template.orientation_steps > 1 else 1
    image = render_template(meta, scale=args.scale, rotation_step=rotation)
    try:
        save_gray(args.out, image)
    except (OSError, ValueError) as exc:
        print(f"swogr: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_WRITE
    print(f"{args.out}: {image.width}x{image.height} render of {format_code(code)}")
    return EXIT_OK


def cmd_catalog(args) -> int:
    catalog = _load_catalog()
    if args.catalog_command == "lookup":
        try:
            code = parse_code(args.code)
        except (MalformedCode, OutOfRange) as exc:
            print(f"swogr: bad code: {exc}", file=sys.stderr)
            return EXIT_USAGE
        try:
            meta = catalog.lookup(code)
        except UnknownSymbol:
            print(f"swogr: unknown symbol {format_code(code)}", file=sys.stderr)
            return EXIT_UNKNOWN_SYMBOL
        print(f"code: {format_code(meta.code)}")
        print(f"name: {meta.name}")
        print(f"category_name: {meta.category_name}")
        print(f"primitive: {meta.template.primitive.value}")
        print(f"nominal_size: {meta.template.nominal_size}")
        print(f"orientation_steps: {meta.template.orientation_steps}")
        return EXIT_OK
    # list
    try:
        entries = catalog.search(category=args.category)
    except ValueError as exc:
        print(f"swogr: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for meta in entries:
        print(f"{format_code(meta.code)}  {meta.name}  {meta.category_name}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swogr",
        description="Optical glyph recognition for handwritten SignWriting pages.",
        epilog="Annotated pages draw glyph boxes in green with gray code "
               "labels, unrecognized boxes in red, and sign boxes in blue.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("recognize", help="transcribe one page image")
    p.add_argument("image")
    p.add_argument("--annotate", action="store_true",
                   help="also write an annotated .ogr.png")
    _add_config_flags(p)
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("batch", help="transcribe every page in a directory")
    p.add_argument("directory")
    p.add_argument("--annotate", action="store_true")
    p.add_argument("--jobs", type=int, default=1,
                   help="process up to K pages concurrently")
    _add_config_flags(p)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("eval", help="score predicted SWML against gold")
    p.add_argument("gold")
    p.add_argument("pred")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("render", help="rasterize a catalog symbol")
    p.add_argument("code")
    p.add_argument("out")
    p.add_argument("--scale", type=float, default=1.0)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("catalog", help="inspect the symbol catalog")
    catsub = p.add_subparsers(dest="catalog_command", required=True)
    lp = catsub.add_parser("lookup")
    lp.add_argument("code")
    lst = catsub.add_parser("list")
    lst.add_argument("--category", type=int, default=None)
    p.set_defaults(func=cmd_catalog)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
