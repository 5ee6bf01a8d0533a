"""Command line entry points: ingest, replay, serve."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .dataset import ingest, ingest_json
from .errors import EngineError
from .ledger import parse_log
from .server import serve_forever
from .targets import default_targets
from .temporal import replay_series, series_to_csv


def _parse_types(spec: str | None) -> dict[str, str] | None:
    if not spec:
        return None
    out = {}
    for part in spec.split(","):
        name, _, letter = part.rpartition("=")
        if not name or letter not in ("N", "Q", "T"):
            raise SystemExit(f"bad --types entry: {part!r} (want name=N|Q|T)")
        out[name] = letter
    return out


def _load(path: str, delimiter: str, types):
    text = Path(path).read_text(encoding="utf-8")
    if path.endswith(".json"):
        return ingest_json(text, types=types)
    return ingest(text, delimiter=delimiter, types=types)


def cmd_ingest(args) -> int:
    dataset = _load(args.path, args.delimiter, _parse_types(args.types))
    doc = {
        "n_rows": dataset.n_rows,
        "attributes": [a.to_json() for a in dataset.schema],
        "fingerprint": dataset.fingerprint(),
    }
    print(json.dumps(doc, indent=2))
    return 0


def cmd_replay(args) -> int:
    dataset = _load(args.dataset, args.delimiter, _parse_types(args.types))
    with open(args.log, "r", encoding="utf-8") as fh:
        entries = list(parse_log(fh))
    series = replay_series(entries, dataset, default_targets(dataset))
    csv_text = series_to_csv(series)
    if args.out:
        Path(args.out).write_text(csv_text, encoding="utf-8")
        print(f"wrote {args.out} ({sum(len(s.points) for s in series)} points)")
    else:
        sys.stdout.write(csv_text)
    return 0


def cmd_serve(args) -> int:
    print(
        f"serving on tcp:{args.port}"
        + (f" http:{args.http_port}" if args.http_port else "")
        + f" condition={args.condition}"
    )
    serve_forever(args.port, args.http_port, condition=args.condition)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="behaviortrace",
        description="Behavior-aware exploration engine utilities",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="infer and print a dataset schema as JSON")
    p.add_argument("path")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--types", help="per-attribute overrides, e.g. 'Release Year=T,id=N'")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("replay", help="re-derive deviation series from a session log")
    p.add_argument("dataset")
    p.add_argument("log")
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--types")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("serve", help="run the session service")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--http-port", type=int, default=None)
    p.add_argument("--condition", choices=("awareness", "control"), default="awareness")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EngineError as e:
        print(f"error [{e.code}]: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
