"""Command-line interface: a thin client over the inlinescope service.

Subcommands: ground-truth, remarks, simulate, features, sweep, report, serve.
Verdicts and measurements are always data on stdout or in output files; exit
codes carry only operational state: 0 success, 2 configuration or I/O error,
3 all builds failed, 4 malformed debug info.
"""

from __future__ import annotations

import argparse
import asyncio
import base64
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .client import ServiceClient, ServiceError
from .features.extract import features_from_csv
from .features.registry import REGISTRY_VERSION

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ALL_BUILDS_FAILED = 3
EXIT_MALFORMED_DWARF = 4

_KIND_EXIT_CODES = {
    "MalformedDwarf": EXIT_MALFORMED_DWARF,
    "NoSuccessfulBuild": EXIT_ALL_BUILDS_FAILED,
}

log = logging.getLogger("inlinescope")


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _read_bytes(path: str) -> bytes:
    return Path(path).read_bytes()


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _out_dir(args) -> Path:
    return Path(args.out) if args.out else Path.cwd()


async def _fetch_report(client: ServiceClient, path: str) -> dict:
    image = _read_bytes(path)
    return await client.post(
        "/ground-truth/report",
        {"binary_b64": base64.b64encode(image).decode("ascii"), "label": Path(path).name},
    )


def cmd_ground_truth(args) -> int:
    async def run() -> int:
        async with ServiceClient(args.server) as client:
            report = await _fetch_report(client, args.binary)
            out = _out_dir(args) / f"{Path(args.binary).name}.report.json"
            _atomic_write(out, _dump(report))
            log.info("report written to %s", out)
            if args.baseline:
                baseline = await _fetch_report(client, args.baseline)
                flow = await client.post(
                    "/ground-truth/delta", {"baseline": baseline, "variant": report}
                )
                flow_out = _out_dir(args) / f"{Path(args.binary).name}.flow.json"
                _atomic_write(flow_out, _dump(flow))
                log.info("delta flow written to %s", flow_out)
                if args.json:
                    print(_dump({"report": report, "flow": flow}), end="")
                else:
                    totals = report["totals"]
                    print(
                        f"functions={totals['functions']} inlined={totals['inlined']} "
                        f"remaining={totals['remaining']} eliminated={totals['eliminated']} "
                        f"ratio={totals['ratio']:.4f}"
                    )
                    print(
                        "flow: not_inlined=%d remaining=%d eliminated=%d "
                        "only_in_baseline=%d only_in_variant=%d"
                        % (
                            flow["not_inlined"],
                            flow["inlined_remaining"],
                            flow["inlined_eliminated"],
                            flow["only_in_baseline"],
                            flow["only_in_variant"],
                        )
                    )
            elif args.json:
                print(_dump(report), end="")
            else:
                totals = report["totals"]
                print(
                    f"functions={totals['functions']} inlined={totals['inlined']} "
                    f"remaining={totals['remaining']} eliminated={totals['eliminated']} "
                    f"ratio={totals['ratio']:.4f}"
                )
            return EXIT_OK

    return asyncio.run(run())


def cmd_remarks(args) -> int:
    async def run() -> int:
        async with ServiceClient(args.server) as client:
            text = _read_text(args.stderr_file)
            parsed = await client.post("/remarks/parse", {"text": text})
            out = _out_dir(args) / f"{Path(args.stderr_file).stem}.remarks.json"
            _atomic_write(out, _dump(parsed))
            log.info("remarks written to %s", out)
            if args.report:
                report = json.loads(_read_text(args.report))
                disc = await client.post(
                    "/remarks/reconcile", {"text": text, "report": report}
                )
                disc_out = _out_dir(args) / f"{Path(args.stderr_file).stem}.discrepancies.json"
                _atomic_write(disc_out, _dump(disc))
                if args.json:
                    print(_dump({"summary": parsed["summary"], "discrepancies": disc}), end="")
                else:
                    s = parsed["summary"]
                    print(
                        f"passed={s['passed_count']} missed={s['missed_count']} "
                        f"analysis={s['analysis_count']} "
                        f"remarks_only={len(disc['in_remarks_not_dwarf'])} "
                        f"dwarf_only={len(disc['in_dwarf_not_remarks'])} "
                        f"agreed={len(disc['agreed'])}"
                    )
            elif args.json:
                print(_dump(parsed), end="")
            else:
                s = parsed["summary"]
                print(
                    f"passed={s['passed_count']} missed={s['missed_count']} "
                    f"analysis={s['analysis_count']}"
                )
            return EXIT_OK

    return asyncio.run(run())


def cmd_simulate(args) -> int:
    async def run() -> int:
        async with ServiceClient(args.server) as client:
            payload = {"site": json.loads(_read_text(args.site)), "opt_level": args.opt}
            if args.params:
                payload["params"] = json.loads(_read_text(args.params))
            decision = await client.post("/cost-model/simulate", payload)
            text = _dump(decision)
            if args.out:
                out = _out_dir(args) / (Path(args.site).stem + ".decision.json")
                _atomic_write(out, text)
                log.info("decision written to %s", out)
            print(text, end="")
            return EXIT_OK

    return asyncio.run(run())


def cmd_features(args) -> int:
    async def run() -> int:
        async with ServiceClient(args.server) as client:
            payload = {"listing_text": _read_text(args.listing)}
            if args.registry:
                payload["registry_version"] = args.registry
            result = await client.post("/features/extract", payload)
            out = _out_dir(args) / f"{Path(args.listing).stem}.features.csv"
            _atomic_write(out, result["csv"])
            log.info("features written to %s", out)
            if args.json:
                print(_dump({k: result[k] for k in ("registry_version", "functions",
                                                    "aggregate")}), end="")
            else:
                print(f"functions={len(result['functions'])} registry={result['registry_version']} csv={out}")
            return EXIT_OK

    return asyncio.run(run())


def cmd_sweep(args) -> int:
    async def run() -> int:
        # Validate the YAML client-side so config mistakes fail fast with exit 2.
        import yaml

        from .sweep import config_from_dict

        try:
            doc = yaml.safe_load(_read_text(args.config))
            if not isinstance(doc, dict):
                raise ValueError("config root must be a mapping")
            config_from_dict(doc)
        except Exception as exc:
            print(f"error: invalid sweep config: {exc}", file=sys.stderr)
            return EXIT_CONFIG

        async with ServiceClient(args.server, timeout=None) as client:
            if args.dry_run:
                grid = await client.post("/sweep/variants", {"config": doc})
                if args.json:
                    print(_dump(grid), end="")
                else:
                    print(f"base flags: {' '.join(grid['base_flags']) or '(none)'}")
                    for v in grid["variants"]:
                        print(f"{v['variant_index']:4d}  {' '.join(v['flags'])}")
                return EXIT_OK
            if args.search is not None:
                result = await client.post(
                    "/sweep/search", {"config": doc, "budget": args.search}
                )
                out = _out_dir(args) / "search.json"
                _atomic_write(out, _dump(result))
                best = result["best"]
                print(
                    f"best flags: {' '.join(result['best_flags']) or '(base)'} "
                    f"ratio={best['ratio']:.4f} builds={result['builds_used']}"
                )
                return EXIT_OK
            result = await client.post("/sweep/run", {"config": doc})
            out = _out_dir(args) / "sweep.csv"
            _atomic_write(out, result["csv"])
            log.info("sweep report written to %s", out)
            print(result["csv"], end="")
            return EXIT_OK

    return asyncio.run(run())


def cmd_report(args) -> int:
    async def run() -> int:
        async with ServiceClient(args.server) as client:
            if args.report_kind == "drift":
                table_a, _ = features_from_csv(_read_text(args.features_a))
                table_b, _ = features_from_csv(_read_text(args.features_b))
                result = await client.post(
                    "/analysis/drift",
                    {"table_a": table_a, "table_b": table_b, "k": args.k},
                )
                out = _out_dir(args) / "drift.csv"
                _atomic_write(out, result["csv"])
                if args.json:
                    print(_dump(result), end="")
                else:
                    print("top_k:", ",".join(str(i) for i in result["top_k"]))
                    print(f"drift report written to {out}")
                return EXIT_OK
            # cdf
            if args.ratios:
                ratios = [float(x) for x in args.ratios.split(",") if x.strip()]
            else:
                from .sweep import ratios_from_csv

                ratios = ratios_from_csv(_read_text(args.sweep_csv))
            result = await client.post("/analysis/cdf", {"ratios": ratios, "svg": True})
            out_csv = _out_dir(args) / "cdf.csv"
            out_svg = _out_dir(args) / "cdf.svg"
            _atomic_write(out_csv, result["csv"])
            _atomic_write(out_svg, result["svg"])
            if args.json:
                print(_dump({"summary": result["summary"], "points": result["points"]}), end="")
            else:
                s = result["summary"]
                print(f"min={s['min']:.4f} max={s['max']:.4f} mean={s['mean']:.4f}")
                print(f"cdf written to {out_csv} and {out_svg}")
            return EXIT_OK

    return asyncio.run(run())


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="inlinescope",
        description="Measure, explain, and amplify compiler function inlining.",
    )
    parser.add_argument(
        "--version", action="version",
        version=f"inlinescope {__version__} registry {REGISTRY_VERSION}",
    )
    parser.add_argument("--server", default=None,
                        help="remote service base URL (default: in-process)")
    parser.add_argument("--out", default=None, help="output directory (default: cwd)")
    parser.add_argument("--json", action="store_true", help="print full JSON to stdout")
    parser.add_argument("--log-level", default="info",
                        choices=["quiet", "info", "debug"])

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ground-truth", help="extract inlining ground truth from an ELF binary")
    p.add_argument("binary")
    p.add_argument("--baseline", default=None,
                   help="baseline binary (conventionally the -O0 build) for the delta flow")
    p.set_defaults(func=cmd_ground_truth)

    p = sub.add_parser("remarks", help="parse -Rpass=inline stderr into structured remarks")
    p.add_argument("stderr_file")
    p.add_argument("--report", default=None,
                   help="InliningReport JSON to reconcile the remarks against")
    p.set_defaults(func=cmd_remarks)

    p = sub.add_parser("simulate", help="run the inline cost-model simulator on a call site")
    p.add_argument("--site", required=True, help="CallSiteDescription JSON file")
    p.add_argument("--params", default=None, help="InlineParams JSON file")
    p.add_argument("--opt", default="O2", choices=["O0", "O1", "O2", "O3", "Os", "Oz"])
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("features", help="extract the 62-slot feature vectors from a listing")
    p.add_argument("listing")
    p.add_argument("--registry", default=None, help="feature registry version")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("sweep", help="run a compiler-flag sweep from a YAML config")
    p.add_argument("config")
    p.add_argument("--dry-run", action="store_true",
                   help="print the variant grid without building")
    p.add_argument("--search", type=int, default=None, metavar="BUDGET",
                   help="greedy extreme-inlining search with this build budget")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="statistical reports from feature/sweep CSVs")
    rsub = p.add_subparsers(dest="report_kind", required=True)
    pd = rsub.add_parser("drift", help="feature drift between two builds")
    pd.add_argument("--features-a", required=True)
    pd.add_argument("--features-b", required=True)
    pd.add_argument("-k", type=int, default=18)
    pd.set_defaults(func=cmd_report)
    pc = rsub.add_parser("cdf", help="empirical CDF of inlining ratios")
    src = pc.add_mutually_exclusive_group(required=True)
    src.add_argument("--ratios", default=None, help="comma-separated ratios")
    src.add_argument("--sweep-csv", default=None, help="sweep CSV to pull ratios from")
    pc.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8431)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(level=level[args.log_level], format="%(levelname)s %(message)s")

    try:
        return args.func(args)
    except ServiceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _KIND_EXIT_CODES.get(exc.kind, EXIT_CONFIG)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
