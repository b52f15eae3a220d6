"""Command-line client for the expmeasure service.

The CLI holds no domain logic: each subcommand marshals flags into the same
request models the HTTP API uses, then either calls the service handlers
in-process (default) or POSTs to a running server (--server URL).  Outputs
are JSON by default; row-oriented reports can be emitted as CSV with fixed,
documented column orders.

Exit codes: 0 success/verified, 1 usage error, 2 soundness-sentinel
violation, 3 precision exhausted, 4 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import urllib.error
import urllib.request

from .errors import (BudgetExceeded, ExpMeasureError, ParseError,
                     PrecisionExhausted, SoundnessViolation)
from .service import handlers
from .service import schemas as S

EXIT_FOR_CODE = {
    "soundness_violation": 2,
    "precision_exhausted": 3,
    "budget_exceeded": 4,
}

EXPONENT_CSV_COLUMNS = ["d", "delta", "p1", "p2", "lambda", "psi_lambda",
                        "zheng", "mahler", "lang_galochkin",
                        "lower_bound_float", "upper_bound_float"]

VERIFY_CSV_COLUMNS = ["H", "min_enclosure", "argmin", "bound", "log10_gap"]


def _read_config_file(path: str) -> dict[str, str]:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParseError(f"config line without '=': {line!r}")
            key, value = line.split("=", 1)
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser):
    if not getattr(args, "config", None):
        return
    cfg = _read_config_file(args.config)
    for key, value in cfg.items():
        if not hasattr(args, key):
            continue
        if getattr(args, key) is None:
            setattr(args, key, value)


ROUTES = {
    "exponent": ("/v1/exponent/table", S.ExponentRequest, handlers.handle_exponent),
    "bound": ("/v1/bound", S.BoundRequest, handlers.handle_bound),
    "verify": ("/v1/verify", S.VerifyRequest, handlers.handle_verify),
    "approximants": ("/v1/approximants", S.ApproximantsRequest,
                     handlers.handle_approximants),
    "certificate": ("/v1/certificate", S.CertificateRequest,
                    handlers.handle_certificate),
    "scan_parity": ("/v1/scan/parity", S.ParityScanRequest,
                    handlers.handle_parity_scan),
    "scan_floor": ("/v1/scan/floor-identity", S.FloorScanRequest,
                   handlers.handle_floor_scan),
    "scan_asymptotic": ("/v1/scan/asymptotic", S.AsymptoticScanRequest,
                        handlers.handle_asymptotic_scan),
}


def _run_request(route_key: str, payload: dict, server: str | None) -> dict:
    path, model, handler = ROUTES[route_key]
    if server:
        body = json.dumps(payload).encode()
        req = urllib.request.Request(server.rstrip("/") + path, data=body,
                                     headers={"Content-Type": "application/json"})
        try:
            with urllib.request.urlopen(req) as resp:
                return json.loads(resp.read())
        except urllib.error.HTTPError as exc:
            detail = json.loads(exc.read() or b"{}")
            error = detail.get("error", {})
            code = error.get("code", "error")
            raise _error_from_code(code, error.get("message", str(exc)))
    request = model(**payload)
    response = handler(request)
    return response.model_dump(by_alias=True)


def _error_from_code(code: str, message: str) -> ExpMeasureError:
    for cls in (SoundnessViolation, PrecisionExhausted, BudgetExceeded, ParseError):
        if cls.code == code:
            return cls(message)
    return ExpMeasureError(message)


def _emit(result: dict, fmt: str, output: str | None, csv_columns=None,
          csv_rows_key: str = "rows"):
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        for key, value in result.get("provenance", {}).get("config", {}).items():
            buf.write(f"# {key}={value}\n")
        writer.writerow(csv_columns)
        for row in result.get(csv_rows_key, []):
            writer.writerow([_csv_cell(row.get(col)) for col in csv_columns])
        text = buf.getvalue()
    else:
        text = json.dumps(result, indent=2, default=str) + "\n"
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, list):
        return " ".join(str(v) for v in value)
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expmeasure",
        description="Certified transcendence-measure toolkit for e^alpha")
    parser.add_argument("--server", default=None,
                        help="URL of a running expmeasure service; default is in-process")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", default=None, help="key=value file mirroring flags")
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--output", default=None, help="write to file instead of stdout")

    p = sub.add_parser("exponent", help="exponent comparison table")
    p.add_argument("--d", required=True, help="N or N..M")
    p.add_argument("--delta", required=True, help="N or N..M")
    p.add_argument("--check-closed-forms", action="store_true")
    common(p)

    p = sub.add_parser("bound", help="explicit lower-bound certificate")
    p.add_argument("--alpha", required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--H", default="1")
    p.add_argument("--precision-bits", type=int, default=192)
    common(p)

    p = sub.add_parser("verify", help="brute-force soundness run")
    p.add_argument("--alpha", required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--H", required=True, help="N or N..M grid")
    p.add_argument("--precision-bits", type=int, default=64)
    p.add_argument("--budget", type=int, default=10 ** 8)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--checkpoint", default=None)
    common(p)

    p = sub.add_parser("approximants", help="build and check an approximant system")
    p.add_argument("--alpha", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--metric-report", action="store_true")
    p.add_argument("--precision-bits", type=int, default=192)
    common(p)

    p = sub.add_parser("certificate", help="Siegel determinant certificate for P")
    p.add_argument("--alpha", required=True)
    p.add_argument("--P", required=True, help="comma-separated a_0..a_delta")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--H", default=None)
    p.add_argument("--no-symbolic", action="store_true")
    p.add_argument("--precision-bits", type=int, default=192)
    common(p)

    scan = sub.add_parser("scan", help="exploratory scans")
    scan_sub = scan.add_subparsers(dest="scan_kind", required=True)
    p = scan_sub.add_parser("parity")
    p.add_argument("--d", required=True, help="scan runs over 2..max(d)")
    p.add_argument("--delta", required=True)
    common(p)
    p = scan_sub.add_parser("floor")
    p.add_argument("--d", required=True)
    p.add_argument("--delta", required=True)
    common(p)
    p = scan_sub.add_parser("asymptotic")
    p.add_argument("--delta", type=int, choices=[2, 3], required=True)
    p.add_argument("--d", required=True)
    common(p)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _merge_list_flags(argv: list[str]) -> list[str]:
    # "--P -1,1" would be read as a dangling option; fold it into "--P=-1,1"
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--P" and i + 1 < len(argv):
            out.append(f"--P={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_merge_list_flags(list(argv)))
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return _dispatch(args, parser)
    except ExpMeasureError as exc:
        sys.stderr.write(f"error [{exc.code}]: {exc}\n")
        return EXIT_FOR_CODE.get(exc.code, 1)


def _dispatch(args, parser) -> int:
    if args.command == "serve":
        import uvicorn

        from .service.app import app
        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    _apply_config(args, parser)

    if args.command == "exponent":
        result = _run_request("exponent", {
            "d": args.d, "delta": args.delta,
            "check_closed_forms": args.check_closed_forms}, args.server)
        _emit(result, args.format, args.output, EXPONENT_CSV_COLUMNS)
        return 0
    if args.command == "bound":
        result = _run_request("bound", {
            "alpha": args.alpha, "delta": args.delta, "d": args.d,
            "p": args.p, "H": str(args.H),
            "precision_bits": int(args.precision_bits)}, args.server)
        _emit(result, "json", args.output)
        return 0
    if args.command == "verify":
        result = _run_request("verify", {
            "alpha": args.alpha, "delta": args.delta, "d": args.d,
            "H": str(args.H), "precision_bits": int(args.precision_bits),
            "budget": int(args.budget), "workers": int(args.workers),
            "checkpoint": args.checkpoint}, args.server)
        _emit(result, args.format, args.output, VERIFY_CSV_COLUMNS)
        return 0 if result.get("ok") else 2
    if args.command == "approximants":
        result = _run_request("approximants", {
            "alpha": args.alpha, "n": args.n, "p": args.p, "q": args.q,
            "metric_report": args.metric_report,
            "precision_bits": int(args.precision_bits)}, args.server)
        _emit(result, "json", args.output)
        return 0
    if args.command == "certificate":
        coeffs = [int(c) for c in str(args.P).split(",")]
        result = _run_request("certificate", {
            "alpha": args.alpha, "P": coeffs, "n": args.n, "p": args.p,
            "H": args.H, "symbolic_check": not args.no_symbolic,
            "precision_bits": int(args.precision_bits)}, args.server)
        _emit(result, "json", args.output)
        return 0
    if args.command == "scan":
        if args.scan_kind == "parity":
            d_max = max(handlers.parse_range(args.d, "d"))
            delta_max = max(handlers.parse_range(args.delta, "delta"))
            result = _run_request("scan_parity", {
                "d_max": d_max, "delta_max": delta_max}, args.server)
            _emit(result, args.format, args.output,
                  ["d", "delta", "psi_p1", "psi_p2", "winner", "expected", "matches"])
            return 0
        if args.scan_kind == "floor":
            result = _run_request("scan_floor", {
                "d": args.d, "delta": args.delta}, args.server)
            _emit(result, args.format, args.output, ["d", "delta", "identity_holds"])
            return 0
        if args.scan_kind == "asymptotic":
            result = _run_request("scan_asymptotic", {
                "delta": args.delta, "d": args.d}, args.server)
            _emit(result, args.format, args.output,
                  ["d", "difference", "d_times_difference"])
            return 0
    parser.error(f"unknown command {args.command}")
    return 1


if __name__ == "__main__":
    sys.exit(main())
