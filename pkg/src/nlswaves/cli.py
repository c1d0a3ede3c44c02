"""Command-line client for the analysis service.

Every subcommand builds a JSON request, posts it to the service (an
in-process ASGI transport by default, or a remote base URL via --url) and
writes the result as JSON or CSV.  Identical invocations produce
byte-identical output files: floats are serialized with repr round-trip
precision, JSON keys are sorted, and row order is deterministic.

Exit codes: 0 success, 1 usage/validation error, 2 regime error
(non-convergence, wrong cluster size, no growth found, blow-up).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import httpx

USAGE_EXIT = 1
REGIME_EXIT = 2


def _post(url: str | None, endpoint: str, payload: dict) -> httpx.Response:
    """POST to a remote service, or to the in-process app when no URL is given."""
    if url:
        with httpx.Client(base_url=url, timeout=3600.0) as client:
            return client.post(endpoint, json=payload)

    import asyncio

    from .service.app import app  # imported lazily: keeps --help snappy

    async def go() -> httpx.Response:
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://nlswaves.local", timeout=3600.0
        ) as client:
            return await client.post(endpoint, json=payload)

    return asyncio.run(go())


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_atomic(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".nlswaves-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json_text(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _csv_text(header: list[str], rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _add_wave_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--a", type=float, help="first pinned coefficient")
    parser.add_argument("--b", type=float, help="second pinned coefficient")
    parser.add_argument("--sign", choices=["defocusing", "focusing"], help="nonlinearity sign")
    parser.add_argument("--modes", type=int, help="Fourier truncation (default 64)")
    parser.add_argument("--tol", type=float, help="Newton residual tolerance")
    parser.add_argument("--config", help="JSON file with defaults; flags override")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", choices=["json", "csv"], default=None, help="output format")
    parser.add_argument("--url", help="remote service base URL (default: in-process)")
    parser.add_argument("--verify", action="store_true", help="run the invariant suite instead")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nlswaves",
        description="Small traveling waves of the cubic Schrodinger equation "
        "and their stability diagnostics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="solve one wave profile")
    _add_wave_args(p)

    p = sub.add_parser("spectrum", help="eigenvalues of one Bloch fiber")
    _add_wave_args(p)
    p.add_argument("--gamma", type=float, help="Floquet parameter in (-1/2, 1/2]")

    p = sub.add_parser("sweep", help="stability sweep over the Floquet interval")
    _add_wave_args(p)
    p.add_argument("--gamma-min", type=float, dest="gamma_min")
    p.add_argument("--gamma-max", type=float, dest="gamma_max")
    p.add_argument("--gamma-steps", type=int, dest="gamma_steps")
    p.add_argument("--no-refine", action="store_true", help="skip band-edge refinement")

    p = sub.add_parser("reduced", help="near-origin quartet vs the reduced quartic")
    _add_wave_args(p)
    p.add_argument("--gamma", type=float, help="Floquet parameter (small)")

    p = sub.add_parser("hessian", help="energy Hessian diagnostics")
    _add_wave_args(p)
    p.add_argument("--fd-step", type=float, dest="fd_step")

    p = sub.add_parser("evolve", help="split-step run in the co-moving frame")
    _add_wave_args(p)
    p.add_argument("--periods", type=int, help="domain multiple n")
    p.add_argument("--dt", type=float)
    p.add_argument("--tmax", type=float)
    p.add_argument("--eps", type=float, help="perturbation size")
    p.add_argument("--seed", choices=["generic", "sideband"])
    p.add_argument("--sideband-index", type=int, dest="sideband_index")
    p.add_argument("--sample-stride", type=int, dest="sample_stride")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


_REQUEST_KEYS = {
    "profile": ["a", "b", "sign", "modes", "tol"],
    "spectrum": ["a", "b", "sign", "modes", "tol", "gamma"],
    "sweep": ["a", "b", "sign", "modes", "tol", "gamma_min", "gamma_max", "gamma_steps"],
    "reduced": ["a", "b", "sign", "modes", "tol", "gamma"],
    "hessian": ["a", "b", "sign", "modes", "tol", "fd_step"],
    "evolve": [
        "a", "b", "sign", "modes", "tol", "periods", "dt", "tmax", "eps",
        "seed", "sideband_index", "sample_stride",
    ],
}


def _build_request(args: argparse.Namespace) -> dict:
    payload: dict = {}
    if getattr(args, "config", None):
        with open(args.config) as handle:
            payload.update(json.load(handle))
    for key in _REQUEST_KEYS[args.command]:
        value = getattr(args, key, None)
        if value is not None:
            payload[key] = value
    if args.command == "sweep" and getattr(args, "no_refine", False):
        payload["refine"] = False
    return payload


def _render(command: str, fmt: str | None, data: dict) -> str:
    if command == "spectrum" and fmt == "csv":
        rows = [(data["gamma"], re, im) for re, im in data["eigenvalues"]]
        return _csv_text(["gamma", "re_lambda", "im_lambda"], rows)
    if command == "sweep" and fmt == "csv":
        return _csv_text(["gamma", "max_re"], data["points"])
    if command == "evolve" and fmt != "json":
        return _csv_text(["t", "N", "M", "E", "rho"], data["rows"])
    return _json_text(data)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_EXIT if exc.code not in (0, None) else 0

    if args.command == "serve":
        import uvicorn

        from .service.app import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    try:
        payload = _build_request(args)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return USAGE_EXIT

    endpoint = f"/verify/{args.command}" if args.verify else f"/{args.command}"
    response = _post(args.url, endpoint, payload)

    if response.status_code == 409:
        detail = response.json().get("detail", "regime error")
        print(f"regime error: {detail}", file=sys.stderr)
        return REGIME_EXIT
    if response.status_code >= 400:
        print(f"error ({response.status_code}): {response.text}", file=sys.stderr)
        return USAGE_EXIT

    data = response.json()
    if args.verify:
        for check in data["checks"]:
            status = "pass" if check["passed"] else "FAIL"
            print(f"[{status}] {args.command}.{check['name']}: {check['detail']}")
        return 0 if data["passed"] else REGIME_EXIT

    _write_atomic(args.out, _render(args.command, args.format, data))
    return 0


if __name__ == "__main__":
    sys.exit(main())
